use thiserror::Error;

/// Errors produced by the spectral and geometric kernels.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("grid of {got} samples cannot resolve {needed} required samples without aliasing")]
    Aliasing { needed: usize, got: usize },

    #[error("sample grid is not uniform over [-pi, pi): node {index} deviates by {deviation:e}")]
    NonUniformGrid { index: usize, deviation: f64 },

    #[error("Hermitian symmetry violated at mode {k}: |c(-k) - conj(c(k))| = {deviation:e}")]
    HermitianViolation { k: i64, deviation: f64 },

    #[error("coefficient vector has length {got}, expected 2N+1 = {expected}")]
    CoefficientLength { expected: usize, got: usize },

    #[error("time must be nonnegative, got {t}")]
    NegativeTime { t: f64 },

    #[error("perturbation series must be mean-free, got |phi_hat(0)| = {magnitude:e}")]
    NonzeroMean { magnitude: f64 },

    #[error("modes k = +-1 must vanish for constrained evolution, got {magnitude:e}")]
    ModeOneNonzero { magnitude: f64 },

    #[error("volume degeneracy: length denominator 1 + D = {denominator:e} is not positive")]
    VolumeDegeneracy { denominator: f64 },

    #[error("curve is not closed: closure residual {residual:e} exceeds tolerance {tol:e}")]
    OpenCurve { residual: f64, tol: f64 },

    #[error("curve orientation is not counterclockwise (volume = {volume:e})")]
    Orientation { volume: f64 },

    #[error("quadrature grid under-resolved: spectral tail fraction {tail:e} exceeds {tol:e}")]
    UnderResolved { tail: f64, tol: f64 },

    #[error("argument outside domain: {what}")]
    Domain { what: String },

    #[error("invalid parameter: {what}")]
    InvalidParameter { what: String },

    #[error("initial perturbation too large: ||phi||_F11 = {norm:e} exceeds threshold {threshold:e}")]
    SmallnessViolation { norm: f64, threshold: f64 },

    #[error("time step failed at t = {t}: {detail}")]
    StepFailure { t: f64, detail: String },

    #[error("oracle integral failed to converge: {what}")]
    OracleFailure { what: String },
}

pub type Result<T> = std::result::Result<T, CoreError>;
