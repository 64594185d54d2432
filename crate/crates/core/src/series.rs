//! Band-limited trigonometric series on the 2-pi periodic circle.
//!
//! A [`TrigSeries`] stores the coefficients c(k) for |k| <= N of
//! f(alpha) = sum_k c(k) e^{i k alpha}. Real-valued series carry a flag and
//! maintain c(-k) = conj(c(k)) exactly; operations that preserve realness
//! construct the negative half-spectrum by mirroring so the invariant never
//! drifts with rounding.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{CoreError, Result};

/// Uniform grid alpha_j = -pi + 2 pi j / m, j = 0..m.
pub fn grid_alphas(m: usize) -> Vec<f64> {
    (0..m).map(|j| -PI + 2.0 * PI * j as f64 / m as f64).collect()
}

/// Neumaier-compensated accumulator; keeps norm sums honest at 1e-12 scales.
#[derive(Default, Clone, Copy)]
pub struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Exponential analyticity weight nu(t) = nu0 * t / (1 + t).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NormWeight {
    pub nu0: f64,
    pub t: f64,
}

impl NormWeight {
    pub fn new(nu0: f64, t: f64) -> Result<Self> {
        if t < 0.0 {
            return Err(CoreError::NegativeTime { t });
        }
        if nu0 < 0.0 {
            return Err(CoreError::InvalidParameter {
                what: format!("nu0 must be nonnegative, got {nu0}"),
            });
        }
        Ok(Self { nu0, t })
    }

    /// Weight with nu0 = 0: the classical (unweighted) Wiener norms.
    pub fn unweighted() -> Self {
        Self { nu0: 0.0, t: 0.0 }
    }

    pub fn nu(&self) -> f64 {
        nu_of_t(self.nu0, self.t).expect("validated on construction")
    }
}

/// nu(t) = nu0 * t / (1 + t); monotone in t and bounded by nu0.
pub fn nu_of_t(nu0: f64, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(CoreError::NegativeTime { t });
    }
    if nu0 < 0.0 {
        return Err(CoreError::InvalidParameter {
            what: format!("nu0 must be nonnegative, got {nu0}"),
        });
    }
    Ok(nu0 * t / (1.0 + t))
}

/// Finite Fourier coefficient sequence over modes k in [-N, N].
#[derive(Debug, Clone, PartialEq)]
pub struct TrigSeries {
    n: usize,
    /// Index layout: coeffs[k + N] holds mode k.
    coeffs: Vec<Complex64>,
    real_flag: bool,
}

/// Relative tolerance accepted when validating Hermitian symmetry of
/// externally supplied coefficients. Violations are construction errors,
/// never silently symmetrized.
const HERMITIAN_TOL: f64 = 1e-12;

impl TrigSeries {
    /// Build from a full coefficient vector in mode order k = -N..N.
    pub fn new(n: usize, coeffs: Vec<Complex64>, real_flag: bool) -> Result<Self> {
        if coeffs.len() != 2 * n + 1 {
            return Err(CoreError::CoefficientLength {
                expected: 2 * n + 1,
                got: coeffs.len(),
            });
        }
        let s = Self { n, coeffs, real_flag };
        if real_flag {
            let scale = s.max_abs_coeff().max(1.0);
            for k in 0..=n as i64 {
                let dev = (s.coeff(-k) - s.coeff(k).conj()).norm();
                if dev > HERMITIAN_TOL * scale {
                    return Err(CoreError::HermitianViolation { k, deviation: dev });
                }
            }
        }
        Ok(s)
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * n + 1],
            real_flag: true,
        }
    }

    /// Real series from the nonnegative half-spectrum; the negative half is
    /// mirrored so Hermitian symmetry holds exactly.
    pub fn real_from_half(n: usize, half: &[Complex64]) -> Result<Self> {
        if half.len() != n + 1 {
            return Err(CoreError::CoefficientLength {
                expected: n + 1,
                got: half.len(),
            });
        }
        if half[0].im != 0.0 {
            return Err(CoreError::HermitianViolation {
                k: 0,
                deviation: half[0].im.abs(),
            });
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        for k in 0..=n {
            coeffs[n + k] = half[k];
            coeffs[n - k] = half[k].conj();
        }
        Ok(Self { n, coeffs, real_flag: true })
    }

    /// Real series from a sparse list of (k >= 0, coefficient) pairs.
    pub fn real_from_modes(n: usize, modes: &[(usize, Complex64)]) -> Result<Self> {
        let mut half = vec![Complex64::new(0.0, 0.0); n + 1];
        for &(k, c) in modes {
            if k > n {
                return Err(CoreError::InvalidParameter {
                    what: format!("mode {k} exceeds band limit {n}"),
                });
            }
            half[k] = c;
        }
        Self::real_from_half(n, &half)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_real(&self) -> bool {
        self.real_flag
    }

    /// Coefficient of mode k; zero outside the band.
    pub fn coeff(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.n {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + self.n as i64) as usize]
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest mode with a nonzero coefficient (0 for the zero series).
    pub fn active_band(&self) -> usize {
        (1..=self.n)
            .rev()
            .find(|&k| {
                self.coeff(k as i64).norm() > 0.0 || self.coeff(-(k as i64)).norm() > 0.0
            })
            .unwrap_or(0)
    }

    /// Re-band to a new limit, keeping modes up to min(n, new_n).
    pub fn with_band(&self, new_n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * new_n + 1];
        let keep = self.n.min(new_n) as i64;
        for k in -keep..=keep {
            coeffs[(k + new_n as i64) as usize] = self.coeff(k);
        }
        Self {
            n: new_n,
            coeffs,
            real_flag: self.real_flag,
        }
    }

    /// Samples f(alpha_j) = sum_k c(k) e^{i k alpha_j} on the uniform m-grid.
    pub fn synthesize(&self, m: usize) -> Result<Vec<Complex64>> {
        if m < 2 * self.n + 2 {
            return Err(CoreError::Aliasing {
                needed: 2 * self.n + 2,
                got: m,
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); m];
        let step = 2.0 * PI / m as f64;
        for (j, s) in out.iter_mut().enumerate() {
            let alpha = -PI + step * j as f64;
            let mut acc = self.coeff(0);
            for k in 1..=self.n as i64 {
                let e = Complex64::from_polar(1.0, k as f64 * alpha);
                acc += self.coeff(k) * e + self.coeff(-k) * e.conj();
            }
            *s = acc;
        }
        Ok(out)
    }

    /// Real-valued samples; requires the real flag.
    pub fn synthesize_real(&self, m: usize) -> Result<Vec<f64>> {
        if !self.real_flag {
            return Err(CoreError::InvalidParameter {
                what: "synthesize_real requires a real series".into(),
            });
        }
        if m < 2 * self.n + 2 {
            return Err(CoreError::Aliasing {
                needed: 2 * self.n + 2,
                got: m,
            });
        }
        let mut out = vec![0.0; m];
        let step = 2.0 * PI / m as f64;
        for (j, s) in out.iter_mut().enumerate() {
            let alpha = -PI + step * j as f64;
            let mut acc = self.coeff(0).re;
            for k in 1..=self.n as i64 {
                let e = Complex64::from_polar(1.0, k as f64 * alpha);
                acc += 2.0 * (self.coeff(k) * e).re;
            }
            *s = acc;
        }
        Ok(out)
    }

    /// d/d alpha in coefficient space: c(k) -> i k c(k).
    pub fn derivative(&self) -> Self {
        let mut out = self.clone();
        for k in -(self.n as i64)..=self.n as i64 {
            let idx = (k + self.n as i64) as usize;
            out.coeffs[idx] = Complex64::new(0.0, k as f64) * self.coeffs[idx];
        }
        if self.real_flag {
            out.mirror_from_positive();
        }
        out
    }

    /// Mean-free antiderivative M: c(k) -> -i/k c(k) for k != 0, and the
    /// zero mode sum_{j != 0} (i/j) c(j) that pins M(f)(0) = 0.
    pub fn operator_m(&self) -> Self {
        let mut out = self.clone();
        let mut zero = Compensated::default();
        let mut zero_im = Compensated::default();
        for k in 1..=self.n as i64 {
            let term = Complex64::new(0.0, 1.0 / k as f64) * self.coeff(k)
                - Complex64::new(0.0, 1.0 / k as f64) * self.coeff(-k);
            zero.add(term.re);
            zero_im.add(term.im);
            out.coeffs[(k + self.n as i64) as usize] =
                Complex64::new(0.0, -1.0 / k as f64) * self.coeff(k);
            out.coeffs[(-k + self.n as i64) as usize] =
                Complex64::new(0.0, 1.0 / k as f64) * self.coeff(-k);
        }
        out.coeffs[self.n] = Complex64::new(zero.value(), zero_im.value());
        if self.real_flag {
            out.coeffs[self.n].im = 0.0;
            out.mirror_from_positive();
        }
        out
    }

    /// Hard spectral cutoff: zero modes |k| > n_cut.
    pub fn cutoff_jn(&self, n_cut: usize) -> Self {
        let mut out = self.clone();
        for k in -(self.n as i64)..=self.n as i64 {
            if k.unsigned_abs() as usize > n_cut {
                out.coeffs[(k + self.n as i64) as usize] = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    /// Cutoff that additionally zeroes the +-1 modes.
    pub fn cutoff_jn1(&self, n_cut: usize) -> Self {
        let mut out = self.cutoff_jn(n_cut);
        if self.n >= 1 {
            out.coeffs[self.n - 1] = Complex64::new(0.0, 0.0);
            out.coeffs[self.n + 1] = Complex64::new(0.0, 0.0);
        }
        out
    }

    /// Exact coefficient convolution, truncated to |k| <= n_out.
    pub fn product(&self, other: &Self, n_out: usize) -> Self {
        let real = self.real_flag && other.real_flag;
        let conv = |k: i64| -> Complex64 {
            let mut re = Compensated::default();
            let mut im = Compensated::default();
            let lo = (k - other.n as i64).max(-(self.n as i64));
            let hi = (k + other.n as i64).min(self.n as i64);
            for j in lo..=hi {
                let term = self.coeff(j) * other.coeff(k - j);
                re.add(term.re);
                im.add(term.im);
            }
            Complex64::new(re.value(), im.value())
        };
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n_out + 1];
        for k in 0..=n_out as i64 {
            let c = conv(k);
            coeffs[(k + n_out as i64) as usize] = c;
            if real {
                coeffs[(n_out as i64 - k) as usize] = c.conj();
            } else {
                coeffs[(n_out as i64 - k) as usize] = conv(-k);
            }
        }
        if real {
            coeffs[n_out] = Complex64::new(coeffs[n_out].re, 0.0);
        }
        Self {
            n: n_out,
            coeffs,
            real_flag: real,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.n.max(other.n);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        for k in -(n as i64)..=n as i64 {
            coeffs[(k + n as i64) as usize] = self.coeff(k) + other.coeff(k);
        }
        Self {
            n,
            coeffs,
            real_flag: self.real_flag && other.real_flag,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.coeffs {
            *v *= c;
        }
        out
    }

    /// Add c to the zero mode.
    pub fn shift_mean(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[self.n] += Complex64::new(c, 0.0);
        out
    }

    /// Weighted Wiener norm sum_k e^{nu(t)|k|} |c(k)|.
    pub fn norm_f01(&self, w: &NormWeight) -> f64 {
        let nu = w.nu();
        let mut acc = Compensated::default();
        acc.add(self.coeff(0).norm());
        for k in 1..=self.n as i64 {
            let weight = (nu * k as f64).exp();
            acc.add(weight * self.coeff(k).norm());
            acc.add(weight * self.coeff(-k).norm());
        }
        acc.value()
    }

    /// Weighted homogeneous norm sum_{k != 0} e^{nu(t)|k|} |k|^s |c(k)|.
    pub fn norm_fs1(&self, s: f64, w: &NormWeight) -> f64 {
        let nu = w.nu();
        let mut acc = Compensated::default();
        for k in 1..=self.n as i64 {
            let weight = (nu * k as f64).exp() * (k as f64).powf(s);
            acc.add(weight * self.coeff(k).norm());
            acc.add(weight * self.coeff(-k).norm());
        }
        acc.value()
    }

    /// Max |f| over the uniform m-grid.
    pub fn max_abs_on_grid(&self, m: usize) -> Result<f64> {
        let samples = self.synthesize(m)?;
        Ok(samples.iter().map(|c| c.norm()).fold(0.0, f64::max))
    }

    fn mirror_from_positive(&mut self) {
        let n = self.n;
        for k in 1..=n {
            self.coeffs[n - k] = self.coeffs[n + k].conj();
        }
        self.coeffs[n].im = 0.0;
    }
}

/// Wire form of a series: {"N": n, "re": [...], "im": [...]} with
/// coefficients in mode order k = -N..N.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesData {
    #[serde(rename = "N")]
    pub n: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl TrigSeries {
    pub fn to_data(&self) -> SeriesData {
        SeriesData {
            n: self.n,
            re: self.coeffs.iter().map(|c| c.re).collect(),
            im: self.coeffs.iter().map(|c| c.im).collect(),
        }
    }

    pub fn from_data(data: &SeriesData, real_flag: bool) -> Result<Self> {
        if data.re.len() != 2 * data.n + 1 || data.im.len() != 2 * data.n + 1 {
            return Err(CoreError::CoefficientLength {
                expected: 2 * data.n + 1,
                got: data.re.len().min(data.im.len()),
            });
        }
        let coeffs = data
            .re
            .iter()
            .zip(data.im.iter())
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        Self::new(data.n, coeffs, real_flag)
    }
}

/// Forward transform on the uniform grid: c(k) = (1/m) sum_j f_j e^{-i k alpha_j},
/// exact for band-limited input with m >= 2N+2.
pub fn analyze(samples: &[Complex64], n: usize) -> Result<TrigSeries> {
    let m = samples.len();
    if m < 2 * n + 2 {
        return Err(CoreError::Aliasing { needed: 2 * n + 2, got: m });
    }
    let step = 2.0 * PI / m as f64;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
    for k in -(n as i64)..=n as i64 {
        let mut re = Compensated::default();
        let mut im = Compensated::default();
        for (j, s) in samples.iter().enumerate() {
            let alpha = -PI + step * j as f64;
            let term = s * Complex64::from_polar(1.0, -(k as f64) * alpha);
            re.add(term.re);
            im.add(term.im);
        }
        coeffs[(k + n as i64) as usize] =
            Complex64::new(re.value(), im.value()) / m as f64;
    }
    TrigSeries::new(n, coeffs, false)
}

/// Forward transform of real samples; the result is real-flagged with exact
/// Hermitian symmetry (negative modes mirrored from the positive half).
pub fn analyze_real(samples: &[f64], n: usize) -> Result<TrigSeries> {
    let m = samples.len();
    if m < 2 * n + 2 {
        return Err(CoreError::Aliasing { needed: 2 * n + 2, got: m });
    }
    let step = 2.0 * PI / m as f64;
    let mut half = vec![Complex64::new(0.0, 0.0); n + 1];
    for (k, h) in half.iter_mut().enumerate() {
        let mut re = Compensated::default();
        let mut im = Compensated::default();
        for (j, s) in samples.iter().enumerate() {
            let alpha = -PI + step * j as f64;
            let e = Complex64::from_polar(1.0, -(k as f64) * alpha);
            re.add(s * e.re);
            im.add(s * e.im);
        }
        *h = Complex64::new(re.value(), im.value()) / m as f64;
    }
    half[0].im = 0.0;
    TrigSeries::real_from_half(n, &half)
}

/// Transform against an explicit node vector; rejects non-uniform grids.
pub fn analyze_at(alphas: &[f64], samples: &[Complex64], n: usize) -> Result<TrigSeries> {
    let m = alphas.len();
    if m != samples.len() {
        return Err(CoreError::InvalidParameter {
            what: format!("{} nodes vs {} samples", m, samples.len()),
        });
    }
    let step = 2.0 * PI / m as f64;
    for (j, &a) in alphas.iter().enumerate() {
        let expected = -PI + step * j as f64;
        let dev = (a - expected).abs();
        if dev > 1e-12 {
            return Err(CoreError::NonUniformGrid { index: j, deviation: dev });
        }
    }
    analyze(samples, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn synthesize_constant() {
        let f = TrigSeries::real_from_modes(2, &[(0, c(1.0, 0.0))]).unwrap();
        let s = f.synthesize(8).unwrap();
        for v in s {
            assert!((v - c(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn synthesize_cosine() {
        // c(+-1) = 1/2 synthesizes cos(alpha)
        let f = TrigSeries::real_from_modes(1, &[(1, c(0.5, 0.0))]).unwrap();
        let s = f.synthesize_real(8).unwrap();
        for (j, v) in s.iter().enumerate() {
            let alpha = -PI + 2.0 * PI * j as f64 / 8.0;
            assert!((v - alpha.cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn analyze_sin3() {
        let m = 64;
        let samples: Vec<f64> = grid_alphas(m).iter().map(|a| (3.0 * a).sin()).collect();
        let f = analyze_real(&samples, 8).unwrap();
        assert!((f.coeff(3) - c(0.0, -0.5)).norm() < 1e-14);
        assert!((f.coeff(-3) - c(0.0, 0.5)).norm() < 1e-14);
        assert!(f.coeff(2).norm() < 1e-14);
    }

    #[test]
    fn analyze_one_plus_cos() {
        let m = 16;
        let samples: Vec<f64> = grid_alphas(m).iter().map(|a| 1.0 + a.cos()).collect();
        let f = analyze_real(&samples, 4).unwrap();
        assert!((f.coeff(0) - c(1.0, 0.0)).norm() < 1e-14);
        assert!((f.coeff(1) - c(0.5, 0.0)).norm() < 1e-14);
        assert!((f.coeff(-1) - c(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn round_trip_random_hermitian() {
        // analyze(synthesize(f)) = f to 1e-13 for a random Hermitian series
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rng = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let n = 12;
        let half: Vec<Complex64> = (0..=n)
            .map(|k| {
                if k == 0 {
                    c(rng(), 0.0)
                } else {
                    c(rng(), rng())
                }
            })
            .collect();
        let f = TrigSeries::real_from_half(n, &half).unwrap();
        let s = f.synthesize(64).unwrap();
        let g = analyze(&s, n).unwrap();
        for k in -(n as i64)..=n as i64 {
            assert!((f.coeff(k) - g.coeff(k)).norm() < 1e-13);
        }
    }

    #[test]
    fn synthesize_rejects_small_grid() {
        let f = TrigSeries::zero(8);
        assert!(matches!(
            f.synthesize(17),
            Err(CoreError::Aliasing { .. })
        ));
    }

    #[test]
    fn analyze_at_rejects_nonuniform() {
        let mut alphas = grid_alphas(16);
        alphas[3] += 1e-6;
        let samples = vec![c(0.0, 0.0); 16];
        assert!(matches!(
            analyze_at(&alphas, &samples, 4),
            Err(CoreError::NonUniformGrid { .. })
        ));
    }

    #[test]
    fn derivative_of_cos_is_minus_sin() {
        let f = TrigSeries::real_from_modes(2, &[(1, c(0.5, 0.0))]).unwrap();
        let d = f.derivative();
        // -sin has coefficients +- i/2
        assert!((d.coeff(1) - c(0.0, 0.5)).norm() < 1e-15);
        assert!((d.coeff(-1) - c(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let f = TrigSeries::real_from_modes(3, &[(0, c(4.0, 0.0))]).unwrap();
        let d = f.derivative();
        assert_eq!(d.max_abs_coeff(), 0.0);
    }

    #[test]
    fn operator_m_on_cos_gives_sin() {
        let f = TrigSeries::real_from_modes(2, &[(1, c(0.5, 0.0))]).unwrap();
        let m = f.operator_m();
        assert!((m.coeff(1) - c(0.0, -0.5)).norm() < 1e-15);
        assert!((m.coeff(-1) - c(0.0, 0.5)).norm() < 1e-15);
        assert!(m.coeff(0).norm() < 1e-15);
    }

    #[test]
    fn operator_m_annihilates_constants() {
        let f = TrigSeries::real_from_modes(3, &[(0, c(2.5, 0.0))]).unwrap();
        let m = f.operator_m();
        assert_eq!(m.max_abs_coeff(), 0.0);
    }

    #[test]
    fn operator_m_vanishes_at_zero() {
        // M(f)(alpha = 0) = 0 by construction of the zero mode
        let f = TrigSeries::real_from_modes(
            5,
            &[(1, c(0.3, 0.1)), (2, c(-0.2, 0.05)), (4, c(0.0, 0.07))],
        )
        .unwrap();
        let m = f.operator_m();
        let mut at_zero = Complex64::new(0.0, 0.0);
        for k in -5i64..=5 {
            at_zero += m.coeff(k);
        }
        assert!(at_zero.norm() < 1e-15);
    }

    #[test]
    fn operator_m_then_derivative_removes_mean() {
        let f = TrigSeries::real_from_modes(4, &[(0, c(1.5, 0.0)), (2, c(0.4, -0.2))]).unwrap();
        let g = f.operator_m().derivative();
        for k in -4i64..=4 {
            let expect = if k == 0 {
                c(0.0, 0.0)
            } else {
                f.coeff(k)
            };
            assert!((g.coeff(k) - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn cutoffs() {
        let f = TrigSeries::real_from_modes(
            5,
            &[(0, c(1.0, 0.0)), (1, c(1.0, 0.0)), (2, c(1.0, 0.0)), (5, c(1.0, 0.0))],
        )
        .unwrap();
        let jn = f.cutoff_jn(2);
        assert!(jn.coeff(0).norm() > 0.0);
        assert!(jn.coeff(1).norm() > 0.0);
        assert!(jn.coeff(2).norm() > 0.0);
        assert_eq!(jn.coeff(5).norm(), 0.0);
        let jn1 = f.cutoff_jn1(2);
        assert!(jn1.coeff(0).norm() > 0.0);
        assert_eq!(jn1.coeff(1).norm(), 0.0);
        assert_eq!(jn1.coeff(-1).norm(), 0.0);
        assert!(jn1.coeff(2).norm() > 0.0);
        // idempotence
        let twice = jn1.cutoff_jn1(2);
        assert_eq!(twice, jn1);
    }

    #[test]
    fn product_cos_squared() {
        let f = TrigSeries::real_from_modes(1, &[(1, c(0.5, 0.0))]).unwrap();
        let p = f.product(&f, 2);
        // cos^2 = 1/2 + cos(2 alpha)/2
        assert!((p.coeff(0) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((p.coeff(2) - c(0.25, 0.0)).norm() < 1e-15);
        assert!((p.coeff(-2) - c(0.25, 0.0)).norm() < 1e-15);
        assert!(p.coeff(1).norm() < 1e-15);
    }

    #[test]
    fn product_identity() {
        let f = TrigSeries::real_from_modes(3, &[(1, c(0.2, 0.1)), (3, c(-0.1, 0.3))]).unwrap();
        let one = TrigSeries::real_from_modes(0, &[(0, c(1.0, 0.0))]).unwrap();
        let p = f.product(&one, 3);
        for k in -3i64..=3 {
            assert!((p.coeff(k) - f.coeff(k)).norm() < 1e-15);
        }
    }

    #[test]
    fn norms_match_spec_examples() {
        let f = TrigSeries::real_from_modes(3, &[(2, c(0.01, 0.0))]).unwrap();
        let w = NormWeight::unweighted();
        assert!((f.norm_fs1(1.0, &w) - 0.04).abs() < 1e-16);
        assert!((f.norm_fs1(2.0, &w) - 0.08).abs() < 1e-16);
        assert!((f.norm_f01(&w) - 0.02).abs() < 1e-16);
    }

    #[test]
    fn nu_values() {
        assert_eq!(nu_of_t(0.1, 0.0).unwrap(), 0.0);
        assert!((nu_of_t(0.1, 1.0).unwrap() - 0.05).abs() < 1e-16);
        assert!((nu_of_t(0.1, 1e9).unwrap() - 0.1).abs() < 1e-9);
        assert!(nu_of_t(0.1, -1.0).is_err());
    }

    #[test]
    fn hermitian_violation_rejected() {
        let mut coeffs = vec![c(0.0, 0.0); 5];
        coeffs[2 + 1] = c(1.0, 0.0);
        coeffs[2 - 1] = c(0.5, 0.0); // not conj of c(1)
        assert!(matches!(
            TrigSeries::new(2, coeffs, true),
            Err(CoreError::HermitianViolation { .. })
        ));
    }
}
