//! Interfacial Stokes velocity from the single-layer potential.
//!
//! The conjugate velocity u1 - i u2 on the interface is
//!
//!   (2 pi / L) (gamma / 4 pi) Int z''(beta) . G(z(alpha) - z(beta)) d beta,
//!
//! with the Stokeslet G_ij(w) = -delta_ij log|w| + w_i w_j / |w|^2. In
//! complex form the integrand splits into -conj(z'') log|w| plus the smooth
//! rank-one part Re(conj(z'') w)/w. The log factors as
//! log|2 sin((alpha-beta)/2)| + smooth remainder; the first piece is
//! integrated with Kress product-quadrature weights (exact on the resolved
//! band), everything else with the periodic trapezoid rule, so the whole
//! evaluation converges spectrally.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{CoreError, Result};
use crate::geometry::InterfaceState;
use crate::quad;
use crate::series::{analyze, analyze_real, grid_alphas, TrigSeries};

/// Nodes and weights for interfacial integrals on a uniform m-grid.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub m: usize,
    pub beta_nodes: Vec<f64>,
    /// Periodic trapezoid weights, 2 pi / m each.
    pub weights_smooth: Vec<f64>,
    /// Kress weights for -log|2 sin(beta/2)|, indexed by node offset
    /// d = (j - i) mod m.
    pub weights_log: Vec<f64>,
    /// log|2 sin(x_d / 2)| for offsets d = 1..m-1 (unused at d = 0).
    log2sin: Vec<f64>,
}

impl QuadratureGrid {
    pub fn new(m: usize) -> Result<Self> {
        if m < 4 || m % 2 != 0 {
            return Err(CoreError::InvalidParameter {
                what: format!("quadrature grid size must be even and >= 4, got {m}"),
            });
        }
        let half = m / 2;
        let mut weights_log = vec![0.0; m];
        let mut log2sin = vec![0.0; m];
        for d in 0..m {
            let x = 2.0 * PI * d as f64 / m as f64;
            let mut acc = 0.0;
            for l in 1..half {
                acc += 2.0 * (PI / l as f64) * (l as f64 * x).cos();
            }
            acc += (2.0 * PI / m as f64) * (half as f64 * x).cos();
            weights_log[d] = acc / m as f64;
            if d > 0 {
                log2sin[d] = (2.0 * (x / 2.0).sin().abs()).ln();
            }
        }
        Ok(Self {
            m,
            beta_nodes: grid_alphas(m),
            weights_smooth: vec![2.0 * PI / m as f64; m],
            weights_log,
            log2sin,
        })
    }
}

/// Interfacial velocity decomposed into conjugate, normal, and tangential parts.
#[derive(Debug, Clone)]
pub struct VelocityField {
    /// u1 - i u2 as a complex series on the state's band.
    pub u_conj: TrigSeries,
    /// Conjugate velocity samples on the grid nodes.
    pub u_conj_samples: Vec<Complex64>,
    /// Normal speed U = Re((u1 - i u2) i e^{i(alpha+theta)}), real series.
    pub u_normal: TrigSeries,
    /// Tangential speed T = M((1 + phi_alpha) U), real series.
    pub t_tangential: TrigSeries,
}

/// Under-resolution guard: ratio of the top-band content of e^{i theta} to
/// its largest coefficient.
fn spectral_tail_fraction(phase: &[Complex64], m: usize) -> f64 {
    let probe = |k: i64| -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, p) in phase.iter().enumerate() {
            let alpha = -PI + 2.0 * PI * j as f64 / m as f64;
            acc += p * Complex64::from_polar(1.0, -(k as f64) * alpha);
        }
        acc.norm() / m as f64
    };
    let top = (m as i64 / 2 - 4..m as i64 / 2)
        .flat_map(|k| [k, -k])
        .map(probe)
        .fold(0.0, f64::max);
    let low = (-4i64..=4).map(probe).fold(0.0, f64::max);
    top / low.max(f64::MIN_POSITIVE)
}

/// Evaluate the single-layer velocity and its normal/tangential split.
pub fn slp_velocity(
    state: &InterfaceState,
    grid: &QuadratureGrid,
    tol_resolution: f64,
) -> Result<VelocityField> {
    let n = state.phi.n();
    let m = grid.m;
    if m < 2 * n + 2 {
        return Err(CoreError::Aliasing { needed: 2 * n + 2, got: m });
    }
    let l = state.length()?;
    let scale = l / (2.0 * PI);
    let gamma = state.gamma;

    let phi_samples = state.phi.synthesize_real(m)?;
    let dphi_samples = state.phi.derivative().synthesize_real(m)?;
    let rot = Complex64::from_polar(1.0, state.theta0);
    // tangent phase tau = e^{i(beta + theta)}
    let tau: Vec<Complex64> = grid
        .beta_nodes
        .iter()
        .zip(phi_samples.iter())
        .map(|(&b, &p)| Complex64::from_polar(1.0, b + p) * rot)
        .collect();

    let tail = spectral_tail_fraction(&tau, m);
    if tail > tol_resolution {
        return Err(CoreError::UnderResolved { tail, tol: tol_resolution });
    }

    // z'' = (L/2pi) i (1 + phi_alpha) e^{i(beta+theta)}
    let zpp: Vec<Complex64> = tau
        .iter()
        .zip(dphi_samples.iter())
        .map(|(&t, &dp)| Complex64::new(0.0, 1.0) * t * scale * (1.0 + dp))
        .collect();

    // net force along the interface must vanish (freedom from the 2-D
    // Stokes paradox); spectrally this is the zero mode of a derivative
    let net_force: Complex64 = tau
        .iter()
        .zip(dphi_samples.iter())
        .map(|(&t, &dp)| t * (1.0 + dp))
        .sum::<Complex64>()
        * (2.0 * PI / m as f64);
    if net_force.norm() > 1e-9 * l {
        return Err(CoreError::OracleFailure {
            what: format!("net interfacial force {:e} does not vanish", net_force.norm()),
        });
    }

    // curve positions by spectral antidifferentiation of z' = scale * tau;
    // the zero mode of z' (the closure defect of the truncated state) is
    // dropped so the discrete curve closes exactly
    let n_z = m / 2 - 1;
    let za_hat = analyze(&tau, n_z)?;
    let mut anti = vec![Complex64::new(0.0, 0.0); 2 * n_z + 1];
    for k in 1..=n_z as i64 {
        let ik = Complex64::new(0.0, k as f64);
        anti[(k + n_z as i64) as usize] = za_hat.coeff(k) * scale / ik;
        anti[(-k + n_z as i64) as usize] = za_hat.coeff(-k) * scale / (-ik);
    }
    let z = TrigSeries::new(n_z, anti, false)?.synthesize(m)?;
    // effective tangent of the closed curve: z' minus its dropped mean;
    // the diagonal limits below must use this, not the raw tangent
    let zp_eff: Vec<Complex64> = tau
        .iter()
        .map(|&t| (t - za_hat.coeff(0)) * scale)
        .collect();

    let w_tr = 2.0 * PI / m as f64;
    let prefactor = (2.0 * PI / l) * (gamma / (4.0 * PI));

    let mut u_conj_samples = vec![Complex64::new(0.0, 0.0); m];
    for i in 0..m {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..m {
            let zppc = zpp[j].conj();
            let d = (j + m - i) % m;
            // Kress piece integrates -log|2 sin((alpha-beta)/2)| * conj(z'')
            acc += grid.weights_log[d] * zppc;
            if d == 0 {
                // w/(2 sin(h/2)) -> -z'_eff as beta -> alpha
                let log_rem = 0.5 * zp_eff[i].norm_sqr().ln();
                let rank_one = (zppc * zp_eff[i]).re / zp_eff[i];
                acc += w_tr * (-zppc * log_rem + rank_one);
            } else {
                let w = z[i] - z[j];
                let log_rem = 0.5 * w.norm_sqr().ln() - grid.log2sin[d];
                let rank_one = (zppc * w).re / w;
                acc += w_tr * (-zppc * log_rem + rank_one);
            }
        }
        u_conj_samples[i] = prefactor * acc;
    }

    // U = Re(u_conj * i e^{i(alpha+theta)}), truncated to the state's band
    let u_samples: Vec<f64> = u_conj_samples
        .iter()
        .zip(tau.iter())
        .map(|(&u, &t)| (u * Complex64::new(0.0, 1.0) * t).re)
        .collect();
    let u_normal = analyze_real(&u_samples, n)?;
    let t_tangential = tangential_speed(state, &u_normal);
    let u_conj = analyze(&u_conj_samples, n)?;

    Ok(VelocityField {
        u_conj,
        u_conj_samples,
        u_normal,
        t_tangential,
    })
}

/// Normal speed from conjugate-velocity samples: U = Re(u_conj i e^{i(alpha+theta)}).
pub fn normal_speed(
    state: &InterfaceState,
    u_conj_samples: &[Complex64],
    grid: &QuadratureGrid,
) -> Result<TrigSeries> {
    let m = grid.m;
    if u_conj_samples.len() != m {
        return Err(CoreError::InvalidParameter {
            what: format!("{} samples on a grid of {}", u_conj_samples.len(), m),
        });
    }
    let phi_samples = state.phi.synthesize_real(m)?;
    let rot = Complex64::from_polar(1.0, state.theta0);
    let samples: Vec<f64> = grid
        .beta_nodes
        .iter()
        .zip(phi_samples.iter())
        .zip(u_conj_samples.iter())
        .map(|((&b, &p), &u)| {
            let tau = Complex64::from_polar(1.0, b + p) * rot;
            (u * Complex64::new(0.0, 1.0) * tau).re
        })
        .collect();
    analyze_real(&samples, state.phi.n())
}

/// Tangential speed T = M((1 + phi_alpha) U); the mean-free antiderivative
/// pins T(0) = 0.
pub fn tangential_speed(state: &InterfaceState, u_normal: &TrigSeries) -> TrigSeries {
    let one_plus = state.phi.derivative().shift_mean(1.0);
    let band = one_plus.n() + u_normal.n();
    one_plus.product(u_normal, band).operator_m()
}

// ---------------------------------------------------------------------------
// Linear-part velocity: U1 acts diagonally on the modes of phi.
// ---------------------------------------------------------------------------

/// sinc-type helper E1(x) = (e^{ix} - 1)/(ix) = sinc(x/2) e^{ix/2}.
fn e1(x: f64) -> Complex64 {
    let half = 0.5 * x;
    let s = if half.abs() < 1e-100 { 1.0 } else { half.sin() / half };
    s * Complex64::from_polar(1.0, half)
}

/// W(x) = Int_{-1}^0 u e^{ixu} du, series for small x.
fn w_moment(x: f64) -> Complex64 {
    if x.abs() < 0.7 {
        // -sum_m (-ix)^m / (m! (m+2))
        let mut acc = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0); // (-ix)^m / m!
        let step = Complex64::new(0.0, -x);
        for m in 0..24 {
            acc += term / (m as f64 + 2.0);
            term *= step / (m as f64 + 1.0);
        }
        -acc
    } else {
        let emix = Complex64::from_polar(1.0, -x);
        emix / Complex64::new(0.0, x) + (Complex64::new(1.0, 0.0) - emix) / (x * x)
    }
}

/// e^{ix} - 1 - ix, series for small x.
fn expm1_i_minus_ix(x: f64) -> Complex64 {
    if x.abs() < 0.5 {
        let mut acc = Complex64::new(0.0, 0.0);
        let ix = Complex64::new(0.0, x);
        let mut term = ix * ix / 2.0; // x^2 term
        for m in 2..24 {
            acc += term;
            term *= ix / (m as f64 + 1.0);
        }
        acc
    } else {
        quad::expm1_i(x) - Complex64::new(0.0, x)
    }
}

/// Int_0^1 e^{i c beta s} e^{i k beta (s-1)} ds.
fn s_plain(c: f64, k: f64, beta: f64) -> Complex64 {
    Complex64::from_polar(1.0, -k * beta) * e1((k + c) * beta)
}

/// Int_0^1 e^{i c beta s} (s-1) e^{i k beta (s-1)} ds.
fn s_weighted(c: f64, k: f64, beta: f64) -> Complex64 {
    Complex64::from_polar(1.0, c * beta) * w_moment((k + c) * beta)
}

/// The seven beta-kernels of the linear velocity, mode k. Index 4 and 5
/// (E5, E6) multiply phi' and carry an extra ik outside.
fn linear_kernel(j: usize, k: f64, beta: f64) -> Complex64 {
    let e = Complex64::from_polar(1.0, beta);
    let d = quad::expm1_i(beta); // e^{i beta} - 1, cancellation-free
    let i = Complex64::new(0.0, 1.0);
    match j {
        0 => {
            // -e (i d + beta (1 + e)) / (2 d) * s_plain(-1)
            let numerator = i * d + beta * (Complex64::new(1.0, 0.0) + e);
            if beta == 0.0 {
                return Complex64::new(0.0, 0.5) * s_plain(-1.0, k, beta);
            }
            -e * numerator / (2.0 * d) * s_plain(-1.0, k, beta)
        }
        1 => {
            // i (e^{2ib} - 1 - 2ib) / (2 d^2) * s_plain(+1)
            if beta == 0.0 {
                return Complex64::new(0.0, 1.0) * s_plain(1.0, k, beta);
            }
            i * expm1_i_minus_ix(2.0 * beta) / (2.0 * d * d) * s_plain(1.0, k, beta)
        }
        2 => -0.5 * beta * e * s_weighted(-1.0, k, beta),
        3 => {
            // -beta (1 + e) / (2 d) * s_weighted(+1)
            if beta == 0.0 {
                return Complex64::new(0.0, 1.0) * s_weighted(1.0, k, beta);
            }
            -beta * (Complex64::new(1.0, 0.0) + e) / (2.0 * d) * s_weighted(1.0, k, beta)
        }
        4 => -0.5 * i * beta * e * s_weighted(-1.0, k, beta),
        5 => {
            // i beta (1 + e) / (2 d) * s_weighted(+1)
            if beta == 0.0 {
                return s_weighted(1.0, k, beta);
            }
            i * beta * (Complex64::new(1.0, 0.0) + e) / (2.0 * d) * s_weighted(1.0, k, beta)
        }
        6 => {
            // -i (-1 + 2e + e^2) / (2 d) * e^{-ikb}; simple pole at 0
            let numerator = Complex64::new(-1.0, 0.0) + 2.0 * e + e * e;
            -i * numerator / (2.0 * d) * Complex64::from_polar(1.0, -k * beta)
        }
        _ => unreachable!(),
    }
}

/// One-sided mode response mu(k) of the pre-projection linear velocity.
fn mu_of_mode(k: f64, gamma: f64, tol: f64) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..7 {
        // E7 has a simple pole at beta = 0; the folded PV rule handles both
        // it and the smooth kernels.
        let val = quad::principal_value(|b| linear_kernel(j, k, b), PI, tol)?;
        if j == 4 || j == 5 {
            total += Complex64::new(0.0, k) * val;
        } else {
            total += val;
        }
    }
    Ok(total * gamma / (4.0 * PI))
}

/// Diagonal multiplier of U1: F(U1)(k) = u1_multiplier(k) F(phi)(k).
pub fn u1_multiplier(k: i64, gamma: f64) -> Result<Complex64> {
    if k == 0 {
        return Err(CoreError::Domain {
            what: "U1 multiplier undefined at k = 0".into(),
        });
    }
    let tol = 1e-11;
    let plus = mu_of_mode(k as f64, gamma, tol)?;
    let minus = mu_of_mode(-k as f64, gamma, tol)?;
    // U1 = Re(.): average the +k response with the conjugate -k response
    Ok(0.5 * (plus + minus.conj()))
}

/// Closed form of the U1 multiplier implied by the assembled linear
/// operator: i (gamma/4pi) pi k |k| / (k^2 - 1) for |k| > 1.
pub fn u1_multiplier_analytic(k: i64, gamma: f64) -> Result<Complex64> {
    if k.abs() <= 1 {
        return Err(CoreError::Domain {
            what: format!("analytic U1 multiplier needs |k| > 1, got {k}"),
        });
    }
    let kf = k as f64;
    Ok(Complex64::new(
        0.0,
        gamma / (4.0 * PI) * PI * kf * kf.abs() / (kf * kf - 1.0),
    ))
}

/// Linear-part normal speed: each mode of phi scaled by the U1 multiplier.
pub fn linear_velocity_u1(phi: &TrigSeries, gamma: f64) -> Result<TrigSeries> {
    if !phi.is_real() {
        return Err(CoreError::InvalidParameter {
            what: "phi must be real".into(),
        });
    }
    if phi.coeff(0).norm() != 0.0 {
        return Err(CoreError::NonzeroMean {
            magnitude: phi.coeff(0).norm(),
        });
    }
    let n = phi.n();
    let mut half = vec![Complex64::new(0.0, 0.0); n + 1];
    for k in 1..=n as i64 {
        if phi.coeff(k).norm() > 0.0 {
            half[k as usize] = u1_multiplier(k, gamma)? * phi.coeff(k);
        }
    }
    TrigSeries::real_from_half(n, &half)
}

// ---------------------------------------------------------------------------
// Closed-form kernel constants.
// ---------------------------------------------------------------------------

/// sqrt(1 + pi^2/4), the uniform bound on |i beta / (1 - e^{i beta})|.
fn root_term() -> f64 {
    (1.0 + PI * PI / 4.0).sqrt()
}

/// C_n = (gamma/4pi) ((n+1) (pi/2)^n (1/2) sqrt(1+pi^2/4) pi^2 + 2 pi).
pub fn c_n(n: u32, gamma: f64) -> f64 {
    gamma / (4.0 * PI)
        * ((n as f64 + 1.0) * (PI / 2.0).powi(n as i32) * 0.5 * root_term() * PI * PI + 2.0 * PI)
}

/// Per-kernel bounds on the mode response of the linear velocity; entries
/// 4 and 5 multiply |k|.
pub fn ej_bounds(gamma: f64) -> [f64; 7] {
    let c = gamma / (4.0 * PI);
    let rt = root_term();
    [
        c * (2.0 * PI + PI * PI / 4.0 * rt),
        c * (PI * rt + PI * PI + PI * PI * rt + PI * PI),
        c * (PI * PI / 2.0),
        c * (0.5 * rt * PI * PI + 2.0 * PI),
        c * (PI * PI / 2.0),
        c * (0.5 * rt * PI * PI + 2.0 * PI),
        c * (0.5 * rt * 1.5 * 2.0 * PI + 0.5 * 4.0 * 5.0),
    ]
}

/// (H3, H4): |F(U1)(k)| <= (H3 + H4 |k|) |F(phi)(k)|. H3 collects the five
/// phi-coefficient bounds, H4 the two phi'-coefficient bounds.
pub fn h34(gamma: f64) -> (f64, f64) {
    let b = ej_bounds(gamma);
    (b[0] + b[1] + b[2] + b[3] + b[6], b[4] + b[5])
}

/// The n = 0 product-free kernel integral whose magnitude C_0 bounds:
/// (gamma/4pi) Int e^{-i beta (k1-k2)} W-factor(k3) (-i beta e^{2 i beta} /
/// (1 - e^{i beta})) d beta.
pub fn i0_integral(k1: i64, k2: i64, k3: i64, gamma: f64) -> Result<Complex64> {
    let d = (k1 - k2) as f64;
    let k3f = k3 as f64;
    let val = quad::integrate(
        |b| {
            // i b / (e^{ib} - 1) -> stable sinc-style form
            let factor = if b == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, b) / quad::expm1_i(b)
            };
            Complex64::from_polar(1.0, -d * b)
                * s_weighted(-1.0, k3f, b)
                * factor
                * Complex64::from_polar(1.0, 2.0 * b)
        },
        -PI,
        PI,
        1e-11,
    )?;
    Ok(val * gamma / (4.0 * PI))
}
