//! Closed-form Fourier multipliers of the linearized evolution operator and
//! independent quadrature oracles for every one of them.
//!
//! The linearized angle dynamics act diagonally: mode k of the perturbation
//! is damped at the rate (2pi/L)(gamma/4pi) pi |k| for |k| > 1 and is inert
//! at |k| = 1. That multiplier assembles from two families of beta-integrals
//! (J1, a ten-integral sum, and J2, a single integral), which in turn reduce
//! to the constants g2..g8. Everything here is evaluated two ways: the known
//! closed forms, and direct principal-value quadrature of the defining
//! integrals with the singular geometric factor 1/(-1+e^{i beta}) folded
//! symmetrically about the pole.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{CoreError, Result};
use crate::quad::{self, expm1_i};

/// Absolute tolerance for the oracle quadratures.
const ORACLE_TOL: f64 = 1e-10;

fn check_mode(k: i64) -> Result<()> {
    if k == 0 {
        return Err(CoreError::Domain {
            what: "multiplier modes start at |k| = 1".into(),
        });
    }
    Ok(())
}

/// J1(k) = -pi/k for k > 1 and pi/k for k < -1; an even function -pi/|k|.
/// Zero at |k| = 1.
pub fn j1_analytic(k: i64) -> Result<f64> {
    check_mode(k)?;
    if k.abs() == 1 {
        return Ok(0.0);
    }
    Ok(-PI / k.abs() as f64)
}

/// J2(k) = -pi(k - 1/k) for k > 1, pi(k - 1/k) for k < -1, zero at |k| = 1.
pub fn j2_analytic(k: i64) -> Result<f64> {
    check_mode(k)?;
    if k.abs() == 1 {
        return Ok(0.0);
    }
    let kf = k as f64;
    Ok(if k > 1 {
        -PI * (kf - 1.0 / kf)
    } else {
        PI * (kf - 1.0 / kf)
    })
}

/// Mode-k multiplier of the linearized operator:
/// -(2pi/L)(gamma/4pi) pi |k| for |k| > 1 and 0 at |k| = 1.
pub fn multiplier_analytic(k: i64, l: f64, gamma: f64) -> Result<f64> {
    check_mode(k)?;
    if !(l > 0.0) {
        return Err(CoreError::InvalidParameter {
            what: format!("length must be positive, got {l}"),
        });
    }
    if k.abs() == 1 {
        return Ok(0.0);
    }
    Ok(-(2.0 * PI / l) * (gamma / (4.0 * PI)) * PI * k.abs() as f64)
}

// ---------------------------------------------------------------------------
// Defining integrals, evaluated by principal-value quadrature.
// ---------------------------------------------------------------------------

/// (e^{i a beta} - e^{i b beta}) / beta, cancellation-free for any beta.
fn diff_quotient(a: f64, b: f64, beta: f64) -> Complex64 {
    // e^{iab} - e^{ibb} = e^{ibb}(e^{i(a-b)b} - 1)
    Complex64::from_polar(1.0, b * beta) * expm1_i((a - b) * beta) / beta
}

/// n2 = -1 - 2 e^{i b} + e^{2 i b}; vanishes nowhere on [-pi, pi].
fn n2(e: Complex64) -> Complex64 {
    Complex64::new(-1.0, 0.0) - 2.0 * e + e * e
}

/// n3 = -1 + 2 e^{i b} + e^{2 i b}.
fn n3(e: Complex64) -> Complex64 {
    Complex64::new(-1.0, 0.0) + 2.0 * e + e * e
}

/// The ten-integral sum defining J1, evaluated numerically. Valid for
/// |k| >= 2.
pub fn j1_quadrature(k: i64) -> Result<f64> {
    if k.abs() < 2 {
        return Err(CoreError::Domain {
            what: format!("J1 quadrature needs |k| >= 2, got {k}"),
        });
    }
    let kf = k as f64;
    let i = Complex64::new(0.0, 1.0);

    // smooth numerators of the first two integrals
    // i - (i + b) e^{ib} and b + i(e^{ib} - 1)
    let a_num = |b: f64, e: Complex64| i - (i + Complex64::new(b, 0.0)) * e;
    let b_num = |b: f64| Complex64::new(b, 0.0) + i * expm1_i(b);

    let int = |f: &dyn Fn(f64) -> Complex64| quad::principal_value(f, PI, ORACLE_TOL);

    let t1 = int(&|b| {
        let e = Complex64::from_polar(1.0, b);
        let d = expm1_i(b);
        a_num(b, e) * n2(e) / (4.0 * d * d) * diff_quotient(-1.0, -kf, b)
    })? * (kf / (kf - 1.0) + 1.0 / (kf * (1.0 - kf)));

    let t2 = int(&|b| {
        let e = Complex64::from_polar(1.0, b);
        let d = expm1_i(b);
        e.conj() * n3(e) * b_num(b) / (4.0 * d * d) * diff_quotient(1.0, -kf, b)
    })? * (kf / (1.0 + kf) - 1.0 / (kf * (1.0 + kf)));

    let t3 = int(&|b| {
        let e = Complex64::from_polar(1.0, b);
        let d = expm1_i(b);
        // e^{-ib(1+k)} (e^{ibk} - e^{ib})/b = diff_quotient(-1, -k)
        -i * n2(e) / (4.0 * d) * diff_quotient(-1.0, -kf, b)
    })? * (-kf * kf / ((kf - 1.0) * (kf - 1.0)) + 1.0 / ((kf - 1.0) * (kf - 1.0)));

    let t4 = int(&|b| {
        let e = Complex64::from_polar(1.0, b);
        let d = expm1_i(b);
        -i * n2(e) * Complex64::from_polar(1.0, -kf * b) / (4.0 * d)
    })? * (i * kf * kf / (kf - 1.0) - i / (kf - 1.0));

    let t5 = int(&|b| {
        let e = Complex64::from_polar(1.0, b);
        let d = expm1_i(b);
        // e^{-ibk}(-1 + e^{ib(1+k)})/b = diff_quotient(1, -k)
        e.conj() * i * n3(e) / (4.0 * d) * diff_quotient(1.0, -kf, b)
    })? * (-kf * kf / ((1.0 + kf) * (1.0 + kf)) + 1.0 / ((1.0 + kf) * (1.0 + kf)));

    let t6 = int(&|b| {
        let e = Complex64::from_polar(1.0, b);
        let d = expm1_i(b);
        e.conj() * n3(e) * Complex64::from_polar(1.0, -kf * b) / (4.0 * d)
    })? * (-kf * kf / (1.0 + kf) + 1.0 / (1.0 + kf));

    let t7 = int(&|b| {
        let e = Complex64::from_polar(1.0, b);
        let d = expm1_i(b);
        -n2(e) / (4.0 * d) * diff_quotient(-1.0, -kf, b)
    })? * (i * kf / ((kf - 1.0) * (kf - 1.0)) - i / (kf * (kf - 1.0) * (kf - 1.0)));

    let t8 = int(&|b| {
        let e = Complex64::from_polar(1.0, b);
        let d = expm1_i(b);
        -n2(e) * Complex64::from_polar(1.0, -kf * b) / (4.0 * d)
    })? * (kf / (kf - 1.0) - 1.0 / (kf * (kf - 1.0)));

    let t9 = int(&|b| {
        let e = Complex64::from_polar(1.0, b);
        let d = expm1_i(b);
        -e.conj() * n3(e) / (4.0 * d) * diff_quotient(1.0, -kf, b)
    })? * (i * kf / ((1.0 + kf) * (1.0 + kf)) - i / (kf * (1.0 + kf) * (1.0 + kf)));

    let t10 = int(&|b| {
        let e = Complex64::from_polar(1.0, b);
        let d = expm1_i(b);
        -e.conj() * n3(e) * Complex64::from_polar(1.0, -kf * b) / (4.0 * d)
    })? * (kf / (1.0 + kf) - 1.0 / (kf * (1.0 + kf)));

    let total = t1 + t2 + t3 + t4 + t5 + t6 + t7 + t8 + t9 + t10;
    if total.im.abs() > 1e-7 {
        return Err(CoreError::OracleFailure {
            what: format!("J1({k}) has spurious imaginary part {:e}", total.im),
        });
    }
    Ok(total.re)
}

/// The single integral defining J2, evaluated numerically. Valid for |k| >= 2.
pub fn j2_quadrature(k: i64) -> Result<f64> {
    if k.abs() < 2 {
        return Err(CoreError::Domain {
            what: format!("J2 quadrature needs |k| >= 2, got {k}"),
        });
    }
    let kf = k as f64;
    let i = Complex64::new(0.0, 1.0);
    let base = quad::principal_value(
        |b| {
            let e = Complex64::from_polar(1.0, b);
            let d = expm1_i(b);
            // -e^{-ib} i (1 + e + e^2 + e^3) e^{-ikb} / (4(-1+e))
            -e.conj()
                * i
                * (Complex64::new(1.0, 0.0) + e + e * e + e * e * e)
                * Complex64::from_polar(1.0, -kf * b)
                / (4.0 * d)
        },
        PI,
        ORACLE_TOL,
    )?;
    let total = base * (i * kf - i / kf);
    if total.im.abs() > 1e-7 {
        return Err(CoreError::OracleFailure {
            what: format!("J2({k}) has spurious imaginary part {:e}", total.im),
        });
    }
    Ok(total.re)
}

/// The six g-constants appearing in the reduction of J1.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GConstants {
    pub g2: Complex64,
    pub g3: Complex64,
    pub g5: Complex64,
    pub g6: Complex64,
    pub g7: Complex64,
    pub g8: Complex64,
}

/// Closed forms: g2 = g3 = -pi k/2, g5 = -i pi/2, g6 = g7 = -pi/2, g8 = pi/2.
pub fn g_constants_analytic(k: i64) -> Result<GConstants> {
    if k < 2 {
        return Err(CoreError::Domain {
            what: format!("g-constants defined for k >= 2, got {k}"),
        });
    }
    let kf = k as f64;
    Ok(GConstants {
        g2: Complex64::new(-PI * kf / 2.0, 0.0),
        g3: Complex64::new(-PI * kf / 2.0, 0.0),
        g5: Complex64::new(0.0, -PI / 2.0),
        g6: Complex64::new(-PI / 2.0, 0.0),
        g7: Complex64::new(-PI / 2.0, 0.0),
        g8: Complex64::new(PI / 2.0, 0.0),
    })
}

/// Quadrature of the defining integrals of g2..g8.
pub fn g_constants_quadrature(k: i64) -> Result<GConstants> {
    if k < 2 {
        return Err(CoreError::Domain {
            what: format!("g-constants defined for k >= 2, got {k}"),
        });
    }
    let kf = k as f64;
    let i = Complex64::new(0.0, 1.0);
    let int = |f: &dyn Fn(f64) -> Complex64| quad::principal_value(f, PI, ORACLE_TOL);

    let g2 = int(&|b| {
        let e = Complex64::from_polar(1.0, b);
        let d = expm1_i(b);
        // -b e^{ib} n2 / (4 d^2) * (e^{-ib} - e^{-ikb})/b
        -e * n2(e) / (4.0 * d * d) * expm1_i(-(kf - 1.0) * b) * Complex64::from_polar(1.0, -b)
            * Complex64::new(-1.0, 0.0)
    })?;
    let g3 = int(&|b| {
        let e = Complex64::from_polar(1.0, b);
        let d = expm1_i(b);
        // e^{-ib} n3 b / (4 d^2) * (e^{ib} - e^{-ikb})/b
        e.conj() * n3(e) / (4.0 * d * d) * (e - Complex64::from_polar(1.0, -kf * b))
    })?;
    let g5 = int(&|b| {
        let e = Complex64::from_polar(1.0, b);
        let d = expm1_i(b);
        -i * n2(e) * Complex64::from_polar(1.0, -kf * b) / (4.0 * d)
    })?;
    let g6 = int(&|b| {
        let e = Complex64::from_polar(1.0, b);
        let d = expm1_i(b);
        e.conj() * n3(e) * Complex64::from_polar(1.0, -kf * b) / (4.0 * d)
    })?;
    let g7 = int(&|b| {
        let e = Complex64::from_polar(1.0, b);
        let d = expm1_i(b);
        -n2(e) * Complex64::from_polar(1.0, -kf * b) / (4.0 * d)
    })?;
    let g8 = int(&|b| {
        let e = Complex64::from_polar(1.0, b);
        let d = expm1_i(b);
        -e.conj() * n3(e) * Complex64::from_polar(1.0, -kf * b) / (4.0 * d)
    })?;
    Ok(GConstants { g2, g3, g5, g6, g7, g8 })
}

/// Reassemble J1 from the g-constants:
/// J1 = (k+1)/k g2 + (k-1)/k g3 + i(k+1) g5 + (1-k) g6 + (k+1)/k g7 + (k-1)/k g8.
pub fn j1_from_g(k: i64, g: &GConstants) -> Complex64 {
    let kf = k as f64;
    let i = Complex64::new(0.0, 1.0);
    (kf + 1.0) / kf * g.g2
        + (kf - 1.0) / kf * g.g3
        + i * (kf + 1.0) * g.g5
        + (1.0 - kf) * g.g6
        + (kf + 1.0) / kf * g.g7
        + (kf - 1.0) / kf * g.g8
}

// ---------------------------------------------------------------------------
// Closed-form coefficient functions of the a-priori estimates.
// ---------------------------------------------------------------------------

/// A(x) = (1 - sqrt(1 - (pi/2)(e^{2x} - 1))) / x on 0 < x < (1/2) ln(1 + 2/pi).
pub fn a_of(x: f64) -> Result<f64> {
    let limit = 0.5 * (1.0 + 2.0 / PI).ln();
    if !(x > 0.0 && x < limit) {
        return Err(CoreError::Domain {
            what: format!("A(x) needs 0 < x < {limit}, got {x}"),
        });
    }
    let u = (PI / 2.0) * ((2.0 * x).exp() - 1.0);
    Ok((1.0 - (1.0 - u).sqrt()) / x)
}

/// A1(x) = 1 / sqrt(1 + (pi/2)(e^{2x} - 1)) for x >= 0.
pub fn a1_of(x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(CoreError::Domain {
            what: format!("A1(x) needs x >= 0, got {x}"),
        });
    }
    Ok(1.0 / (1.0 + (PI / 2.0) * ((2.0 * x).exp() - 1.0)).sqrt())
}

/// One row of the multiplier cross-check report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiplierReport {
    pub k: i64,
    pub analytic: f64,
    pub numeric: f64,
    pub abs_err: f64,
    pub method: MultiplierMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplierMethod {
    Analytic,
    PvQuadrature,
    FdLinearization,
}
