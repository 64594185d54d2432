//! Adaptive Gauss-Kronrod quadrature for complex-valued integrands, plus a
//! principal-value rule for kernels with a simple pole at beta = 0.
//!
//! The PV rule folds the integrand: PV int_{-a}^{a} f = int_0^a (f(b) + f(-b)) db.
//! The odd singular part cancels exactly in the fold and the even part is
//! smooth up to the origin, so ordinary adaptive refinement applies. Gauss
//! and Kronrod nodes are interior, so the origin itself is never sampled.

use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// 15-point Kronrod abscissae on [0, 1] side (symmetric rule).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];

/// Kronrod weights matching XGK.
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

/// Embedded 7-point Gauss weights (nodes XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

struct Gk15 {
    value: Complex64,
    error: f64,
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Gk15 {
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let mut kronrod = Complex64::new(0.0, 0.0);
    let mut gauss = Complex64::new(0.0, 0.0);
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        if x == 0.0 {
            let v = f(center);
            kronrod += wk * v;
            gauss += WG[3] * v;
        } else {
            let lo = f(center - half * x);
            let hi = f(center + half * x);
            kronrod += wk * (lo + hi);
            if i % 2 == 1 {
                gauss += WG[i / 2] * (lo + hi);
            }
        }
    }
    kronrod *= half;
    gauss *= half;
    Gk15 {
        value: kronrod,
        error: (kronrod - gauss).norm(),
    }
}

/// Adaptive integration of f over [a, b] to the given absolute tolerance.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Result<Complex64> {
    const MAX_DEPTH: usize = 48;
    let mut total = Complex64::new(0.0, 0.0);
    let mut stack = vec![(a, b, tol, 0usize)];
    while let Some((lo, hi, budget, depth)) = stack.pop() {
        let est = gk15(&f, lo, hi);
        if est.error <= budget || est.error <= 1e-16 * est.value.norm() {
            total += est.value;
        } else if depth >= MAX_DEPTH {
            return Err(CoreError::OracleFailure {
                what: format!(
                    "quadrature failed to converge on [{lo}, {hi}] (error {:e})",
                    est.error
                ),
            });
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * budget, depth + 1));
            stack.push((mid, hi, 0.5 * budget, depth + 1));
        }
    }
    Ok(total)
}

/// Principal value of int_{-a}^{a} f(b) db for f with a simple pole at 0.
pub fn principal_value<F: Fn(f64) -> Complex64>(f: F, a: f64, tol: f64) -> Result<Complex64> {
    integrate(|b| f(b) + f(-b), 1e-300, a, tol)
}

/// e^{i x} - 1 in a cancellation-free form: 2 i sin(x/2) e^{i x/2}.
pub fn expm1_i(x: f64) -> Complex64 {
    Complex64::new(0.0, 2.0 * (0.5 * x).sin()) * Complex64::from_polar(1.0, 0.5 * x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn integrates_sine() {
        let v = integrate(|x| c(x.sin(), 0.0), 0.0, PI, 1e-12).unwrap();
        assert!((v.re - 2.0).abs() < 1e-12);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn integrates_oscillatory_exponential() {
        for k in 1..6 {
            let v = integrate(
                |x| Complex64::from_polar(1.0, k as f64 * x),
                -PI,
                PI,
                1e-12,
            )
            .unwrap();
            assert!(v.norm() < 1e-11, "k = {k}: {v}");
        }
    }

    #[test]
    fn pv_of_odd_pole_vanishes() {
        let v = principal_value(|b| c(1.0 / b, 0.0), PI, 1e-12).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn pv_cotangent_identity() {
        // PV int_{-pi}^{pi} cot(b/2) e^{i m b} db = 2 pi i sign(m)
        for m in [-3i64, -1, 1, 2, 5] {
            let v = principal_value(
                |b| Complex64::from_polar(1.0, m as f64 * b) * (0.5 * b).tan().recip(),
                PI,
                1e-11,
            )
            .unwrap();
            let expect = c(0.0, 2.0 * PI * (m.signum() as f64));
            assert!((v - expect).norm() < 1e-9, "m = {m}: {v} vs {expect}");
        }
    }

    #[test]
    fn pv_geometric_kernel() {
        // 1/(-1+e^{ib}) = -1/2 - (i/2) cot(b/2); paired with e^{imb} the PV
        // integral is -pi delta_{m,0} + pi sign(m).
        for m in [-2i64, 0, 1, 3] {
            let v = principal_value(
                |b| {
                    Complex64::from_polar(1.0, m as f64 * b)
                        / (c(-1.0, 0.0) + Complex64::from_polar(1.0, b))
                },
                PI,
                1e-11,
            )
            .unwrap();
            let expect = if m == 0 {
                c(-PI, 0.0)
            } else {
                c(PI * m.signum() as f64, 0.0)
            };
            assert!((v - expect).norm() < 1e-9, "m = {m}: {v} vs {expect}");
        }
    }

    #[test]
    fn expm1_i_matches_direct_form() {
        for &x in &[3.0, 0.5, 1e-8, -2.0] {
            let direct = Complex64::from_polar(1.0, x) - c(1.0, 0.0);
            assert!((expm1_i(x) - direct).norm() < 1e-15);
        }
        // stable at tiny arguments where the direct form cancels
        assert!((expm1_i(1e-12) - c(0.0, 1e-12)).norm() < 1e-24);
    }
}
