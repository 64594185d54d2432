//! Batch verification suites: every closed-form value and estimate gets an
//! independent numerical check, reported row by row so a front end can emit
//! machine-readable pass/fail summaries.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::dynamics;
use crate::error::Result;
use crate::geometry;
use crate::multipliers::{self, MultiplierMethod, MultiplierReport};
use crate::series::{NormWeight, TrigSeries};
use crate::velocity;

/// One named check with its numbers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub abs_err: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CheckRow {
    fn new(name: impl Into<String>, expected: f64, actual: f64, tol: f64) -> Self {
        let abs_err = (expected - actual).abs();
        Self {
            name: name.into(),
            expected,
            actual,
            abs_err,
            tol,
            pass: abs_err <= tol,
        }
    }

    /// A bound check: pass iff actual <= limit.
    fn bound(name: impl Into<String>, limit: f64, actual: f64) -> Self {
        Self {
            name: name.into(),
            expected: limit,
            actual,
            abs_err: (actual - limit).max(0.0),
            tol: 0.0,
            pass: actual <= limit,
        }
    }
}

pub fn all_pass(rows: &[CheckRow]) -> bool {
    rows.iter().all(|r| r.pass)
}

/// Cross-check the linearized multiplier three ways for k = 1..kmax:
/// closed form, quadrature of the defining integrals, and finite-difference
/// linearization of the full nonlinear right-hand side.
pub fn verify_linearization(kmax: usize, r: f64, gamma: f64) -> Result<Vec<MultiplierReport>> {
    let l = 2.0 * PI * r;
    let n = (2 * kmax).max(8);
    let m = 4 * n;
    let mut rows = Vec::new();
    for k in 1..=kmax as i64 {
        let analytic = multipliers::multiplier_analytic(k, l, gamma)?;
        let quad_value = if k.abs() >= 2 {
            (2.0 * PI / l)
                * (gamma / (4.0 * PI))
                * (multipliers::j1_quadrature(k)? + multipliers::j2_quadrature(k)?)
        } else {
            // the operator coefficient (ik - i/k) vanishes identically at
            // |k| = 1; the defining J integrals are taken as 0 there
            0.0
        };
        rows.push(MultiplierReport {
            k,
            analytic,
            numeric: quad_value,
            abs_err: (analytic - quad_value).abs(),
            method: MultiplierMethod::PvQuadrature,
        });

        let direction = TrigSeries::real_from_modes(n, &[(k as usize, Complex64::new(0.5, 0.0))])?;
        let fd = dynamics::linearized_rhs_fd(&direction, 1e-6, n, m, r, gamma)?;
        let fd_value = (fd.coeff(k) / direction.coeff(k)).re;
        rows.push(MultiplierReport {
            k,
            analytic,
            numeric: fd_value,
            abs_err: (analytic - fd_value).abs(),
            method: MultiplierMethod::FdLinearization,
        });
    }
    Ok(rows)
}

pub fn linearization_pass(rows: &[MultiplierReport], tol_quad: f64, tol_fd_rel: f64) -> bool {
    rows.iter().all(|row| match row.method {
        MultiplierMethod::PvQuadrature => row.abs_err <= tol_quad,
        MultiplierMethod::FdLinearization => {
            if row.k.abs() == 1 {
                row.abs_err <= 1e-6
            } else {
                row.abs_err <= tol_fd_rel * row.analytic.abs()
            }
        }
        MultiplierMethod::Analytic => true,
    })
}

/// Kernel-constant suite: g-constants, the J1 assembly identity, C_n, the
/// I0 bound on random integer triples, and the (H3, H4) mode bound.
pub fn verify_kernels(seed: u64, kmax: usize) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let gamma = 1.0;
    for k in 2..=kmax.max(2) as i64 {
        let q = multipliers::g_constants_quadrature(k)?;
        let a = multipliers::g_constants_analytic(k)?;
        for (name, qv, av) in [
            ("g2", q.g2, a.g2),
            ("g3", q.g3, a.g3),
            ("g5", q.g5, a.g5),
            ("g6", q.g6, a.g6),
            ("g7", q.g7, a.g7),
            ("g8", q.g8, a.g8),
        ] {
            rows.push(CheckRow::new(
                format!("{name}(k={k})"),
                0.0,
                (qv - av).norm(),
                1e-8,
            ));
        }
        let assembled = multipliers::j1_from_g(k, &q);
        rows.push(CheckRow::new(
            format!("J1 assembly (k={k})"),
            -PI / k as f64,
            assembled.re,
            1e-8,
        ));
        rows.push(CheckRow::new(
            format!("J1 assembly imag (k={k})"),
            0.0,
            assembled.im,
            1e-8,
        ));
    }

    let c0 = velocity::c_n(0, gamma);
    let c0_expect = gamma / (4.0 * PI) * (0.5 * (1.0 + PI * PI / 4.0).sqrt() * PI * PI + 2.0 * PI);
    rows.push(CheckRow::new("C_0 closed form", c0_expect, c0, 1e-14));
    rows.push(CheckRow::bound(
        "C_1 < C_2 (growth in n)",
        velocity::c_n(2, gamma),
        velocity::c_n(1, gamma),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..100 {
        let k1 = rng.random_range(-12i64..=12);
        let k2 = rng.random_range(-12i64..=12);
        let k3 = rng.random_range(-12i64..=12);
        let v = velocity::i0_integral(k1, k2, k3, gamma)?;
        rows.push(CheckRow::bound(
            format!("|I0({k1},{k2},{k3})| <= C_0 [{i}]"),
            c0 + 1e-12,
            v.norm(),
        ));
    }

    let (h3, h4) = velocity::h34(gamma);
    for k in 1..=10i64 {
        let mu = velocity::u1_multiplier(k, gamma)?;
        rows.push(CheckRow::bound(
            format!("|F(U1)({k})| <= H3 + H4 k"),
            h3 + h4 * k as f64,
            mu.norm(),
        ));
    }
    Ok(rows)
}

fn random_series(rng: &mut ChaCha8Rng, n: usize, amp: f64, mean_free: bool) -> TrigSeries {
    let mut half = vec![Complex64::new(0.0, 0.0); n + 1];
    for (k, h) in half.iter_mut().enumerate() {
        if k == 0 {
            *h = if mean_free {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(amp * rng.random_range(-1.0..1.0), 0.0)
            };
        } else {
            *h = Complex64::new(
                amp * rng.random_range(-1.0..1.0),
                amp * rng.random_range(-1.0..1.0),
            ) / k as f64;
        }
    }
    TrigSeries::real_from_half(n, &half).expect("construction is Hermitian")
}

/// b(n, s) of the product estimate: 1 for s <= 1, n^{s-1} above.
fn b_factor(n: usize, s: f64) -> f64 {
    if s <= 1.0 {
        1.0
    } else {
        (n as f64).powf(s - 1.0)
    }
}

/// Wiener-algebra property suite on seeded random trig polynomials.
pub fn verify_norms(seed: u64) -> Result<Vec<CheckRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut product_violations = 0usize;
    let mut homogeneous_violations = 0usize;
    let mut embedding_violations = 0usize;
    let mut antiderivative_violations = 0usize;
    let trials = 1000;
    // fp slack on inequalities that can be tight
    let slack = 1e-12;

    for trial in 0..trials {
        let n_factors = 2 + trial % 3; // products of 2, 3, 4 series
        let weight = NormWeight::new(
            rng.random_range(0.0..0.3),
            rng.random_range(0.0..5.0),
        )?;
        let factors: Vec<TrigSeries> = (0..n_factors)
            .map(|_| random_series(&mut rng, 2 + (trial % 7), 1.0, false))
            .collect();
        let band: usize = factors.iter().map(|f| f.n()).sum();
        let mut product = factors[0].clone();
        for f in &factors[1..] {
            product = product.product(f, band);
        }

        let lhs = product.norm_f01(&weight);
        let rhs: f64 = factors.iter().map(|f| f.norm_f01(&weight)).product();
        if lhs > rhs * (1.0 + slack) + slack {
            product_violations += 1;
        }

        for s in [0.5, 1.0, 2.0] {
            let lhs_s = product.norm_fs1(s, &weight);
            let mut rhs_s = 0.0;
            for j in 0..factors.len() {
                let mut term = factors[j].norm_fs1(s, &weight);
                for (k, f) in factors.iter().enumerate() {
                    if k != j {
                        term *= f.norm_f01(&weight);
                    }
                }
                rhs_s += term;
            }
            rhs_s *= b_factor(factors.len(), s);
            if lhs_s > rhs_s * (1.0 + slack) + slack {
                homogeneous_violations += 1;
            }
        }

        // embedding between homogeneous norms
        let f = &factors[0];
        let s1 = rng.random_range(0.05..1.0);
        let s2 = s1 + rng.random_range(0.0..2.0);
        if f.norm_fs1(s1, &weight) > f.norm_fs1(s2, &weight) * (1.0 + slack) + slack {
            embedding_violations += 1;
        }

        // the mean-free antiderivative followed by d/d alpha returns
        // f minus its mean
        let g = f.operator_m().derivative();
        let dev = (-(f.n() as i64)..=f.n() as i64)
            .map(|k| {
                let expect = if k == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    f.coeff(k)
                };
                (g.coeff(k) - expect).norm()
            })
            .fold(0.0, f64::max);
        if dev > 1e-13 {
            antiderivative_violations += 1;
        }
    }

    Ok(vec![
        CheckRow::new(
            format!("Wiener product estimate violations / {trials}"),
            0.0,
            product_violations as f64,
            0.0,
        ),
        CheckRow::new(
            format!("homogeneous product estimate violations / {trials} (s = 0.5, 1, 2)"),
            0.0,
            homogeneous_violations as f64,
            0.0,
        ),
        CheckRow::new(
            format!("embedding violations / {trials}"),
            0.0,
            embedding_violations as f64,
            0.0,
        ),
        CheckRow::new(
            format!("antiderivative identity violations / {trials}"),
            0.0,
            antiderivative_violations as f64,
            0.0,
        ),
    ])
}

/// Geometry suite: volume conservation, length bounds, isoperimetric
/// inequality, and the closure-residual linearization on random states.
pub fn verify_geometry(seed: u64) -> Result<Vec<CheckRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weight = NormWeight::unweighted();
    let mut rows = Vec::new();
    let trials = 50;
    let mut volume_worst = 0.0f64;
    let mut bound_violations = 0usize;
    let mut iso_violations = 0usize;
    let mut closure_scaling_violations = 0usize;

    for _ in 0..trials {
        let mut phi = random_series(&mut rng, 8, 0.01, true);
        // strip the +-1 modes so states sit in the constrained class
        phi = phi.cutoff_jn1(8);
        let x = phi.norm_f01(&weight);
        if x > 0.04 {
            continue;
        }
        let state = geometry::InterfaceState::new(phi, 0.0, 1.0, 1.0, 0.0)?;
        let l = state.length()?;
        let (lo, hi) = geometry::length_ratio_bounds(x)?;
        let ratio = (l / (2.0 * PI)).powi(2);
        if !(lo..=hi).contains(&ratio) {
            bound_violations += 1;
        }
        let dev_bound = geometry::radius_length_deviation_bound(x)?;
        if (2.0 * PI / l - 1.0).abs() > dev_bound {
            bound_violations += 1;
        }
        let curve = geometry::reconstruct_curve(&state, Complex64::new(0.0, 0.0), 64)?;
        let v = geometry::volume(&curve, 1e-3)?;
        let residual = ((v - PI) / PI).abs();
        // generic band-limited states close only up to an O(||phi||^2)
        // tangent defect, and the conserved-volume identity then holds up
        // to that defect times the perturbation size
        let closure = geometry::closure_residual(&state)?;
        if residual > (1e-10f64).max(0.5 * closure * x) {
            closure_scaling_violations += 1;
        }
        volume_worst = volume_worst.max(residual);
        if l * l < 4.0 * PI * v - 1e-10 {
            iso_violations += 1;
        }
    }
    rows.push(CheckRow::bound(
        format!("worst |V - pi R^2| / pi R^2 over {trials} generic states"),
        1e-6,
        volume_worst,
    ));
    rows.push(CheckRow::new(
        format!("volume residual beyond O(closure * ||phi||) / {trials}"),
        0.0,
        closure_scaling_violations as f64,
        0.0,
    ));
    // on a mode-2 state the closure defect vanishes by parity and the
    // conserved volume is recovered to quadrature accuracy
    let phi2 = TrigSeries::real_from_modes(8, &[(2, Complex64::new(0.01, 0.0))])?;
    let state2 = geometry::InterfaceState::new(phi2, 0.0, 1.0, 1.0, 0.0)?;
    let curve2 = geometry::reconstruct_curve(&state2, Complex64::new(0.0, 0.0), 64)?;
    rows.push(CheckRow::new(
        "mode-2 state volume / pi R^2",
        1.0,
        geometry::volume(&curve2, 1e-8)? / PI,
        1e-10,
    ));
    rows.push(CheckRow::new(
        format!("length bound violations / {trials}"),
        0.0,
        bound_violations as f64,
        0.0,
    ));
    rows.push(CheckRow::new(
        format!("isoperimetric violations / {trials}"),
        0.0,
        iso_violations as f64,
        0.0,
    ));

    // closure residual: leading term is |i phi_hat(-1)|
    let phi1 = TrigSeries::real_from_modes(4, &[(1, Complex64::new(0.1, 0.0))])?;
    let state1 = geometry::InterfaceState::new(phi1, 0.0, 1.0, 1.0, 0.0)?;
    rows.push(CheckRow::new(
        "closure residual linearization at phi_hat(1) = 0.1",
        0.1,
        geometry::closure_residual(&state1)?,
        0.02,
    ));

    // circle sanity
    let circle = geometry::InterfaceState::circle(8, 1.0, 1.0)?;
    rows.push(CheckRow::new(
        "circle length",
        2.0 * PI,
        circle.length()?,
        1e-12,
    ));
    rows.push(CheckRow::new(
        "circle closure residual",
        0.0,
        geometry::closure_residual(&circle)?,
        1e-14,
    ));
    Ok(rows)
}
