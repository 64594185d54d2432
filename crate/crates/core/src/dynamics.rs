//! Time evolution of the tangent angle under the Galerkin-truncated system.
//!
//! The evolved unknowns are the mean-free perturbation phi (modes 2..N in
//! constrained runs, 1..N otherwise) and the angle zero mode theta0. One
//! right-hand-side evaluation recomputes L from phi (volume conservation is
//! then an identity, not an invariant to maintain), evaluates the
//! single-layer velocity, and assembles
//!
//!   (2 pi / L) (U_alpha + T (1 + phi_alpha)),
//!
//! followed by the hard cutoff (with or without the +-1 modes zeroed). The
//! zero mode of that expression drives theta0 and is removed from phi's
//! update.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{CoreError, Result};
use crate::geometry::{self, InterfaceState};
use crate::series::{NormWeight, TrigSeries};
use crate::velocity::{slp_velocity, QuadratureGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    Rk4,
    Imex,
}

/// Run parameters for a simulation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    /// Mode cutoff of the Galerkin space.
    pub n: usize,
    /// Quadrature grid size; at least 4N.
    pub m: usize,
    /// Time step.
    pub dt: f64,
    /// Final time.
    pub t_end: f64,
    pub integrator: Integrator,
    /// Analyticity weight growth rate nu0 >= 0 (diagnostics only).
    pub nu0: f64,
    /// Emit a diagnostics record every this many steps.
    pub output_every: usize,
    /// Closure residual above this is reported as a failed invariant.
    pub tol_closure: f64,
    /// Spectral tail fraction above this aborts the velocity evaluation.
    pub tol_resolution: f64,
    /// Keep the +-1 modes of phi pinned to zero (cutoff J_N^1).
    #[serde(default = "default_constrained")]
    pub constrained: bool,
    /// Largest admissible ||phi_0||_{F^{1,1}_dot}.
    #[serde(default = "default_smallness")]
    pub smallness_threshold: f64,
}

fn default_constrained() -> bool {
    true
}

fn default_smallness() -> f64 {
    0.05
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(CoreError::InvalidParameter {
                what: format!("mode cutoff must be >= 2, got {}", self.n),
            });
        }
        if self.m < 4 * self.n {
            return Err(CoreError::InvalidParameter {
                what: format!("grid size {} must be >= 4N = {}", self.m, 4 * self.n),
            });
        }
        if self.m % 2 != 0 {
            return Err(CoreError::InvalidParameter {
                what: format!("grid size must be even, got {}", self.m),
            });
        }
        if !(self.dt > 0.0) {
            return Err(CoreError::InvalidParameter {
                what: format!("time step must be positive, got {}", self.dt),
            });
        }
        if self.t_end < 0.0 {
            return Err(CoreError::NegativeTime { t: self.t_end });
        }
        if self.nu0 < 0.0 {
            return Err(CoreError::InvalidParameter {
                what: format!("nu0 must be nonnegative, got {}", self.nu0),
            });
        }
        if self.output_every == 0 {
            return Err(CoreError::InvalidParameter {
                what: "output_every must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// One diagnostics row along a trajectory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub l: f64,
    pub norm_f11_nu: f64,
    pub norm_f11: f64,
    pub norm_f21_nu: f64,
    pub max_u: f64,
    pub max_t: f64,
    pub closure: f64,
    pub volume_residual: f64,
    pub theta0: f64,
}

impl DiagnosticsRecord {
    /// Exact CSV header for diagnostics streams.
    pub const CSV_HEADER: &'static str =
        "t,L,norm_F11_nu,norm_F11,norm_F21_nu,maxU,maxT,closure,volume_residual,theta0";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
            self.t,
            self.l,
            self.norm_f11_nu,
            self.norm_f11,
            self.norm_f21_nu,
            self.max_u,
            self.max_t,
            self.closure,
            self.volume_residual,
            self.theta0
        )
    }

    pub fn is_finite(&self) -> bool {
        [
            self.t,
            self.l,
            self.norm_f11_nu,
            self.norm_f11,
            self.norm_f21_nu,
            self.max_u,
            self.max_t,
            self.closure,
            self.volume_residual,
            self.theta0,
        ]
        .iter()
        .all(|x| x.is_finite())
    }
}

/// Right-hand side of the truncated system.
#[derive(Debug, Clone)]
pub struct RhsOutput {
    /// d phi / dt, band-limited, mean-free, with the cutoff applied.
    pub phi_dot: TrigSeries,
    /// d theta0 / dt: the zero mode of (2pi/L) T (1 + phi_alpha).
    pub theta0_dot: f64,
}

/// Assemble (2pi/L)(U_alpha + T(1+phi_alpha)) and apply the cutoff.
pub fn rhs(state: &InterfaceState, config: &SimConfig, grid: &QuadratureGrid) -> Result<RhsOutput> {
    let n = config.n;
    let l = state.length()?;
    let velocity = slp_velocity(state, grid, config.tol_resolution)?;
    let u_alpha = velocity.u_normal.derivative();
    let one_plus = state.phi.derivative().shift_mean(1.0);
    let band = velocity.t_tangential.n() + one_plus.n();
    let transport = velocity.t_tangential.product(&one_plus, band);
    let full = u_alpha.add(&transport).scale(2.0 * PI / l);

    let theta0_dot = full.coeff(0).re;
    let mut phi_dot = if config.constrained {
        full.cutoff_jn1(n)
    } else {
        full.cutoff_jn(n)
    }
    .with_band(n);
    // the zero mode belongs to theta0
    phi_dot = phi_dot.sub(&TrigSeries::real_from_modes(n, &[(0, phi_dot.coeff(0))])?);
    Ok(RhsOutput { phi_dot, theta0_dot })
}

/// Zero-mode forcing of the angle: the mean of (2pi/L) T (1 + phi_alpha);
/// U_alpha contributes no mean.
pub fn zero_mode_rate(
    state: &InterfaceState,
    config: &SimConfig,
    grid: &QuadratureGrid,
) -> Result<f64> {
    Ok(rhs(state, config, grid)?.theta0_dot)
}

fn advance(state: &InterfaceState, phi_dot: &TrigSeries, theta0_dot: f64, dt: f64) -> Result<InterfaceState> {
    let phi = state.phi.add(&phi_dot.scale(dt)).with_band(state.phi.n());
    InterfaceState::new(
        phi,
        state.theta0 + dt * theta0_dot,
        state.r,
        state.gamma,
        state.t + dt,
    )
}

fn check_finite(state: &InterfaceState, t: f64) -> Result<()> {
    let finite = state
        .phi
        .coeffs()
        .iter()
        .all(|c| c.re.is_finite() && c.im.is_finite())
        && state.theta0.is_finite();
    if !finite {
        return Err(CoreError::StepFailure {
            t,
            detail: "non-finite state coefficients".into(),
        });
    }
    Ok(())
}

/// Advance one time step with the configured integrator.
pub fn step(state: &InterfaceState, config: &SimConfig, grid: &QuadratureGrid) -> Result<InterfaceState> {
    let out = match config.integrator {
        Integrator::Rk4 => step_rk4(state, config, grid)?,
        Integrator::Imex => step_imex(state, config, grid)?,
    };
    check_finite(&out, state.t)?;
    Ok(out)
}

fn step_rk4(state: &InterfaceState, config: &SimConfig, grid: &QuadratureGrid) -> Result<InterfaceState> {
    let dt = config.dt;
    let k1 = rhs(state, config, grid)?;
    let s2 = advance(state, &k1.phi_dot, k1.theta0_dot, 0.5 * dt)?;
    let k2 = rhs(&s2, config, grid)?;
    let s3 = advance(state, &k2.phi_dot, k2.theta0_dot, 0.5 * dt)?;
    let k3 = rhs(&s3, config, grid)?;
    let s4 = advance(state, &k3.phi_dot, k3.theta0_dot, dt)?;
    let k4 = rhs(&s4, config, grid)?;

    let phi_dot = k1
        .phi_dot
        .add(&k2.phi_dot.scale(2.0))
        .add(&k3.phi_dot.scale(2.0))
        .add(&k4.phi_dot)
        .scale(1.0 / 6.0);
    let theta0_dot =
        (k1.theta0_dot + 2.0 * k2.theta0_dot + 2.0 * k3.theta0_dot + k4.theta0_dot) / 6.0;
    advance(state, &phi_dot, theta0_dot, dt)
}

/// phi1(z) = (e^z - 1)/z with the small-z series.
fn phi1(z: f64) -> f64 {
    if z.abs() < 1e-5 {
        1.0 + z / 2.0 + z * z / 6.0
    } else {
        z.exp_m1() / z
    }
}

/// First-order exponential (ETD) step: the frozen linear multiplier
/// lambda_k = -gamma |k| / (4R) is integrated exactly, the remainder
/// explicitly.
fn step_imex(state: &InterfaceState, config: &SimConfig, grid: &QuadratureGrid) -> Result<InterfaceState> {
    let dt = config.dt;
    let k1 = rhs(state, config, grid)?;
    let n = state.phi.n();
    let mut half = vec![Complex64::new(0.0, 0.0); n + 1];
    for k in 1..=n as i64 {
        let lambda = if k >= 2 {
            -state.gamma * k as f64 / (4.0 * state.r)
        } else {
            0.0
        };
        let remainder = k1.phi_dot.coeff(k) - lambda * state.phi.coeff(k);
        half[k as usize] = (lambda * dt).exp() * state.phi.coeff(k)
            + dt * phi1(lambda * dt) * remainder;
    }
    let phi = TrigSeries::real_from_half(n, &half)?;
    InterfaceState::new(
        phi,
        state.theta0 + dt * k1.theta0_dot,
        state.r,
        state.gamma,
        state.t + dt,
    )
}

/// Full simulation outcome: the diagnostics stream, the last state, and a
/// failure note when the run aborted early.
#[derive(Debug, Clone)]
pub struct SimOutcome {
    pub records: Vec<DiagnosticsRecord>,
    pub final_state: InterfaceState,
    pub failure: Option<String>,
}

fn record_for(
    state: &InterfaceState,
    config: &SimConfig,
    grid: &QuadratureGrid,
) -> Result<DiagnosticsRecord> {
    let l = state.length()?;
    let velocity = slp_velocity(state, grid, config.tol_resolution)?;
    let weight = NormWeight::new(config.nu0, state.t)?;
    let unweighted = NormWeight::unweighted();
    let curve = geometry::reconstruct_curve(state, Complex64::new(0.0, 0.0), config.m)?;
    let v = geometry::volume(&curve, 1e-3)?;
    let v0 = PI * state.r * state.r;
    let max_u = velocity.u_normal.max_abs_on_grid(config.m)?;
    let t_band = velocity.t_tangential.n();
    let max_t = velocity
        .t_tangential
        .max_abs_on_grid((2 * t_band + 2).max(config.m))?;
    Ok(DiagnosticsRecord {
        t: state.t,
        l,
        norm_f11_nu: state.phi.norm_fs1(1.0, &weight),
        norm_f11: state.phi.norm_fs1(1.0, &unweighted),
        norm_f21_nu: state.phi.norm_fs1(2.0, &weight),
        max_u,
        max_t,
        closure: geometry::closure_residual(state)?,
        volume_residual: (v - v0).abs() / v0,
        theta0: state.theta0,
    })
}

/// Run the truncated dynamics from `init` up to t_end, emitting diagnostics
/// every `output_every` steps. Numerical failures end the run early and are
/// reported in the outcome together with the records produced so far.
pub fn simulate(init: &InterfaceState, config: &SimConfig) -> Result<SimOutcome> {
    config.validate()?;
    let norm0 = init.phi.norm_fs1(1.0, &NormWeight::unweighted());
    if norm0 > config.smallness_threshold {
        return Err(CoreError::SmallnessViolation {
            norm: norm0,
            threshold: config.smallness_threshold,
        });
    }
    if config.constrained {
        init.check_mode_one_free()?;
    }
    let grid = QuadratureGrid::new(config.m)?;
    let mut state = InterfaceState::new(
        init.phi.with_band(config.n),
        init.theta0,
        init.r,
        init.gamma,
        init.t,
    )?;
    let steps = (config.t_end / config.dt).round() as usize;
    let mut records = Vec::with_capacity(steps / config.output_every + 2);
    records.push(record_for(&state, config, &grid)?);

    for s in 0..steps {
        match step(&state, config, &grid) {
            Ok(next) => state = next,
            Err(e) => {
                return Ok(SimOutcome {
                    records,
                    final_state: state,
                    failure: Some(format!("step {s}: {e}")),
                });
            }
        }
        if (s + 1) % config.output_every == 0 || s + 1 == steps {
            match record_for(&state, config, &grid) {
                Ok(rec) => {
                    if !rec.is_finite() {
                        return Ok(SimOutcome {
                            records,
                            final_state: state,
                            failure: Some(format!("non-finite diagnostics at step {}", s + 1)),
                        });
                    }
                    records.push(rec);
                }
                Err(e) => {
                    return Ok(SimOutcome {
                        records,
                        final_state: state,
                        failure: Some(format!("diagnostics at step {}: {e}", s + 1)),
                    });
                }
            }
        }
    }
    Ok(SimOutcome {
        records,
        final_state: state,
        failure: None,
    })
}

/// Finite-difference linearization of the full right-hand side around the
/// circle: (rhs(eps * direction) - rhs(0)) / eps. Runs unconstrained so the
/// +-1 response is measured rather than imposed.
pub fn linearized_rhs_fd(
    direction: &TrigSeries,
    eps: f64,
    n: usize,
    m: usize,
    r: f64,
    gamma: f64,
) -> Result<TrigSeries> {
    if !(1e-8..=1e-4).contains(&eps) {
        return Err(CoreError::InvalidParameter {
            what: format!("fd step must lie in [1e-8, 1e-4], got {eps}"),
        });
    }
    let config = SimConfig {
        n,
        m,
        dt: 1.0,
        t_end: 0.0,
        integrator: Integrator::Rk4,
        nu0: 0.0,
        output_every: 1,
        tol_closure: 1e-6,
        tol_resolution: 1e-4,
        constrained: false,
        smallness_threshold: f64::INFINITY,
    };
    let grid = QuadratureGrid::new(m)?;
    let perturbed = InterfaceState::new(direction.scale(eps).with_band(n), 0.0, r, gamma, 0.0)?;
    let base = InterfaceState::circle(n, r, gamma)?;
    let f1 = rhs(&perturbed, &config, &grid)?;
    let f0 = rhs(&base, &config, &grid)?;
    Ok(f1.phi_dot.sub(&f0.phi_dot).scale(1.0 / eps))
}

/// Least-squares exponential rate of ||phi||_{F11} over a diagnostics
/// stream: the slope of ln(norm) against t, negated.
pub fn fit_decay_rate(records: &[DiagnosticsRecord]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.norm_f11 > 1e-13)
        .map(|r| (r.t, r.norm_f11.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return None;
    }
    Some(-(n * sxy - sx * sy) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn config(n: usize, dt: f64, t_end: f64, integrator: Integrator) -> SimConfig {
        SimConfig {
            n,
            m: 4 * n,
            dt,
            t_end,
            integrator,
            nu0: 0.0,
            output_every: 1,
            tol_closure: 1e-6,
            tol_resolution: 1e-6,
            constrained: true,
            smallness_threshold: 0.05,
        }
    }

    #[test]
    fn circle_is_a_fixed_point() {
        let state = InterfaceState::circle(8, 1.0, 1.0).unwrap();
        let cfg = config(8, 1e-2, 0.0, Integrator::Rk4);
        let grid = QuadratureGrid::new(cfg.m).unwrap();
        let out = rhs(&state, &cfg, &grid).unwrap();
        assert!(out.phi_dot.max_abs_coeff() < 1e-13);
        assert!(out.theta0_dot.abs() < 1e-13);
        let next = step(&state, &cfg, &grid).unwrap();
        assert!(next.phi.max_abs_coeff() < 1e-13);
        assert!((next.t - 1e-2).abs() < 1e-15);
    }

    #[test]
    fn fd_multiplier_matches_closed_form() {
        // mode 3, gamma = R = 1: the linearized rate is -3/4
        let dir = TrigSeries::real_from_modes(8, &[(3, c(0.5, 0.0))]).unwrap();
        let fd = linearized_rhs_fd(&dir, 1e-6, 8, 32, 1.0, 1.0).unwrap();
        let measured = fd.coeff(3).re / dir.coeff(3).re;
        assert!(
            (measured + 0.75).abs() < 1e-4 * 0.75,
            "multiplier {measured} vs -0.75"
        );
        // off-diagonal leakage stays at the quadratic level
        for k in -8i64..=8 {
            if k.abs() == 3 {
                continue;
            }
            assert!(
                fd.coeff(k).norm() < 1e-4,
                "mode {k} leakage {:e}",
                fd.coeff(k).norm()
            );
        }
    }

    #[test]
    fn fd_mode_one_is_inert() {
        let dir = TrigSeries::real_from_modes(6, &[(1, c(0.5, 0.0))]).unwrap();
        let fd = linearized_rhs_fd(&dir, 1e-6, 6, 32, 1.0, 1.0).unwrap();
        let response = fd.coeff(1).norm() / dir.coeff(1).norm();
        assert!(response < 1e-6, "mode-1 response {response:e}");
    }

    #[test]
    fn fd_rejects_bad_eps() {
        let dir = TrigSeries::real_from_modes(4, &[(2, c(0.5, 0.0))]).unwrap();
        assert!(linearized_rhs_fd(&dir, 1e-2, 4, 16, 1.0, 1.0).is_err());
    }

    #[test]
    fn one_step_matches_exponential_decay() {
        // linear regime: each mode decays by e^{-gamma k dt / (4R)}
        let amp = 1e-6;
        let phi = TrigSeries::real_from_modes(
            8,
            &[(2, c(amp, 0.0)), (3, c(0.5 * amp, 0.0))],
        )
        .unwrap();
        let state = InterfaceState::new(phi, 0.0, 1.0, 1.0, 0.0).unwrap();
        for integrator in [Integrator::Rk4, Integrator::Imex] {
            let cfg = config(8, 1e-3, 0.0, integrator);
            let grid = QuadratureGrid::new(cfg.m).unwrap();
            let next = step(&state, &cfg, &grid).unwrap();
            for k in [2i64, 3] {
                let expect = state.phi.coeff(k).re * (-(k as f64) / 4.0 * cfg.dt).exp();
                let got = next.phi.coeff(k).re;
                assert!(
                    ((got - expect) / expect).abs() < 1e-8,
                    "{integrator:?} mode {k}: {got:e} vs {expect:e}"
                );
            }
        }
    }

    #[test]
    fn rk4_dt_halving_ratio() {
        let phi = TrigSeries::real_from_modes(6, &[(2, c(0.01, 0.0))]).unwrap();
        let init = InterfaceState::new(phi, 0.0, 1.0, 1.0, 0.0).unwrap();
        let run = |dt: f64| -> TrigSeries {
            let cfg = SimConfig {
                output_every: 1000,
                ..config(6, dt, 1.0, Integrator::Rk4)
            };
            simulate(&init, &cfg).unwrap().final_state.phi
        };
        let coarse = run(0.1);
        let mid = run(0.05);
        let fine = run(0.025);
        let w = NormWeight::unweighted();
        let e1 = coarse.sub(&mid).norm_f01(&w);
        let e2 = mid.sub(&fine).norm_f01(&w);
        let ratio = e1 / e2;
        assert!(
            (11.0..21.0).contains(&ratio),
            "dt-halving ratio {ratio} (e1 = {e1:e}, e2 = {e2:e})"
        );
    }

    #[test]
    fn mode_one_stays_zero_along_run() {
        let phi = TrigSeries::real_from_modes(6, &[(2, c(0.008, 0.0))]).unwrap();
        let init = InterfaceState::new(phi, 0.0, 1.0, 1.0, 0.0).unwrap();
        let cfg = config(6, 1e-2, 0.2, Integrator::Rk4);
        let grid = QuadratureGrid::new(cfg.m).unwrap();
        let mut state = init;
        for _ in 0..20 {
            state = step(&state, &cfg, &grid).unwrap();
            assert_eq!(state.phi.coeff(1).norm(), 0.0);
            assert_eq!(state.phi.coeff(-1).norm(), 0.0);
        }
    }

    #[test]
    fn zero_mode_rate_linear_response() {
        let cfg = config(8, 1e-3, 0.0, Integrator::Rk4);
        let grid = QuadratureGrid::new(cfg.m).unwrap();
        let circle = InterfaceState::circle(8, 1.0, 1.0).unwrap();
        assert!(zero_mode_rate(&circle, &cfg, &grid).unwrap().abs() < 1e-13);

        // leading behavior is linear in phi: the zero mode of T1(1+phi_a)
        // is -(2/R) sum_{j>0} Im F(U1)(j)/j at L ~ 2 pi R, which for cosine
        // data at modes 2, 3 of amplitude eps, 0.6 eps evaluates to
        // -(1/3 + (2/3)(9/32) 0.6) eps / R.
        let rate_at = |eps: f64| -> f64 {
            let phi = TrigSeries::real_from_modes(
                8,
                &[(2, c(eps, 0.0)), (3, c(0.6 * eps, 0.0))],
            )
            .unwrap();
            let state = InterfaceState::new(phi, 0.0, 1.0, 1.0, 0.0).unwrap();
            zero_mode_rate(&state, &cfg, &grid).unwrap()
        };
        let r1 = rate_at(1e-3);
        let r2 = rate_at(2e-3);
        let scaling = r2 / r1;
        assert!(
            (scaling - 2.0).abs() < 0.01,
            "zero-mode rate should be linear: ratio {scaling}"
        );
        let expect = -(1.0 / 3.0 + 2.0 / 3.0 * 9.0 / 32.0 * 0.6) * 1e-3;
        assert!(
            ((r1 - expect) / expect).abs() < 1e-2,
            "rate {r1:e} vs closed form {expect:e}"
        );
    }

    #[test]
    fn short_decay_run() {
        let phi = TrigSeries::real_from_modes(8, &[(2, c(0.01, 0.0))]).unwrap();
        let init = InterfaceState::new(phi, 0.0, 1.0, 1.0, 0.0).unwrap();
        let cfg = SimConfig {
            output_every: 20,
            ..config(8, 1e-3, 1.0, Integrator::Rk4)
        };
        let out = simulate(&init, &cfg).unwrap();
        assert!(out.failure.is_none());
        for pair in out.records.windows(2) {
            assert!(pair[1].norm_f11 < pair[0].norm_f11, "norm not decaying");
        }
        for rec in &out.records {
            assert!(rec.volume_residual < 1e-10);
            assert!(rec.closure < 1e-10);
        }
        let rate = fit_decay_rate(&out.records).unwrap();
        assert!(
            (rate - 0.5).abs() < 0.15 * 0.5,
            "fitted rate {rate} vs 0.5"
        );
    }

    #[test]
    fn imex_long_step_stability() {
        // the exponential integrator tolerates dt far above the explicit
        // stability limit in the linear regime
        let phi = TrigSeries::real_from_modes(16, &[(2, c(1e-4, 0.0)), (15, c(1e-5, 0.0))]).unwrap();
        let init = InterfaceState::new(phi, 0.0, 1.0, 1.0, 0.0).unwrap();
        let cfg = SimConfig {
            output_every: 5,
            ..config(16, 0.5, 5.0, Integrator::Imex)
        };
        let out = simulate(&init, &cfg).unwrap();
        assert!(out.failure.is_none());
        let last = out.records.last().unwrap();
        assert!(last.norm_f11 < 1e-4);
    }

    #[test]
    fn smallness_threshold_enforced() {
        let phi = TrigSeries::real_from_modes(6, &[(2, c(0.05, 0.0))]).unwrap();
        let init = InterfaceState::new(phi, 0.0, 1.0, 1.0, 0.0).unwrap();
        let cfg = config(6, 1e-3, 0.1, Integrator::Rk4);
        assert!(matches!(
            simulate(&init, &cfg),
            Err(CoreError::SmallnessViolation { .. })
        ));
    }

    #[test]
    fn constrained_run_rejects_mode_one_data() {
        let phi = TrigSeries::real_from_modes(6, &[(1, c(0.001, 0.0))]).unwrap();
        let init = InterfaceState::new(phi, 0.0, 1.0, 1.0, 0.0).unwrap();
        let cfg = config(6, 1e-3, 0.1, Integrator::Rk4);
        assert!(matches!(
            simulate(&init, &cfg),
            Err(CoreError::ModeOneNonzero { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let mut cfg = config(6, 1e-3, 1.0, Integrator::Rk4);
        cfg.m = 20;
        assert!(cfg.validate().is_err());
        let mut cfg2 = config(1, 1e-3, 1.0, Integrator::Rk4);
        cfg2.n = 1;
        assert!(cfg2.validate().is_err());
        let mut cfg3 = config(6, -1.0, 1.0, Integrator::Rk4);
        cfg3.dt = -1.0;
        assert!(cfg3.validate().is_err());
    }
}
