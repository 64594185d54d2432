//! Interface geometry in the equal-arclength (HLS) frame.
//!
//! The curve is carried as a mean-free tangent-angle perturbation phi, the
//! angle zero mode theta0, and a radius scale R fixed by the enclosed volume
//! V0 = pi R^2. The interface length L(t) is not an independent unknown: it
//! is recovered from phi through the incompressibility identity
//!
//!   (L / 2 pi)^2 = R^2 (1 + D)^-1,
//!   D = (1/2 pi) Im Int_{-pi}^{pi} Int_0^alpha e^{i(alpha-eta)}
//!         (e^{i(phi(alpha)-phi(eta))} - 1) d eta d alpha,
//!
//! which this module evaluates in coefficient space (the inner integral is
//! antidifferentiated exactly, so the result is spectrally accurate).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{CoreError, Result};
use crate::series::{analyze, grid_alphas, NormWeight, TrigSeries};

/// Full dynamical state of the interface.
#[derive(Debug, Clone)]
pub struct InterfaceState {
    /// Mean-free tangent-angle perturbation theta - theta_hat(0); real.
    pub phi: TrigSeries,
    /// Zero mode of the tangent angle, radians.
    pub theta0: f64,
    /// Radius scale from the conserved volume V0 = pi R^2.
    pub r: f64,
    /// Surface tension coefficient.
    pub gamma: f64,
    /// Time.
    pub t: f64,
}

impl InterfaceState {
    pub fn new(phi: TrigSeries, theta0: f64, r: f64, gamma: f64, t: f64) -> Result<Self> {
        if !phi.is_real() {
            return Err(CoreError::InvalidParameter {
                what: "phi must be a real series".into(),
            });
        }
        let mean = phi.coeff(0).norm();
        if mean != 0.0 {
            return Err(CoreError::NonzeroMean { magnitude: mean });
        }
        if !(r > 0.0) {
            return Err(CoreError::InvalidParameter {
                what: format!("radius scale must be positive, got {r}"),
            });
        }
        if !(gamma > 0.0) {
            return Err(CoreError::InvalidParameter {
                what: format!("surface tension must be positive, got {gamma}"),
            });
        }
        if t < 0.0 {
            return Err(CoreError::NegativeTime { t });
        }
        Ok(Self { phi, theta0, r, gamma, t })
    }

    /// Circle of radius r (phi = 0) with band limit n.
    pub fn circle(n: usize, r: f64, gamma: f64) -> Result<Self> {
        Self::new(TrigSeries::zero(n), 0.0, r, gamma, 0.0)
    }

    /// Full tangent angle theta = theta0 + phi.
    pub fn theta(&self) -> TrigSeries {
        self.phi.shift_mean(self.theta0)
    }

    /// Interface length derived from volume conservation.
    pub fn length(&self) -> Result<f64> {
        length_from_phi(&self.phi, self.r)
    }

    /// The mode +-1 constraint of the Galerkin-restricted evolution space.
    pub fn check_mode_one_free(&self) -> Result<()> {
        let magnitude = self.phi.coeff(1).norm().max(self.phi.coeff(-1).norm());
        if magnitude != 0.0 {
            return Err(CoreError::ModeOneNonzero { magnitude });
        }
        Ok(())
    }
}

/// Sampled physical curve positions.
#[derive(Debug, Clone)]
pub struct CurveSamples {
    pub m: usize,
    pub z: Vec<Complex64>,
    pub base_point: Complex64,
    /// |zero mode of z_alpha|; nonzero means the tangent field does not
    /// close up over one period.
    pub closure_residual: f64,
}

impl CurveSamples {
    /// CSV rows "alpha,x,y" for plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,x,y\n");
        for (a, z) in grid_alphas(self.m).iter().zip(self.z.iter()) {
            out.push_str(&format!("{:.12e},{:.12e},{:.12e}\n", a, z.re, z.im));
        }
        out
    }
}

/// Grid size used for the length integral: m = max(64, 4N).
fn length_grid(n: usize) -> usize {
    (4 * n).max(64)
}

/// Samples of e^{i(alpha + phi(alpha))} on the uniform m-grid.
fn tangent_phase_samples(phi: &TrigSeries, m: usize) -> Result<Vec<Complex64>> {
    let phi_samples = phi.synthesize_real(m)?;
    Ok(grid_alphas(m)
        .iter()
        .zip(phi_samples.iter())
        .map(|(&a, &p)| Complex64::from_polar(1.0, a + p))
        .collect())
}

/// The double-integral defect D in (L/2pi)^2 = R^2/(1+D).
///
/// With E(alpha) = e^{i(alpha+phi(alpha))} and P the antiderivative of
/// conj(E) (linear part kept explicit), the inner eta-integral reduces to
/// E(alpha) (P(alpha) - P(0)) - e^{i alpha} (Q(alpha) - Q(0)), and every
/// remaining alpha-integral is a closed form in the coefficients of E.
fn length_defect(phi: &TrigSeries) -> Result<f64> {
    let m = length_grid(phi.n());
    let n_e = m / 2 - 1;
    let e_plus = analyze(&tangent_phase_samples(phi, m)?, n_e)?;
    // conj(E) has coefficients conj(c(-k))
    let e_minus_coeff = |k: i64| e_plus.coeff(-k).conj();

    // term A: Eminus(0) * Int alpha E(alpha) d alpha,
    // with Int alpha e^{i j alpha} d alpha = 2 pi (-1)^j / (i j) for j != 0.
    let mut term_a = Complex64::new(0.0, 0.0);
    for j in 1..=n_e as i64 {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let ij = Complex64::new(0.0, j as f64);
        let weight = 2.0 * PI * sign;
        term_a += e_plus.coeff(j) * weight / ij;
        term_a += e_plus.coeff(-j) * weight / (-ij);
    }
    term_a *= e_minus_coeff(0);

    // term B: sum_{k != 0} Eminus(k)/(i k) * 2 pi (Eplus(-k) - Eplus(0))
    let mut term_b = Complex64::new(0.0, 0.0);
    for k in 1..=n_e as i64 {
        let ik = Complex64::new(0.0, k as f64);
        term_b += e_minus_coeff(k) / ik * 2.0 * PI * (e_plus.coeff(-k) - e_plus.coeff(0));
        term_b += e_minus_coeff(-k) / (-ik) * 2.0 * PI * (e_plus.coeff(k) - e_plus.coeff(0));
    }

    // The phi-independent part Int e^{i alpha}(Q(alpha)-Q(0)) d alpha = 2 pi i
    Ok((term_a + term_b).im / (2.0 * PI) - 1.0)
}

/// Interface length L = 2 pi R (1 + D)^{-1/2}.
pub fn length_from_phi(phi: &TrigSeries, r: f64) -> Result<f64> {
    let d = length_defect(phi)?;
    let denominator = 1.0 + d;
    if denominator <= 0.0 {
        return Err(CoreError::VolumeDegeneracy { denominator });
    }
    Ok(2.0 * PI * r / denominator.sqrt())
}

/// Reconstruct curve positions by spectral antidifferentiation of
/// z_alpha = (L/2pi) e^{i(alpha+theta)}. The zero mode of z_alpha is the
/// closure residual; it is reported, not integrated.
pub fn reconstruct_curve(
    state: &InterfaceState,
    base_point: Complex64,
    m: usize,
) -> Result<CurveSamples> {
    if m < 2 * state.phi.n() + 2 {
        return Err(CoreError::Aliasing {
            needed: 2 * state.phi.n() + 2,
            got: m,
        });
    }
    let l = state.length()?;
    let scale = l / (2.0 * PI);
    let phase = tangent_phase_samples(&state.phi, m)?;
    let rot = Complex64::from_polar(1.0, state.theta0);
    let z_alpha: Vec<Complex64> = phase.iter().map(|p| p * rot * scale).collect();
    let n_z = m / 2 - 1;
    let za_hat = analyze(&z_alpha, n_z)?;
    let closure_residual = za_hat.coeff(0).norm();

    // antiderivative A with mode k = za_hat(k)/(i k); anchor z(0) = base
    let mut anti = vec![Complex64::new(0.0, 0.0); 2 * n_z + 1];
    for k in 1..=n_z as i64 {
        let ik = Complex64::new(0.0, k as f64);
        anti[(k + n_z as i64) as usize] = za_hat.coeff(k) / ik;
        anti[(-k + n_z as i64) as usize] = za_hat.coeff(-k) / (-ik);
    }
    let a_series = TrigSeries::new(n_z, anti, false)?;
    let a_samples = a_series.synthesize(m)?;
    let a_zero: Complex64 = {
        // A(0) = sum_k a(k)
        let mut acc = Complex64::new(0.0, 0.0);
        for k in -(n_z as i64)..=n_z as i64 {
            acc += a_series.coeff(k);
        }
        acc
    };
    let z = a_samples
        .iter()
        .map(|a| base_point + (a - a_zero))
        .collect();
    Ok(CurveSamples {
        m,
        z,
        base_point,
        closure_residual,
    })
}

/// Enclosed volume (area) V = (1/2) Im Int conj(z) z_alpha d alpha, evaluated
/// as pi sum_k k |z_hat(k)|^2.
pub fn volume(curve: &CurveSamples, closure_tol: f64) -> Result<f64> {
    if curve.closure_residual > closure_tol {
        return Err(CoreError::OpenCurve {
            residual: curve.closure_residual,
            tol: closure_tol,
        });
    }
    let n_z = curve.m / 2 - 1;
    let z_hat = analyze(&curve.z, n_z)?;
    let mut acc = crate::series::Compensated::default();
    for k in 1..=n_z as i64 {
        acc.add(k as f64 * z_hat.coeff(k).norm_sqr());
        acc.add(-(k as f64) * z_hat.coeff(-k).norm_sqr());
    }
    let v = PI * acc.value();
    if v <= 0.0 {
        return Err(CoreError::Orientation { volume: v });
    }
    Ok(v)
}

/// Signed curvature kappa = (2 pi / L)(1 + phi_alpha) as a real series.
pub fn curvature(state: &InterfaceState) -> Result<TrigSeries> {
    let l = state.length()?;
    let kappa = state
        .phi
        .derivative()
        .shift_mean(1.0)
        .scale(2.0 * PI / l);
    Ok(kappa)
}

/// |(1/2pi) Int e^{i(alpha+theta)} d alpha|: the closing defect of the
/// tangent field, equal to the magnitude of mode -1 of e^{i phi}.
pub fn closure_residual(state: &InterfaceState) -> Result<f64> {
    let m = length_grid(state.phi.n());
    let phase = tangent_phase_samples(&state.phi, m)?;
    let hat = analyze(&phase, 1)?;
    Ok(hat.coeff(0).norm())
}

/// A state is a circle when the homogeneous Wiener norm of phi vanishes.
pub fn is_circle(state: &InterfaceState, tol: f64) -> bool {
    state.phi.norm_fs1(1.0, &NormWeight::unweighted()) <= tol
}

/// Two-sided bounds on (L/2piR)^2 in terms of x = ||phi||_{F^{0,1}}:
/// 1/(1 + (pi/2)(e^{2x}-1)) <= (L/2piR)^2 <= 1/(1 - (pi/2)(e^{2x}-1)).
/// The upper bound requires (pi/2)(e^{2x}-1) < 1.
pub fn length_ratio_bounds(x: f64) -> Result<(f64, f64)> {
    if x < 0.0 {
        return Err(CoreError::Domain {
            what: format!("norm must be nonnegative, got {x}"),
        });
    }
    let u = (PI / 2.0) * ((2.0 * x).exp() - 1.0);
    if u >= 1.0 {
        return Err(CoreError::Domain {
            what: format!("(pi/2)(e^{{2x}}-1) = {u} >= 1; bounds void"),
        });
    }
    Ok((1.0 / (1.0 + u), 1.0 / (1.0 - u)))
}

/// Bound |2 pi R / L - 1| <= 1 - sqrt(1 - (pi/2)(e^{2x}-1)).
pub fn radius_length_deviation_bound(x: f64) -> Result<f64> {
    let u = (PI / 2.0) * ((2.0 * x).exp() - 1.0);
    if !(0.0..1.0).contains(&u) {
        return Err(CoreError::Domain {
            what: format!("(pi/2)(e^{{2x}}-1) = {u} outside [0, 1)"),
        });
    }
    Ok(1.0 - (1.0 - u).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mode2_state(amp: f64) -> InterfaceState {
        let phi = TrigSeries::real_from_modes(8, &[(2, c(amp, 0.0))]).unwrap();
        InterfaceState::new(phi, 0.0, 1.0, 1.0, 0.0).unwrap()
    }

    /// Independent oracle: polygon (shoelace) area of the reconstructed
    /// curve, Richardson-extrapolated to kill the O(h^2) inscribed-polygon
    /// bias.
    fn shoelace_volume(state: &InterfaceState) -> f64 {
        let poly = |m: usize| -> f64 {
            let curve = reconstruct_curve(state, c(0.0, 0.0), m).unwrap();
            let mut acc = 0.0;
            for j in 0..m {
                let a = curve.z[j];
                let b = curve.z[(j + 1) % m];
                acc += a.re * b.im - b.re * a.im;
            }
            acc / 2.0
        };
        let coarse = poly(8192);
        let fine = poly(16384);
        (4.0 * fine - coarse) / 3.0
    }

    #[test]
    fn circle_length_exact() {
        let state = InterfaceState::circle(8, 1.0, 1.0).unwrap();
        let l = state.length().unwrap();
        assert!((l - 2.0 * PI).abs() < 1e-14);
        let state2 = InterfaceState::circle(8, 2.5, 1.0).unwrap();
        assert!((state2.length().unwrap() - 5.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn length_matches_shoelace_oracle() {
        let state = mode2_state(0.01);
        let l = state.length().unwrap();
        let v = shoelace_volume(&state);
        // solve pi R^2 = V for the oracle length: L_or = L * sqrt(pi R^2 / V)
        let l_oracle = l * (PI * state.r * state.r / v).sqrt();
        assert!(
            ((l - l_oracle) / l).abs() < 1e-10,
            "l = {l}, oracle = {l_oracle}"
        );
    }

    #[test]
    fn length_within_wiener_bounds() {
        for amp in [0.002, 0.01, 0.025] {
            let state = mode2_state(amp);
            let l = state.length().unwrap();
            let x = state.phi.norm_f01(&NormWeight::unweighted());
            let (lo, hi) = length_ratio_bounds(x).unwrap();
            let ratio = (l / (2.0 * PI * state.r)).powi(2);
            assert!(ratio >= lo && ratio <= hi, "ratio {ratio} outside [{lo}, {hi}]");
            let dev = (2.0 * PI * state.r / l - 1.0).abs();
            assert!(dev <= radius_length_deviation_bound(x).unwrap());
        }
    }

    #[test]
    fn unit_circle_curve_and_volume() {
        let state = InterfaceState::circle(8, 1.0, 1.0).unwrap();
        let curve = reconstruct_curve(&state, c(0.0, 0.0), 64).unwrap();
        // z(alpha) = base + i(1 - e^{i alpha})
        for (j, &z) in curve.z.iter().enumerate() {
            let alpha = -PI + 2.0 * PI * j as f64 / 64.0;
            let expect = c(0.0, 1.0) * (1.0 - Complex64::from_polar(1.0, alpha));
            assert!((z - expect).norm() < 1e-13);
        }
        let v = volume(&curve, 1e-10).unwrap();
        assert!((v - PI).abs() < 1e-12);
    }

    #[test]
    fn radius_two_circle_volume() {
        let state = InterfaceState::circle(4, 2.0, 1.0).unwrap();
        let curve = reconstruct_curve(&state, c(0.3, -0.2), 64).unwrap();
        let v = volume(&curve, 1e-10).unwrap();
        assert!((v - 4.0 * PI).abs() < 1e-11);
    }

    #[test]
    fn perturbed_state_conserves_volume() {
        let state = mode2_state(0.01);
        let curve = reconstruct_curve(&state, c(0.0, 0.0), 256).unwrap();
        let v = volume(&curve, 1e-8).unwrap();
        assert!(((v - PI) / PI).abs() < 1e-10, "volume residual {}", (v - PI) / PI);
    }

    #[test]
    fn curvature_circle() {
        let state = InterfaceState::circle(4, 1.0, 1.0).unwrap();
        let kappa = curvature(&state).unwrap();
        assert!((kappa.coeff(0).re - 1.0).abs() < 1e-14);
        assert_eq!(kappa.coeff(1).norm(), 0.0);
        let state2 = InterfaceState::circle(4, 2.0, 1.0).unwrap();
        let kappa2 = curvature(&state2).unwrap();
        assert!((kappa2.coeff(0).re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn total_turning_is_one() {
        // mean of kappa * (L / 2 pi) over the period = 1 for any state
        let state = mode2_state(0.02);
        let l = state.length().unwrap();
        let kappa = curvature(&state).unwrap();
        let mean = kappa.coeff(0).re * l / (2.0 * PI);
        assert!((mean - 1.0).abs() < 1e-13);
    }

    #[test]
    fn closure_residual_zero_on_circle() {
        let state = InterfaceState::circle(8, 1.0, 1.0).unwrap();
        assert!(closure_residual(&state).unwrap() < 1e-15);
    }

    #[test]
    fn closure_residual_quadratic_when_mode_one_free() {
        // with modes 2 and 3 the leading closing defect is O(||phi||^2)
        let phi = TrigSeries::real_from_modes(8, &[(2, c(0.01, 0.0)), (3, c(0.005, 0.0))]).unwrap();
        let state = InterfaceState::new(phi, 0.0, 1.0, 1.0, 0.0).unwrap();
        let res = closure_residual(&state).unwrap();
        // linearization oracle: first-order term |i phi_hat(-1)| = 0
        assert!(res < 5e-4, "residual {res} should be O(phi^2)");
        assert!(res > 0.0);
    }

    #[test]
    fn closure_residual_linear_in_mode_one() {
        let phi = TrigSeries::real_from_modes(4, &[(1, c(0.1, 0.0))]).unwrap();
        let state = InterfaceState::new(phi, 0.0, 1.0, 1.0, 0.0).unwrap();
        let res = closure_residual(&state).unwrap();
        // linearization oracle: (1/2pi) Int e^{i alpha} i phi d alpha = i phi_hat(-1)
        let first_order = 0.1;
        assert!((res - first_order).abs() < 0.02, "residual {res}");
    }

    #[test]
    fn is_circle_detection() {
        let state = InterfaceState::circle(8, 1.0, 1.0).unwrap();
        assert!(is_circle(&state, 1e-6));
        let perturbed = mode2_state(0.01);
        assert!(!is_circle(&perturbed, 1e-6));
    }

    #[test]
    fn theta0_shift_is_isometry() {
        let state = mode2_state(0.02);
        let mut rotated = state.clone();
        rotated.theta0 = 0.7;
        let base = c(0.1, 0.4);
        let curve = reconstruct_curve(&state, base, 128).unwrap();
        let curve_rot = reconstruct_curve(&rotated, base, 128).unwrap();
        for j in 0..128 {
            let d = (curve.z[j] - base).norm();
            let d_rot = (curve_rot.z[j] - base).norm();
            assert!((d - d_rot).abs() < 1e-12);
        }
    }

    #[test]
    fn reconstructed_curve_is_simple() {
        // winding / self-intersection oracle: brute-force segment crossing
        let state = mode2_state(0.03);
        let curve = reconstruct_curve(&state, c(0.0, 0.0), 128).unwrap();
        let m = curve.m;
        let cross = |o: Complex64, a: Complex64, b: Complex64| -> f64 {
            (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
        };
        for i in 0..m {
            let (a1, a2) = (curve.z[i], curve.z[(i + 1) % m]);
            for j in i + 2..m {
                if i == 0 && j == m - 1 {
                    continue; // adjacent around the wrap
                }
                let (b1, b2) = (curve.z[j], curve.z[(j + 1) % m]);
                let d1 = cross(a1, a2, b1) * cross(a1, a2, b2);
                let d2 = cross(b1, b2, a1) * cross(b1, b2, a2);
                assert!(
                    !(d1 < 0.0 && d2 < 0.0),
                    "segments {i} and {j} intersect"
                );
            }
        }
        let v = volume(&curve, 1e-8).unwrap();
        assert!(v > 0.0);
    }

    #[test]
    fn volume_rejects_open_curve() {
        let state = mode2_state(0.01);
        let mut curve = reconstruct_curve(&state, c(0.0, 0.0), 64).unwrap();
        curve.closure_residual = 1.0;
        assert!(matches!(
            volume(&curve, 1e-6),
            Err(CoreError::OpenCurve { .. })
        ));
    }

    #[test]
    fn state_validation() {
        let bad_mean = TrigSeries::real_from_modes(4, &[(0, c(0.1, 0.0))]).unwrap();
        assert!(matches!(
            InterfaceState::new(bad_mean, 0.0, 1.0, 1.0, 0.0),
            Err(CoreError::NonzeroMean { .. })
        ));
        let phi = TrigSeries::zero(4);
        assert!(InterfaceState::new(phi.clone(), 0.0, -1.0, 1.0, 0.0).is_err());
        assert!(InterfaceState::new(phi.clone(), 0.0, 1.0, 0.0, 0.0).is_err());
        assert!(InterfaceState::new(phi, 0.0, 1.0, 1.0, -0.5).is_err());
    }

    #[test]
    fn mode_one_constraint_check() {
        let phi = TrigSeries::real_from_modes(4, &[(1, c(0.01, 0.0))]).unwrap();
        let state = InterfaceState::new(phi, 0.0, 1.0, 1.0, 0.0).unwrap();
        assert!(state.check_mode_one_free().is_err());
        assert!(mode2_state(0.01).check_mode_one_free().is_ok());
    }

    #[test]
    fn isoperimetric_inequality() {
        for amp in [0.0, 0.01, 0.03] {
            let state = mode2_state(amp);
            let l = state.length().unwrap();
            let curve = reconstruct_curve(&state, c(0.0, 0.0), 256).unwrap();
            let v = volume(&curve, 1e-8).unwrap();
            assert!(l * l - 4.0 * PI * v >= -1e-10);
        }
    }
}
