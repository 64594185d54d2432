//! Spectral boundary-integral solver for a two-dimensional fluid bubble in
//! ambient Stokes flow driven by surface tension.
//!
//! The interface is carried in the Hou-Lowengrub-Shelley equal-arclength
//! frame: a tangent angle theta(alpha, t) and a length L(t), with the
//! mean-free perturbation phi = theta - theta_hat(0) as the dynamical
//! variable. The interfacial velocity comes from the single-layer Stokeslet
//! potential, evaluated with spectral quadrature (Kress weights for the
//! logarithmic kernel). A Galerkin-truncated evolution with a hard mode
//! cutoff advances phi in time; closed-form Fourier multipliers of the
//! linearized operator double as verification oracles.

pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod multipliers;
pub mod quad;
pub mod series;
pub mod velocity;
pub mod verify;

pub use dynamics::{DiagnosticsRecord, Integrator, SimConfig, SimOutcome};
pub use error::{CoreError, Result};
pub use geometry::{CurveSamples, InterfaceState};
pub use series::{
    analyze, analyze_at, analyze_real, grid_alphas, nu_of_t, NormWeight, SeriesData, TrigSeries,
};
pub use velocity::{QuadratureGrid, VelocityField};

