//! Run manifests: simulation config, initial data (explicit coefficients or
//! a named preset), seed, and output directory.

use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

use stokes_bubble_core::{InterfaceState, SeriesData, SimConfig, TrigSeries};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub config: SimConfig,
    pub initial: InitialSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
}

fn default_output_dir() -> String {
    "out".into()
}

/// Initial interface: a named preset or explicit coefficients with the
/// physical parameters spelled out.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialSpec {
    Preset { preset: String },
    Explicit {
        series: SeriesData,
        r: f64,
        gamma: f64,
        #[serde(default)]
        theta0: f64,
    },
}

/// Built-in initial conditions; acceptance runs need no external files.
pub fn preset_series(name: &str, n: usize) -> Option<TrigSeries> {
    use num_complex::Complex64;
    let modes: &[(usize, f64)] = match name {
        "circle" => &[],
        "mode2_small" => &[(2, 0.01)],
        "mode3_small" => &[(3, 0.01)],
        "multi_mode" => &[(2, 0.008), (3, 0.004)],
        _ => return None,
    };
    let pairs: Vec<(usize, Complex64)> = modes
        .iter()
        .map(|&(k, a)| (k, Complex64::new(a, 0.0)))
        .collect();
    TrigSeries::real_from_modes(n, &pairs).ok()
}

impl RunManifest {
    /// Construct the initial state, validating the constraint structure.
    pub fn initial_state(&self) -> Result<InterfaceState, String> {
        let state = match &self.initial {
            InitialSpec::Preset { preset } => {
                let phi = preset_series(preset, self.config.n)
                    .ok_or_else(|| format!("unknown preset \"{preset}\""))?;
                InterfaceState::new(phi, 0.0, 1.0, 1.0, 0.0).map_err(|e| e.to_string())?
            }
            InitialSpec::Explicit { series, r, gamma, theta0 } => {
                if !(*r > 0.0) {
                    return Err(format!("radius scale must be positive, got {r}"));
                }
                if !(*gamma > 0.0) {
                    return Err(format!("surface tension must be positive, got {gamma}"));
                }
                let phi =
                    TrigSeries::from_data(series, true).map_err(|e| e.to_string())?;
                if phi.coeff(0).norm() != 0.0 {
                    return Err("initial series must be mean-free".into());
                }
                InterfaceState::new(phi.with_band(self.config.n), *theta0, *r, *gamma, 0.0)
                    .map_err(|e| e.to_string())?
            }
        };
        if self.config.constrained {
            state.check_mode_one_free().map_err(|e| e.to_string())?;
        }
        Ok(state)
    }
}

pub fn load_manifest(path: &Path) -> Result<RunManifest, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let manifest: RunManifest = serde_json::from_str(&text)
        .map_err(|e| format!("invalid manifest {}: {e}", path.display()))?;
    manifest.config.validate().map_err(|e| e.to_string())?;
    Ok(manifest)
}

pub fn write_series(path: &Path, series: &TrigSeries) -> Result<(), String> {
    let json = serde_json::to_string_pretty(&series.to_data())
        .map_err(|e| e.to_string())?;
    fs::write(path, json).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

pub fn load_series(path: &Path, real_flag: bool) -> Result<TrigSeries, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let data: SeriesData = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    TrigSeries::from_data(&data, real_flag).map_err(|e| e.to_string())
}
