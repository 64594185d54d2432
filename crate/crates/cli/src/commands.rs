//! The `simulate` and `verify` entry points.

use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use stokes_bubble_core::dynamics::{self, DiagnosticsRecord};
use stokes_bubble_core::geometry;
use stokes_bubble_core::verify;
use stokes_bubble_core::InterfaceState;

use crate::manifest::RunManifest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifySuite {
    Multiplier,
    Kernels,
    Norms,
    Geometry,
}

impl VerifySuite {
    pub fn name(&self) -> &'static str {
        match self {
            VerifySuite::Multiplier => "multiplier",
            VerifySuite::Kernels => "kernels",
            VerifySuite::Norms => "norms",
            VerifySuite::Geometry => "geometry",
        }
    }
}

#[derive(Serialize)]
struct Summary {
    fitted_rate: Option<f64>,
    final_norm_f11: f64,
    final_is_circle_tol: f64,
    final_is_circle: bool,
    monotone_norm_f11: bool,
    max_volume_residual: f64,
    max_closure_residual: f64,
    closure_bound: f64,
    length_bounds_ok: bool,
    isoperimetric_deficit_nonincreasing: bool,
    theta0_final: f64,
    records: usize,
    elapsed_seconds: f64,
    failure: Option<String>,
    pass: bool,
}

fn trajectory_summary(
    manifest: &RunManifest,
    state: &InterfaceState,
    records: &[DiagnosticsRecord],
    failure: Option<String>,
    elapsed: f64,
) -> Summary {
    let fitted_rate = dynamics::fit_decay_rate(records);
    let last = records.last();
    let final_norm = last.map(|r| r.norm_f11).unwrap_or(f64::NAN);
    let monotone = records
        .windows(2)
        .all(|w| w[1].norm_f11 <= w[0].norm_f11 * (1.0 + 1e-9) + 1e-15);
    let max_volume_residual = records
        .iter()
        .map(|r| r.volume_residual)
        .fold(0.0, f64::max);
    let max_closure = records.iter().map(|r| r.closure).fold(0.0, f64::max);
    let closure_bound = records
        .first()
        .map(|r| r.closure.max(manifest.config.tol_closure))
        .unwrap_or(manifest.config.tol_closure);
    // Prop-style two-sided length bounds; ||phi||_{F01} <= ||phi||_{F11}
    // for mean-free series, so the homogeneous norm certifies them
    let length_bounds_ok = records.iter().all(|r| {
        match geometry::length_ratio_bounds(r.norm_f11) {
            Ok((lo, hi)) => {
                let ratio = (r.l / (2.0 * std::f64::consts::PI * state.r)).powi(2);
                ratio >= lo - 1e-12 && ratio <= hi + 1e-12
            }
            Err(_) => false,
        }
    });
    let v0 = std::f64::consts::PI * state.r * state.r;
    let deficits: Vec<f64> = records
        .iter()
        .map(|r| r.l * r.l - 4.0 * std::f64::consts::PI * v0)
        .collect();
    let deficit_slack = 1e-12 * deficits.first().map(|d| d.max(1.0)).unwrap_or(1.0);
    let deficit_monotone = deficits.windows(2).all(|w| w[1] <= w[0] + deficit_slack);
    let is_circle_tol = 1e-6;
    let final_is_circle = geometry::is_circle(state, is_circle_tol);
    let pass = failure.is_none()
        && monotone
        && max_volume_residual <= 1e-8
        && max_closure <= closure_bound
        && length_bounds_ok
        && deficit_monotone;
    Summary {
        fitted_rate,
        final_norm_f11: final_norm,
        final_is_circle_tol: is_circle_tol,
        final_is_circle,
        monotone_norm_f11: monotone,
        max_volume_residual,
        max_closure_residual: max_closure,
        closure_bound,
        length_bounds_ok,
        isoperimetric_deficit_nonincreasing: deficit_monotone,
        theta0_final: state.theta0,
        records: records.len(),
        elapsed_seconds: elapsed,
        failure,
        pass,
    }
}

#[derive(Serialize)]
struct FinalState {
    phi: stokes_bubble_core::SeriesData,
    theta0: f64,
    r: f64,
    gamma: f64,
    t: f64,
}

fn write_outputs(
    dir: &Path,
    records: &[DiagnosticsRecord],
    state: &InterfaceState,
    summary: &Summary,
) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let mut csv = String::from(DiagnosticsRecord::CSV_HEADER);
    csv.push('\n');
    for r in records {
        csv.push_str(&r.to_csv_row());
        csv.push('\n');
    }
    fs::write(dir.join("diagnostics.csv"), csv).map_err(|e| e.to_string())?;
    let final_state = FinalState {
        phi: state.phi.to_data(),
        theta0: state.theta0,
        r: state.r,
        gamma: state.gamma,
        t: state.t,
    };
    fs::write(
        dir.join("final_state.json"),
        serde_json::to_string_pretty(&final_state).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    fs::write(
        dir.join("summary.json"),
        serde_json::to_string_pretty(summary).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    Ok(())
}

/// Run a simulation from a manifest file. Returns the process exit code.
pub fn cmd_simulate(config_path: &Path, out_override: Option<PathBuf>) -> i32 {
    let manifest = match crate::manifest::load_manifest(config_path) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("config error: {e}");
            return EXIT_CONFIG;
        }
    };
    let init = match manifest.initial_state() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("config error: {e}");
            return EXIT_CONFIG;
        }
    };
    let out_dir = out_override.unwrap_or_else(|| PathBuf::from(&manifest.output_dir));
    let start = Instant::now();
    let outcome = match dynamics::simulate(&init, &manifest.config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("config error: {e}");
            return EXIT_CONFIG;
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    let failed = outcome.failure.is_some();
    let summary = trajectory_summary(
        &manifest,
        &outcome.final_state,
        &outcome.records,
        outcome.failure.clone(),
        elapsed,
    );
    if let Err(e) = write_outputs(&out_dir, &outcome.records, &outcome.final_state, &summary) {
        eprintln!("output error: {e}");
        return EXIT_NUMERICAL;
    }
    if failed {
        eprintln!(
            "numerical failure: {}",
            outcome.failure.as_deref().unwrap_or("unknown")
        );
        return EXIT_NUMERICAL;
    }
    println!(
        "simulate: {} records to {}; fitted rate {:?}",
        summary.records,
        out_dir.display(),
        summary.fitted_rate
    );
    EXIT_OK
}

/// Run one verification suite, write its JSON report, and return the exit
/// code (0 pass, 1 any failing row).
pub fn cmd_verify(suite: VerifySuite, seed: u64, kmax: usize) -> i32 {
    let report_path = PathBuf::from(format!("{}_report.json", suite.name()));
    let (json, pass) = match suite {
        VerifySuite::Multiplier => match verify::verify_linearization(kmax, 1.0, 1.0) {
            Ok(rows) => {
                let pass = verify::linearization_pass(&rows, 1e-8, 1e-4);
                (serde_json::to_string_pretty(&rows).unwrap(), pass)
            }
            Err(e) => {
                eprintln!("verification error: {e}");
                return EXIT_VERIFY_FAIL;
            }
        },
        VerifySuite::Kernels => match verify::verify_kernels(seed, kmax) {
            Ok(rows) => {
                let pass = verify::all_pass(&rows);
                (serde_json::to_string_pretty(&rows).unwrap(), pass)
            }
            Err(e) => {
                eprintln!("verification error: {e}");
                return EXIT_VERIFY_FAIL;
            }
        },
        VerifySuite::Norms => match verify::verify_norms(seed) {
            Ok(rows) => {
                let pass = verify::all_pass(&rows);
                (serde_json::to_string_pretty(&rows).unwrap(), pass)
            }
            Err(e) => {
                eprintln!("verification error: {e}");
                return EXIT_VERIFY_FAIL;
            }
        },
        VerifySuite::Geometry => match verify::verify_geometry(seed) {
            Ok(rows) => {
                let pass = verify::all_pass(&rows);
                (serde_json::to_string_pretty(&rows).unwrap(), pass)
            }
            Err(e) => {
                eprintln!("verification error: {e}");
                return EXIT_VERIFY_FAIL;
            }
        },
    };
    if let Err(e) = fs::write(&report_path, &json) {
        eprintln!("cannot write {}: {e}", report_path.display());
        return EXIT_VERIFY_FAIL;
    }
    println!(
        "verify {}: report at {} ({})",
        suite.name(),
        report_path.display(),
        if pass { "pass" } else { "FAIL" }
    );
    if pass {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAIL
    }
}

