//! Manifest handling and command implementations for the stokes-bubble CLI.
//!
//! Exit code contract: 0 success, 1 verification failure, 2 configuration
//! error, 3 numerical failure (partial output is still written).

pub mod commands;
pub mod manifest;

pub use commands::{cmd_simulate, cmd_verify, VerifySuite};
pub use manifest::{load_manifest, write_series, InitialSpec, RunManifest};
