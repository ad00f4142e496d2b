//! Experiment plumbing: trial runner, sweeps, output rows, scaling fit and
//! the command-line interface.

pub mod cli;
pub mod fit;
pub mod row;
pub mod runner;
pub mod suites;

pub use fit::{fit_capture_scaling, FitError, ScalingFit};
pub use row::{write_csv, write_json, ExperimentRow};
pub use runner::{run_sweep, run_trial, CopKind, RobberKind, StartKind, TrialResult, TrialSpec};
