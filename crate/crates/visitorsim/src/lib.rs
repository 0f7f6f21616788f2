//! File formats, exporters and the command-line front end for
//! `visitorsim-core`.
//!
//! Inputs are six PNG layers plus a flat config file (see [`config`]).
//! Outputs are a grayscale density PNG, a density CSV, a convergence log,
//! a JSON run report and, on request, per-tick frames and a trace.

pub mod cli;
pub mod config;
pub mod layers;
pub mod output;
pub mod sinks;
pub mod synthetic;

use std::path::Path;

pub use visitorsim_core as core;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: cannot decode image: {message}")]
    Image { path: String, message: String },
    #[error(transparent)]
    Floorplan(#[from] visitorsim_core::FloorplanError),
    #[error(transparent)]
    Plan(#[from] visitorsim_core::planner::PlanError),
    #[error("{0}")]
    Invariant(String),
}

impl Error {
    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    /// Process exit status: 2 for invariant violations, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 2,
            _ => 1,
        }
    }
}

impl From<visitorsim_core::engine::RunError> for Error {
    fn from(e: visitorsim_core::engine::RunError) -> Self {
        use visitorsim_core::engine::RunError;
        match e {
            RunError::Config(c) => Error::Config(c.to_string()),
            RunError::Invariant { .. } => Error::Invariant(e.to_string()),
        }
    }
}
