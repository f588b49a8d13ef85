//! Batch front end for structured state-feedback synthesis.
//!
//! Problems and reports are JSON documents (schema version 1). Exit codes:
//! `0` success, `1` input or usage error, `2` no certified gain.

pub mod commands;
pub mod problem;
pub mod report;

use thiserror::Error;

pub use commands::{run_structure, run_synthesize, run_verify, Overrides};
pub use problem::{load_problem, MethodChoice, Problem, ProblemFile, StructureSpec};
pub use report::{MethodResult, ReportFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] structlmi::Error),
}
