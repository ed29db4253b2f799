//! Command-line front end: model files, reports, CSV data and the
//! `bnspect` subcommands.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid flags or malformed input,
//! 3 counterexample found by `verify`.

pub mod cli;
pub mod commands;
pub mod data;
pub mod model;
pub mod report;

pub use commands::{CliError, EXIT_COUNTEREXAMPLE, EXIT_IO, EXIT_OK, EXIT_USAGE};
pub use model::{model_digest, parse_model, serialize_model, ModelFile, ModelFileError};
pub use report::{analyze_model, AnalysisReport};
