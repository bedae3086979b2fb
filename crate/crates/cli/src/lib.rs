//! Command-line front end for the `oscar-core` library.

pub mod cli;
pub mod commands;
pub mod error;
pub mod io;
pub mod results;

pub use cli::Cli;
pub use commands::run;
pub use error::{CliError, CliResult, EXIT_NOT_CONVERGED, EXIT_OK, EXIT_USAGE};
