//! File formats, plain-text reports and the command-line front end for
//! [`opline_core`].

pub mod cli;
pub mod format;

pub use cli::{execute, run, Cli, CliError, Command, Outcome, RunConfig};
