//! Command-line front end for `flatorb-core`: JSON spec files, TSV/JSON
//! emitters and the reproduction suite behind `flatorb verify-paper`.

pub mod commands;
pub mod error;
pub mod format;
pub mod specfile;
pub mod verify;

pub use commands::{run, Cli, Outcome};
pub use error::{CliError, CliResult};
