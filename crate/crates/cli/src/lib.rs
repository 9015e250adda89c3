//! Library side of the `mct` command: argument handling, commands and the
//! circuit file formats.

pub mod commands;
pub mod error;
pub mod format;

pub use commands::run;
pub use error::{CliError, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};
pub use format::ExportFormat;
