//! Front end for qgt-core: the module document format and the
//! subcommand implementations behind the `qgt` binary.

pub mod commands;
pub mod document;

pub use commands::{CliError, Input, Outcome};
pub use document::{Diagnostic, SpecDocument};
