//! Expression language and command-line front end for `fungraph`.

pub mod commands;
pub mod expr;

pub use commands::{run, Cli, CliError, Command};
pub use expr::{parse, Expr, ParseError};
