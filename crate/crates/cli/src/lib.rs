//! Command-line front end: argument parsing, commands and rendering.

pub mod args;
pub mod commands;
pub mod render;

use args::{Cli, Command};
use commands::{Failure, Output};

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Eval(a) => commands::cmd_eval(a),
        Command::Coeffs(a) => commands::cmd_coeffs(a),
        Command::Table(a) => commands::cmd_table(a),
        Command::Verify(a) => commands::cmd_verify(a),
    }
}
