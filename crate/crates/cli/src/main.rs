use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use ejasym_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match ejasym_cli::run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not an error worth reporting
            let _ = stdout.write_all(out.text.as_bytes());
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
