use std::process::ExitCode;

use clap::Parser;
use shapesphere_cli::run::{exit_code_for, run, RunConfig};

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) => {
            // clap exits 2 by default, but 2 is taken by published-value
            // mismatches; flag errors belong with the other bad-input
            // cases (4), and --help/--version are clean exits.
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cfg) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
