use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use sigma2_cli::{job, run};

fn main() -> ExitCode {
    let cli = match job::Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (code, out) = run::run(&cli.job());
    let text = serde_json::to_string_pretty(&out).expect("JSON values always serialize");
    // A closed pipe (e.g. `| head`) is not an error worth a panic.
    let _ = writeln!(std::io::stdout(), "{text}");
    ExitCode::from(code)
}
