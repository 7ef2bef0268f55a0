//! File formats, reports and the `sunflower` command-line driver.

pub mod args;
pub mod commands;
pub mod family_file;
pub mod parallel;
pub mod report;

use std::time::Instant;

use clap::Parser;

pub use commands::{CliError, Outcome};
pub use family_file::{FamilyFile, InputError};
pub use report::Report;

/// Exit code, text for stdout, text for stderr.
pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv`, runs the command and renders the report. Exit codes:
/// 0 found/holds, 1 not found/does not hold, 2 usage, input or budget error.
pub fn run<I, T>(argv: I) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Run { code, stdout: text, stderr: String::new() }
            } else {
                Run { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let start = Instant::now();
    match commands::run(cli.command, &cli.opts) {
        Ok(Outcome { mut report, holds }) => {
            report.runtime_ms = start.elapsed().as_millis() as u64;
            let text = match cli.opts.format {
                args::Format::Json => report.to_json(),
                args::Format::Text => report.to_text(),
            };
            let code = if holds { 0 } else { 1 };
            match &cli.opts.out {
                Some(path) => match std::fs::write(path, &text) {
                    Ok(()) => Run { code, stdout: String::new(), stderr: String::new() },
                    Err(e) => Run { code: 2, stdout: String::new(), stderr: format!("error: {}: {e}\n", path.display()) },
                },
                None => Run { code, stdout: text, stderr: String::new() },
            }
        }
        Err(e) => Run { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
