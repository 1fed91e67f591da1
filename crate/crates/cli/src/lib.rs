//! Command-line front end for `syzproj`: argument parsing, file I/O, the
//! fixture corpus runner and seeded experiments.
//!
//! Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 usage error, 4 computation
//! error.

pub mod commands;
pub mod corpus;
pub mod experiments;

use std::io::Write;

use clap::Parser;

pub use commands::{Cli, Failure, Format, Outcome};

/// Parse `argv` (program name first), run, and write both streams.
/// Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                3
            } else {
                // --help and --version
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match commands::execute(cli) {
        Ok(outcome) => {
            let _ = write!(out, "{}", outcome.stdout);
            let _ = write!(err, "{}", outcome.stderr);
            outcome.exit_code()
        }
        Err(f) => {
            let _ = writeln!(err, "{f}");
            f.exit_code()
        }
    }
}
