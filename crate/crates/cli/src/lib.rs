//! Command-line front end: single runs, the benchmark suite, and a
//! line-protocol server for the built-in functions.

pub mod args;
pub mod artifacts;
pub mod commands;
pub mod error;
pub mod serve;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::Parser;

use args::{Cli, Command};
use artifacts::{write_all, Artifact};
use commands::{compare_runs, Output};
pub use error::{CliError, Result};

/// Run the CLI with the given arguments and return the process exit code.
pub fn main_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn finish(out_dir: &Path, output: Output, stdout: &mut dyn Write) -> Result<()> {
    write_all(out_dir, &output.artifacts)?;
    for line in &output.summary {
        writeln!(stdout, "{line}").map_err(|e| CliError::io("<stdout>", e))?;
    }
    Ok(())
}

fn write_partial(out_dir: &Path, err: CliError) -> CliError {
    match err {
        CliError::Partial { artifact, source } => {
            match write_all(out_dir, std::slice::from_ref::<Artifact>(&artifact)) {
                Ok(()) => *source,
                Err(e) => e,
            }
        }
        other => other,
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<()> {
    match command {
        Command::Run(args) => {
            let output = commands::run_single(&args).map_err(|e| write_partial(&args.out, e))?;
            if args.seedless {
                let again = commands::run_single(&args)?;
                compare_runs(&output.artifacts, &again.artifacts)?;
            }
            finish(&args.out, output, stdout)
        }
        Command::Suite(args) => {
            let (output, failure) = commands::run_suite(&args)?;
            if args.seedless {
                let (again, _) = commands::run_suite(&args)?;
                compare_runs(&output.artifacts, &again.artifacts)?;
            }
            finish(&args.out, output, stdout)?;
            failure.map_or(Ok(()), Err)
        }
        Command::Serve(args) => {
            let f = linewalker::benchmarks::lookup(&args.function)?;
            let stdin = std::io::stdin();
            serve::serve(f, stdin.lock(), std::io::stdout().lock()).map_err(|e| CliError::io("<stdio>", e))
        }
        Command::List => commands::list(stdout).map_err(|e| CliError::io("<stdout>", e)),
    }
}
