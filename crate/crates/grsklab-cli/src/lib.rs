//! Command-line surface of grsklab. The binary is a thin wrapper around
//! [`run`], which returns a [`output::Report`] for every subcommand so that
//! the commands can also be driven from tests.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;

use args::{Cli, Command};
use error::{CliError, CliResult};
use output::Report;
use serde_json::{json, Value};

/// Runs one parsed command line, configuring the worker pool first.
pub fn run(cli: &Cli) -> CliResult<Report> {
    let threads = configure_threads(cli.threads)?;
    let mut report = match &cli.command {
        Command::Grsk(a) => commands::arrays::grsk(a)?,
        Command::Gpng(a) => commands::arrays::gpng(a)?,
        Command::Sample(a) => commands::sample::run(a)?,
        Command::Laplace(a) => commands::laplace::run(a)?,
        Command::Fredholm(a) => commands::laplace::fredholm(a)?,
        Command::Airy2(a) => commands::airy::run(a)?,
        Command::Verify(a) => commands::verify::run(a)?,
        Command::Sweep(a) => commands::sweep::run(a)?,
    };
    if let Value::Object(map) = &mut report.json {
        let meta = map.entry("metadata").or_insert_with(|| json!({}));
        if let Value::Object(meta) = meta {
            meta.insert("command".into(), json!(command_name(&cli.command)));
            meta.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
            meta.insert("threads".into(), json!(threads));
        }
    }
    Ok(report)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Grsk(_) => "grsk",
        Command::Gpng(_) => "gpng",
        Command::Sample(_) => "sample",
        Command::Laplace(_) => "laplace",
        Command::Fredholm(_) => "fredholm",
        Command::Airy2(_) => "airy2",
        Command::Verify(_) => "verify",
        Command::Sweep(_) => "sweep",
    }
}

/// Installs the global rayon pool once; later calls (tests) keep the first pool.
fn configure_threads(requested: Option<usize>) -> CliResult<usize> {
    if requested == Some(0) {
        return Err(CliError::invalid("--threads must be at least 1"));
    }
    if let Some(n) = requested {
        // Building fails only if a pool already exists, which is harmless here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(rayon::current_num_threads())
}
