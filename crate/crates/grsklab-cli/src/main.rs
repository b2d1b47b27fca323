use clap::Parser;
use grsklab_cli::args::Cli;
use grsklab_cli::error::{EXIT_FAILURE, EXIT_OK};
use grsklab_cli::{output, run};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|report| {
        output::emit(&report, cli.format(), cli.output.as_deref())?;
        Ok(report.success)
    });
    match result {
        Ok(true) => ExitCode::from(EXIT_OK),
        Ok(false) => ExitCode::from(EXIT_FAILURE),
        Err(e) => {
            eprintln!("grsklab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
