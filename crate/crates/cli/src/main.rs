use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use symppt_cli::{run, Cli, CliError};

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SYMPPT_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("SYMPPT_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size the thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let fail = |e: CliError| {
        eprintln!("error: {}", e.message());
        ExitCode::from(e.exit_code())
    };
    if let Err(e) = configure_threads() {
        return fail(e);
    }
    let report = match run(&cli.command) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };

    let text = report.render(cli.format);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        return fail(CliError::Usage(e));
    }
    if let Some(note) = &report.note {
        eprintln!("{note}");
    }
    match &report.violation {
        Some(v) => fail(CliError::Numerical(format!("check failed: {v}"))),
        None => ExitCode::SUCCESS,
    }
}
