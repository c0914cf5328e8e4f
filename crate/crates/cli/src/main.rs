mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{Failure, Outcome};

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| Failure::Usage(format!("--threads: {e}")))?;
    }
    match &cli.command {
        Command::Decompose(a) => commands::decompose(a),
        Command::Flatness(a) => commands::flatness(a),
        Command::Vharmonic(a) => commands::vharmonic(a),
        Command::Example(a) => commands::example(a, cli.out.as_deref().unwrap_or_else(|| std::path::Path::new("."))),
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(&outcome.report).expect("reports are valid JSON");
    text.push('\n');
    match (&cli.out, &cli.command) {
        (Some(path), Command::Decompose(_) | Command::Flatness(_) | Command::Vharmonic(_)) => {
            std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
        _ => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|o| emit(&cli, &o).map(|_| o.pass));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("foursym: verification failed");
            ExitCode::from(3)
        }
        Err(f) => {
            eprintln!("foursym: {}", f.message());
            ExitCode::from(f.code() as u8)
        }
    }
}
