use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use charlier_lattice_cli::{configure_threads, run, Cli, Failure};
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, Failure> {
    configure_threads()?;
    let outcome = run(cli)?;
    let mut sink: Box<dyn Write> = match &cli.global.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    outcome.table.write(cli.global.format, &mut sink)?;
    sink.flush()?;
    Ok(outcome.ok)
}
