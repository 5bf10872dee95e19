mod commands;
mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::Parser;

use commands::Completion;
use config::{Cli, RunConfig};
use output::Sink;

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_VERIFY: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let cfg = match RunConfig::resolve(cli.command, cli.flags) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    match execute(&cfg) {
        Ok(Completion::Done) => ExitCode::SUCCESS,
        Ok(Completion::VerifyFailed(n)) => {
            eprintln!("{n} acceptance criteria failed");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn execute(cfg: &RunConfig) -> Result<Completion> {
    let out: Box<dyn Write> = match &cfg.out {
        Some(path) => Box::new(File::create(path).with_context(|| format!("creating {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = Sink::new(BufWriter::new(out), cfg.format);
    let done = commands::run(cfg, &mut sink)?;
    sink.finish()?;
    Ok(done)
}

/// Library errors about the request itself are usage errors; every other
/// library error is numerical. Anything else (I/O, serialization) is usage.
fn exit_code(e: &anyhow::Error) -> u8 {
    use nhimpurity::Error as E;
    match e.chain().find_map(|c| c.downcast_ref::<nhimpurity::Error>()) {
        Some(E::InvalidParams(_) | E::InvalidWindow(_) | E::PartitionOutOfRange { .. }) => EXIT_USAGE,
        Some(_) => EXIT_NUMERICAL,
        None => EXIT_USAGE,
    }
}
