//! Command-line parsing.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::error::{Error, Result};
use crate::io::{self, Command, RunConfig, Settings};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CommandArg {
    Spectrum,
    Blocks,
    ZeroModes,
    Sweep,
    Oracle,
    Pseudospin,
}

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Self {
        match c {
            CommandArg::Spectrum => Command::Spectrum,
            CommandArg::Blocks => Command::Blocks,
            CommandArg::ZeroModes => Command::ZeroModes,
            CommandArg::Sweep => Command::Sweep,
            CommandArg::Oracle => Command::Oracle,
            CommandArg::Pseudospin => Command::Pseudospin,
        }
    }
}

/// Majorana edge modes of the square-lattice Kitaev model on an M x N cylinder.
#[derive(Debug, Parser)]
#[command(name = "kitaev-cylinder", version)]
struct Args {
    /// Analysis to run.
    #[arg(value_enum)]
    command: CommandArg,
    /// Number of rows M (open direction).
    #[arg(long)]
    rows: Option<String>,
    /// Number of columns N (periodic direction).
    #[arg(long)]
    cols: Option<String>,
    /// Hopping; `sweep` accepts lists `a,b,c` and ranges `start:stop:count`.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// Pairing amplitude (list syntax as for --t).
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Chemical potential (list syntax as for --t).
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    /// Relative zero threshold, scaled by 1 + ||A||.
    #[arg(long)]
    tol: Option<String>,
    /// Output format: json or csv.
    #[arg(long)]
    format: Option<String>,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<String>,
    /// Worker threads for `sweep`.
    #[arg(long)]
    jobs: Option<String>,
    /// Flat key=value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Parses arguments (including the program name) and an optional config
/// file into a resolved [`RunConfig`].
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(|e| Error::Usage(e.to_string()))?;
    let file = match &args.config {
        Some(path) => io::parse_settings(
            &std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?,
        )?,
        None => Settings::new(),
    };
    let mut flags = Settings::new();
    for (key, value) in [
        ("rows", &args.rows),
        ("cols", &args.cols),
        ("t", &args.t),
        ("delta", &args.delta),
        ("mu", &args.mu),
        ("tol", &args.tol),
        ("format", &args.format),
        ("out", &args.out),
        ("jobs", &args.jobs),
    ] {
        if let Some(v) = value {
            flags.insert(key.to_string(), v.clone());
        }
    }
    io::resolve(args.command.into(), file, flags)
}

/// Entry point used by the binary; returns the exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    if let Err(e) = Args::try_parse_from(&argv) {
        if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
            let _ = e.print();
            return 0;
        }
    }
    match parse_config(argv) {
        Ok(config) => crate::run::run(&config),
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
