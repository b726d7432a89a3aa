use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cqnc::scenario::{emit, Format};
use cqnc::spectra::cooperativity;
use cqnc::{models::check_matching, parse_config, preset, run_sweep, Result};

#[derive(Parser)]
#[command(name = "cqnc", version, about = "Force-noise sweeps for cascaded optomechanical sensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and print or write the spectrum.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write one CSV per curve of a figure preset.
    Preset {
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Report matching residuals and cooperativity for a scenario.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load(path: &Path) -> Result<cqnc::Scenario> {
    let text = fs::read_to_string(path)?;
    let s = parse_config(&text)?;
    for w in s.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(s)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep { config, format, out } => {
            let s = load(&config)?;
            let text = emit(&run_sweep(&s)?, format.into())?;
            match out {
                Some(path) => fs::write(path, text)?,
                None => print!("{text}"),
            }
        }
        Command::Preset { name, out } => {
            let list = preset(&name)?;
            fs::create_dir_all(&out)?;
            for s in &list {
                let path = out.join(format!("{}.csv", s.label));
                fs::write(&path, emit(&run_sweep(s)?, Format::Csv)?)?;
                println!("{}", path.display());
            }
        }
        Command::Check { config } => {
            let s = load(&config)?;
            match s.effective_nmo()? {
                Some(nmo) => print!("{}", check_matching(&s.oms, &nmo, 1e-3)),
                None => println!("single sensor: no matching conditions"),
            }
            match s.oms.temperature {
                Some(t) => println!("quantum cooperativity C_q = {:.6e}", cooperativity(&s.oms, t)?),
                None => println!("quantum cooperativity: no temperature given"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}

