use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gnrqc::experiment::{run_to_dir, Command, ExperimentConfig};

/// Z-shaped graphene nanoribbon quantum dots: spectra, couplings and gates.
#[derive(Parser)]
#[command(name = "gnrqc", version)]
struct Cli {
    /// Flat `key = value` config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for sampled sweeps.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    svg: bool,
    /// Override any config key, e.g. `--set n_values=7,9`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Confinement over an (N, L) grid -> confinement.csv
    Spectrum,
    /// Local density of states of one device -> ldos.csv, spectrum.csv
    Ldos,
    /// Exchange couplings over D -> couplings.csv
    Couplings {
        /// Solve for the dielectric constant that reproduces `target_j1`.
        #[arg(long)]
        calibrate: bool,
    },
    /// Gate fidelities and timings -> gates.csv, timing.txt
    Gates,
}

fn resolve(cli: &Cli) -> gnrqc::Result<(Command, ExperimentConfig)> {
    let mut c = ExperimentConfig::default();
    if let Some(path) = &cli.config {
        c.apply_text(&std::fs::read_to_string(path)?)?;
    }
    for kv in &cli.overrides {
        c.set_pair(kv)?;
    }
    if let Some(o) = &cli.out {
        c.out = o.clone();
    }
    if let Some(w) = cli.workers {
        c.workers = w;
    }
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    c.svg |= cli.svg;
    let cmd = match cli.command {
        Sub::Spectrum => Command::Spectrum,
        Sub::Ldos => Command::Ldos,
        Sub::Couplings { calibrate } => {
            c.calibrate |= calibrate;
            Command::Couplings
        }
        Sub::Gates => Command::Gates,
    };
    Ok((cmd, c))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = resolve(&cli).and_then(|(cmd, c)| run_to_dir(cmd, &c));
    match result {
        Ok((output, paths)) => {
            for n in &output.notes {
                eprintln!("{n}");
            }
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let msg = e.to_string().replace('"', "'");
            eprintln!("error kind={} message=\"{msg}\"", e.kind());
            ExitCode::FAILURE
        }
    }
}
