//! `lgtrap` — properties of Bose-Einstein condensates in power-law optical
//! traps formed by crossed Laguerre-Gaussian beams, exported as
//! machine-readable data files.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use config::{ConfigMap, Resolved};

#[derive(Parser)]
#[command(
    name = "lgtrap",
    version,
    about = "Bose-Einstein condensation in dark power-law laser traps",
    after_help = "Global keys (config file or flags): species, configurations, ell, \
                  n_atoms, vc_um3, power_W, detuning_over_2pi_THz. Sections \
                  [tc-sweep], [levels], [scattering], [waists], [growth], [shapes] \
                  carry per-command options; command-line flags win."
)]
struct Cli {
    /// Configuration file: flat `key = value` text with [section] blocks
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for data files
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed recorded in output metadata (Monte Carlo oracles live in the
    /// test suite and read it from there)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for row fan-out; output order never depends on it
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Species document path (overrides the config file)
    #[arg(long, global = true)]
    species: Option<PathBuf>,

    /// Trap configurations, comma-separated (1d_lg,2d_lg,3d_lg)
    #[arg(long, global = true)]
    configurations: Option<String>,

    /// Beam indices, comma-separated
    #[arg(long, global = true)]
    ell: Option<String>,

    /// Total atom number
    #[arg(long, global = true)]
    n_atoms: Option<f64>,

    /// Target condensate volume, um^3
    #[arg(long, global = true)]
    vc_um3: Option<f64>,

    /// Laser power per beam, W
    #[arg(long, global = true)]
    power_w: Option<f64>,

    /// Blue detuning over 2 pi, THz
    #[arg(long, global = true)]
    detuning_thz: Option<f64>,

    /// Shift-coefficient table path (tc-sweep, growth); a 3-column table
    /// drops the second-order term
    #[arg(long, global = true)]
    tc_coefficients: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ideal and interaction-corrected condensation temperatures vs ell
    TcSweep,
    /// Bose-Einstein populations of the lowest 1D trap levels
    Levels,
    /// Photon scattering and heating rates over ell and preset detunings
    Scattering,
    /// Beam waists and ring radii that realize the fixed condensate volume
    Waists,
    /// Condensate growth curves and condensation times
    Growth,
    /// Ground-state densities and iso-density contours
    Shapes,
    /// Validate a species document and print derived quantities
    SpeciesCheck,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::TcSweep => "tc-sweep",
            Command::Levels => "levels",
            Command::Scattering => "scattering",
            Command::Waists => "waists",
            Command::Growth => "growth",
            Command::Shapes => "shapes",
            Command::SpeciesCheck => "species-check",
        }
    }
}

fn run() -> Result<usize> {
    let cli = Cli::parse();
    let mut map = match &cli.config {
        Some(path) => ConfigMap::from_file(path)?,
        None => ConfigMap::default(),
    };

    // command-line overrides land in the global section
    if let Some(v) = &cli.species {
        map.set_override("species", v.display().to_string());
    }
    if let Some(v) = &cli.configurations {
        map.set_override("configurations", v.clone());
    }
    if let Some(v) = &cli.ell {
        map.set_override("ell", v.clone());
    }
    if let Some(v) = cli.n_atoms {
        map.set_override("n_atoms", v.to_string());
    }
    if let Some(v) = cli.vc_um3 {
        map.set_override("vc_um3", v.to_string());
    }
    if let Some(v) = cli.power_w {
        map.set_override("power_W", v.to_string());
    }
    if let Some(v) = cli.detuning_thz {
        map.set_override("detuning_over_2pi_THz", v.to_string());
    }
    if let Some(v) = cli.seed {
        map.set_override("seed", v.to_string());
    }
    if let Some(v) = cli.threads {
        map.set_override("threads", v.to_string());
    }
    if let Some(v) = &cli.tc_coefficients {
        map.set_override("tc_coefficients", v.display().to_string());
    }

    let resolved = Resolved::resolve(map, cli.command.name(), cli.out.clone())?;

    println!("resolved configuration:");
    for line in resolved.echo_lines() {
        println!("  {line}");
    }

    match cli.command {
        Command::TcSweep => commands::tc_sweep(&resolved),
        Command::Levels => commands::levels(&resolved),
        Command::Scattering => commands::scattering(&resolved),
        Command::Waists => commands::waists(&resolved),
        Command::Growth => commands::growth(&resolved),
        Command::Shapes => commands::shapes(&resolved),
        Command::SpeciesCheck => commands::species_check(&resolved),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(0) => ExitCode::SUCCESS,
        Ok(flagged) => {
            eprintln!("{flagged} row(s) carried error flags; see the output files");
            ExitCode::FAILURE
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
