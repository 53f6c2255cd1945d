use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use adifdtd_harness::{execute, parse_config, Experiment, Init, RunConfig, SnapshotFormat};

#[derive(Parser, Debug)]
#[command(name = "adifdtd", version, about = "ADI-FDTD Maxwell solver experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate from the exact solution, reporting identities, divergence and errors.
    Run(Common),
    /// Energy-norm ratios and identity drifts at selected levels.
    EnergyAudit(Common),
    /// Error and observed order over a list of time steps.
    ConvergeTime(Common),
    /// Error and observed order over a list of cubic grids.
    ConvergeSpace(Common),
    /// Discrete divergence of the fields at selected levels.
    DivergenceAudit(Common),
    /// Long run at a large Courant number.
    Stability(Common),
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Cell counts `I,J,K`.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<[usize; 3]>,
    #[arg(long)]
    dt: Option<f64>,
    /// Final time.
    #[arg(long = "T")]
    t_final: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    /// Report every N steps.
    #[arg(long)]
    cadence: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat `key = value` file applied before the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Start from the full-size protocol instead of the desk defaults.
    #[arg(long)]
    paper_scale: bool,
    /// Field dumps at report levels: off, csv or binary.
    #[arg(long, num_args = 0..=1, default_missing_value = "csv")]
    snapshots: Option<SnapshotFormat>,
    /// Initial fields: exact or zero.
    #[arg(long)]
    init: Option<Init>,
    /// Time steps for converge-time, comma separated.
    #[arg(long, value_delimiter = ',')]
    dt_list: Option<Vec<f64>>,
    /// Cubic grid sizes for converge-space, comma separated.
    #[arg(long, value_delimiter = ',')]
    grid_list: Option<Vec<usize>>,
    /// Report levels, comma separated. Overrides the cadence.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
}

fn parse_grid(s: &str) -> std::result::Result<[usize; 3], String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    v.try_into().map_err(|_| format!("expected three counts I,J,K, got `{s}`"))
}

fn resolve(experiment: Experiment, a: &Common) -> Result<RunConfig> {
    let preset = if a.paper_scale { RunConfig::full_scale(experiment) } else { RunConfig::desk(experiment) };
    let file = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Some(parse_config(&text).with_context(|| format!("in {}", p.display()))?)
        }
        None => None,
    };
    let mut c = match &file {
        Some(f) => f.overlay(preset),
        None => preset,
    };
    // the subcommand decides the experiment, whatever the file says
    c.experiment = experiment;
    if let Some(g) = a.grid {
        c.grid = g;
    }
    if let Some(v) = a.dt {
        c.dt = v;
    }
    if let Some(v) = a.t_final {
        c.t_final = v;
    }
    if let Some(v) = a.eps {
        c.eps = v;
    }
    if let Some(v) = a.mu {
        c.mu = v;
    }
    if let Some(v) = a.cadence {
        c.cadence = v;
        if a.levels.is_none() {
            c.levels.clear();
        }
    }
    if let Some(v) = &a.out {
        c.out = v.clone();
    }
    if let Some(v) = a.snapshots {
        c.snapshots = v;
    }
    if let Some(v) = a.init {
        c.init = v;
    }
    if let Some(v) = &a.dt_list {
        c.dt_list = v.clone();
    }
    if let Some(v) = &a.grid_list {
        c.grid_list = v.clone();
    }
    if let Some(v) = &a.levels {
        c.levels = v.clone();
    }
    match &file {
        Some(f) => f.validate(&c),
        None => c.validate(),
    }
    .with_context(|| match &a.config {
        Some(p) => format!("invalid configuration ({})", p.display()),
        None => "invalid configuration".to_string(),
    })?;
    Ok(c)
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let (experiment, args) = match &cli.command {
        Command::Run(a) => (Experiment::Run, a),
        Command::EnergyAudit(a) => (Experiment::EnergyAudit, a),
        Command::ConvergeTime(a) => (Experiment::ConvergeTime, a),
        Command::ConvergeSpace(a) => (Experiment::ConvergeSpace, a),
        Command::DivergenceAudit(a) => (Experiment::DivergenceAudit, a),
        Command::Stability(a) => (Experiment::Stability, a),
    };
    let cfg = resolve(experiment, args)?;
    eprintln!(
        "{}: grid {}x{}x{}, dt {}, T {}, {} steps -> {}",
        cfg.experiment,
        cfg.grid[0],
        cfg.grid[1],
        cfg.grid[2],
        cfg.dt,
        cfg.t_final,
        cfg.steps(),
        cfg.out.display()
    );
    let (files, summary) = execute(&cfg)?;
    println!("{summary}");
    for f in files {
        println!("  {}", cfg.out.join(f).display());
    }
    Ok(())
}
