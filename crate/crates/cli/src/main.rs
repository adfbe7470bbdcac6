use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use contagion::{Error, ErrorKind, OutputFormat, RunConfig};

mod commands;
mod output;

/// Default output directory when neither `--out` nor the config sets one.
const OUT_DIR_ENV: &str = "CONTAGION_OUT_DIR";

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_REGIME: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "contagion",
    version,
    about = "Compound dynamic contagion claims: moments, simulation and stop-loss pricing"
)]
struct Cli {
    /// JSON run configuration; missing fields take the reference defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo paths (overrides the config).
    #[arg(long, global = true)]
    paths: Option<usize>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory; results go to stdout when none is set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Use the reference reinsurance setting and table grids. Without a
    /// subcommand, runs the premium table and all sensitivity sweeps.
    #[arg(long, global = true)]
    paper_tables: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Expected intensity, count and aggregate claims under both measures.
    Moments {
        /// Comma-separated times in [0, t]; defaults to t.
        #[arg(long, value_delimiter = ',')]
        times: Vec<f64>,
    },
    /// B(t) and K(t) on the solver grid.
    Bcurve,
    /// Event logs and sampled trajectories of `run.log_paths` paths.
    Simulate,
    /// Stop-loss premiums over `run.retentions` under both measures.
    Price,
    /// Sensitivity sweeps of the tilted premiums.
    Sweep,
    /// Runs the invariant suite; exits with 1 if any check fails.
    Validate,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidParameter(format!("reading {}: {e}", path.display())))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    if cli.paper_tables {
        cfg = commands::reference_setting(cfg);
    }
    if let Some(seed) = cli.seed {
        cfg.run.seed = seed;
    }
    if let Some(n) = cli.paths {
        cfg.run.n_paths = n;
    }
    if let Some(f) = cli.format {
        cfg.run.format = f.into();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(cli: &Cli, cfg: &RunConfig) -> Option<PathBuf> {
    cli.out
        .clone()
        .or_else(|| cfg.run.out_dir.as_ref().map(PathBuf::from))
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidParameter("--threads must be >= 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let command = match (&cli.command, cli.paper_tables) {
        (Some(c), _) => Some(c.clone()),
        (None, true) => None,
        (None, false) => {
            return Err(Error::InvalidParameter(
                "a subcommand or --paper-tables is required".into(),
            )
            .into())
        }
    };
    let cfg = load_config(&cli)?;
    let dir = out_dir(&cli, &cfg);
    let (name, artifacts, code) = match command {
        None => {
            let mut all = commands::price(&cfg)?;
            all.extend(commands::sweep(&cfg)?);
            ("tables", all, 0)
        }
        Some(Command::Moments { times }) => ("moments", commands::moments(&cfg, &times)?, 0),
        Some(Command::Bcurve) => ("bcurve", commands::bcurve(&cfg)?, 0),
        Some(Command::Simulate) => ("simulate", commands::simulate(&cfg)?, 0),
        Some(Command::Price) => ("price", commands::price(&cfg)?, 0),
        Some(Command::Sweep) => ("sweep", commands::sweep(&cfg)?, 0),
        Some(Command::Validate) => {
            let (a, ok) = commands::validate(&cfg)?;
            ("validate", a, if ok { 0 } else { EXIT_CHECK_FAILED })
        }
    };
    let written = output::emit(&artifacts, name, &cfg, cfg.run.format, dir.as_deref())?;
    for p in &written {
        eprintln!("wrote {}", p.display());
    }
    if code == EXIT_CHECK_FAILED {
        eprintln!("validation failed");
    }
    Ok(code)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>().map(Error::kind) {
        Some(ErrorKind::Config) => EXIT_CONFIG,
        Some(ErrorKind::Regime) => EXIT_REGIME,
        Some(ErrorKind::Numerical) => EXIT_NUMERICAL,
        None => EXIT_CHECK_FAILED,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
