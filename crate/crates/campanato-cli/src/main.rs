//! `campanato` — batch runner and verification harness for the campanato
//! library.
//!
//! Subcommands `norm`, `carleson`, `compose`, and `distance` execute a batch
//! described by a JSON job config and emit a CSV/JSON report pair; `verify`
//! runs a named invariant suite.  Exit codes: 0 success, 1 check failure,
//! 2 configuration error, 3 internal error.

mod config;
mod jobs;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{JobConfig, Task};
use report::Report;

/// Harness-level failure, keyed to the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad job description: exit 2.
    Config(String),
    /// IO or other environmental failure: exit 3.
    Internal(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "campanato",
    version,
    about = "Seminorm, Carleson-measure, and composition-operator batch runner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Seminorm sweeps over a family of functions.
    Norm(JobArgs),
    /// Carleson box norms of measure densities.
    Carleson(JobArgs),
    /// Composition-operator diagnostics for self-maps.
    Compose(JobArgs),
    /// Level-set distance estimates and profiles.
    Distance(JobArgs),
    /// Invariant suites; exits nonzero when a check fails.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct JobArgs {
    /// Job description (JSON).
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Job description (JSON); optional when --suite is given.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Suite: core, seminorm-equivalence, carleson, composition, or all.
    #[arg(long)]
    suite: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CommonArgs {
    /// Output directory for the CSV/JSON pair; overrides the config's `out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Circle grid size override.
    #[arg(long = "grid-circle", value_name = "N")]
    grid_circle: Option<usize>,
    /// Radial node count override.
    #[arg(long = "grid-radial", value_name = "J")]
    grid_radial: Option<usize>,
    /// Dyadic arc depth override.
    #[arg(long = "arc-depth", value_name = "K")]
    arc_depth: Option<u32>,
    /// Boundary truncation override.
    #[arg(long = "delta-min", value_name = "X")]
    delta_min: Option<f64>,
    /// Recompute on doubled grids and append convergence columns.
    #[arg(long)]
    refine: bool,
}

impl CommonArgs {
    fn apply(&self, config: &mut JobConfig) {
        if let Some(n) = self.grid_circle {
            config.grid.circle_n = n;
        }
        if let Some(j) = self.grid_radial {
            config.grid.radial_j = j;
        }
        if let Some(k) = self.arc_depth {
            config.grid.arc_depth = k;
        }
        if let Some(x) = self.delta_min {
            config.grid.delta_min = x;
        }
        if self.refine {
            config.refine = true;
        }
        if let Some(out) = &self.out {
            config.out = Some(out.clone());
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let started = std::time::Instant::now();
    let (config, report) = match cli.command {
        Command::Norm(args) => batch(Task::Norm, args)?,
        Command::Carleson(args) => batch(Task::Carleson, args)?,
        Command::Compose(args) => batch(Task::Compose, args)?,
        Command::Distance(args) => batch(Task::Distance, args)?,
        Command::Verify(args) => {
            let mut config = match &args.config {
                Some(path) => JobConfig::load(path)?,
                None => verify::standalone_config(),
            };
            if config.task != Task::Verify {
                return Err(CliError::Config(format!(
                    "config task `{}` does not match subcommand `verify`",
                    config.task.name()
                )));
            }
            if args.suite.is_some() {
                config.suite = args.suite.clone();
            }
            args.common.apply(&mut config);
            config.validate()?;
            let suite = verify::parse_suite(config.suite.as_deref().unwrap_or("all"))?;
            let report = verify::run_suite(suite, &config)?;
            (config, report)
        }
    };

    let failures = report.failure_count();
    emit(&config, report, started)?;
    Ok(if failures > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn batch(task: Task, args: JobArgs) -> Result<(JobConfig, Report), CliError> {
    let mut config = JobConfig::load(&args.config)?;
    if config.task != task {
        return Err(CliError::Config(format!(
            "config task `{}` does not match subcommand `{}`",
            config.task.name(),
            task.name()
        )));
    }
    args.common.apply(&mut config);
    config.validate()?;
    let report = jobs::run_job(&config)?;
    Ok((config, report))
}

/// Prints the report to stdout and, when an output directory is set, writes
/// the CSV/JSON pair into it.
fn emit(config: &JobConfig, report: Report, started: std::time::Instant) -> Result<(), CliError> {
    let report = report.with_provenance(config, started.elapsed());
    print!("{}", report.render_text());
    if let Some(dir) = &config.out {
        std::fs::create_dir_all(dir)?;
        let stem = config.task.name();
        report.write_csv(&dir.join(format!("{stem}.csv")))?;
        report.write_json(&dir.join(format!("{stem}.json")))?;
    }
    Ok(())
}
