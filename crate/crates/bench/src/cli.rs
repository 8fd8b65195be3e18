//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use nano_filter::models::{scenario_models, MismatchKind, ModelKind};
use nano_filter::FilterKind;

use crate::ablation::ablate;
use crate::config::{parse_filters, RunConfig};
use crate::error::{BenchError, Result};
use crate::montecarlo::{run_monte_carlo, RunOptions};
use crate::report::{emit_ablation, emit_run, emit_sweep};
use crate::sweep::sweep_mismatch;

const RUN_FILTERS: [FilterKind; 1] = [FilterKind::Nano];
const SWEEP_FILTERS: [FilterKind; 5] =
    [FilterKind::Nano, FilterKind::Ekf, FilterKind::Iekf, FilterKind::Ukf, FilterKind::Plf];

#[derive(Debug, Parser)]
#[command(name = "nano-bench", version, about = "Monte Carlo benchmarks for natural-gradient Gaussian filters")]
pub struct Cli {
    /// Configuration file of `key = value` lines; flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Record per-update wall-clock times (outputs are then not reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Extra configuration assignment, applied after the config file.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub assignments: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct Common {
    /// Trials per filter.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Time steps per trial.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Base seed; trial i uses seed + i.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Moment-matching rule: cubature, unscented or gh:<order>.
    #[arg(long)]
    pub mm: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo run of one scenario.
    Run {
        #[arg(long)]
        model: Option<String>,
        /// Comma-separated filter ids.
        #[arg(long)]
        filter: Option<String>,
        /// Mismatch kind: none, system or outlier.
        #[arg(long)]
        mismatch: Option<String>,
        /// Mismatch level (o for system, k for outlier).
        #[arg(long)]
        level: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Mean RMSE across a mismatch grid.
    Sweep {
        #[arg(long)]
        model: Option<String>,
        /// system or outlier.
        #[arg(long)]
        mismatch: String,
        /// Comma-separated levels; defaults to the model's grid.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        levels: Option<Vec<f64>>,
        #[arg(long)]
        filter: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// NANO ablation table over all three benchmarks.
    Ablate {
        /// Comma-separated models; defaults to all.
        #[arg(long)]
        models: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Lists models, filters and moment-matching rules.
    List,
}

fn base_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    for a in &cli.assignments {
        cfg.set_assignment(a)?;
    }
    if cli.timing {
        cfg.timing = true;
    }
    Ok(cfg)
}

fn apply_common(cfg: &mut RunConfig, c: &Common) -> Result<()> {
    if let Some(v) = c.trials {
        cfg.trials = v;
    }
    if let Some(v) = c.horizon {
        cfg.horizon = v;
    }
    if let Some(v) = c.seed {
        cfg.seed = v;
    }
    if let Some(v) = &c.mm {
        cfg.set("mm", v)?;
    }
    Ok(())
}

fn apply_model(cfg: &mut RunConfig, model: &Option<String>, filter: &Option<String>) -> Result<()> {
    if let Some(m) = model {
        cfg.set("model", m)?;
    }
    if let Some(f) = filter {
        cfg.filters = parse_filters(f)?;
    }
    Ok(())
}

fn print_written(out: &mut dyn Write, paths: &[PathBuf]) -> Result<()> {
    for p in paths {
        writeln!(out, "wrote {}", p.display())?;
    }
    Ok(())
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let mut cfg = base_config(cli)?;
    match &cli.command {
        Command::List => {
            let models: Vec<_> = ModelKind::ALL.iter().map(|m| m.name()).collect();
            let filters: Vec<_> = FilterKind::ALL.iter().map(|f| f.name()).collect();
            writeln!(out, "models: {}", models.join(" "))?;
            writeln!(out, "filters: {}", filters.join(" "))?;
            writeln!(out, "rules: cubature unscented gh:<order>")?;
        }
        Command::Run { model, filter, mismatch, level, common } => {
            apply_model(&mut cfg, model, filter)?;
            apply_common(&mut cfg, common)?;
            if let Some(k) = mismatch {
                cfg.set("mismatch.kind", k)?;
            }
            if let Some(l) = level {
                cfg.mismatch.level = *l;
            }
            let scenario = scenario_models(&cfg.scenario_config())?;
            let opts = RunOptions { settings: cfg.settings(), timing: cfg.timing };
            let report = run_monte_carlo(&scenario, &cfg.filters_or(&RUN_FILTERS), &opts)?;
            for f in &report.filters {
                let mean = f.rmse_summary().map_or("-".to_string(), |s| format!("{:.4}", s.mean));
                writeln!(out, "{} {}: mean rmse {mean}, {} diverged", report.scenario, f.filter, f.divergences())?;
            }
            print_written(out, &emit_run(&common.out, &[report])?)?;
        }
        Command::Sweep { model, mismatch, levels, filter, common } => {
            apply_model(&mut cfg, model, filter)?;
            apply_common(&mut cfg, common)?;
            let kind: MismatchKind = mismatch.parse()?;
            if kind == MismatchKind::None {
                return Err(BenchError::Config("sweep needs --mismatch system or outlier".into()));
            }
            let levels = levels.clone().unwrap_or_else(|| cfg.model.grid(kind).to_vec());
            let opts = RunOptions { settings: cfg.settings(), timing: cfg.timing };
            let table = sweep_mismatch(&cfg.scenario_config(), kind, &levels, &cfg.filters_or(&SWEEP_FILTERS), &opts)?;
            for c in &table.cells {
                let mean = c.mean_rmse.map_or("-".to_string(), |v| format!("{v:.4}"));
                writeln!(out, "{} {}={} {}: mean rmse {mean}", table.model, kind, c.level, c.filter)?;
            }
            print_written(out, &emit_sweep(&common.out, &table)?)?;
        }
        Command::Ablate { models, common } => {
            apply_common(&mut cfg, common)?;
            let models = match models {
                Some(list) => list.split(',').map(|m| m.parse()).collect::<nano_filter::Result<Vec<ModelKind>>>()?,
                None => ModelKind::ALL.to_vec(),
            };
            let table = ablate(&models, &cfg.scenario_config(), &cfg.settings())?;
            for c in &table.cells {
                let ms = c.mean_update_ms.map_or("-".to_string(), |v| format!("{v:.4}"));
                writeln!(out, "{} {}: rmse {}, update {ms} ms", c.model, c.filter, c.rmse_label())?;
            }
            print_written(out, &emit_ablation(&common.out, &table)?)?;
        }
    }
    Ok(())
}

/// Parses `args` and runs the command. Returns the process exit code:
/// 0 on success, 2 for usage or configuration errors, 1 for runtime failures.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let BenchError::Core(nano_filter::Error::ModelNotLinear) = e {
                let _ = writeln!(err, "the kf filter needs a linear-Gaussian model; use ekf, ukf or a nano variant");
            }
            e.exit_code()
        }
    }
}
