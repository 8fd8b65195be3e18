//! CSV and plain-text output.
//!
//! Floats are written with Rust's shortest round-trip formatting, so reading
//! a trials file back reproduces the in-memory results exactly.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use nano_filter::FilterKind;

use crate::ablation::AblationTable;
use crate::error::{BenchError, Result};
use crate::montecarlo::{BenchmarkReport, TrialResult, RNG_NAME};
use crate::sweep::SweepTable;

pub const TRIALS_HEADER: [&str; 7] = ["scenario", "filter", "trial", "rmse", "diverged", "steps", "update_ms"];
pub const SWEEP_HEADER: [&str; 7] = ["model", "mismatch", "level", "filter", "mean_rmse", "divergences", "trials"];
pub const ABLATION_HEADER: [&str; 7] =
    ["model", "filter", "rmse", "mean_rmse", "mean_update_ms", "divergences", "trials"];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One row of a trials file.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow {
    pub scenario: String,
    pub filter: FilterKind,
    pub result: TrialResult,
}

pub fn write_trials_csv<W: Write>(out: W, reports: &[BenchmarkReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRIALS_HEADER)?;
    for report in reports {
        for f in &report.filters {
            for t in &f.trials {
                w.write_record([
                    report.scenario.clone(),
                    f.filter.to_string(),
                    t.trial.to_string(),
                    opt(t.rmse),
                    t.diverged.to_string(),
                    t.steps.to_string(),
                    opt(t.update_ms),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn parse_field<T: std::str::FromStr>(field: &str, name: &str) -> Result<T> {
    field.parse().map_err(|_| BenchError::Parse(format!("bad {name} '{field}'")))
}

fn parse_opt(field: &str, name: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_field(field, name).map(Some)
    }
}

pub fn read_trials_csv<R: Read>(input: R) -> Result<Vec<TrialRow>> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().ne(TRIALS_HEADER) {
        return Err(BenchError::Parse(format!("expected header {}", TRIALS_HEADER.join(","))));
    }
    let mut rows = Vec::new();
    for record in r.records() {
        let rec = record?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        rows.push(TrialRow {
            scenario: field(0).to_string(),
            filter: field(1).parse().map_err(|_| BenchError::Parse(format!("bad filter '{}'", field(1))))?,
            result: TrialResult {
                trial: parse_field(field(2), "trial")?,
                rmse: parse_opt(field(3), "rmse")?,
                diverged: parse_field(field(4), "diverged")?,
                steps: parse_field(field(5), "steps")?,
                update_ms: parse_opt(field(6), "update_ms")?,
            },
        });
    }
    Ok(rows)
}

/// Human-readable `key = value` summary with per-filter statistics.
pub fn summary_text(reports: &[BenchmarkReport]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "rng = {RNG_NAME}");
    for report in reports {
        let c = &report.config;
        let _ = writeln!(s, "\n[{}]", report.scenario);
        let _ = writeln!(s, "model = {}", c.model);
        let _ = writeln!(s, "mismatch = {} {}", c.mismatch.kind, c.mismatch.level);
        let _ = writeln!(s, "horizon = {}", c.horizon);
        let _ = writeln!(s, "trials = {}", c.trials);
        let _ = writeln!(s, "seed = {}", c.seed);
        let _ = writeln!(s, "rule = {}", report.rule);
        for f in &report.filters {
            let stats = f.rmse_summary();
            let _ = writeln!(
                s,
                "{}: mean_rmse = {} median_rmse = {} q1_rmse = {} q3_rmse = {} divergences = {}/{} mean_update_ms = {}",
                f.filter,
                stats.map_or("-".into(), |v| format!("{:.6e}", v.mean)),
                stats.map_or("-".into(), |v| format!("{:.6e}", v.median)),
                stats.map_or("-".into(), |v| format!("{:.6e}", v.q1)),
                stats.map_or("-".into(), |v| format!("{:.6e}", v.q3)),
                f.divergences(),
                f.trials.len(),
                f.mean_update_ms().map_or("-".into(), |v| format!("{v:.6e}")),
            );
        }
    }
    s
}

pub fn write_sweep_csv<W: Write>(out: W, table: &SweepTable) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for c in &table.cells {
        w.write_record([
            table.model.to_string(),
            table.kind.to_string(),
            c.level.to_string(),
            c.filter.to_string(),
            opt(c.mean_rmse),
            c.divergences.to_string(),
            c.trials.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_ablation_csv<W: Write>(out: W, table: &AblationTable) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ABLATION_HEADER)?;
    for c in &table.cells {
        w.write_record([
            c.model.to_string(),
            c.filter.to_string(),
            c.rmse_label(),
            opt(c.mean_rmse),
            opt(c.mean_update_ms),
            c.divergences.to_string(),
            c.trials.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let file = File::create(&path)?;
    Ok((path, BufWriter::new(file)))
}

/// Writes `trials.csv` and `summary.txt` into `dir`.
pub fn emit_run(dir: &Path, reports: &[BenchmarkReport]) -> Result<Vec<PathBuf>> {
    let (trials, w) = create(dir, "trials.csv")?;
    write_trials_csv(w, reports)?;
    let (summary, mut w) = create(dir, "summary.txt")?;
    w.write_all(summary_text(reports).as_bytes())?;
    w.flush()?;
    Ok(vec![trials, summary])
}

/// Writes `sweep.csv` plus the per-trial files of every level into `dir`.
pub fn emit_sweep(dir: &Path, table: &SweepTable) -> Result<Vec<PathBuf>> {
    let (sweep, w) = create(dir, "sweep.csv")?;
    write_sweep_csv(w, table)?;
    let mut paths = vec![sweep];
    paths.extend(emit_run(dir, &table.reports)?);
    Ok(paths)
}

/// Writes `ablation.csv` plus the per-trial files into `dir`.
pub fn emit_ablation(dir: &Path, table: &AblationTable) -> Result<Vec<PathBuf>> {
    let (ablation, w) = create(dir, "ablation.csv")?;
    write_ablation_csv(w, table)?;
    let mut paths = vec![ablation];
    paths.extend(emit_run(dir, &table.reports)?);
    Ok(paths)
}
