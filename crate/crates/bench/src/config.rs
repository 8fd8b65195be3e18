//! `key = value` run configuration.
//!
//! A file is a list of assignments. `# comments` and blank lines are
//! ignored, and a `[section]` header prefixes the keys that follow it, so
//!
//! ```text
//! [nano]
//! gamma = 1e-5
//! ```
//!
//! sets `nano.gamma`. Values from a file override the defaults and are in
//! turn overridden by command-line flags.

use std::path::Path;
use std::str::FromStr;

use nano_filter::filters::NanoOverrides;
use nano_filter::models::{MatrixMode, Mismatch, MismatchKind, ModelKind, ScenarioConfig};
use nano_filter::{FilterKind, FilterSettings, SigmaPointRule};

use crate::error::{BenchError, Result};

/// Every key understood by [`RunConfig::set`].
pub const KEYS: [&str; 18] = [
    "model",
    "mismatch.kind",
    "mismatch.level",
    "horizon",
    "trials",
    "seed",
    "mm",
    "filter",
    "nano.gamma",
    "nano.max_iters",
    "nano.hessian",
    "nano.cov_update",
    "nano.epsilon",
    "nano.exponent_mode",
    "nano.step_size",
    "nano.exp_order",
    "fm.matrix_mode",
    "timing",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelKind,
    pub mismatch: Mismatch,
    pub horizon: usize,
    pub trials: usize,
    pub seed: u64,
    pub rule: SigmaPointRule,
    /// Empty means the command's default list.
    pub filters: Vec<FilterKind>,
    pub nano: NanoOverrides,
    pub fm_matrix_mode: MatrixMode,
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelKind::Duffing,
            mismatch: Mismatch::none(),
            horizon: ScenarioConfig::DEFAULT_HORIZON,
            trials: ScenarioConfig::DEFAULT_TRIALS,
            seed: 0,
            rule: SigmaPointRule::Cubature,
            filters: Vec::new(),
            nano: NanoOverrides::default(),
            fm_matrix_mode: MatrixMode::Literal,
            timing: false,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| BenchError::Config(format!("invalid value '{value}' for '{key}'")))
}

fn parse_with<T, E: std::fmt::Display>(value: &str, f: impl FnOnce(&str) -> std::result::Result<T, E>) -> Result<T> {
    f(value.trim()).map_err(|e| BenchError::Config(e.to_string()))
}

pub fn parse_filters(value: &str) -> Result<Vec<FilterKind>> {
    let filters = value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_with(s, FilterKind::from_str))
        .collect::<Result<Vec<_>>>()?;
    if filters.is_empty() {
        return Err(BenchError::Config("at least one filter is required".into()));
    }
    Ok(filters)
}

impl RunConfig {
    /// Assigns one key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim();
        match key {
            "model" => self.model = parse_with(value, ModelKind::from_str)?,
            "mismatch.kind" => self.mismatch.kind = parse_with(value, MismatchKind::from_str)?,
            "mismatch.level" => self.mismatch.level = parse(key, value)?,
            "horizon" => self.horizon = parse(key, value)?,
            "trials" => self.trials = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "mm" => self.rule = parse_with(value, SigmaPointRule::from_str)?,
            "filter" => self.filters = parse_filters(value)?,
            "nano.gamma" => self.nano.gamma = Some(parse(key, value)?),
            "nano.max_iters" => self.nano.max_iters = Some(parse(key, value)?),
            "nano.hessian" => self.nano.hessian_mode = Some(parse_with(value, str::parse)?),
            "nano.cov_update" => self.nano.cov_update = Some(parse_with(value, str::parse)?),
            "nano.epsilon" => self.nano.epsilon = Some(parse(key, value)?),
            "nano.exponent_mode" => self.nano.exponent_mode = Some(parse_with(value, str::parse)?),
            "nano.step_size" => self.nano.step_size = Some(parse(key, value)?),
            "nano.exp_order" => self.nano.exp_order = Some(parse(key, value)?),
            "fm.matrix_mode" => self.fm_matrix_mode = parse_with(value, MatrixMode::from_str)?,
            "timing" => self.timing = parse(key, value)?,
            other => return Err(BenchError::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Applies a `KEY=VALUE` assignment as given on the command line.
    pub fn set_assignment(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| BenchError::Config(format!("expected KEY=VALUE, got '{assignment}'")))?;
        self.set(key, value)
    }

    /// Applies every assignment in `text`.
    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| BenchError::Config(format!("line {}: expected 'key = value'", lineno + 1)))?;
            let key = key.trim();
            let full = if section.is_empty() { key.to_string() } else { format!("{section}.{key}") };
            let value = value.trim().trim_matches('"');
            self.set(&full, value).map_err(|e| BenchError::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::Config(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_str(&text)
    }

    pub fn scenario_config(&self) -> ScenarioConfig {
        ScenarioConfig {
            fm_matrix_mode: self.fm_matrix_mode,
            ..ScenarioConfig::new(self.model)
                .with_mismatch(self.mismatch)
                .with_horizon(self.horizon)
                .with_trials(self.trials)
                .with_seed(self.seed)
        }
    }

    /// The configured filters, or `default` when none were given.
    pub fn filters_or(&self, default: &[FilterKind]) -> Vec<FilterKind> {
        if self.filters.is_empty() {
            default.to_vec()
        } else {
            self.filters.clone()
        }
    }

    pub fn settings(&self) -> FilterSettings {
        FilterSettings { rule: self.rule, nano: self.nano }
    }
}
