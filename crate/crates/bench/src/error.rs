use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Core(#[from] nano_filter::Error),
    #[error("length mismatch: truth has {truth} states, estimates have {estimates}")]
    LengthMismatch { truth: usize, estimates: usize },
    #[error("mismatch level {level} is not on the declared grid {grid:?}")]
    UnknownLevel { level: f64, grid: Vec<f64> },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("malformed results file: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl BenchError {
    /// Process exit code: 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use nano_filter::Error as E;
        match self {
            BenchError::Config(_) | BenchError::UnknownLevel { .. } => 2,
            BenchError::Core(
                E::InvalidConfig(_) | E::UnknownScenario(_) | E::ModelNotLinear | E::MissingHessian | E::InvalidRule(_),
            ) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;
