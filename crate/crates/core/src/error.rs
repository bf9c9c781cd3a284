use std::path::PathBuf;

use thiserror::Error;

use crate::spectral::WaveIndex;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("wave index (0, 0) is not admissible")]
    ZeroWaveIndex,
    #[error("wave index ({k1}, {k2}) is not in the upper half-lattice")]
    NotUpperHalf { k1: i32, k2: i32 },
    #[error("wave index {0} lies outside the truncation radius {1}")]
    OutsideTruncation(WaveIndex, usize),
    #[error("degenerate index pair h={h}, k={k}")]
    DegenerateIndices { h: WaveIndex, k: WaveIndex },
    #[error("grid of {m} points per side is too coarse for truncation {n} (need at least {min})")]
    GridTooCoarse { m: usize, n: usize, min: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("time grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("blow-up at t={t}: enstrophy {enstrophy:e} exceeds {limit:e}")]
    BlowUp { t: f64, enstrophy: f64, limit: f64 },
    #[error("zero denominator in {0}")]
    ZeroDenominator(&'static str),
    #[error("overflow computing {0}")]
    Overflow(&'static str),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid configuration:\n{}", .0.join("\n"))]
    InvalidConfig(Vec<String>),
    #[error("output directory {0} does not exist")]
    MissingOutputDir(PathBuf),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
