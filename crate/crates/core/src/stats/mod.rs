//! Evaluation machinery: sensitivity sweeps, Monte Carlo weight sampling,
//! peak statistics, rank correlation, and group aggregation.

pub mod describe;
mod gap;
mod groups;
mod montecarlo;
mod peaks;
mod sensitivity;
mod spearman;

use thiserror::Error;

pub use gap::percentage_gap;
pub use groups::{
    group_aggregate, read_group_csv, write_group_csv, CiMethod, GroupRow, GroupSummary,
    GROUP_CSV_HEADER,
};
pub use montecarlo::{
    monte_carlo, sample_weight_simplex, write_run_jsonl, iteration_rng, McSample, MonteCarloRun,
    RunSummary, WeightRange, WeightRangeSpec, MAX_RETRIES,
};
pub use peaks::{histogram_modes, peak_stats, select, Selector, WeightStat};
pub use sensitivity::{redistribute, sensitivity_sweep, SweepCurve, SweepPoint};
pub use spearman::{average_ranks, format_p, spearman, Correlation};

use crate::index::{Block, IndexError, WeightKey};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("grid value {0} lies outside [0, 1]")]
    GridOutOfRange(f64),
    #[error("invalid range for {key}: [{lo}, {hi}]")]
    InvalidRange { key: &'static str, lo: f64, hi: f64 },
    #[error("weight ranges for the {0:?} block admit no simplex point")]
    InfeasibleRanges(Block),
    #[error("iteration count must be at least 1")]
    NoIterations,
    #[error("selection matched no iterations")]
    EmptySelection,
    #[error("selector fraction must lie in (0, 1], got {0}")]
    BadFraction(f64),
    #[error("inputs differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least 3 observations, got {0}")]
    TooFewObservations(usize),
    #[error("input is constant; rank correlation undefined")]
    ConstantInput,
    #[error("inputs must be positive")]
    NonPositiveInput,
    #[error("group csv: {0}")]
    GroupCsv(String),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl StatsError {
    pub(crate) fn invalid_range(key: WeightKey, lo: f64, hi: f64) -> Self {
        StatsError::InvalidRange {
            key: key.name(),
            lo,
            hi,
        }
    }
}
