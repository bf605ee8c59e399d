pub mod cli;
pub mod comparators;
pub mod heatmap;
pub mod index;
pub mod manifest;
pub mod reddit;
pub mod regions;
pub mod score;
pub mod scores;
pub mod stats;
pub mod survey;

pub use index::{
    compute_asi, compute_ivi, compute_scvi, composite_factor, validate_weights, AsiFactors,
    Composites, IndexError, IviFactors, RawWeights, ScoreBreakdown, WeightConfig, WeightKey,
};
pub use score::{RangePolicy, Score, ScoreError};
