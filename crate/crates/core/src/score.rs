//! The bounded `[0, 5]` score scale shared by every index in the crate.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper end of the score scale.
pub const SCORE_MAX: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ScoreError {
    #[error("score {0} is outside [0, 5]")]
    OutOfRange(f64),
    #[error("score is not a finite number")]
    NonFinite,
}

/// What to do with a value that falls outside `[0, 5]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RangePolicy {
    #[default]
    Reject,
    Clamp,
}

/// A dimensionless value on the closed interval `[0, 5]`.
///
/// Raw encoded survey answers are integers, but composites (means, weighted
/// sums) are not, so the value is stored as `f64`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Score(f64);

impl Score {
    pub const ZERO: Score = Score(0.0);
    pub const MAX: Score = Score(SCORE_MAX);

    pub fn new(value: f64) -> Result<Self, ScoreError> {
        Self::with_policy(value, RangePolicy::Reject)
    }

    pub fn with_policy(value: f64, policy: RangePolicy) -> Result<Self, ScoreError> {
        if !value.is_finite() {
            return Err(ScoreError::NonFinite);
        }
        if (0.0..=SCORE_MAX).contains(&value) {
            return Ok(Score(value));
        }
        match policy {
            RangePolicy::Reject => Err(ScoreError::OutOfRange(value)),
            RangePolicy::Clamp => Ok(Score(value.clamp(0.0, SCORE_MAX))),
        }
    }

    /// Clamps into range. Only for values that are in range up to rounding.
    pub(crate) fn saturating(value: f64) -> Self {
        debug_assert!(value.is_finite());
        Score(value.clamp(0.0, SCORE_MAX))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Score {
    type Error = ScoreError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Score::new(value)
    }
}

impl From<Score> for f64 {
    fn from(s: Score) -> f64 {
        s.0
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
