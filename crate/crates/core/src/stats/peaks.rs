//! Weight statistics within selected Monte Carlo iterations.

use serde::{Deserialize, Serialize};

use super::describe::{mean, percentile_sorted, population_std, sorted};
use super::montecarlo::{McSample, MonteCarloRun};
use super::StatsError;
use crate::index::WeightKey;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Selector {
    /// Iterations whose mean SCVI lies in `[lo, hi]`.
    Interval { lo: f64, hi: f64 },
    /// The highest `fraction` of iterations by mean SCVI.
    Top { fraction: f64 },
    /// The lowest `fraction` of iterations by mean SCVI.
    Bottom { fraction: f64 },
    /// Iterations within `tolerance` (relative) of any histogram mode.
    Peaks { tolerance: f64 },
}

impl Selector {
    /// Peaks at the default ±2% tolerance.
    pub fn peaks() -> Self {
        Selector::Peaks { tolerance: 0.02 }
    }

    pub fn top_outliers() -> Self {
        Selector::Top { fraction: 0.01 }
    }

    pub fn bottom_outliers() -> Self {
        Selector::Bottom { fraction: 0.01 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightStat {
    pub weight: String,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
}

/// Locations of the local-maximum bins of a Freedman-Diaconis histogram,
/// each taken as the median of the values falling in that bin.
pub fn histogram_modes(values: &[f64]) -> Vec<f64> {
    if values.is_empty() {
        return Vec::new();
    }
    let s = sorted(values);
    let (min, max) = (s[0], s[s.len() - 1]);
    let iqr = percentile_sorted(&s, 75.0).unwrap() - percentile_sorted(&s, 25.0).unwrap();
    let width = 2.0 * iqr / (s.len() as f64).cbrt();
    if !(width > 0.0) || max <= min {
        return vec![percentile_sorted(&s, 50.0).unwrap()];
    }
    let bins = (((max - min) / width).ceil() as usize).max(1);
    let mut members: Vec<Vec<f64>> = vec![Vec::new(); bins];
    for &x in &s {
        let b = (((x - min) / width) as usize).min(bins - 1);
        members[b].push(x);
    }
    let counts: Vec<usize> = members.iter().map(Vec::len).collect();
    let mut modes = Vec::new();
    for i in 0..bins {
        let left = if i == 0 { 0 } else { counts[i - 1] };
        let right = if i + 1 == bins { 0 } else { counts[i + 1] };
        // plateaus report their first bin only
        if counts[i] > 0 && counts[i] > left && counts[i] >= right {
            modes.push(percentile_sorted(&members[i], 50.0).unwrap());
        }
    }
    modes
}

fn check_fraction(f: f64) -> Result<(), StatsError> {
    if f > 0.0 && f <= 1.0 {
        Ok(())
    } else {
        Err(StatsError::BadFraction(f))
    }
}

/// Iterations picked by `selector`, in run order.
pub fn select<'a>(run: &'a MonteCarloRun, selector: &Selector) -> Result<Vec<&'a McSample>, StatsError> {
    let samples = &run.samples;
    let picked: Vec<&McSample> = match *selector {
        Selector::Interval { lo, hi } => samples
            .iter()
            .filter(|s| lo <= s.mean_scvi && s.mean_scvi <= hi)
            .collect(),
        Selector::Top { fraction } | Selector::Bottom { fraction } => {
            check_fraction(fraction)?;
            let k = ((samples.len() as f64 * fraction).ceil() as usize).min(samples.len());
            let mut idx: Vec<usize> = (0..samples.len()).collect();
            idx.sort_by(|&a, &b| {
                samples[a]
                    .mean_scvi
                    .total_cmp(&samples[b].mean_scvi)
                    .then(a.cmp(&b))
            });
            if matches!(selector, Selector::Top { .. }) {
                idx.reverse();
            }
            let mut keep: Vec<usize> = idx.into_iter().take(k).collect();
            keep.sort_unstable();
            keep.into_iter().map(|i| &samples[i]).collect()
        }
        Selector::Peaks { tolerance } => {
            let modes = histogram_modes(&run.means());
            samples
                .iter()
                .filter(|s| {
                    modes
                        .iter()
                        .any(|m| (s.mean_scvi - m).abs() <= tolerance * m.abs())
                })
                .collect()
        }
    };
    if picked.is_empty() {
        return Err(StatsError::EmptySelection);
    }
    Ok(picked)
}

/// Mean and standard deviation of each of the eight weights over the
/// selected iterations.
pub fn peak_stats(run: &MonteCarloRun, selector: &Selector) -> Result<Vec<WeightStat>, StatsError> {
    let picked = select(run, selector)?;
    Ok(WeightKey::ALL
        .iter()
        .map(|&k| {
            let ws: Vec<f64> = picked.iter().map(|s| s.weights.get(k)).collect();
            WeightStat {
                weight: k.name().to_string(),
                mean: mean(&ws).expect("non-empty"),
                std: population_std(&ws).expect("non-empty"),
            }
        })
        .collect())
}
