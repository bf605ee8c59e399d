use serde::{Deserialize, Serialize};

use super::describe::{mean, population_std};
use super::StatsError;
use crate::index::{Block, Composites, WeightConfig, WeightKey};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub mean_scvi: f64,
    /// Population standard deviation.
    pub std_scvi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCurve {
    pub target: String,
    /// Always `"proportional"`; recorded so outputs are self-describing.
    pub redistribution: String,
    /// Set when the other baseline weights of the block were all zero and
    /// the remainder was split evenly instead.
    pub degenerate_block: bool,
    pub points: Vec<SweepPoint>,
}

fn set_block<const N: usize>(w: &[f64; N], idx: usize, v: f64) -> ([f64; N], bool) {
    let others: f64 = w.iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, x)| x).sum();
    let degenerate = others <= 0.0;
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = if i == idx {
            v
        } else if degenerate {
            (1.0 - v) / (N - 1) as f64
        } else {
            w[i] * (1.0 - v) / others
        };
    }
    (out, degenerate)
}

/// Sets `target` to `v` and rescales the other weights of its block so the
/// block still sums to one, keeping their baseline proportions. Returns the
/// new config and whether the block was degenerate.
pub fn redistribute(
    baseline: &WeightConfig,
    target: WeightKey,
    v: f64,
) -> Result<(WeightConfig, bool), StatsError> {
    if !(0.0..=1.0).contains(&v) {
        return Err(StatsError::GridOutOfRange(v));
    }
    let mut alpha = baseline.alpha();
    let mut ivi = baseline.ivi_weights();
    let mut asi = baseline.asi_weights();
    let idx = |keys: &[WeightKey]| keys.iter().position(|k| *k == target).expect("key in block");
    let degenerate = match target.block() {
        Block::Scvi => {
            alpha = v;
            false
        }
        Block::Ivi => {
            let (w, d) = set_block(&ivi, idx(&[WeightKey::WA, WeightKey::WB, WeightKey::WP, WeightKey::WE]), v);
            ivi = w;
            d
        }
        Block::Asi => {
            let (w, d) = set_block(&asi, idx(&[WeightKey::WF, WeightKey::WC, WeightKey::WS]), v);
            asi = w;
            d
        }
    };
    Ok((WeightConfig::from_blocks(alpha, ivi, asi)?, degenerate))
}

/// One-at-a-time sweep of `target` over `grid`, reporting dataset mean and
/// standard deviation of SCVI at each value.
pub fn sensitivity_sweep(
    data: &[Composites],
    baseline: &WeightConfig,
    target: WeightKey,
    grid: &[f64],
) -> Result<SweepCurve, StatsError> {
    if data.is_empty() {
        return Err(StatsError::EmptyDataset);
    }
    let mut points = Vec::with_capacity(grid.len());
    let mut degenerate_block = false;
    for &v in grid {
        let (w, d) = redistribute(baseline, target, v)?;
        degenerate_block |= d;
        let scores: Vec<f64> = data.iter().map(|c| c.scvi(&w)).collect();
        points.push(SweepPoint {
            value: v,
            mean_scvi: mean(&scores).expect("non-empty"),
            std_scvi: population_std(&scores).expect("non-empty"),
        });
    }
    Ok(SweepCurve {
        target: target.name().to_string(),
        redistribution: "proportional".to_string(),
        degenerate_block,
        points,
    })
}
