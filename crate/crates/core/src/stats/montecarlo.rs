//! Monte Carlo weight variability: sample weight configurations uniformly
//! from the simplex subject to per-weight ranges and record the dataset mean
//! SCVI under each.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::describe::{mean, percentile_sorted, population_std, sorted};
use super::StatsError;
use crate::index::{Block, Composites, WeightConfig, WeightKey};

/// Rejection-sampling cap per block.
pub const MAX_RETRIES: usize = 10_000;

/// A closed interval, written `[lo, hi]` in config files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct WeightRange {
    pub lo: f64,
    pub hi: f64,
}

impl From<[f64; 2]> for WeightRange {
    fn from([lo, hi]: [f64; 2]) -> Self {
        WeightRange { lo, hi }
    }
}

impl From<WeightRange> for [f64; 2] {
    fn from(r: WeightRange) -> Self {
        [r.lo, r.hi]
    }
}

impl WeightRange {
    pub const FULL: WeightRange = WeightRange { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        WeightRange { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    fn pinned(&self) -> bool {
        self.lo == self.hi
    }
}

fn full() -> WeightRange {
    WeightRange::FULL
}

/// Per-weight sampling ranges. Weights left out of a config file default to
/// `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightRangeSpec {
    #[serde(default = "full")]
    pub alpha: WeightRange,
    #[serde(default = "full")]
    pub w_a: WeightRange,
    #[serde(default = "full")]
    pub w_b: WeightRange,
    #[serde(default = "full")]
    pub w_p: WeightRange,
    #[serde(default = "full")]
    pub w_e: WeightRange,
    #[serde(default = "full")]
    pub w_f: WeightRange,
    #[serde(default = "full")]
    pub w_c: WeightRange,
    #[serde(default = "full")]
    pub w_s: WeightRange,
}

impl Default for WeightRangeSpec {
    fn default() -> Self {
        WeightRangeSpec {
            alpha: full(),
            w_a: full(),
            w_b: full(),
            w_p: full(),
            w_e: full(),
            w_f: full(),
            w_c: full(),
            w_s: full(),
        }
    }
}

impl WeightRangeSpec {
    pub fn get(&self, key: WeightKey) -> WeightRange {
        match key {
            WeightKey::Alpha => self.alpha,
            WeightKey::WA => self.w_a,
            WeightKey::WB => self.w_b,
            WeightKey::WP => self.w_p,
            WeightKey::WE => self.w_e,
            WeightKey::WF => self.w_f,
            WeightKey::WC => self.w_c,
            WeightKey::WS => self.w_s,
        }
    }

    pub fn set(&mut self, key: WeightKey, r: WeightRange) {
        let slot = match key {
            WeightKey::Alpha => &mut self.alpha,
            WeightKey::WA => &mut self.w_a,
            WeightKey::WB => &mut self.w_b,
            WeightKey::WP => &mut self.w_p,
            WeightKey::WE => &mut self.w_e,
            WeightKey::WF => &mut self.w_f,
            WeightKey::WC => &mut self.w_c,
            WeightKey::WS => &mut self.w_s,
        };
        *slot = r;
    }

    fn ivi(&self) -> [WeightRange; 4] {
        [self.w_a, self.w_b, self.w_p, self.w_e]
    }

    fn asi(&self) -> [WeightRange; 3] {
        [self.w_f, self.w_c, self.w_s]
    }

    /// Checks every interval and that each block's ranges can sum to one.
    pub fn validate(&self) -> Result<(), StatsError> {
        for key in WeightKey::ALL {
            let r = self.get(key);
            if !(r.lo.is_finite() && r.hi.is_finite() && 0.0 <= r.lo && r.lo <= r.hi && r.hi <= 1.0) {
                return Err(StatsError::invalid_range(key, r.lo, r.hi));
            }
        }
        let feasible = |rs: &[WeightRange]| {
            let lo: f64 = rs.iter().map(|r| r.lo).sum();
            let hi: f64 = rs.iter().map(|r| r.hi).sum();
            lo <= 1.0 + 1e-12 && hi >= 1.0 - 1e-12
        };
        if !feasible(&self.ivi()) {
            return Err(StatsError::InfeasibleRanges(Block::Ivi));
        }
        if !feasible(&self.asi()) {
            return Err(StatsError::InfeasibleRanges(Block::Asi));
        }
        Ok(())
    }
}

/// Draws one block: pinned coordinates take their value, the free ones share
/// the remaining mass as a flat Dirichlet draw, retried until every
/// coordinate lies in its range.
fn sample_block<const N: usize, R: Rng + ?Sized>(
    ranges: &[WeightRange; N],
    block: Block,
    rng: &mut R,
) -> Result<[f64; N], StatsError> {
    let mut out = [0.0; N];
    let mut mass = 1.0;
    let mut free = Vec::with_capacity(N);
    for (i, r) in ranges.iter().enumerate() {
        if r.pinned() {
            out[i] = r.lo;
            mass -= r.lo;
        } else {
            free.push(i);
        }
    }
    let ok = |out: &[f64; N]| {
        out.iter().zip(ranges).all(|(x, r)| r.contains(*x))
            && (out.iter().sum::<f64>() - 1.0).abs() <= crate::index::SIMPLEX_TOLERANCE
    };
    if free.is_empty() || mass <= 1e-12 {
        for &i in &free {
            out[i] = 0.0;
        }
        return if ok(&out) {
            Ok(out)
        } else {
            Err(StatsError::InfeasibleRanges(block))
        };
    }
    for _ in 0..MAX_RETRIES {
        let draws: Vec<f64> = free.iter().map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = draws.iter().sum();
        for (&i, d) in free.iter().zip(&draws) {
            out[i] = mass * d / total;
        }
        if ok(&out) {
            return Ok(out);
        }
    }
    Err(StatsError::InfeasibleRanges(block))
}

pub fn sample_weight_simplex<R: Rng + ?Sized>(
    ranges: &WeightRangeSpec,
    rng: &mut R,
) -> Result<WeightConfig, StatsError> {
    ranges.validate()?;
    let a = ranges.alpha;
    let alpha = if a.pinned() { a.lo } else { rng.random_range(a.lo..=a.hi) };
    let ivi = sample_block(&ranges.ivi(), Block::Ivi, rng)?;
    let asi = sample_block(&ranges.asi(), Block::Asi, rng)?;
    Ok(WeightConfig::from_blocks_exact(alpha, ivi, asi)?)
}

/// The random stream of one iteration, fixed by `(seed, iter)` alone so
/// results do not depend on thread scheduling.
pub fn iteration_rng(seed: u64, iter: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iter);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McSample {
    pub iter: u64,
    pub weights: WeightConfig,
    pub mean_scvi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub iterations: u64,
    pub seed: u64,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub p05: f64,
    pub median: f64,
    pub p95: f64,
    pub max: f64,
    /// Mean of each weight over all iterations, keyed by weight name.
    pub weight_means: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloRun {
    pub seed: u64,
    pub ranges: WeightRangeSpec,
    pub samples: Vec<McSample>,
}

impl MonteCarloRun {
    pub fn means(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.mean_scvi).collect()
    }

    pub fn summary(&self) -> RunSummary {
        let xs = self.means();
        let s = sorted(&xs);
        let weight_means = WeightKey::ALL
            .iter()
            .map(|&k| {
                let ws: Vec<f64> = self.samples.iter().map(|m| m.weights.get(k)).collect();
                (k.name().to_string(), mean(&ws).unwrap_or(0.0))
            })
            .collect();
        RunSummary {
            iterations: xs.len() as u64,
            seed: self.seed,
            mean: mean(&xs).unwrap_or(0.0),
            std: population_std(&xs).unwrap_or(0.0),
            min: s.first().copied().unwrap_or(0.0),
            p05: percentile_sorted(&s, 5.0).unwrap_or(0.0),
            median: percentile_sorted(&s, 50.0).unwrap_or(0.0),
            p95: percentile_sorted(&s, 95.0).unwrap_or(0.0),
            max: s.last().copied().unwrap_or(0.0),
            weight_means,
        }
    }
}

pub fn monte_carlo(
    data: &[Composites],
    ranges: &WeightRangeSpec,
    iterations: u64,
    seed: u64,
) -> Result<MonteCarloRun, StatsError> {
    if data.is_empty() {
        return Err(StatsError::EmptyDataset);
    }
    if iterations == 0 {
        return Err(StatsError::NoIterations);
    }
    ranges.validate()?;
    let samples = (0..iterations)
        .into_par_iter()
        .map(|iter| {
            let mut rng = iteration_rng(seed, iter);
            let weights = sample_weight_simplex(ranges, &mut rng)?;
            let total: f64 = data.iter().map(|c| c.scvi(&weights)).sum();
            Ok(McSample {
                iter,
                weights,
                mean_scvi: total / data.len() as f64,
            })
        })
        .collect::<Result<Vec<_>, StatsError>>()?;
    Ok(MonteCarloRun {
        seed,
        ranges: *ranges,
        samples,
    })
}

/// One JSON object per iteration.
pub fn write_run_jsonl<W: Write>(run: &MonteCarloRun, mut out: W) -> std::io::Result<()> {
    for s in &run.samples {
        serde_json::to_writer(&mut out, s)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::score::Score;

    #[test]
    fn pinned_corner() {
        let mut r = WeightRangeSpec::default();
        r.w_f = WeightRange::new(1.0, 1.0);
        let w = sample_weight_simplex(&r, &mut iteration_rng(1, 0)).unwrap();
        assert_eq!(w.asi_weights(), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn infeasible() {
        let mut r = WeightRangeSpec::default();
        r.w_a = WeightRange::new(0.6, 0.7);
        r.w_b = WeightRange::new(0.6, 0.7);
        assert!(matches!(
            sample_weight_simplex(&r, &mut iteration_rng(1, 0)),
            Err(StatsError::InfeasibleRanges(Block::Ivi))
        ));
    }

    #[test]
    fn bad_interval() {
        let mut r = WeightRangeSpec::default();
        r.alpha = WeightRange::new(0.8, 0.2);
        assert!(matches!(r.validate(), Err(StatsError::InvalidRange { key: "alpha", .. })));
    }

    #[test]
    fn toml_ranges_default_to_full() {
        let r: WeightRangeSpec = toml::from_str("alpha = [0.2, 0.8]\nw_e = [0.3, 0.5]").unwrap();
        assert_eq!(r.alpha, WeightRange::new(0.2, 0.8));
        assert_eq!(r.w_a, WeightRange::FULL);
        assert!(toml::from_str::<WeightRangeSpec>("w_z = [0, 1]").is_err());
    }

    #[test]
    fn constant_dataset() {
        let data = vec![Composites::uniform(Score::new(3.0).unwrap()); 4];
        let run = monte_carlo(&data, &WeightRangeSpec::default(), 50, 9).unwrap();
        for s in &run.samples {
            assert!((s.mean_scvi - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic() {
        let data = vec![
            Composites::uniform(Score::new(1.0).unwrap()),
            Composites {
                ivi: [Score::new(4.0).unwrap(), Score::ZERO, Score::MAX, Score::new(2.0).unwrap()],
                asi: [Score::new(1.5).unwrap(), Score::ZERO, Score::MAX],
            },
        ];
        let a = monte_carlo(&data, &WeightRangeSpec::default(), 100, 42).unwrap();
        let b = monte_carlo(&data, &WeightRangeSpec::default(), 100, 42).unwrap();
        let (mut x, mut y) = (Vec::new(), Vec::new());
        write_run_jsonl(&a, &mut x).unwrap();
        write_run_jsonl(&b, &mut y).unwrap();
        assert_eq!(x, y);
        let c = monte_carlo(&data, &WeightRangeSpec::default(), 100, 43).unwrap();
        assert_ne!(a, c);
    }
}
