//! Small descriptive-statistics helpers shared across modules.

pub fn mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        None
    } else {
        Some(xs.iter().sum::<f64>() / xs.len() as f64)
    }
}

/// Population standard deviation (divisor n).
pub fn population_std(xs: &[f64]) -> Option<f64> {
    let m = mean(xs)?;
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64;
    Some(var.sqrt())
}

/// Sample standard deviation (divisor n - 1).
pub fn sample_std(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs)?;
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    Some(var.sqrt())
}

/// Percentile with linear interpolation between closest ranks, `p` in
/// `[0, 100]`. `sorted` must be ascending.
pub fn percentile_sorted(sorted: &[f64], p: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let pos = (p / 100.0).clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    Some(sorted[lo] + (sorted[hi] - sorted[lo]) * frac)
}

pub fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Clamped linear map of `x` from `[lo, hi]` onto `[0, 5]`. A degenerate
/// band (`hi <= lo`) maps values above `lo` to 5 and the rest to 0.
pub fn rescale_band(x: f64, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        (5.0 * (x - lo) / (hi - lo)).clamp(0.0, 5.0)
    } else if x > lo {
        5.0
    } else {
        0.0
    }
}

/// The 5th-95th percentile band of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn of(xs: &[f64]) -> Band {
        let s = sorted(xs);
        Band {
            lo: percentile_sorted(&s, 5.0).unwrap_or(0.0),
            hi: percentile_sorted(&s, 95.0).unwrap_or(0.0),
        }
    }

    pub fn rescale(&self, x: f64) -> f64 {
        rescale_band(x, self.lo, self.hi)
    }
}
