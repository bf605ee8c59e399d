//! Slow, direct re-implementations used as test oracles. None of these call
//! into the library's statistics code.

use scvi::reddit::{ScamReport, ScamType};

/// Rank of each value: count of smaller values plus the midpoint of the
/// block of equal ones. Quadratic on purpose.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| {
            let less = xs.iter().filter(|&&y| y < x).count() as f64;
            let equal = xs.iter().filter(|&&y| y == x).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx: f64 = x.iter().sum::<f64>() / n;
    let my: f64 = y.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let vy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    cov / (vx.sqrt() * vy.sqrt())
}

pub fn spearman_rho(x: &[f64], y: &[f64]) -> f64 {
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Percentile by linear interpolation between closest ranks, `p` in [0, 100].
pub fn percentile(xs: &[f64], p: f64) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pos = p / 100.0 * (s.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    s[lo] + (s[hi] - s[lo]) * (pos - lo as f64)
}

/// Linear map of `[lo, hi]` onto `[0, 5]`, clamped.
pub fn rescale(x: f64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return if x > lo { 5.0 } else { 0.0 };
    }
    (5.0 * (x - lo) / (hi - lo)).clamp(0.0, 5.0)
}

#[derive(Debug, Clone, Copy)]
pub struct TypeOracle {
    pub frequency: f64,
    pub financial: f64,
    pub emotional: f64,
    pub consequence: f64,
    pub sophistication: Option<f64>,
}

/// Severity components of `t`, computed by scanning the whole corpus for
/// every quantity.
pub fn severity(reports: &[ScamReport], t: ScamType, financial_weight: f64) -> TypeOracle {
    let labelled: Vec<&ScamReport> = reports.iter().filter(|r| r.annotation.is_some()).collect();
    let of_type = |ty: ScamType| -> Vec<&ScamReport> {
        labelled
            .iter()
            .copied()
            .filter(|r| r.annotation.as_ref().unwrap().scam_type == ty)
            .collect()
    };
    let mine = of_type(t);

    let max_count = ScamType::ALL.iter().map(|&ty| of_type(ty).len()).max().unwrap();
    let frequency = 5.0 * mine.len() as f64 / max_count as f64;

    let max_loss = labelled.iter().filter_map(|r| r.loss).fold(0.0, f64::max);
    let losses: Vec<f64> = mine.iter().filter_map(|r| r.loss).collect();
    let financial = if losses.is_empty() || max_loss == 0.0 {
        0.0
    } else {
        let mean = losses.iter().sum::<f64>() / losses.len() as f64;
        5.0 * (1.0 + mean).ln() / (1.0 + max_loss).ln()
    };

    let net = |r: &ScamReport| {
        let e = r.emotion.unwrap();
        e.negative - e.positive
    };
    let all_nets: Vec<f64> = labelled.iter().map(|r| net(r)).collect();
    let (lo, hi) = (percentile(&all_nets, 5.0), percentile(&all_nets, 95.0));
    let emotional = if mine.is_empty() {
        0.0
    } else {
        let m = mine.iter().map(|r| net(r)).sum::<f64>() / mine.len() as f64;
        rescale(m, lo, hi)
    };

    let sophistication = if mine.is_empty() {
        None
    } else {
        let wins = mine.iter().filter(|r| r.annotation.as_ref().unwrap().success).count();
        Some(5.0 * wins as f64 / mine.len() as f64)
    };

    TypeOracle {
        frequency,
        financial,
        emotional,
        consequence: if mine.is_empty() {
            0.0
        } else {
            financial_weight * financial + (1.0 - financial_weight) * emotional
        },
        sophistication,
    }
}
