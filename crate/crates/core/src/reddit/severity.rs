//! Per-scam-type attack severity components: frequency, consequence, and
//! sophistication.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::report::{ScamReport, ScamType};
use super::RedditError;
use crate::score::Score;
use crate::stats::describe::Band;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsequenceConfig {
    /// Weight of the financial component; the emotional one gets the rest.
    pub financial_weight: f64,
}

impl Default for ConsequenceConfig {
    fn default() -> Self {
        ConsequenceConfig {
            financial_weight: 0.5,
        }
    }
}

impl ConsequenceConfig {
    pub fn new(financial_weight: f64) -> Result<Self, RedditError> {
        if !(0.0..=1.0).contains(&financial_weight) {
            return Err(RedditError::BadConsequenceWeight(financial_weight));
        }
        Ok(ConsequenceConfig { financial_weight })
    }
}

/// Severity components of one scam type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypeSeverity {
    pub scam_type: ScamType,
    pub reports: usize,
    pub successes: usize,
    pub frequency: Score,
    pub financial: Score,
    pub emotional: Score,
    pub consequence: Score,
    /// `None` when no report of this type carries a success flag.
    pub sophistication: Option<Score>,
}

fn annotated(reports: &[ScamReport]) -> impl Iterator<Item = (&ScamReport, ScamType, bool)> {
    reports
        .iter()
        .filter_map(|r| r.annotation.as_ref().map(|a| (r, a.scam_type, a.success)))
}

fn net_emotion(r: &ScamReport) -> Result<f64, RedditError> {
    r.emotion
        .map(|e| e.net_negative())
        .ok_or_else(|| RedditError::MissingEmotion(r.id.clone()))
}

/// Computes all three components for every scam type in one pass. Types
/// without reports get zero frequency and consequence.
pub fn severity_table(
    reports: &[ScamReport],
    cfg: &ConsequenceConfig,
) -> Result<BTreeMap<ScamType, TypeSeverity>, RedditError> {
    #[derive(Default)]
    struct Acc {
        count: usize,
        successes: usize,
        loss_sum: f64,
        loss_n: usize,
        net_sum: f64,
    }
    let mut acc: BTreeMap<ScamType, Acc> = BTreeMap::new();
    let mut nets = Vec::new();
    let mut max_loss = 0.0f64;
    for (r, t, success) in annotated(reports) {
        let net = net_emotion(r)?;
        nets.push(net);
        let a = acc.entry(t).or_default();
        a.count += 1;
        a.successes += success as usize;
        a.net_sum += net;
        if let Some(l) = r.loss {
            a.loss_sum += l;
            a.loss_n += 1;
            max_loss = max_loss.max(l);
        }
    }
    if nets.is_empty() {
        return Err(RedditError::EmptyCorpus);
    }
    let max_count = acc.values().map(|a| a.count).max().unwrap_or(0);
    let band = Band::of(&nets);
    let fw = cfg.financial_weight;

    let mut out = BTreeMap::new();
    for t in ScamType::ALL {
        let row = match acc.get(&t) {
            None => TypeSeverity {
                scam_type: t,
                reports: 0,
                successes: 0,
                frequency: Score::ZERO,
                financial: Score::ZERO,
                emotional: Score::ZERO,
                consequence: Score::ZERO,
                sophistication: None,
            },
            Some(a) => {
                let frequency = 5.0 * a.count as f64 / max_count as f64;
                let financial = if a.loss_n == 0 || max_loss <= 0.0 {
                    0.0
                } else {
                    let mean = a.loss_sum / a.loss_n as f64;
                    5.0 * mean.ln_1p() / max_loss.ln_1p()
                };
                let emotional = band.rescale(a.net_sum / a.count as f64);
                TypeSeverity {
                    scam_type: t,
                    reports: a.count,
                    successes: a.successes,
                    frequency: Score::saturating(frequency),
                    financial: Score::saturating(financial),
                    emotional: Score::saturating(emotional),
                    consequence: Score::saturating(fw * financial + (1.0 - fw) * emotional),
                    sophistication: Some(Score::saturating(
                        5.0 * a.successes as f64 / a.count as f64,
                    )),
                }
            }
        };
        out.insert(t, row);
    }
    Ok(out)
}

/// Report count of `t` as a share of the most frequent type, times 5.
pub fn scam_frequency(reports: &[ScamReport], t: ScamType) -> Result<Score, RedditError> {
    let mut counts: BTreeMap<ScamType, usize> = BTreeMap::new();
    for (_, ty, _) in annotated(reports) {
        *counts.entry(ty).or_default() += 1;
    }
    let max = counts.values().copied().max().ok_or(RedditError::EmptyCorpus)?;
    let c = counts.get(&t).copied().unwrap_or(0);
    Ok(Score::saturating(5.0 * c as f64 / max as f64))
}

pub fn scam_consequence(
    reports: &[ScamReport],
    t: ScamType,
    cfg: &ConsequenceConfig,
) -> Result<Score, RedditError> {
    Ok(severity_table(reports, cfg)?[&t].consequence)
}

/// Share of successful scams among flagged reports of `t`, times 5.
pub fn scam_sophistication(reports: &[ScamReport], t: ScamType) -> Result<Score, RedditError> {
    let (mut flagged, mut successes) = (0usize, 0usize);
    for (_, ty, success) in annotated(reports) {
        if ty == t {
            flagged += 1;
            successes += success as usize;
        }
    }
    if flagged == 0 {
        return Err(RedditError::NoFlaggedReports(t));
    }
    Ok(Score::saturating(5.0 * successes as f64 / flagged as f64))
}
