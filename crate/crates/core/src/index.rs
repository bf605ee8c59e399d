//! The composite index model: factor composition, weight validation, and the
//! IVI / ASI / SCVI computations.
//!
//! ```text
//! SCVI = alpha * IVI + beta * ASI
//! IVI  = w_A * A + w_B * B + w_P * P + w_E * E
//! ASI  = w_F * F + w_C * C + w_S * S
//! ```
//!
//! Each composite factor (A, B, ...) is the mean of its present sub-factors so
//! that composites stay on the `[0, 5]` scale.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::score::Score;

/// Block sums within this distance of 1 are renormalized; beyond it they are
/// rejected.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-6;

/// Tolerance on the simplex invariants of a validated [`WeightConfig`].
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IndexError {
    #[error("weight {0} is negative")]
    NegativeWeight(WeightKey),
    #[error("weight {0} is not finite")]
    NonFinite(WeightKey),
    #[error("{block} weights sum to {sum}, expected 1")]
    SimplexViolation { block: Block, sum: f64 },
    #[error("composite factor has no present sub-scores")]
    EmptyFactor,
    #[error("composite factor {0} is missing")]
    MissingFactor(Factor),
}

/// The three weight blocks, each constrained to a probability simplex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Block {
    Scvi,
    Ivi,
    Asi,
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Block::Scvi => "alpha/beta",
            Block::Ivi => "IVI",
            Block::Asi => "ASI",
        })
    }
}

/// The seven composite factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Factor {
    Awareness,
    Behavior,
    Psychology,
    Experience,
    Frequency,
    Consequence,
    Sophistication,
}

impl Factor {
    pub const ALL: [Factor; 7] = [
        Factor::Awareness,
        Factor::Behavior,
        Factor::Psychology,
        Factor::Experience,
        Factor::Frequency,
        Factor::Consequence,
        Factor::Sophistication,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Factor::Awareness => "A",
            Factor::Behavior => "B",
            Factor::Psychology => "P",
            Factor::Experience => "E",
            Factor::Frequency => "F",
            Factor::Consequence => "C",
            Factor::Sophistication => "S",
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Names one tunable weight. `Alpha` stands for the alpha/beta pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKey {
    Alpha,
    WA,
    WB,
    WP,
    WE,
    WF,
    WC,
    WS,
}

impl WeightKey {
    pub const ALL: [WeightKey; 8] = [
        WeightKey::Alpha,
        WeightKey::WA,
        WeightKey::WB,
        WeightKey::WP,
        WeightKey::WE,
        WeightKey::WF,
        WeightKey::WC,
        WeightKey::WS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WeightKey::Alpha => "alpha",
            WeightKey::WA => "w_a",
            WeightKey::WB => "w_b",
            WeightKey::WP => "w_p",
            WeightKey::WE => "w_e",
            WeightKey::WF => "w_f",
            WeightKey::WC => "w_c",
            WeightKey::WS => "w_s",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        WeightKey::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn block(self) -> Block {
        match self {
            WeightKey::Alpha => Block::Scvi,
            WeightKey::WA | WeightKey::WB | WeightKey::WP | WeightKey::WE => Block::Ivi,
            WeightKey::WF | WeightKey::WC | WeightKey::WS => Block::Asi,
        }
    }
}

impl fmt::Display for WeightKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Unvalidated weights, as read from a config file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawWeights {
    pub alpha: f64,
    pub beta: f64,
    pub w_a: f64,
    pub w_b: f64,
    pub w_p: f64,
    pub w_e: f64,
    pub w_f: f64,
    pub w_c: f64,
    pub w_s: f64,
}

impl RawWeights {
    pub fn uniform() -> Self {
        RawWeights {
            alpha: 0.5,
            beta: 0.5,
            w_a: 0.25,
            w_b: 0.25,
            w_p: 0.25,
            w_e: 0.25,
            w_f: 1.0 / 3.0,
            w_c: 1.0 / 3.0,
            w_s: 1.0 / 3.0,
        }
    }
}

/// Validated weights: alpha + beta = 1, the four IVI weights sum to 1, and the
/// three ASI weights sum to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "RawWeights")]
pub struct WeightConfig {
    alpha: f64,
    beta: f64,
    ivi: [f64; 4],
    asi: [f64; 3],
}

impl WeightConfig {
    pub fn uniform() -> Self {
        validate_weights(&RawWeights::uniform()).expect("uniform weights are valid")
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `[w_A, w_B, w_P, w_E]`
    pub fn ivi_weights(&self) -> [f64; 4] {
        self.ivi
    }

    /// `[w_F, w_C, w_S]`
    pub fn asi_weights(&self) -> [f64; 3] {
        self.asi
    }

    pub fn get(&self, key: WeightKey) -> f64 {
        match key {
            WeightKey::Alpha => self.alpha,
            WeightKey::WA => self.ivi[0],
            WeightKey::WB => self.ivi[1],
            WeightKey::WP => self.ivi[2],
            WeightKey::WE => self.ivi[3],
            WeightKey::WF => self.asi[0],
            WeightKey::WC => self.asi[1],
            WeightKey::WS => self.asi[2],
        }
    }

    pub fn to_raw(&self) -> RawWeights {
        RawWeights {
            alpha: self.alpha,
            beta: self.beta,
            w_a: self.ivi[0],
            w_b: self.ivi[1],
            w_p: self.ivi[2],
            w_e: self.ivi[3],
            w_f: self.asi[0],
            w_c: self.asi[1],
            w_s: self.asi[2],
        }
    }

    /// Builds a config from blocks that are already exact simplex points,
    /// such as sampler output. Still checked.
    pub fn from_blocks(alpha: f64, ivi: [f64; 4], asi: [f64; 3]) -> Result<Self, IndexError> {
        validate_weights(&RawWeights {
            alpha,
            beta: 1.0 - alpha,
            w_a: ivi[0],
            w_b: ivi[1],
            w_p: ivi[2],
            w_e: ivi[3],
            w_f: asi[0],
            w_c: asi[1],
            w_s: asi[2],
        })
    }

    /// Builds a config from blocks that already sum to one within
    /// [`SIMPLEX_TOLERANCE`], storing them without renormalizing.
    pub fn from_blocks_exact(alpha: f64, ivi: [f64; 4], asi: [f64; 3]) -> Result<Self, IndexError> {
        let w = WeightConfig {
            alpha,
            beta: 1.0 - alpha,
            ivi,
            asi,
        };
        validate_weights(&w.to_raw())?;
        if !w.satisfies_simplex() {
            let sum = |xs: &[f64]| xs.iter().sum::<f64>();
            let (block, sum) = if (sum(&ivi) - 1.0).abs() > SIMPLEX_TOLERANCE {
                (Block::Ivi, sum(&ivi))
            } else if (sum(&asi) - 1.0).abs() > SIMPLEX_TOLERANCE {
                (Block::Asi, sum(&asi))
            } else {
                (Block::Scvi, alpha + (1.0 - alpha))
            };
            return Err(IndexError::SimplexViolation { block, sum });
        }
        Ok(w)
    }

    /// True when every block sums to one within [`SIMPLEX_TOLERANCE`] and no
    /// weight is negative.
    pub fn satisfies_simplex(&self) -> bool {
        let ok = |xs: &[f64]| {
            xs.iter().all(|&x| x >= 0.0)
                && (xs.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOLERANCE
        };
        ok(&[self.alpha, self.beta]) && ok(&self.ivi) && ok(&self.asi)
    }
}

impl From<WeightConfig> for RawWeights {
    fn from(w: WeightConfig) -> Self {
        w.to_raw()
    }
}

impl<'de> Deserialize<'de> for WeightConfig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawWeights::deserialize(d)?;
        validate_weights(&raw).map_err(serde::de::Error::custom)
    }
}

fn check_block<const N: usize>(
    block: Block,
    entries: [(WeightKey, f64); N],
) -> Result<[f64; N], IndexError> {
    for (key, w) in entries {
        if !w.is_finite() {
            return Err(IndexError::NonFinite(key));
        }
        if w < 0.0 {
            return Err(IndexError::NegativeWeight(key));
        }
    }
    let sum: f64 = entries.iter().map(|(_, w)| w).sum();
    if (sum - 1.0).abs() > RENORMALIZE_TOLERANCE {
        return Err(IndexError::SimplexViolation { block, sum });
    }
    Ok(entries.map(|(_, w)| w / sum))
}

/// Validates the three weight blocks. Blocks whose sum is within
/// [`RENORMALIZE_TOLERANCE`] of 1 are divided by their sum.
pub fn validate_weights(raw: &RawWeights) -> Result<WeightConfig, IndexError> {
    // beta carries no key of its own; report problems against alpha
    let [alpha, beta] = check_block(
        Block::Scvi,
        [(WeightKey::Alpha, raw.alpha), (WeightKey::Alpha, raw.beta)],
    )?;
    let ivi = check_block(
        Block::Ivi,
        [
            (WeightKey::WA, raw.w_a),
            (WeightKey::WB, raw.w_b),
            (WeightKey::WP, raw.w_p),
            (WeightKey::WE, raw.w_e),
        ],
    )?;
    let asi = check_block(
        Block::Asi,
        [
            (WeightKey::WF, raw.w_f),
            (WeightKey::WC, raw.w_c),
            (WeightKey::WS, raw.w_s),
        ],
    )?;
    Ok(WeightConfig {
        alpha,
        beta,
        ivi,
        asi,
    })
}

/// Mean of the present sub-scores.
pub fn composite_factor(sub_scores: &[Score]) -> Result<Score, IndexError> {
    if sub_scores.is_empty() {
        return Err(IndexError::EmptyFactor);
    }
    let sum: f64 = sub_scores.iter().map(|s| s.value()).sum();
    Ok(Score::saturating(sum / sub_scores.len() as f64))
}

fn composite_of(subs: &[Option<Score>]) -> Option<Score> {
    let present: Vec<Score> = subs.iter().flatten().copied().collect();
    composite_factor(&present).ok()
}

/// Individual-vulnerability sub-factors. `None` marks an unmeasured
/// sub-factor.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct IviFactors {
    /// A^A: unfamiliarity with the attack.
    pub unfamiliarity: Option<Score>,
    /// A^K: lack of knowledge of protective measures.
    pub protective_knowledge_gap: Option<Score>,
    /// B^R: frequency of risk-enhancing behaviors.
    pub risky_behavior: Option<Score>,
    /// B^S: (lack of) security practices.
    pub security_practice_gap: Option<Score>,
    /// P^C: trust in communications.
    pub trust: Option<Score>,
    /// P^I: risk perception and impulsivity.
    pub impulsivity: Option<Score>,
    /// E^E: past encounters.
    pub past_encounters: Option<Score>,
    /// E^R: responses to past incidents.
    pub incident_response: Option<Score>,
}

impl IviFactors {
    pub fn awareness(&self) -> Option<Score> {
        composite_of(&[self.unfamiliarity, self.protective_knowledge_gap])
    }

    pub fn behavior(&self) -> Option<Score> {
        composite_of(&[self.risky_behavior, self.security_practice_gap])
    }

    pub fn psychology(&self) -> Option<Score> {
        composite_of(&[self.trust, self.impulsivity])
    }

    pub fn experience(&self) -> Option<Score> {
        composite_of(&[self.past_encounters, self.incident_response])
    }

    /// `[A, B, P, E]`, or the first missing composite.
    pub fn composites(&self) -> Result<[Score; 4], IndexError> {
        Ok([
            self.awareness()
                .ok_or(IndexError::MissingFactor(Factor::Awareness))?,
            self.behavior()
                .ok_or(IndexError::MissingFactor(Factor::Behavior))?,
            self.psychology()
                .ok_or(IndexError::MissingFactor(Factor::Psychology))?,
            self.experience()
                .ok_or(IndexError::MissingFactor(Factor::Experience))?,
        ])
    }

    /// Every sub-factor set to `s`.
    pub fn uniform(s: Score) -> Self {
        IviFactors {
            unfamiliarity: Some(s),
            protective_knowledge_gap: Some(s),
            risky_behavior: Some(s),
            security_practice_gap: Some(s),
            trust: Some(s),
            impulsivity: Some(s),
            past_encounters: Some(s),
            incident_response: Some(s),
        }
    }

    /// One sub-factor per composite, the rest missing.
    pub fn from_composites(a: Score, b: Score, p: Score, e: Score) -> Self {
        IviFactors {
            unfamiliarity: Some(a),
            risky_behavior: Some(b),
            trust: Some(p),
            past_encounters: Some(e),
            ..Default::default()
        }
    }
}

/// Attack-severity sub-factors.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AsiFactors {
    /// F^TA: attempted attacks.
    pub attempted: Option<Score>,
    /// F^AA: actual attacks encountered.
    pub actual: Option<Score>,
    /// C^FI: financial impact.
    pub financial: Option<Score>,
    /// C^PI: emotional or psychological impact.
    pub psychological: Option<Score>,
    /// C^SI: impact on personal safety.
    pub safety: Option<Score>,
    /// S^C: mimicry of legitimate communication.
    pub mimicry: Option<Score>,
    /// S^SE: personalization / social engineering.
    pub social_engineering: Option<Score>,
}

impl AsiFactors {
    pub fn frequency(&self) -> Option<Score> {
        composite_of(&[self.attempted, self.actual])
    }

    pub fn consequence(&self) -> Option<Score> {
        composite_of(&[self.financial, self.psychological, self.safety])
    }

    pub fn sophistication(&self) -> Option<Score> {
        composite_of(&[self.mimicry, self.social_engineering])
    }

    /// `[F, C, S]`, or the first missing composite.
    pub fn composites(&self) -> Result<[Score; 3], IndexError> {
        Ok([
            self.frequency()
                .ok_or(IndexError::MissingFactor(Factor::Frequency))?,
            self.consequence()
                .ok_or(IndexError::MissingFactor(Factor::Consequence))?,
            self.sophistication()
                .ok_or(IndexError::MissingFactor(Factor::Sophistication))?,
        ])
    }

    pub fn uniform(s: Score) -> Self {
        AsiFactors {
            attempted: Some(s),
            actual: Some(s),
            financial: Some(s),
            psychological: Some(s),
            safety: Some(s),
            mimicry: Some(s),
            social_engineering: Some(s),
        }
    }

    pub fn from_composites(f: Score, c: Score, s: Score) -> Self {
        AsiFactors {
            attempted: Some(f),
            financial: Some(c),
            mimicry: Some(s),
            ..Default::default()
        }
    }
}

fn dot<const N: usize>(w: &[f64; N], x: &[Score; N]) -> f64 {
    w.iter().zip(x).map(|(w, x)| w * x.value()).sum()
}

pub fn compute_ivi(f: &IviFactors, w: &WeightConfig) -> Result<Score, IndexError> {
    Ok(Score::saturating(dot(&w.ivi, &f.composites()?)))
}

pub fn compute_asi(f: &AsiFactors, w: &WeightConfig) -> Result<Score, IndexError> {
    Ok(Score::saturating(dot(&w.asi, &f.composites()?)))
}

/// The seven composites of one record, `[A, B, P, E]` and `[F, C, S]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Composites {
    pub ivi: [Score; 4],
    pub asi: [Score; 3],
}

impl Composites {
    pub fn from_factors(ivi: &IviFactors, asi: &AsiFactors) -> Result<Self, IndexError> {
        Ok(Composites {
            ivi: ivi.composites()?,
            asi: asi.composites()?,
        })
    }

    pub fn uniform(s: Score) -> Self {
        Composites {
            ivi: [s; 4],
            asi: [s; 3],
        }
    }

    pub fn get(&self, factor: Factor) -> Score {
        match factor {
            Factor::Awareness => self.ivi[0],
            Factor::Behavior => self.ivi[1],
            Factor::Psychology => self.ivi[2],
            Factor::Experience => self.ivi[3],
            Factor::Frequency => self.asi[0],
            Factor::Consequence => self.asi[1],
            Factor::Sophistication => self.asi[2],
        }
    }

    pub fn ivi(&self, w: &WeightConfig) -> f64 {
        dot(&w.ivi, &self.ivi)
    }

    pub fn asi(&self, w: &WeightConfig) -> f64 {
        dot(&w.asi, &self.asi)
    }

    /// SCVI under `w`, unclamped. This is the hot path for sweeps and Monte
    /// Carlo runs.
    pub fn scvi(&self, w: &WeightConfig) -> f64 {
        w.alpha * self.ivi(w) + w.beta * self.asi(w)
    }

    pub fn breakdown(&self, w: &WeightConfig) -> ScoreBreakdown {
        let ivi = Score::saturating(self.ivi(w));
        let asi = Score::saturating(self.asi(w));
        let mut b = compute_scvi(ivi, asi, w);
        b.composites = Some(*self);
        b
    }
}

/// Every intermediate of one SCVI computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub ivi: Score,
    pub asi: Score,
    pub scvi: Score,
    /// Absent when the breakdown was built from IVI/ASI directly.
    pub composites: Option<Composites>,
    pub weights: WeightConfig,
}

impl ScoreBreakdown {
    /// Recomputes SCVI from the stored IVI, ASI, and weights.
    pub fn recompute(&self) -> f64 {
        self.weights.alpha * self.ivi.value() + self.weights.beta * self.asi.value()
    }
}

pub fn compute_scvi(ivi: Score, asi: Score, w: &WeightConfig) -> ScoreBreakdown {
    let scvi = Score::saturating(w.alpha * ivi.value() + w.beta * asi.value());
    ScoreBreakdown {
        ivi,
        asi,
        scvi,
        composites: None,
        weights: *w,
    }
}

/// Full pipeline from sub-factors to a breakdown.
pub fn score_factors(
    ivi: &IviFactors,
    asi: &AsiFactors,
    w: &WeightConfig,
) -> Result<ScoreBreakdown, IndexError> {
    Ok(Composites::from_factors(ivi, asi)?.breakdown(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: f64) -> Score {
        Score::new(v).unwrap()
    }

    fn weights(alpha: f64, ivi: [f64; 4], asi: [f64; 3]) -> WeightConfig {
        WeightConfig::from_blocks(alpha, ivi, asi).unwrap()
    }

    #[test]
    fn uniform_weights_validate() {
        let w = validate_weights(&RawWeights::uniform()).unwrap();
        assert_eq!(w.alpha(), 0.5);
        assert_eq!(w.ivi_weights(), [0.25; 4]);
        assert!(w.satisfies_simplex());
    }

    #[test]
    fn alpha_beta_must_sum_to_one() {
        let raw = RawWeights {
            alpha: 0.6,
            beta: 0.5,
            ..RawWeights::uniform()
        };
        assert!(matches!(
            validate_weights(&raw),
            Err(IndexError::SimplexViolation {
                block: Block::Scvi,
                ..
            })
        ));
    }

    #[test]
    fn small_drift_is_renormalized() {
        let raw = RawWeights {
            w_a: 0.2500001,
            ..RawWeights::uniform()
        };
        let w = validate_weights(&raw).unwrap();
        let sum: f64 = w.ivi_weights().iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);
        let expected = 0.2500001 / 1.0000001;
        assert!((w.get(WeightKey::WA) - expected).abs() < 1e-15);
        assert!((w.get(WeightKey::WB) - 0.25 / 1.0000001).abs() < 1e-15);
    }

    #[test]
    fn bad_weights() {
        let neg = RawWeights {
            w_c: -0.1,
            w_s: 0.1 + 1.0 / 3.0,
            ..RawWeights::uniform()
        };
        assert_eq!(
            validate_weights(&neg),
            Err(IndexError::NegativeWeight(WeightKey::WC))
        );
        let nan = RawWeights {
            w_e: f64::NAN,
            ..RawWeights::uniform()
        };
        assert_eq!(
            validate_weights(&nan),
            Err(IndexError::NonFinite(WeightKey::WE))
        );
        let off = RawWeights {
            w_f: 0.5,
            ..RawWeights::uniform()
        };
        assert!(matches!(
            validate_weights(&off),
            Err(IndexError::SimplexViolation {
                block: Block::Asi,
                ..
            })
        ));
    }

    #[test]
    fn composite_is_mean() {
        assert_eq!(composite_factor(&[s(5.0), s(5.0)]).unwrap(), s(5.0));
        assert_eq!(composite_factor(&[s(0.0)]).unwrap(), s(0.0));
        assert_eq!(composite_factor(&[s(2.0), s(4.0)]).unwrap(), s(3.0));
        assert_eq!(composite_factor(&[]), Err(IndexError::EmptyFactor));
    }

    #[test]
    fn ivi_examples() {
        let w = WeightConfig::uniform();
        let all5 = IviFactors::uniform(s(5.0));
        assert_eq!(compute_ivi(&all5, &w).unwrap(), s(5.0));

        let only_a = weights(0.5, [1.0, 0.0, 0.0, 0.0], [1.0 / 3.0; 3]);
        let f = IviFactors::from_composites(s(4.0), s(0.0), s(0.0), s(0.0));
        assert_eq!(compute_ivi(&f, &only_a).unwrap(), s(4.0));

        let f = IviFactors::from_composites(s(1.0), s(2.0), s(3.0), s(4.0));
        assert_eq!(compute_ivi(&f, &w).unwrap(), s(2.5));
    }

    #[test]
    fn missing_composite_is_named() {
        let f = IviFactors {
            trust: None,
            impulsivity: None,
            ..IviFactors::uniform(s(1.0))
        };
        assert_eq!(
            compute_ivi(&f, &WeightConfig::uniform()),
            Err(IndexError::MissingFactor(Factor::Psychology))
        );
        let a = AsiFactors {
            attempted: None,
            actual: None,
            ..AsiFactors::uniform(s(1.0))
        };
        assert_eq!(
            compute_asi(&a, &WeightConfig::uniform()),
            Err(IndexError::MissingFactor(Factor::Frequency))
        );
    }

    #[test]
    fn partial_sub_pair_still_derives() {
        // iPoll has no B^S
        let f = IviFactors {
            security_practice_gap: None,
            risky_behavior: Some(s(3.0)),
            ..IviFactors::uniform(s(1.0))
        };
        assert_eq!(f.behavior(), Some(s(3.0)));
    }

    #[test]
    fn asi_examples() {
        let w = WeightConfig::uniform();
        let f = AsiFactors::from_composites(s(2.0), s(2.0), s(2.0));
        assert!((compute_asi(&f, &w).unwrap().value() - 2.0).abs() < 1e-12);

        let only_f = weights(0.5, [0.25; 4], [1.0, 0.0, 0.0]);
        let f = AsiFactors::from_composites(s(5.0), s(0.0), s(0.0));
        assert_eq!(compute_asi(&f, &only_f).unwrap(), s(5.0));

        let w = weights(0.5, [0.25; 4], [0.2, 0.3, 0.5]);
        let f = AsiFactors::from_composites(s(1.0), s(2.0), s(4.0));
        assert!((compute_asi(&f, &w).unwrap().value() - 2.8).abs() < 1e-12);
    }

    #[test]
    fn scvi_examples() {
        let w = WeightConfig::uniform();
        assert_eq!(compute_scvi(s(2.0), s(4.0), &w).scvi, s(3.0));

        let ivi_only = weights(1.0, [0.25; 4], [1.0 / 3.0; 3]);
        let b = compute_scvi(s(1.7), s(4.9), &ivi_only);
        assert_eq!(b.scvi, s(1.7));

        let w = weights(0.4, [0.25; 4], [1.0 / 3.0; 3]);
        let b = compute_scvi(s(1.5), s(3.0), &w);
        assert!((b.scvi.value() - 2.4).abs() < 1e-12);
        assert!((b.recompute() - b.scvi.value()).abs() < 1e-12);
    }

    #[test]
    fn weight_config_deserializes_through_validation() {
        let ok = r#"{"alpha":0.5,"beta":0.5,"w_a":0.25,"w_b":0.25,"w_p":0.25,"w_e":0.25,"w_f":0.5,"w_c":0.25,"w_s":0.25}"#;
        let w: WeightConfig = serde_json::from_str(ok).unwrap();
        assert_eq!(w.get(WeightKey::WF), 0.5);
        let bad = ok.replace("\"alpha\":0.5", "\"alpha\":0.9");
        assert!(serde_json::from_str::<WeightConfig>(&bad).is_err());
    }
}
