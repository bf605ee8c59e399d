//! Mapping lexical features and annotations onto the four IVI factors.

use std::collections::HashMap;

use super::lexicon::LexicalFeatures;
use super::report::{ScamReport, ScamType};
use super::RedditError;
use crate::index::IviFactors;
use crate::score::Score;
use crate::stats::describe::Band;

/// Corpus-wide percentile bands for each feature that feeds B or P.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureBands {
    pub negation: Band,
    pub informal: Band,
    pub exclamation: Band,
    pub affect: Band,
    pub posemo: Band,
    pub cogproc: Band,
}

impl FeatureBands {
    pub fn from_features(features: &[LexicalFeatures]) -> Self {
        let band = |f: fn(&LexicalFeatures) -> f64| {
            Band::of(&features.iter().map(f).collect::<Vec<_>>())
        };
        FeatureBands {
            negation: band(|f| f.negation),
            informal: band(|f| f.informal),
            exclamation: band(|f| f.exclamation),
            affect: band(|f| f.affect),
            posemo: band(|f| f.posemo),
            cogproc: band(|f| f.cogproc),
        }
    }
}

/// What the first pass over a corpus collects.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusContext {
    pub bands: FeatureBands,
    author_reports: HashMap<String, usize>,
}

impl CorpusContext {
    pub fn build(reports: &[ScamReport], features: &[LexicalFeatures]) -> Self {
        let mut author_reports = HashMap::new();
        for r in reports {
            if let Some(a) = &r.author {
                *author_reports.entry(a.clone()).or_insert(0) += 1;
            }
        }
        CorpusContext {
            bands: FeatureBands::from_features(features),
            author_reports,
        }
    }

    /// Number of other reports in the corpus by the same author.
    pub fn prior_posts(&self, report: &ScamReport) -> usize {
        report
            .author
            .as_ref()
            .and_then(|a| self.author_reports.get(a))
            .map_or(0, |n| n.saturating_sub(1))
    }
}

/// Awareness gap as a step function of engagement.
pub fn awareness_from_posts(posts: usize) -> Score {
    let v = match posts {
        0 => 5.0,
        1..=2 => 4.0,
        3..=5 => 3.0,
        6..=10 => 2.0,
        11..=20 => 1.0,
        _ => 0.0,
    };
    Score::saturating(v)
}

/// 5 for a victim, 2 for a detected but unsuccessful attempt, 0 otherwise.
pub fn experience(report: &ScamReport) -> Result<Score, RedditError> {
    let a = report
        .annotation
        .as_ref()
        .ok_or_else(|| RedditError::MissingAnnotation(report.id.clone()))?;
    let v = if a.success {
        5.0
    } else if a.scam_type != ScamType::Undetected {
        2.0
    } else {
        0.0
    };
    Ok(Score::saturating(v))
}

pub fn reddit_ivi_factors(
    report: &ScamReport,
    features: &LexicalFeatures,
    ctx: &CorpusContext,
) -> Result<IviFactors, RedditError> {
    let b = &ctx.bands;
    let a = awareness_from_posts(ctx.prior_posts(report));
    let behavior = (b.informal.rescale(features.informal)
        + b.exclamation.rescale(features.exclamation)
        - b.negation.rescale(features.negation))
        / 2.0;
    let psychology = (b.affect.rescale(features.affect) + b.posemo.rescale(features.posemo)
        - b.cogproc.rescale(features.cogproc))
        / 2.0;
    let e = experience(report)?;
    Ok(IviFactors::from_composites(
        a,
        Score::saturating(behavior),
        Score::saturating(psychology),
        e,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn awareness_steps() {
        let cases = [(0, 5.0), (1, 4.0), (2, 4.0), (3, 3.0), (5, 3.0), (6, 2.0), (10, 2.0), (11, 1.0), (20, 1.0), (21, 0.0)];
        for (n, v) in cases {
            assert_eq!(awareness_from_posts(n).value(), v, "{n}");
        }
    }

    #[test]
    fn prior_posts_counts_others() {
        let rs = vec![
            ScamReport::new("1", "").with_author("u"),
            ScamReport::new("2", "").with_author("u"),
            ScamReport::new("3", ""),
        ];
        let ctx = CorpusContext::build(&rs, &[]);
        assert_eq!(ctx.prior_posts(&rs[0]), 1);
        assert_eq!(ctx.prior_posts(&rs[2]), 0);
    }

    #[test]
    fn experience_mapping() {
        let r = ScamReport::new("1", "");
        assert!(matches!(experience(&r), Err(RedditError::MissingAnnotation(_))));
        assert_eq!(experience(&r.clone().annotated(ScamType::Job, true)).unwrap().value(), 5.0);
        assert_eq!(experience(&r.clone().annotated(ScamType::Job, false)).unwrap().value(), 2.0);
        assert_eq!(experience(&r.annotated(ScamType::Undetected, false)).unwrap().value(), 0.0);
    }

    #[test]
    fn features_at_lower_band_give_zero_behavior() {
        let feats: Vec<LexicalFeatures> = (0..21)
            .map(|i| LexicalFeatures {
                informal: i as f64,
                exclamation: i as f64,
                negation: i as f64,
                ..Default::default()
            })
            .collect();
        let rs: Vec<_> = (0..21)
            .map(|i| ScamReport::new(i.to_string(), "").annotated(ScamType::Job, false))
            .collect();
        let ctx = CorpusContext::build(&rs, &feats);
        let low = LexicalFeatures {
            informal: ctx.bands.informal.lo,
            exclamation: ctx.bands.exclamation.lo,
            negation: ctx.bands.negation.lo,
            ..Default::default()
        };
        let f = reddit_ivi_factors(&rs[0], &low, &ctx).unwrap();
        assert_eq!(f.behavior().unwrap().value(), 0.0);
    }
}
