//! Scam-report pipeline: text normalization, lexical features, annotation,
//! and per-report IVI / per-type ASI scoring.
//!
//! Scoring is two-pass. The first pass normalizes, annotates, and extracts
//! features for every report and collects corpus percentiles; the second
//! scores each report against them.

mod annotate;
mod factors;
mod lexicon;
mod report;
mod severity;
mod text;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use annotate::{
    annotate, provider_from_env, AnnotationProvider, KeywordProvider, RemoteProvider, ENV_KEY,
    ENV_URL, SUCCESS_KEYWORDS, TYPE_KEYWORDS,
};
pub use factors::{awareness_from_posts, experience, reddit_ivi_factors, CorpusContext, FeatureBands};
pub use lexicon::{
    extract_features, words, LexicalFeatures, Lexicon, LexiconError, LexiconSet, REQUIRED_CATEGORIES,
};
pub use report::{read_reports, Annotation, Emotion, ReportError, ScamReport, ScamType};
pub use severity::{
    scam_consequence, scam_frequency, scam_sophistication, severity_table, ConsequenceConfig,
    TypeSeverity,
};
pub use text::{
    expand_contractions, normalize_text, parse_table, reduce_elongation, remove_urls, replace_slang,
    strip_mentions, strip_symbols, CONTRACTION_TABLE, SLANG_TABLE, TABLES_VERSION,
};

use crate::index::{compute_ivi, AsiFactors, Composites, IndexError, WeightConfig};
use crate::score::Score;

#[derive(Debug, Error)]
pub enum RedditError {
    #[error("corpus has no annotated reports")]
    EmptyCorpus,
    #[error("no report of type {0} carries a success flag")]
    NoFlaggedReports(ScamType),
    #[error("report {0} has no annotation")]
    MissingAnnotation(String),
    #[error("report {0} has no emotion scores")]
    MissingEmotion(String),
    #[error("annotation provider unavailable: {0}")]
    ProviderUnavailable(String),
    #[error("financial weight must lie in [0, 1], got {0}")]
    BadConsequenceWeight(f64),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Index(#[from] IndexError),
}

/// Scores of one report. IVI comes from the report itself, ASI from its
/// scam type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportScore {
    pub id: String,
    pub scam_type: ScamType,
    pub success: bool,
    pub normalized: String,
    pub features: LexicalFeatures,
    pub composites: Composites,
    pub ivi: Score,
    pub asi: Score,
    pub scvi: Score,
}

/// A report the pipeline could not score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusScores {
    pub reports: Vec<ReportScore>,
    pub types: Vec<TypeSeverity>,
    pub skipped: Vec<Skipped>,
    pub lexicon_version: String,
    pub tables_version: String,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub lexicons: LexiconSet,
    pub consequence: ConsequenceConfig,
    pub weights: WeightConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            lexicons: LexiconSet::bundled(),
            consequence: ConsequenceConfig::default(),
            weights: WeightConfig::uniform(),
        }
    }
}

/// Emotion scores from lexicon rates, for reports that arrive without them.
fn lexicon_emotion(f: &LexicalFeatures) -> Emotion {
    Emotion {
        positive: f.posemo,
        negative: f.negemo,
    }
}

pub fn score_corpus(
    mut reports: Vec<ScamReport>,
    provider: &dyn AnnotationProvider,
    cfg: &PipelineConfig,
) -> Result<CorpusScores, RedditError> {
    // pass 1: per-report work, then corpus statistics
    reports.par_iter_mut().for_each(|r| r.normalized = normalize_text(&r.text));
    let mut skipped = Vec::new();
    for r in reports.iter_mut() {
        if let Err(e) = annotate(r, provider) {
            skipped.push(Skipped {
                id: r.id.clone(),
                reason: e.to_string(),
            });
        }
    }
    let features: Vec<LexicalFeatures> = reports
        .par_iter()
        .map(|r| extract_features(&r.normalized, &cfg.lexicons))
        .collect::<Result<_, _>>()?;
    for (r, f) in reports.iter_mut().zip(&features) {
        if r.emotion.is_none() {
            r.emotion = Some(lexicon_emotion(f));
        }
    }
    let ctx = CorpusContext::build(&reports, &features);
    let table = severity_table(&reports, &cfg.consequence)?;
    let asi_of: BTreeMap<ScamType, Score> = table
        .iter()
        .filter_map(|(t, s)| {
            let soph = s.sophistication?;
            let f = AsiFactors::from_composites(s.frequency, s.consequence, soph);
            Some(crate::index::compute_asi(&f, &cfg.weights).map(|a| (*t, a)))
        })
        .collect::<Result<_, _>>()?;

    // pass 2: score each annotated report
    let scored: Vec<ReportScore> = reports
        .par_iter()
        .zip(&features)
        .filter(|(r, _)| r.annotation.is_some())
        .map(|(r, f)| {
            let ann = r.annotation.as_ref().expect("filtered");
            let ivi_f = reddit_ivi_factors(r, f, &ctx)?;
            let s = &table[&ann.scam_type];
            let asi_f = AsiFactors::from_composites(
                s.frequency,
                s.consequence,
                s.sophistication.unwrap_or(Score::ZERO),
            );
            let composites = Composites::from_factors(&ivi_f, &asi_f)?;
            let ivi = compute_ivi(&ivi_f, &cfg.weights)?;
            let asi = asi_of[&ann.scam_type];
            let b = crate::index::compute_scvi(ivi, asi, &cfg.weights);
            Ok(ReportScore {
                id: r.id.clone(),
                scam_type: ann.scam_type,
                success: ann.success,
                normalized: r.normalized.clone(),
                features: *f,
                composites,
                ivi,
                asi,
                scvi: b.scvi,
            })
        })
        .collect::<Result<_, RedditError>>()?;

    Ok(CorpusScores {
        reports: scored,
        types: table.into_values().collect(),
        skipped,
        lexicon_version: cfg.lexicons.version.clone(),
        tables_version: TABLES_VERSION.to_string(),
    })
}
