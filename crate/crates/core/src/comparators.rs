//! CVSS-like and SVI-like comparator scores derived from record fields, and
//! the rank-correlation comparison against SCVI.
//!
//! Mappings are TOML documents. A `cvss-like` mapping assigns each of the
//! eight CVSS v3.1 base metrics a level, either fixed or chosen by
//! thresholds on a record field; the base score is then halved onto `[0, 5]`.
//! An `svi-like` mapping lists indicators whose corpus percentile ranks are
//! summed and rescaled onto `[0, 5]`.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::score::Score;
use crate::scores::{is_known_field, FieldValue, ScoreRow, NUMERIC_COLUMNS};
use crate::stats::{spearman, Correlation, StatsError};
use crate::survey::{AGE_GROUPS, GENDERS, RACE_ETHNICITIES};

pub const CVSS_MAPPING: &str = include_str!("../data/cvss_like.mapping.toml");
pub const SVI_MAPPING: &str = include_str!("../data/svi_like.mapping.toml");

/// Percentile ranking needs at least this many records.
pub const MIN_SVI_CORPUS: usize = 10;

#[derive(Debug, Error)]
pub enum ComparatorError {
    #[error("mapping parse error: {0}")]
    Parse(String),
    #[error("mapping references unknown field `{0}`")]
    UnknownField(String),
    #[error("unknown CVSS metric `{0}`")]
    UnknownMetric(String),
    #[error("metric {metric} has no level `{level}`")]
    UnknownLevel { metric: String, level: String },
    #[error("metric {0} is mapped more than once")]
    DuplicateMetric(String),
    #[error("metric {0} is not mapped")]
    UnmappedMetric(String),
    #[error("rule for {0} needs either `fixed` or `field` with `levels`")]
    BadRule(String),
    #[error("indicator `{0}`: text fields need a `values` table, numeric fields must not have one")]
    BadIndicator(String),
    #[error("mapping kind is {found}, expected {expected}")]
    WrongKind { expected: &'static str, found: &'static str },
    #[error("record {record} lacks field `{field}`")]
    MissingField { record: String, field: String },
    #[error("record {record}: value `{value}` of `{field}` has no entry in the mapping")]
    UnmappedValue {
        record: String,
        field: String,
        value: String,
    },
    #[error("percentile ranking needs at least {MIN_SVI_CORPUS} records, got {0}")]
    CorpusTooSmall(usize),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparatorKind {
    CvssLike,
    SviLike,
}

impl ComparatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ComparatorKind::CvssLike => "cvss-like",
            ComparatorKind::SviLike => "svi-like",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub min: f64,
    pub level: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CvssRule {
    pub metric: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    /// Ascending by `min`; the last threshold not above the value applies.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<Threshold>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SviIndicator {
    pub field: String,
    /// Numeric codes for the values of a text field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparatorMapping {
    pub name: String,
    pub kind: ComparatorKind,
    pub version: String,
    #[serde(default, rename = "rule", skip_serializing_if = "Vec::is_empty")]
    pub rules: Vec<CvssRule>,
    #[serde(default, rename = "indicator", skip_serializing_if = "Vec::is_empty")]
    pub indicators: Vec<SviIndicator>,
}

/// CVSS v3.1 base metric levels and their numeric weights. PR weights are
/// for unchanged scope; see [`pr_weight`].
const METRICS: [(&str, &[(&str, f64)]); 8] = [
    ("AV", &[("N", 0.85), ("A", 0.62), ("L", 0.55), ("P", 0.2)]),
    ("AC", &[("L", 0.77), ("H", 0.44)]),
    ("PR", &[("N", 0.85), ("L", 0.62), ("H", 0.27)]),
    ("UI", &[("N", 0.85), ("R", 0.62)]),
    ("S", &[("U", 0.0), ("C", 0.0)]),
    ("C", &[("H", 0.56), ("L", 0.22), ("N", 0.0)]),
    ("I", &[("H", 0.56), ("L", 0.22), ("N", 0.0)]),
    ("A", &[("H", 0.56), ("L", 0.22), ("N", 0.0)]),
];

fn metric_weight(metric: &str, level: &str) -> Option<f64> {
    METRICS
        .iter()
        .find(|(m, _)| *m == metric)?
        .1
        .iter()
        .find(|(l, _)| *l == level)
        .map(|(_, w)| *w)
}

fn pr_weight(level: &str, scope_changed: bool) -> f64 {
    match (level, scope_changed) {
        ("L", true) => 0.68,
        ("H", true) => 0.5,
        _ => metric_weight("PR", level).expect("validated level"),
    }
}

fn is_text_field(name: &str) -> bool {
    is_known_field(name) && !NUMERIC_COLUMNS.contains(&name)
}

impl ComparatorMapping {
    pub fn bundled_cvss() -> Self {
        load_mapping(CVSS_MAPPING).expect("bundled mapping is valid")
    }

    pub fn bundled_svi() -> Self {
        load_mapping(SVI_MAPPING).expect("bundled mapping is valid")
    }

    fn validate(&self) -> Result<(), ComparatorError> {
        match self.kind {
            ComparatorKind::CvssLike => {
                let mut seen = BTreeMap::new();
                for r in &self.rules {
                    if !METRICS.iter().any(|(m, _)| *m == r.metric) {
                        return Err(ComparatorError::UnknownMetric(r.metric.clone()));
                    }
                    if seen.insert(r.metric.as_str(), ()).is_some() {
                        return Err(ComparatorError::DuplicateMetric(r.metric.clone()));
                    }
                    let levels: Vec<&str> = match (&r.fixed, &r.field) {
                        (Some(l), None) if r.levels.is_empty() => vec![l.as_str()],
                        (None, Some(f)) if !r.levels.is_empty() => {
                            if !NUMERIC_COLUMNS.contains(&f.as_str()) {
                                return Err(ComparatorError::UnknownField(f.clone()));
                            }
                            if r.levels.iter().any(|t| !t.min.is_finite())
                                || r.levels.windows(2).any(|w| w[0].min >= w[1].min)
                            {
                                return Err(ComparatorError::BadRule(r.metric.clone()));
                            }
                            r.levels.iter().map(|t| t.level.as_str()).collect()
                        }
                        _ => return Err(ComparatorError::BadRule(r.metric.clone())),
                    };
                    for l in levels {
                        if metric_weight(&r.metric, l).is_none() {
                            return Err(ComparatorError::UnknownLevel {
                                metric: r.metric.clone(),
                                level: l.to_string(),
                            });
                        }
                    }
                }
                for (m, _) in METRICS {
                    if !seen.contains_key(m) {
                        return Err(ComparatorError::UnmappedMetric(m.to_string()));
                    }
                }
            }
            ComparatorKind::SviLike => {
                if self.indicators.is_empty() {
                    return Err(ComparatorError::Parse("svi-like mapping has no indicators".into()));
                }
                for ind in &self.indicators {
                    if !is_known_field(&ind.field) {
                        return Err(ComparatorError::UnknownField(ind.field.clone()));
                    }
                    let text = is_text_field(&ind.field);
                    let ok = match &ind.values {
                        Some(v) => text && v.values().all(|x| x.is_finite()),
                        None => !text,
                    };
                    if !ok {
                        return Err(ComparatorError::BadIndicator(ind.field.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    fn expect(&self, kind: ComparatorKind) -> Result<(), ComparatorError> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(ComparatorError::WrongKind {
                expected: kind.as_str(),
                found: self.kind.as_str(),
            })
        }
    }
}

pub fn load_mapping(doc: &str) -> Result<ComparatorMapping, ComparatorError> {
    let m: ComparatorMapping = toml::from_str(doc).map_err(|e| ComparatorError::Parse(e.to_string()))?;
    m.validate()?;
    Ok(m)
}

/// CVSS v3.1 "Roundup": the smallest one-decimal number not below `x`,
/// computed on integers to avoid floating-point artifacts.
pub fn roundup(x: f64) -> f64 {
    let i = (x * 100_000.0).round() as i64;
    if i % 10_000 == 0 {
        i as f64 / 100_000.0
    } else {
        ((i / 10_000) + 1) as f64 / 10.0
    }
}

/// Base score on the native `[0, 10]` scale from metric levels keyed by
/// metric abbreviation.
pub fn cvss_base_score(levels: &BTreeMap<String, String>) -> f64 {
    let l = |m: &str| levels[m].as_str();
    let w = |m: &str| metric_weight(m, l(m)).expect("validated level");
    let changed = l("S") == "C";
    let iss = 1.0 - (1.0 - w("C")) * (1.0 - w("I")) * (1.0 - w("A"));
    let impact = if changed {
        7.52 * (iss - 0.029) - 3.25 * (iss - 0.02).powi(15)
    } else {
        6.42 * iss
    };
    if impact <= 0.0 {
        return 0.0;
    }
    let exploitability = 8.22 * w("AV") * w("AC") * pr_weight(l("PR"), changed) * w("UI");
    if changed {
        roundup((1.08 * (impact + exploitability)).min(10.0))
    } else {
        roundup((impact + exploitability).min(10.0))
    }
}

/// The metric levels `mapping` assigns to `row`.
pub fn cvss_levels(
    row: &ScoreRow,
    mapping: &ComparatorMapping,
) -> Result<BTreeMap<String, String>, ComparatorError> {
    mapping.expect(ComparatorKind::CvssLike)?;
    let mut out = BTreeMap::new();
    for r in &mapping.rules {
        let level = match (&r.fixed, &r.field) {
            (Some(l), _) => l.clone(),
            (None, Some(f)) => {
                let v = row.get(f).ok_or_else(|| ComparatorError::MissingField {
                    record: row.id.clone(),
                    field: f.clone(),
                })?;
                r.levels
                    .iter()
                    .rev()
                    .find(|t| t.min <= v)
                    .unwrap_or(&r.levels[0])
                    .level
                    .clone()
            }
            (None, None) => unreachable!("validated"),
        };
        out.insert(r.metric.clone(), level);
    }
    Ok(out)
}

/// CVSS-like score of one record, halved onto `[0, 5]`.
pub fn cvss_like(row: &ScoreRow, mapping: &ComparatorMapping) -> Result<Score, ComparatorError> {
    let base = cvss_base_score(&cvss_levels(row, mapping)?);
    Ok(Score::saturating(base / 2.0))
}

/// Excel-style PERCENTRANK.INC: the share of other values strictly below
/// `x`, `(count below) / (n - 1)`. Ties share the lowest rank.
pub fn percent_rank_inc(sorted: &[f64], x: f64) -> f64 {
    if sorted.len() < 2 {
        return 0.0;
    }
    let below = sorted.partition_point(|v| *v < x);
    below as f64 / (sorted.len() - 1) as f64
}

fn indicator_value(row: &ScoreRow, ind: &SviIndicator) -> Result<f64, ComparatorError> {
    let missing = || ComparatorError::MissingField {
        record: row.id.clone(),
        field: ind.field.clone(),
    };
    match (row.field(&ind.field).ok_or_else(missing)?, &ind.values) {
        (FieldValue::Num(v), None) => Ok(v),
        (FieldValue::Text(t), Some(table)) => {
            table
                .get(t)
                .copied()
                .ok_or_else(|| ComparatorError::UnmappedValue {
                    record: row.id.clone(),
                    field: ind.field.clone(),
                    value: t.to_string(),
                })
        }
        _ => Err(missing()),
    }
}

/// Corpus percentile pre-pass for SVI-like scoring.
#[derive(Debug, Clone)]
pub struct SviRanker {
    mapping: ComparatorMapping,
    columns: Vec<Vec<f64>>,
}

impl SviRanker {
    pub fn fit(corpus: &[ScoreRow], mapping: &ComparatorMapping) -> Result<Self, ComparatorError> {
        mapping.expect(ComparatorKind::SviLike)?;
        if corpus.len() < MIN_SVI_CORPUS {
            return Err(ComparatorError::CorpusTooSmall(corpus.len()));
        }
        let mut columns = Vec::with_capacity(mapping.indicators.len());
        for ind in &mapping.indicators {
            let mut col = corpus
                .iter()
                .map(|r| indicator_value(r, ind))
                .collect::<Result<Vec<_>, _>>()?;
            col.sort_by(f64::total_cmp);
            columns.push(col);
        }
        Ok(SviRanker {
            mapping: mapping.clone(),
            columns,
        })
    }

    pub fn score(&self, row: &ScoreRow) -> Result<Score, ComparatorError> {
        let mut total = 0.0;
        for (ind, col) in self.mapping.indicators.iter().zip(&self.columns) {
            total += percent_rank_inc(col, indicator_value(row, ind)?);
        }
        Ok(Score::saturating(total * 5.0 / self.columns.len() as f64))
    }
}

/// SVI-like scores for every record of a corpus.
pub fn svi_like(corpus: &[ScoreRow], mapping: &ComparatorMapping) -> Result<Vec<Score>, ComparatorError> {
    let ranker = SviRanker::fit(corpus, mapping)?;
    corpus.iter().map(|r| ranker.score(r)).collect()
}

/// One record with all three indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparedRow {
    pub id: String,
    pub gender: String,
    pub race_ethnicity: String,
    pub age_group: String,
    pub scvi: f64,
    pub cvss: f64,
    pub svi: f64,
}

pub const INDEX_NAMES: [&str; 3] = ["SCVI", "CVSS", "SVI"];

/// Mean index values of one demographic group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupMeans {
    pub group: String,
    pub n: usize,
    pub svi: f64,
    pub cvss: f64,
    pub scvi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    /// `matrix[i][j]` correlates `INDEX_NAMES[i]` with `INDEX_NAMES[j]`.
    pub matrix: [[Correlation; 3]; 3],
    pub gender: Vec<GroupMeans>,
    pub race_ethnicity: Vec<GroupMeans>,
    pub age_group: Vec<GroupMeans>,
}

fn group_means(rows: &[ComparedRow], vocab: &[&str], key: fn(&ComparedRow) -> &str) -> Vec<GroupMeans> {
    vocab
        .iter()
        .filter_map(|g| {
            let members: Vec<&ComparedRow> = rows.iter().filter(|r| key(r) == *g).collect();
            if members.is_empty() {
                return None;
            }
            let n = members.len() as f64;
            let mean = |f: fn(&ComparedRow) -> f64| members.iter().map(|r| f(r)).sum::<f64>() / n;
            Some(GroupMeans {
                group: g.to_string(),
                n: members.len(),
                svi: mean(|r| r.svi),
                cvss: mean(|r| r.cvss),
                scvi: mean(|r| r.scvi),
            })
        })
        .collect()
}

pub fn compare_indices(rows: &[ComparedRow]) -> Result<Comparison, ComparatorError> {
    let cols: [Vec<f64>; 3] = [
        rows.iter().map(|r| r.scvi).collect(),
        rows.iter().map(|r| r.cvss).collect(),
        rows.iter().map(|r| r.svi).collect(),
    ];
    let unit = Correlation {
        rho: 1.0,
        p: 0.0,
        n: rows.len(),
    };
    let mut matrix = [[unit; 3]; 3];
    for i in 0..3 {
        for j in (i + 1)..3 {
            let c = spearman(&cols[i], &cols[j])?;
            matrix[i][j] = c;
            matrix[j][i] = c;
        }
    }
    Ok(Comparison {
        matrix,
        gender: group_means(rows, &GENDERS, |r| &r.gender),
        race_ethnicity: group_means(rows, &RACE_ETHNICITIES, |r| &r.race_ethnicity),
        age_group: group_means(rows, &AGE_GROUPS, |r| &r.age_group),
    })
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn io_err(e: csv::Error) -> ComparatorError {
    ComparatorError::Io(e.into())
}

/// `label,SVI,CVSS,SCVI` with two decimals.
pub fn write_group_table<W: Write>(label: &str, rows: &[GroupMeans], out: W) -> Result<(), ComparatorError> {
    let mut w = csv_writer(out);
    w.write_record([label, "SVI", "CVSS", "SCVI"]).map_err(io_err)?;
    for r in rows {
        w.write_record([
            r.group.clone(),
            format!("{:.2}", r.svi),
            format!("{:.2}", r.cvss),
            format!("{:.2}", r.scvi),
        ])
        .map_err(io_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Long-form correlations: `x,y,rho,p,n` for each off-diagonal pair.
pub fn write_correlations<W: Write>(c: &Comparison, out: W) -> Result<(), ComparatorError> {
    let mut w = csv_writer(out);
    w.write_record(["x", "y", "rho", "p", "n"]).map_err(io_err)?;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let m = c.matrix[i][j];
            w.write_record([
                INDEX_NAMES[i].to_string(),
                INDEX_NAMES[j].to_string(),
                m.rho.to_string(),
                m.p.to_string(),
                m.n.to_string(),
            ])
            .map_err(io_err)?;
        }
    }
    w.flush()?;
    Ok(())
}
