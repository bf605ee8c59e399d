//! The per-record scores table (`scores.csv`) shared by the scoring and
//! analysis commands.
//!
//! Numbers are written in shortest round-trip form, so reading a table and
//! writing it again reproduces the same bytes. Missing values are blank.

use std::io::{Read, Write};

use thiserror::Error;

use crate::index::{compute_asi, compute_ivi, AsiFactors, Composites, IviFactors, WeightConfig};
use crate::score::Score;
use crate::survey::{ipoll_asi, ipoll_ivi, DivisorMode, EncodedRecord};

#[derive(Debug, Error)]
pub enum ScoresError {
    #[error("scores table: expected header `{0}`")]
    Header(String),
    #[error("scores table line {line}, column `{column}`: {message}")]
    Value {
        line: usize,
        column: &'static str,
        message: String,
    },
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub const TEXT_COLUMNS: [&str; 5] = ["id", "gender", "race_ethnicity", "age_group", "state"];

/// Numeric columns in file order.
pub const NUMERIC_COLUMNS: [&str; 29] = [
    "svi", "cvss", "a_a", "a_k", "b_r", "b_s", "p_c", "p_i", "e_e", "e_r", "f_ta", "f_aa", "c_fi",
    "c_pi", "c_si", "s_c", "s_se", "a", "b", "p", "e", "f", "c", "s", "ivi", "asi", "scvi",
    "ipoll_ivi", "ipoll_asi",
];

const SUB_START: usize = 2;
const COMPOSITE_START: usize = 17;
const IVI: usize = 24;
const ASI: usize = 25;
const SCVI: usize = 26;

/// One row of the scores table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScoreRow {
    pub id: String,
    pub gender: String,
    pub race_ethnicity: String,
    pub age_group: String,
    pub state: String,
    /// Indexed like [`NUMERIC_COLUMNS`].
    pub values: Vec<Option<f64>>,
}

/// A looked-up field value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldValue<'a> {
    Num(f64),
    Text(&'a str),
}

pub fn is_known_field(name: &str) -> bool {
    TEXT_COLUMNS.contains(&name) || NUMERIC_COLUMNS.contains(&name)
}

impl ScoreRow {
    pub fn new(id: impl Into<String>) -> Self {
        ScoreRow {
            id: id.into(),
            values: vec![None; NUMERIC_COLUMNS.len()],
            ..Default::default()
        }
    }

    fn idx(name: &str) -> Option<usize> {
        NUMERIC_COLUMNS.iter().position(|c| *c == name)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        Self::idx(name).and_then(|i| self.values[i])
    }

    pub fn set(&mut self, name: &str, v: Option<f64>) {
        let i = Self::idx(name).unwrap_or_else(|| panic!("unknown column {name}"));
        self.values[i] = v;
    }

    pub fn text(&self, name: &str) -> Option<&str> {
        let s = match name {
            "id" => &self.id,
            "gender" => &self.gender,
            "race_ethnicity" => &self.race_ethnicity,
            "age_group" => &self.age_group,
            "state" => &self.state,
            _ => return None,
        };
        (!s.is_empty()).then_some(s.as_str())
    }

    pub fn field(&self, name: &str) -> Option<FieldValue<'_>> {
        self.text(name)
            .map(FieldValue::Text)
            .or_else(|| self.get(name).map(FieldValue::Num))
    }

    /// All seven composites, if present.
    pub fn composites(&self) -> Option<Composites> {
        let c = |i: usize| self.values[COMPOSITE_START + i].and_then(|v| Score::new(v).ok());
        Some(Composites {
            ivi: [c(0)?, c(1)?, c(2)?, c(3)?],
            asi: [c(4)?, c(5)?, c(6)?],
        })
    }

    pub fn ivi(&self) -> Option<f64> {
        self.values[IVI]
    }

    pub fn asi(&self) -> Option<f64> {
        self.values[ASI]
    }

    pub fn scvi(&self) -> Option<f64> {
        self.values[SCVI]
    }

    /// Fills sub-factor, composite, and index columns from factor values.
    /// Index columns stay blank when a composite is missing.
    pub fn set_factors(&mut self, ivi: &IviFactors, asi: &AsiFactors, w: &WeightConfig) {
        let subs = [
            ivi.unfamiliarity,
            ivi.protective_knowledge_gap,
            ivi.risky_behavior,
            ivi.security_practice_gap,
            ivi.trust,
            ivi.impulsivity,
            ivi.past_encounters,
            ivi.incident_response,
            asi.attempted,
            asi.actual,
            asi.financial,
            asi.psychological,
            asi.safety,
            asi.mimicry,
            asi.social_engineering,
        ];
        for (k, s) in subs.iter().enumerate() {
            self.values[SUB_START + k] = s.map(Score::value);
        }
        let comps = [
            ivi.awareness(),
            ivi.behavior(),
            ivi.psychology(),
            ivi.experience(),
            asi.frequency(),
            asi.consequence(),
            asi.sophistication(),
        ];
        for (k, s) in comps.iter().enumerate() {
            self.values[COMPOSITE_START + k] = s.map(Score::value);
        }
        let i = compute_ivi(ivi, w).ok();
        let a = compute_asi(asi, w).ok();
        self.values[IVI] = i.map(Score::value);
        self.values[ASI] = a.map(Score::value);
        self.values[SCVI] = match (i, a) {
            (Some(i), Some(a)) => Some(crate::index::compute_scvi(i, a, w).scvi.value()),
            _ => None,
        };
    }

    /// Scores one encoded survey respondent.
    pub fn from_record(rec: &EncodedRecord, w: &WeightConfig, mode: DivisorMode) -> Self {
        let mut row = ScoreRow::new(rec.id.clone());
        let d = &rec.demographics;
        row.gender = d.gender.clone().unwrap_or_default();
        row.race_ethnicity = d.race_ethnicity.clone().unwrap_or_default();
        row.age_group = d.age_group.clone().unwrap_or_default();
        row.state = d.state.clone().unwrap_or_default();
        row.set("svi", rec.external_svi);
        row.set("cvss", rec.external_cvss);
        row.set_factors(&rec.ivi_factors(), &rec.asi_factors(), w);
        row.set("ipoll_ivi", ipoll_ivi(rec, mode).ok().map(Score::value));
        row.set("ipoll_asi", ipoll_asi(rec).ok().map(Score::value));
        row
    }

    /// Recomputes IVI, ASI, and SCVI from the stored composites.
    pub fn rescore(&mut self, w: &WeightConfig) {
        if let Some(c) = self.composites() {
            let b = c.breakdown(w);
            self.values[IVI] = Some(b.ivi.value());
            self.values[ASI] = Some(b.asi.value());
            self.values[SCVI] = Some(b.scvi.value());
        }
    }
}

fn header() -> Vec<&'static str> {
    TEXT_COLUMNS.iter().chain(NUMERIC_COLUMNS.iter()).copied().collect()
}

pub fn write_scores<W: Write>(rows: &[ScoreRow], out: W) -> Result<(), ScoresError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header())?;
    for r in rows {
        let mut rec: Vec<String> = vec![
            r.id.clone(),
            r.gender.clone(),
            r.race_ethnicity.clone(),
            r.age_group.clone(),
            r.state.clone(),
        ];
        rec.extend(r.values.iter().map(|v| v.map(|x| x.to_string()).unwrap_or_default()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_scores<R: Read>(input: R) -> Result<Vec<ScoreRow>, ScoresError> {
    let mut rd = csv::Reader::from_reader(input);
    let expected = header();
    if rd.headers()?.iter().ne(expected.iter().copied()) {
        return Err(ScoresError::Header(expected.join(",")));
    }
    let mut rows = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let mut row = ScoreRow::new(&rec[0]);
        row.gender = rec[1].to_string();
        row.race_ethnicity = rec[2].to_string();
        row.age_group = rec[3].to_string();
        row.state = rec[4].to_string();
        for (k, col) in NUMERIC_COLUMNS.iter().enumerate() {
            let cell = &rec[TEXT_COLUMNS.len() + k];
            row.values[k] = if cell.is_empty() {
                None
            } else {
                let v: f64 = cell.parse().map_err(|_| ScoresError::Value {
                    line,
                    column: col,
                    message: format!("not a number: `{cell}`"),
                })?;
                if !v.is_finite() {
                    return Err(ScoresError::Value {
                        line,
                        column: col,
                        message: "not finite".into(),
                    });
                }
                Some(v)
            };
        }
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_bytes() {
        let mut r = ScoreRow::new("r1");
        r.gender = "Female".into();
        r.race_ethnicity = "White, non-Hispanic".into();
        let w = WeightConfig::uniform();
        r.set_factors(
            &IviFactors::uniform(Score::new(1.0 / 3.0).unwrap()),
            &AsiFactors::uniform(Score::new(2.2).unwrap()),
            &w,
        );
        let mut a = Vec::new();
        write_scores(&[r.clone(), ScoreRow::new("r2")], &mut a).unwrap();
        let back = read_scores(a.as_slice()).unwrap();
        assert_eq!(back[0], r);
        let mut b = Vec::new();
        write_scores(&back, &mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn missing_composite_leaves_index_blank() {
        let mut r = ScoreRow::new("x");
        let ivi = IviFactors {
            unfamiliarity: Some(Score::MAX),
            ..Default::default()
        };
        r.set_factors(&ivi, &AsiFactors::uniform(Score::ZERO), &WeightConfig::uniform());
        assert_eq!(r.get("a"), Some(5.0));
        assert_eq!(r.get("b"), None);
        assert_eq!(r.scvi(), None);
        assert_eq!(r.asi(), Some(0.0));
        assert!(r.composites().is_none());
    }

    #[test]
    fn bad_header() {
        assert!(matches!(read_scores("id,x\n".as_bytes()), Err(ScoresError::Header(_))));
    }
}
