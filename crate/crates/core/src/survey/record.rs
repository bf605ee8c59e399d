use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::schema::{Action, Aggregation, DimensionId, DimensionSpec, EncodingSchema};
use crate::index::{AsiFactors, IviFactors};
use crate::regions;
use crate::score::Score;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecordError {
    #[error("none of the seven IVI dimensions is present")]
    AllDimensionsMissing,
    #[error("ASI component {0} is missing")]
    MissingComponent(DimensionId),
    #[error("`{value}` is not a recognised {field}")]
    Vocabulary { field: &'static str, value: String },
}

pub const GENDERS: [&str; 3] = ["Female", "Male", "Other"];

pub const RACE_ETHNICITIES: [&str; 6] = [
    "White, non-Hispanic",
    "Black, non-Hispanic",
    "Other, non-Hispanic",
    "2+, non-Hispanic",
    "Asian, non-Hispanic",
    "Hispanic",
];

pub const AGE_GROUPS: [&str; 7] = [
    "18-24", "25-29", "30-44", "45-49", "50-54", "55-64", "65+",
];

fn from_vocab(
    field: &'static str,
    vocab: &[&'static str],
    raw: &str,
) -> Result<Option<String>, RecordError> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(None);
    }
    vocab
        .iter()
        .find(|v| v.eq_ignore_ascii_case(raw))
        .map(|v| Some(v.to_string()))
        .ok_or_else(|| RecordError::Vocabulary {
            field,
            value: raw.to_string(),
        })
}

/// Respondent demographics, each drawn from a controlled vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Demographics {
    pub gender: Option<String>,
    pub race_ethnicity: Option<String>,
    pub age_group: Option<String>,
    /// Two-letter state code.
    pub state: Option<String>,
}

impl Demographics {
    /// Validates raw strings. Blank fields become `None`; states may be given
    /// by code or full name.
    pub fn parse(
        gender: &str,
        race_ethnicity: &str,
        age_group: &str,
        state: &str,
    ) -> Result<Self, RecordError> {
        let state = match state.trim() {
            "" => None,
            s => Some(
                regions::state_code(s)
                    .ok_or_else(|| RecordError::Vocabulary {
                        field: "state",
                        value: s.to_string(),
                    })?
                    .to_string(),
            ),
        };
        Ok(Demographics {
            gender: from_vocab("gender", &GENDERS, gender)?,
            race_ethnicity: from_vocab("race_ethnicity", &RACE_ETHNICITIES, race_ethnicity)?,
            age_group: from_vocab("age_group", &AGE_GROUPS, age_group)?,
            state,
        })
    }

    pub fn get(&self, field: &str) -> Option<&str> {
        match field {
            "gender" => self.gender.as_deref(),
            "race_ethnicity" => self.race_ethnicity.as_deref(),
            "age_group" => self.age_group.as_deref(),
            "state" => self.state.as_deref(),
            _ => None,
        }
    }
}

/// How the seven-dimension IVI average treats missing dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivisorMode {
    /// Divide by the number of present dimensions.
    #[default]
    PresentCount,
    /// Always divide by seven; missing dimensions count as zero.
    StrictSeven,
}

/// One encoded survey respondent.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedRecord {
    pub id: String,
    /// Per `(dimension, question)` encoded answers. Absent keys were not
    /// answered (blank cell or skip logic).
    pub scores: BTreeMap<(DimensionId, String), Action>,
    /// Aggregates per schema dimension; `None` when every member was ignored
    /// or unanswered.
    pub dimensions: BTreeMap<DimensionId, Option<Score>>,
    pub demographics: Demographics,
    pub external_svi: Option<f64>,
    pub external_cvss: Option<f64>,
}

impl EncodedRecord {
    /// Builds a record from encoded answers and fills in every dimension
    /// aggregate of `schema`.
    pub fn new(
        id: impl Into<String>,
        scores: BTreeMap<(DimensionId, String), Action>,
        demographics: Demographics,
        schema: &EncodingSchema,
    ) -> Self {
        let mut rec = EncodedRecord {
            id: id.into(),
            scores,
            dimensions: BTreeMap::new(),
            demographics,
            external_svi: None,
            external_cvss: None,
        };
        for spec in schema.dimensions() {
            let s = dimension_score(&rec, spec);
            rec.dimensions.insert(spec.id, s);
        }
        rec
    }

    pub fn dimension(&self, id: DimensionId) -> Option<Score> {
        self.dimensions.get(&id).copied().flatten()
    }

    /// IVI sub-factors from the survey dimensions. B^S is never measured.
    pub fn ivi_factors(&self) -> IviFactors {
        IviFactors {
            unfamiliarity: self.dimension(DimensionId::AA),
            protective_knowledge_gap: self.dimension(DimensionId::AK),
            risky_behavior: self.dimension(DimensionId::BR),
            security_practice_gap: self.dimension(DimensionId::BS),
            trust: self.dimension(DimensionId::PC),
            impulsivity: self.dimension(DimensionId::PI),
            past_encounters: self.dimension(DimensionId::EE),
            incident_response: self.dimension(DimensionId::ER),
        }
    }

    /// ASI factors; each survey component stands in for its whole composite.
    pub fn asi_factors(&self) -> AsiFactors {
        AsiFactors {
            attempted: self.dimension(DimensionId::F),
            financial: self.dimension(DimensionId::C),
            mimicry: self.dimension(DimensionId::S),
            ..Default::default()
        }
    }
}

/// Aggregates one dimension over a record's answered, non-ignored questions.
///
/// Mean mode averages the scores. Sum mode divides the sum by the largest
/// attainable sum over the same questions and multiplies by 5.
pub fn dimension_score(record: &EncodedRecord, spec: &DimensionSpec) -> Option<Score> {
    let mut sum = 0u32;
    let mut max_sum = 0u32;
    let mut count = 0u32;
    for q in &spec.questions {
        if let Some(Action::Assign(v)) = record.scores.get(&(spec.id, q.id.clone())) {
            sum += u32::from(*v);
            max_sum += u32::from(q.max_score());
            count += 1;
        }
    }
    if count == 0 {
        return None;
    }
    let value = match spec.aggregation {
        Aggregation::Mean => f64::from(sum) / f64::from(count),
        Aggregation::Sum if max_sum == 0 => 0.0,
        Aggregation::Sum => f64::from(sum) / f64::from(max_sum) * 5.0,
    };
    Some(Score::saturating(value))
}

/// The survey IVI: the plain average of the seven measured dimensions.
pub fn ipoll_ivi(record: &EncodedRecord, mode: DivisorMode) -> Result<Score, RecordError> {
    let present: Vec<f64> = DimensionId::IPOLL_IVI
        .iter()
        .filter_map(|d| record.dimension(*d))
        .map(Score::value)
        .collect();
    if present.is_empty() {
        return Err(RecordError::AllDimensionsMissing);
    }
    let divisor = match mode {
        DivisorMode::PresentCount => present.len() as f64,
        DivisorMode::StrictSeven => 7.0,
    };
    Ok(Score::saturating(present.iter().sum::<f64>() / divisor))
}

/// The survey ASI: equal-weight mean of the rescaled F, C, and S components.
pub fn ipoll_asi(record: &EncodedRecord) -> Result<Score, RecordError> {
    let mut total = 0.0;
    for d in DimensionId::ASI {
        total += record
            .dimension(d)
            .ok_or(RecordError::MissingComponent(d))?
            .value();
    }
    Ok(Score::saturating(total / 3.0))
}
