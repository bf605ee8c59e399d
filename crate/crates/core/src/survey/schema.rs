//! Declarative encoding schemas: which answers map to which integer score,
//! grouped into index dimensions.
//!
//! Schemas are TOML documents. [`EncodingSchema::to_canonical_string`] emits
//! a canonical form (sorted keys, LF line endings, fixed indentation) so that
//! a canonical file round-trips byte for byte.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The bundled iPoll schema covering both feature-extraction tables.
pub const IPOLL_SCHEMA: &str = include_str!("../../data/ipoll.schema.toml");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemaError {
    #[error("schema is not valid TOML: {0}")]
    Parse(String),
    #[error("unknown dimension `{0}`")]
    UnknownDimension(String),
    #[error("dimension {0} is declared twice")]
    DuplicateDimension(DimensionId),
    #[error("question {question} appears twice in dimension {dimension}")]
    DuplicateQuestion {
        dimension: DimensionId,
        question: String,
    },
    #[error("answer `{answer}` for {question} in dimension {dimension} has two rules")]
    DuplicateRule {
        dimension: DimensionId,
        question: String,
        answer: String,
    },
    #[error("score {score} for {question} / `{answer}` is outside 0..=5")]
    OutOfRangeScore {
        question: String,
        answer: String,
        score: i64,
    },
    #[error("invalid score action `{0}`; expected an integer or \"ignore\"")]
    BadAction(String),
    #[error("dimension {dimension} must use {expected} aggregation")]
    AggregationMismatch {
        dimension: DimensionId,
        expected: Aggregation,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EncodeError {
    #[error("question {0} is not in the schema")]
    UnknownQuestion(String),
    #[error("answer `{answer}` does not match any rule for {question}")]
    UnmatchedAnswer { question: String, answer: String },
    #[error("question {question} encodes `{answer}` differently across dimensions")]
    AmbiguousQuestion { question: String, answer: String },
}

/// Which index a dimension feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexKind {
    Ivi,
    Asi,
}

/// Sub-factor dimensions for IVI and component dimensions for ASI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DimensionId {
    /// A^A
    AA,
    /// A^K
    AK,
    /// B^R
    BR,
    /// B^S
    BS,
    /// P^C
    PC,
    /// P^I
    PI,
    /// E^E
    EE,
    /// E^R
    ER,
    F,
    C,
    S,
}

impl DimensionId {
    pub const ALL: [DimensionId; 11] = [
        DimensionId::AA,
        DimensionId::AK,
        DimensionId::BR,
        DimensionId::BS,
        DimensionId::PC,
        DimensionId::PI,
        DimensionId::EE,
        DimensionId::ER,
        DimensionId::F,
        DimensionId::C,
        DimensionId::S,
    ];

    /// The seven IVI dimensions the survey realization averages.
    pub const IPOLL_IVI: [DimensionId; 7] = [
        DimensionId::AA,
        DimensionId::AK,
        DimensionId::BR,
        DimensionId::PC,
        DimensionId::PI,
        DimensionId::EE,
        DimensionId::ER,
    ];

    pub const ASI: [DimensionId; 3] = [DimensionId::F, DimensionId::C, DimensionId::S];

    pub fn as_str(self) -> &'static str {
        match self {
            DimensionId::AA => "AA",
            DimensionId::AK => "AK",
            DimensionId::BR => "BR",
            DimensionId::BS => "BS",
            DimensionId::PC => "PC",
            DimensionId::PI => "PI",
            DimensionId::EE => "EE",
            DimensionId::ER => "ER",
            DimensionId::F => "F",
            DimensionId::C => "C",
            DimensionId::S => "S",
        }
    }

    pub fn index(self) -> IndexKind {
        match self {
            DimensionId::F | DimensionId::C | DimensionId::S => IndexKind::Asi,
            _ => IndexKind::Ivi,
        }
    }

    pub fn expected_aggregation(self) -> Aggregation {
        match self.index() {
            IndexKind::Ivi => Aggregation::Mean,
            IndexKind::Asi => Aggregation::Sum,
        }
    }
}

impl fmt::Display for DimensionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DimensionId {
    type Err = SchemaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DimensionId::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| SchemaError::UnknownDimension(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregation {
    /// Mean over answered questions.
    Mean,
    /// Sum over answered questions, rescaled by the maximum attainable sum.
    Sum,
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregation::Mean => "mean",
            Aggregation::Sum => "sum",
        })
    }
}

/// What a matched answer does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Assign(u8),
    Ignore,
}

/// Result of encoding one answer.
pub type Encoded = Action;

/// Case-folds and collapses whitespace. Answer matching is exact after this.
pub fn normalize_answer(s: &str) -> String {
    s.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

/// One answer rule of one question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingRule {
    pub answer: String,
    pub action: Action,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuestionSpec {
    pub id: String,
    pub text: String,
    pub rules: Vec<EncodingRule>,
    lookup: BTreeMap<String, Action>,
}

impl QuestionSpec {
    pub fn encode(&self, answer: &str) -> Option<Action> {
        self.lookup.get(&normalize_answer(answer)).copied()
    }

    /// Largest score any rule can assign; 0 when every rule ignores.
    pub fn max_score(&self) -> u8 {
        self.rules
            .iter()
            .filter_map(|r| match r.action {
                Action::Assign(v) => Some(v),
                Action::Ignore => None,
            })
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionSpec {
    pub id: DimensionId,
    pub label: String,
    pub aggregation: Aggregation,
    pub questions: Vec<QuestionSpec>,
}

impl DimensionSpec {
    pub fn question(&self, id: &str) -> Option<&QuestionSpec> {
        self.questions.iter().find(|q| q.id == id)
    }
}

/// A validated encoding schema. Immutable after load.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodingSchema {
    pub name: String,
    pub version: String,
    dimensions: Vec<DimensionSpec>,
}

// Raw document shape. Field order here is the canonical key order.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSchema {
    name: String,
    version: String,
    #[serde(default)]
    dimension: Vec<RawDimension>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDimension {
    aggregation: Aggregation,
    id: String,
    #[serde(default)]
    label: String,
    #[serde(default)]
    question: Vec<RawQuestion>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuestion {
    id: String,
    rules: Vec<RawRule>,
    #[serde(default)]
    text: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    answer: String,
    score: RawScore,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawScore {
    Int(i64),
    Word(String),
}

impl EncodingSchema {
    /// The schema shipped with the crate.
    pub fn bundled_ipoll() -> Self {
        load_schema(IPOLL_SCHEMA).expect("bundled schema is valid")
    }

    pub fn dimensions(&self) -> &[DimensionSpec] {
        &self.dimensions
    }

    pub fn dimension(&self, id: DimensionId) -> Option<&DimensionSpec> {
        self.dimensions.iter().find(|d| d.id == id)
    }

    /// Every question id, sorted.
    pub fn question_ids(&self) -> BTreeSet<&str> {
        self.dimensions
            .iter()
            .flat_map(|d| d.questions.iter().map(|q| q.id.as_str()))
            .collect()
    }

    pub fn has_question(&self, id: &str) -> bool {
        self.dimensions.iter().any(|d| d.question(id).is_some())
    }

    /// Every `(dimension, question, rule)` triple in document order.
    pub fn rules(&self) -> impl Iterator<Item = (DimensionId, &QuestionSpec, &EncodingRule)> {
        self.dimensions.iter().flat_map(|d| {
            d.questions
                .iter()
                .flat_map(move |q| q.rules.iter().map(move |r| (d.id, q, r)))
        })
    }

    /// Encodes an answer within one dimension.
    pub fn encode_in(
        &self,
        dimension: DimensionId,
        question: &str,
        answer: &str,
    ) -> Result<Encoded, EncodeError> {
        let q = self
            .dimension(dimension)
            .and_then(|d| d.question(question))
            .ok_or_else(|| EncodeError::UnknownQuestion(question.to_string()))?;
        q.encode(answer).ok_or_else(|| EncodeError::UnmatchedAnswer {
            question: question.to_string(),
            answer: answer.to_string(),
        })
    }

    /// Encodes an answer to a question regardless of dimension.
    ///
    /// A question may sit in several dimensions (the ASI tables reuse
    /// consequence questions for sophistication). Dimensions that have no
    /// rule for the answer are skipped; the remaining matches must agree.
    pub fn encode_response(&self, question: &str, answer: &str) -> Result<Encoded, EncodeError> {
        let mut found = false;
        let mut result: Option<Action> = None;
        for d in &self.dimensions {
            let Some(q) = d.question(question) else {
                continue;
            };
            found = true;
            if let Some(a) = q.encode(answer) {
                match result {
                    Some(prev) if prev != a => {
                        return Err(EncodeError::AmbiguousQuestion {
                            question: question.to_string(),
                            answer: answer.to_string(),
                        });
                    }
                    _ => result = Some(a),
                }
            }
        }
        if !found {
            return Err(EncodeError::UnknownQuestion(question.to_string()));
        }
        result.ok_or_else(|| EncodeError::UnmatchedAnswer {
            question: question.to_string(),
            answer: answer.to_string(),
        })
    }

    /// Canonical TOML serialization.
    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("name = {}\n", toml_str(&self.name)));
        out.push_str(&format!("version = {}\n", toml_str(&self.version)));
        for d in &self.dimensions {
            out.push_str("\n[[dimension]]\n");
            out.push_str(&format!("aggregation = \"{}\"\n", d.aggregation));
            out.push_str(&format!("id = \"{}\"\n", d.id));
            out.push_str(&format!("label = {}\n", toml_str(&d.label)));
            for q in &d.questions {
                out.push_str("\n[[dimension.question]]\n");
                out.push_str(&format!("id = {}\n", toml_str(&q.id)));
                out.push_str("rules = [\n");
                for r in &q.rules {
                    let score = match r.action {
                        Action::Assign(v) => v.to_string(),
                        Action::Ignore => "\"ignore\"".to_string(),
                    };
                    out.push_str(&format!(
                        "    {{ answer = {}, score = {} }},\n",
                        toml_str(&r.answer),
                        score
                    ));
                }
                out.push_str("]\n");
                out.push_str(&format!("text = {}\n", toml_str(&q.text)));
            }
        }
        out
    }
}

fn toml_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if c.is_control() => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Parses and validates a schema document.
pub fn load_schema(doc: &str) -> Result<EncodingSchema, SchemaError> {
    let raw: RawSchema = toml::from_str(doc).map_err(|e| SchemaError::Parse(e.to_string()))?;
    let mut seen_dims = BTreeSet::new();
    let mut dimensions = Vec::with_capacity(raw.dimension.len());
    for rd in raw.dimension {
        let id: DimensionId = rd.id.parse()?;
        if !seen_dims.insert(id) {
            return Err(SchemaError::DuplicateDimension(id));
        }
        if rd.aggregation != id.expected_aggregation() {
            return Err(SchemaError::AggregationMismatch {
                dimension: id,
                expected: id.expected_aggregation(),
            });
        }
        let mut questions: Vec<QuestionSpec> = Vec::with_capacity(rd.question.len());
        for rq in rd.question {
            if questions.iter().any(|q| q.id == rq.id) {
                return Err(SchemaError::DuplicateQuestion {
                    dimension: id,
                    question: rq.id,
                });
            }
            let mut rules = Vec::with_capacity(rq.rules.len());
            let mut lookup = BTreeMap::new();
            for rr in rq.rules {
                let action = match rr.score {
                    RawScore::Int(v) if (0..=5).contains(&v) => Action::Assign(v as u8),
                    RawScore::Int(v) => {
                        return Err(SchemaError::OutOfRangeScore {
                            question: rq.id,
                            answer: rr.answer,
                            score: v,
                        });
                    }
                    RawScore::Word(w) if w == "ignore" => Action::Ignore,
                    RawScore::Word(w) => return Err(SchemaError::BadAction(w)),
                };
                if lookup.insert(normalize_answer(&rr.answer), action).is_some() {
                    return Err(SchemaError::DuplicateRule {
                        dimension: id,
                        question: rq.id,
                        answer: rr.answer,
                    });
                }
                rules.push(EncodingRule {
                    answer: rr.answer,
                    action,
                });
            }
            questions.push(QuestionSpec {
                id: rq.id,
                text: rq.text,
                rules,
                lookup,
            });
        }
        dimensions.push(DimensionSpec {
            id,
            label: rd.label,
            aggregation: rd.aggregation,
            questions,
        });
    }
    Ok(EncodingSchema {
        name: raw.name,
        version: raw.version,
        dimensions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = r#"name = "tiny"
version = "0"

[[dimension]]
aggregation = "mean"
id = "AA"
label = "awareness"

[[dimension.question]]
id = "Q1"
rules = [
    { answer = "Yes", score = 5 },
    { answer = "No", score = 0 },
    { answer = "REFUSED", score = "ignore" },
]
text = "A question with \"quotes\""
"#;

    #[test]
    fn bundled_schema_has_known_rule() {
        let schema = EncodingSchema::bundled_ipoll();
        assert_eq!(
            schema.encode_in(DimensionId::AA, "Q7", "Very concerned"),
            Ok(Action::Assign(0))
        );
        assert_eq!(schema.dimensions().len(), 10);
    }

    #[test]
    fn encode_examples() {
        let schema = EncodingSchema::bundled_ipoll();
        assert_eq!(
            schema.encode_response("Q7", "Not at all concerned"),
            Ok(Action::Assign(3))
        );
        assert_eq!(schema.encode_response("Q37", "False"), Ok(Action::Assign(5)));
        assert_eq!(
            schema.encode_response("Q9", "SKIPPED ON WEB/REFUSED"),
            Ok(Action::Ignore)
        );
    }

    #[test]
    fn matching_folds_case_and_whitespace() {
        let schema = EncodingSchema::bundled_ipoll();
        assert_eq!(
            schema.encode_response("Q7", "  not   AT all concerned "),
            Ok(Action::Assign(3))
        );
        // no fuzzy matching
        assert!(matches!(
            schema.encode_response("Q7", "Not at all concern"),
            Err(EncodeError::UnmatchedAnswer { .. })
        ));
    }

    #[test]
    fn cross_dimension_conflict_is_reported() {
        let schema = EncodingSchema::bundled_ipoll();
        // Q9 "Not sure" is 3 as a past encounter but 1 as a frequency item
        assert!(matches!(
            schema.encode_response("Q9", "Not sure"),
            Err(EncodeError::AmbiguousQuestion { .. })
        ));
        assert_eq!(
            schema.encode_in(DimensionId::EE, "Q9", "Not sure"),
            Ok(Action::Assign(3))
        );
        assert_eq!(
            schema.encode_in(DimensionId::F, "Q9", "Not sure"),
            Ok(Action::Assign(1))
        );
        // Q10 agrees across consequence and sophistication
        assert_eq!(schema.encode_response("Q10", "Not sure"), Ok(Action::Assign(1)));
    }

    #[test]
    fn unknown_question() {
        let schema = EncodingSchema::bundled_ipoll();
        assert_eq!(
            schema.encode_response("Q99", "Yes"),
            Err(EncodeError::UnknownQuestion("Q99".into()))
        );
    }

    #[test]
    fn rejects_out_of_range_score() {
        let doc = TINY.replace("score = 5", "score = 7");
        assert!(matches!(
            load_schema(&doc),
            Err(SchemaError::OutOfRangeScore { score: 7, .. })
        ));
        let doc = TINY.replace("score = 0", "score = -1");
        assert!(matches!(
            load_schema(&doc),
            Err(SchemaError::OutOfRangeScore { score: -1, .. })
        ));
    }

    #[test]
    fn rejects_duplicates_and_unknowns() {
        let doc = TINY.replace("\"No\"", "\"  yes \"");
        assert!(matches!(
            load_schema(&doc),
            Err(SchemaError::DuplicateRule { .. })
        ));
        let doc = TINY.replace("id = \"AA\"", "id = \"ZZ\"");
        assert_eq!(
            load_schema(&doc),
            Err(SchemaError::UnknownDimension("ZZ".into()))
        );
        let doc = TINY.replace("aggregation = \"mean\"", "aggregation = \"sum\"");
        assert!(matches!(
            load_schema(&doc),
            Err(SchemaError::AggregationMismatch { .. })
        ));
        let doc = TINY.replace("score = \"ignore\"", "score = \"skip\"");
        assert_eq!(load_schema(&doc), Err(SchemaError::BadAction("skip".into())));
        assert!(matches!(load_schema("name = "), Err(SchemaError::Parse(_))));
    }

    #[test]
    fn canonical_round_trip() {
        let tiny = load_schema(TINY).unwrap();
        assert_eq!(tiny.to_canonical_string(), TINY);

        let bundled = EncodingSchema::bundled_ipoll();
        assert_eq!(bundled.to_canonical_string(), IPOLL_SCHEMA);
        let again = load_schema(&bundled.to_canonical_string()).unwrap();
        assert_eq!(again, bundled);
    }

    #[test]
    fn max_score_ignores_ignore() {
        let s = load_schema(TINY).unwrap();
        let q = s.dimension(DimensionId::AA).unwrap().question("Q1").unwrap();
        assert_eq!(q.max_score(), 5);
    }
}
