use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScamType {
    Phishing,
    Investment,
    Lottery,
    #[serde(alias = "tech support")]
    TechSupport,
    Romance,
    #[serde(alias = "online shopping")]
    OnlineShopping,
    Job,
    Undetected,
}

impl ScamType {
    pub const ALL: [ScamType; 8] = [
        ScamType::Phishing,
        ScamType::Investment,
        ScamType::Lottery,
        ScamType::TechSupport,
        ScamType::Romance,
        ScamType::OnlineShopping,
        ScamType::Job,
        ScamType::Undetected,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScamType::Phishing => "phishing",
            ScamType::Investment => "investment",
            ScamType::Lottery => "lottery",
            ScamType::TechSupport => "tech_support",
            ScamType::Romance => "romance",
            ScamType::OnlineShopping => "online_shopping",
            ScamType::Job => "job",
            ScamType::Undetected => "undetected",
        }
    }
}

impl fmt::Display for ScamType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScamType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let k = s.trim().to_lowercase().replace([' ', '-'], "_");
        ScamType::ALL
            .into_iter()
            .find(|t| t.as_str() == k)
            .ok_or_else(|| format!("unknown scam type `{s}`"))
    }
}

/// Accepts `0`/`1` or `false`/`true`.
fn flag<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Flag {
        B(bool),
        N(u8),
    }
    match Flag::deserialize(d)? {
        Flag::B(b) => Ok(b),
        Flag::N(0) => Ok(false),
        Flag::N(1) => Ok(true),
        Flag::N(n) => Err(serde::de::Error::custom(format!(
            "success flag must be 0 or 1, got {n}"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    #[serde(rename = "type")]
    pub scam_type: ScamType,
    #[serde(deserialize_with = "flag")]
    pub success: bool,
    /// Which annotator produced this label.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provider: Option<String>,
}

/// Positive and negative emotional intensity of a report.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Emotion {
    pub positive: f64,
    pub negative: f64,
}

impl Emotion {
    pub fn net_negative(&self) -> f64 {
        self.negative - self.positive
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScamReport {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author: Option<String>,
    pub text: String,
    /// Filled by the pipeline.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub normalized: String,
    #[serde(default)]
    pub created_at: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotation: Option<Annotation>,
    /// Monetary loss; non-negative.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loss: Option<f64>,
    /// Supplied emotion scores; derived from lexicons when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emotion: Option<Emotion>,
}

impl ScamReport {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        ScamReport {
            id: id.into(),
            author: None,
            text: text.into(),
            normalized: String::new(),
            created_at: String::new(),
            annotation: None,
            loss: None,
            emotion: None,
        }
    }

    pub fn annotated(mut self, scam_type: ScamType, success: bool) -> Self {
        self.annotation = Some(Annotation {
            scam_type,
            success,
            provider: None,
        });
        self
    }

    pub fn with_loss(mut self, loss: f64) -> Self {
        self.loss = Some(loss);
        self
    }

    pub fn with_emotion(mut self, positive: f64, negative: f64) -> Self {
        self.emotion = Some(Emotion { positive, negative });
        self
    }

    pub fn with_author(mut self, author: impl Into<String>) -> Self {
        self.author = Some(author.into());
        self
    }

    pub fn scam_type(&self) -> Option<ScamType> {
        self.annotation.as_ref().map(|a| a.scam_type)
    }
}

/// Reads JSON-lines reports. Blank lines are skipped.
pub fn read_reports<R: BufRead>(input: R) -> Result<Vec<ScamReport>, ReportError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let r: ScamReport = serde_json::from_str(&line).map_err(|e| ReportError::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        if let Some(l) = r.loss {
            if !(l.is_finite() && l >= 0.0) {
                return Err(ReportError::Parse {
                    line: i + 1,
                    message: format!("loss must be a non-negative amount, got {l}"),
                });
            }
        }
        out.push(r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_jsonl() {
        let src = r#"{"id":"a","text":"hi","created_at":"2020-01-01","annotation":{"type":"tech support","success":1},"loss":50}

{"id":"b","text":"yo","annotation":{"type":"phishing","success":false}}
{"id":"c","text":"x"}
"#;
        let rs = read_reports(src.as_bytes()).unwrap();
        assert_eq!(rs.len(), 3);
        assert_eq!(rs[0].scam_type(), Some(ScamType::TechSupport));
        assert!(rs[0].annotation.as_ref().unwrap().success);
        assert_eq!(rs[0].loss, Some(50.0));
        assert!(!rs[1].annotation.as_ref().unwrap().success);
        assert_eq!(rs[2].annotation, None);
    }

    #[test]
    fn rejects_bad_flag_and_loss() {
        let src = r#"{"id":"a","text":"hi","annotation":{"type":"job","success":2}}"#;
        assert!(matches!(
            read_reports(src.as_bytes()),
            Err(ReportError::Parse { line: 1, .. })
        ));
        let src = r#"{"id":"a","text":"hi","loss":-3}"#;
        assert!(read_reports(src.as_bytes()).is_err());
        let src = r#"{"id":"a","text":"hi","annotation":{"type":"pyramid","success":1}}"#;
        assert!(read_reports(src.as_bytes()).is_err());
    }

    #[test]
    fn scam_type_names() {
        for t in ScamType::ALL {
            assert_eq!(t.as_str().parse::<ScamType>(), Ok(t));
        }
        assert_eq!("Online Shopping".parse(), Ok(ScamType::OnlineShopping));
    }
}
