//! Annotation providers: a bundled keyword heuristic and an optional remote
//! HTTP service.

use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use serde::Deserialize;

use super::lexicon::words;
use super::report::{Annotation, ScamReport, ScamType};
use super::text::normalize_text;
use super::RedditError;

pub trait AnnotationProvider: Send + Sync {
    /// Recorded in each annotation for audit.
    fn name(&self) -> &str;

    fn annotate(&self, text: &str) -> Result<Annotation, RedditError>;
}

/// Annotates `report` in place unless it already carries an annotation. On
/// failure the report is left unannotated.
pub fn annotate(report: &mut ScamReport, provider: &dyn AnnotationProvider) -> Result<(), RedditError> {
    if report.annotation.is_none() {
        report.annotation = Some(provider.annotate(&report.text)?);
    }
    Ok(())
}

pub const TYPE_KEYWORDS: [(ScamType, &[&str]); 7] = [
    (
        ScamType::Phishing,
        &["phishing", "password", "verify your account", "login", "suspicious link", "clicked a link", "click the link", "account suspended", "fake email"],
    ),
    (
        ScamType::Investment,
        &["investment", "invest", "crypto", "bitcoin", "trading", "forex", "returns", "stock tip"],
    ),
    (
        ScamType::Lottery,
        &["lottery", "you won", "prize", "sweepstakes", "jackpot", "winner"],
    ),
    (
        ScamType::TechSupport,
        &["tech support", "microsoft", "support called", "virus", "remote access", "computer is infected", "teamviewer", "anydesk"],
    ),
    (
        ScamType::Romance,
        &["romance", "dating", "girlfriend", "boyfriend", "tinder", "fell in love", "relationship"],
    ),
    (
        ScamType::OnlineShopping,
        &["seller", "shipping", "never arrived", "order", "amazon", "ebay", "marketplace", "listing"],
    ),
    (
        ScamType::Job,
        &["job", "hiring", "recruiter", "interview", "work from home", "employment", "paycheck"],
    ),
];

pub const SUCCESS_KEYWORDS: [&str; 9] = [
    "i lost", "i sent", "i paid", "they took", "stole", "scammed me", "lost my", "i transferred", "got scammed",
];

/// Occurrences of a space-separated phrase in a word sequence.
fn phrase_hits(words: &[String], phrase: &str) -> usize {
    let p: Vec<&str> = phrase.split(' ').collect();
    if p.is_empty() || words.len() < p.len() {
        return 0;
    }
    words
        .windows(p.len())
        .filter(|w| w.iter().zip(&p).all(|(a, b)| a == b))
        .count()
}

/// Keyword-table heuristic. The type with the most keyword hits wins; a tie
/// or no hits gives `undetected`.
#[derive(Debug, Clone, Copy, Default)]
pub struct KeywordProvider;

impl KeywordProvider {
    pub fn classify(&self, text: &str) -> (ScamType, bool) {
        let ws = words(&normalize_text(text));
        let mut best = (ScamType::Undetected, 0usize);
        let mut tied = false;
        for (t, kws) in TYPE_KEYWORDS {
            let hits: usize = kws.iter().map(|k| phrase_hits(&ws, k)).sum();
            if hits > best.1 {
                best = (t, hits);
                tied = false;
            } else if hits == best.1 && hits > 0 {
                tied = true;
            }
        }
        let t = if tied { ScamType::Undetected } else { best.0 };
        let success = SUCCESS_KEYWORDS.iter().any(|k| phrase_hits(&ws, k) > 0);
        (t, success)
    }
}

impl AnnotationProvider for KeywordProvider {
    fn name(&self) -> &str {
        "keyword-v1"
    }

    fn annotate(&self, text: &str) -> Result<Annotation, RedditError> {
        let (scam_type, success) = self.classify(text);
        Ok(Annotation {
            scam_type,
            success,
            provider: Some(self.name().to_string()),
        })
    }
}

pub const ENV_URL: &str = "SCVI_ANNOTATOR_URL";
pub const ENV_KEY: &str = "SCVI_ANNOTATOR_KEY";

/// Posts `{"text": ...}` to an HTTP endpoint that answers
/// `{"type": ..., "success": 0|1}`.
pub struct RemoteProvider {
    url: String,
    key: Option<String>,
    agent: ureq::Agent,
    pub max_retries: u32,
    pub base_backoff: Duration,
    pub max_backoff: Duration,
    /// Minimum spacing between requests.
    pub min_interval: Duration,
    last_call: Mutex<Option<Instant>>,
}

#[derive(Deserialize)]
struct RemoteAnswer {
    #[serde(rename = "type")]
    scam_type: String,
    success: serde_json::Value,
}

impl RemoteProvider {
    pub fn new(url: impl Into<String>, key: Option<String>, timeout: Duration) -> Self {
        RemoteProvider {
            url: url.into(),
            key,
            agent: ureq::AgentBuilder::new().timeout(timeout).build(),
            max_retries: 3,
            base_backoff: Duration::from_millis(250),
            max_backoff: Duration::from_secs(4),
            min_interval: Duration::from_millis(100),
            last_call: Mutex::new(None),
        }
    }

    pub fn from_env() -> Option<Self> {
        let url = std::env::var(ENV_URL).ok().filter(|u| !u.is_empty())?;
        let key = std::env::var(ENV_KEY).ok();
        Some(RemoteProvider::new(url, key, Duration::from_secs(10)))
    }

    fn throttle(&self) {
        let mut last = self.last_call.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(t) = *last {
            let since = t.elapsed();
            if since < self.min_interval {
                thread::sleep(self.min_interval - since);
            }
        }
        *last = Some(Instant::now());
    }

    fn call_once(&self, text: &str) -> Result<RemoteAnswer, String> {
        self.throttle();
        let mut req = self.agent.post(&self.url);
        if let Some(k) = &self.key {
            req = req.set("Authorization", &format!("Bearer {k}"));
        }
        let resp = req
            .send_json(serde_json::json!({ "text": text }))
            .map_err(|e| e.to_string())?;
        resp.into_json().map_err(|e| e.to_string())
    }
}

impl AnnotationProvider for RemoteProvider {
    fn name(&self) -> &str {
        "remote"
    }

    fn annotate(&self, text: &str) -> Result<Annotation, RedditError> {
        let mut delay = self.base_backoff;
        let mut attempt = 0;
        let answer = loop {
            match self.call_once(text) {
                Ok(a) => break a,
                Err(e) if attempt >= self.max_retries => {
                    return Err(RedditError::ProviderUnavailable(e));
                }
                Err(_) => {
                    thread::sleep(delay);
                    delay = (delay * 2).min(self.max_backoff);
                    attempt += 1;
                }
            }
        };
        let scam_type: ScamType = answer
            .scam_type
            .parse()
            .map_err(RedditError::ProviderUnavailable)?;
        let success = match answer.success {
            serde_json::Value::Bool(b) => b,
            serde_json::Value::Number(n) if n.as_u64() == Some(1) => true,
            serde_json::Value::Number(n) if n.as_u64() == Some(0) => false,
            other => {
                return Err(RedditError::ProviderUnavailable(format!(
                    "bad success flag {other}"
                )))
            }
        };
        Ok(Annotation {
            scam_type,
            success,
            provider: Some(format!("remote:{}", self.url)),
        })
    }
}

/// The remote provider if its endpoint is configured, else the keyword one.
pub fn provider_from_env() -> Box<dyn AnnotationProvider> {
    match RemoteProvider::from_env() {
        Some(p) => Box::new(p),
        None => Box::new(KeywordProvider),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tech_support_keywords() {
        let (t, _) = KeywordProvider.classify("They wanted a gift card after microsoft support called me");
        assert_eq!(t, ScamType::TechSupport);
    }

    #[test]
    fn empty_is_undetected() {
        assert_eq!(KeywordProvider.classify(""), (ScamType::Undetected, false));
    }

    #[test]
    fn ties_are_undetected() {
        let (t, _) = KeywordProvider.classify("lottery job");
        assert_eq!(t, ScamType::Undetected);
    }

    #[test]
    fn success_phrase() {
        let (t, s) = KeywordProvider.classify("I lost $500 on a crypto investment");
        assert_eq!(t, ScamType::Investment);
        assert!(s);
    }

    #[test]
    fn phrases_match_whole_words() {
        let ws = words("jobs job");
        assert_eq!(phrase_hits(&ws, "job"), 1);
        assert_eq!(phrase_hits(&ws, "jobs job"), 1);
        assert_eq!(phrase_hits(&ws, "job jobs"), 0);
    }

    #[test]
    fn annotate_keeps_existing() {
        let mut r = ScamReport::new("1", "lottery").annotated(ScamType::Job, true);
        annotate(&mut r, &KeywordProvider).unwrap();
        assert_eq!(r.scam_type(), Some(ScamType::Job));
        let mut r = ScamReport::new("2", "lottery prize");
        annotate(&mut r, &KeywordProvider).unwrap();
        let a = r.annotation.unwrap();
        assert_eq!(a.scam_type, ScamType::Lottery);
        assert_eq!(a.provider.as_deref(), Some("keyword-v1"));
    }

    #[test]
    fn unreachable_remote_is_unavailable() {
        let port = std::net::TcpListener::bind("127.0.0.1:0")
            .unwrap()
            .local_addr()
            .unwrap()
            .port();
        let mut p = RemoteProvider::new(
            format!("http://127.0.0.1:{port}/annotate"),
            None,
            Duration::from_millis(200),
        );
        p.max_retries = 1;
        p.base_backoff = Duration::from_millis(1);
        let mut r = ScamReport::new("1", "hello");
        let err = annotate(&mut r, &p).unwrap_err();
        assert!(matches!(err, RedditError::ProviderUnavailable(_)));
        assert!(r.annotation.is_none());
    }
}
