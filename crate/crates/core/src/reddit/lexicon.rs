//! Open word-category lexicons and per-report lexical features.
//!
//! A lexicon directory holds one `<category>.txt` file per category (one
//! entry per line, `#` comments, a trailing `*` marks a prefix entry) and an
//! optional `VERSION` file.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon category `{0}` is required but not loaded")]
    MissingLexiconCategory(String),
    #[error("duplicate entry `{entry}` in lexicon category `{category}`")]
    DuplicateEntry { category: String, entry: String },
    #[error("reading lexicons: {0}")]
    Io(#[from] std::io::Error),
}

/// Categories [`extract_features`] needs.
pub const REQUIRED_CATEGORIES: [&str; 10] = [
    "negation", "affect", "posemo", "negemo", "cogproc", "percept", "informal", "i", "we", "you",
];

const BUNDLED: [(&str, &str); 10] = [
    ("affect", include_str!("../../data/lexicons/affect.txt")),
    ("cogproc", include_str!("../../data/lexicons/cogproc.txt")),
    ("i", include_str!("../../data/lexicons/i.txt")),
    ("informal", include_str!("../../data/lexicons/informal.txt")),
    ("negation", include_str!("../../data/lexicons/negation.txt")),
    ("negemo", include_str!("../../data/lexicons/negemo.txt")),
    ("percept", include_str!("../../data/lexicons/percept.txt")),
    ("posemo", include_str!("../../data/lexicons/posemo.txt")),
    ("we", include_str!("../../data/lexicons/we.txt")),
    ("you", include_str!("../../data/lexicons/you.txt")),
];
const BUNDLED_VERSION: &str = include_str!("../../data/lexicons/VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    pub category: String,
    exact: HashSet<String>,
    prefixes: Vec<String>,
}

impl Lexicon {
    pub fn parse(category: &str, src: &str) -> Result<Self, LexiconError> {
        let mut exact = HashSet::new();
        let mut prefixes = Vec::new();
        let mut seen = HashSet::new();
        for line in src.lines() {
            let entry = line.trim().to_lowercase();
            if entry.is_empty() || entry.starts_with('#') {
                continue;
            }
            if !seen.insert(entry.clone()) {
                return Err(LexiconError::DuplicateEntry {
                    category: category.to_string(),
                    entry,
                });
            }
            match entry.strip_suffix('*') {
                Some(p) => prefixes.push(p.to_string()),
                None => {
                    exact.insert(entry);
                }
            }
        }
        Ok(Lexicon {
            category: category.to_string(),
            exact,
            prefixes,
        })
    }

    pub fn matches(&self, word: &str) -> bool {
        self.exact.contains(word) || self.prefixes.iter().any(|p| word.starts_with(p.as_str()))
    }

    pub fn len(&self) -> usize {
        self.exact.len() + self.prefixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A versioned set of lexicons keyed by category.
#[derive(Debug, Clone, PartialEq)]
pub struct LexiconSet {
    pub version: String,
    categories: BTreeMap<String, Lexicon>,
}

impl LexiconSet {
    pub fn new(version: impl Into<String>) -> Self {
        LexiconSet {
            version: version.into(),
            categories: BTreeMap::new(),
        }
    }

    pub fn bundled() -> Self {
        let mut set = LexiconSet::new(BUNDLED_VERSION.trim());
        for (cat, src) in BUNDLED {
            set.insert(Lexicon::parse(cat, src).expect("bundled lexicons are valid"));
        }
        set
    }

    /// Loads every `*.txt` file in `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self, LexiconError> {
        let version = match fs::read_to_string(dir.join("VERSION")) {
            Ok(v) => v.trim().to_string(),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => "unversioned".to_string(),
            Err(e) => return Err(e.into()),
        };
        let mut set = LexiconSet::new(version);
        let mut paths: Vec<_> = fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "txt"))
            .collect();
        paths.sort();
        for p in paths {
            let cat = p
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or_default()
                .to_string();
            let src = fs::read_to_string(&p)?;
            set.insert(Lexicon::parse(&cat, &src)?);
        }
        Ok(set)
    }

    pub fn insert(&mut self, lexicon: Lexicon) {
        self.categories.insert(lexicon.category.clone(), lexicon);
    }

    pub fn get(&self, category: &str) -> Result<&Lexicon, LexiconError> {
        self.categories
            .get(category)
            .ok_or_else(|| LexiconError::MissingLexiconCategory(category.to_string()))
    }

    pub fn categories(&self) -> impl Iterator<Item = &str> {
        self.categories.keys().map(String::as_str)
    }
}

/// Lexical rates of one report, each per 100 word tokens.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LexicalFeatures {
    pub token_count: usize,
    /// Pronoun-based confidence proxy: (we + you - i) per 100 tokens, floored
    /// at 0.
    pub clout: f64,
    pub negation: f64,
    pub affect: f64,
    pub posemo: f64,
    pub negemo: f64,
    pub cogproc: f64,
    pub percept: f64,
    pub informal: f64,
    /// Exclamation marks per 100 tokens.
    pub exclamation: f64,
}

/// Splits normalized text into lowercase words, trimming surrounding
/// punctuation. Punctuation-only tokens are dropped.
pub fn words(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|t| t.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase())
        .filter(|w| !w.is_empty())
        .collect()
}

pub fn extract_features(normalized: &str, lexicons: &LexiconSet) -> Result<LexicalFeatures, LexiconError> {
    let lex: Vec<&Lexicon> = REQUIRED_CATEGORIES
        .iter()
        .map(|c| lexicons.get(c))
        .collect::<Result<_, _>>()?;
    let words = words(normalized);
    let n = words.len();
    let denom = n.max(1) as f64;
    let mut counts = [0usize; REQUIRED_CATEGORIES.len()];
    for w in &words {
        for (i, l) in lex.iter().enumerate() {
            if l.matches(w) {
                counts[i] += 1;
            }
        }
    }
    let rate = |i: usize| 100.0 * counts[i] as f64 / denom;
    let bangs = normalized.chars().filter(|&c| c == '!').count();
    let (i, we, you) = (counts[7] as f64, counts[8] as f64, counts[9] as f64);
    Ok(LexicalFeatures {
        token_count: n,
        clout: (100.0 * (we + you - i) / denom).max(0.0),
        negation: rate(0),
        affect: rate(1),
        posemo: rate(2),
        negemo: rate(3),
        cogproc: rate(4),
        percept: rate(5),
        informal: rate(6),
        exclamation: if n == 0 { 0.0 } else { 100.0 * bangs as f64 / denom },
    })
}
