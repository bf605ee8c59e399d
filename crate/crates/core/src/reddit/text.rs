//! Scam-report text normalization.
//!
//! Stages, in order: slang substitution, URL removal, mention/hashtag
//! stripping, lowercasing, contraction expansion, elongation reduction, and
//! removal of characters other than letters, digits, whitespace, and
//! `. , ! ? '`. Whitespace is collapsed at the end.
//!
//! Lookups and removals work on *segments*, maximal runs of alphanumerics and
//! apostrophes, and removed spans are replaced by a space. That keeps the
//! output a fixed point: no stage can splice two segments into a new slang
//! word or contraction on a second pass.

use std::collections::HashMap;
use std::sync::OnceLock;

pub const SLANG_TABLE: &str = include_str!("../../data/slang.tsv");
pub const CONTRACTION_TABLE: &str = include_str!("../../data/contractions.tsv");

/// Version tag of the bundled slang and contraction tables.
pub const TABLES_VERSION: &str = "1";

/// Parses a two-column tab-separated table. `#` starts a comment line.
pub fn parse_table(src: &str) -> HashMap<String, String> {
    src.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .filter_map(|l| l.split_once('\t'))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}

fn slang() -> &'static HashMap<String, String> {
    static T: OnceLock<HashMap<String, String>> = OnceLock::new();
    T.get_or_init(|| parse_table(SLANG_TABLE))
}

fn contractions() -> &'static HashMap<String, String> {
    static T: OnceLock<HashMap<String, String>> = OnceLock::new();
    T.get_or_init(|| parse_table(CONTRACTION_TABLE))
}

fn is_segment_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\''
}

fn is_kept(c: char) -> bool {
    c.is_alphanumeric() || c.is_whitespace() || matches!(c, '.' | ',' | '!' | '?' | '\'')
}

/// Lowercases characters whose lowercase form is a single character. Others
/// (e.g. dotted capital I) are left as they are.
fn lower_char(c: char) -> char {
    let mut it = c.to_lowercase();
    match (it.next(), it.next()) {
        (Some(l), None) => l,
        _ => c,
    }
}

fn lowercase(s: &str) -> String {
    s.chars().map(lower_char).collect()
}

/// Collapses runs of three or more identical letters to two.
pub fn reduce_elongation(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut prev: Option<char> = None;
    let mut run = 0;
    for c in s.chars() {
        if Some(c) == prev {
            run += 1;
        } else {
            prev = Some(c);
            run = 1;
        }
        if run <= 2 || !c.is_alphabetic() {
            out.push(c);
        }
    }
    out
}

/// The form a segment takes after lowercasing and elongation reduction, used
/// as the table lookup key.
fn lookup_key(segment: &str) -> String {
    reduce_elongation(&lowercase(segment))
}

/// Rewrites every segment through `f`; non-segment characters pass through.
fn map_segments(s: &str, mut f: impl FnMut(&str) -> Option<String>) -> String {
    let mut out = String::with_capacity(s.len());
    let mut seg = String::new();
    let mut flush = |seg: &mut String, out: &mut String| {
        if !seg.is_empty() {
            match f(seg) {
                Some(rep) => out.push_str(&rep),
                None => out.push_str(seg),
            }
            seg.clear();
        }
    };
    for c in s.chars() {
        if is_segment_char(c) {
            seg.push(c);
        } else {
            flush(&mut seg, &mut out);
            out.push(c);
        }
    }
    flush(&mut seg, &mut out);
    out
}

pub fn replace_slang(s: &str) -> String {
    let table = slang();
    map_segments(s, |seg| table.get(&lookup_key(seg)).cloned())
}

/// Drops whitespace tokens containing `://` and spans starting with `www.`.
pub fn remove_urls(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for (i, token) in s.split_whitespace().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        if token.contains("://") {
            continue;
        }
        // spans of kept characters, split at the characters the final stage
        // would turn into spaces
        let mut span = String::new();
        let emit = |span: &mut String, out: &mut String| {
            let head: String = span.chars().take(4).map(lower_char).collect();
            if head == "www." {
                out.push(' ');
            } else {
                out.push_str(span);
            }
            span.clear();
        };
        for c in token.chars() {
            if is_kept(c) {
                span.push(c);
            } else {
                emit(&mut span, &mut out);
                out.push(c);
            }
        }
        emit(&mut span, &mut out);
    }
    out
}

/// Removes `@name` and `#tag` (the sigil plus the following word run).
pub fn strip_mentions(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        if (c == '@' || c == '#')
            && chars
                .peek()
                .is_some_and(|n| n.is_alphanumeric() || *n == '_')
        {
            while chars
                .peek()
                .is_some_and(|n| n.is_alphanumeric() || *n == '_')
            {
                chars.next();
            }
            out.push(' ');
        } else {
            out.push(c);
        }
    }
    out
}

pub fn expand_contractions(s: &str) -> String {
    let s = s.replace('\u{2019}', "'");
    let table = contractions();
    map_segments(&s, |seg| table.get(&lookup_key(seg)).cloned())
}

/// Replaces every character outside the kept set with a space.
pub fn strip_symbols(s: &str) -> String {
    s.chars().map(|c| if is_kept(c) { c } else { ' ' }).collect()
}

fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Runs the full normalization pipeline. Idempotent.
pub fn normalize_text(raw: &str) -> String {
    let s = replace_slang(raw);
    let s = remove_urls(&s);
    let s = strip_mentions(&s);
    let s = lowercase(&s);
    let s = expand_contractions(&s);
    let s = reduce_elongation(&s);
    let s = strip_symbols(&s);
    collapse_whitespace(&s)
}
