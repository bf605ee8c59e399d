//! CSV ingestion of raw survey answers.
//!
//! The header row names question ids (any column matching a schema question)
//! and the optional columns `id`/`respondent_id`, `gender`, `race_ethnicity`,
//! `age_group`, `state`, `svi`, and `cvss`. Other columns are ignored. Blank
//! answer cells are treated as not asked.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::record::{Demographics, EncodedRecord, RecordError};
use super::schema::EncodingSchema;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("survey input has no header row")]
    MissingHeader,
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// One rejected row. `row` is 1-based and excludes the header.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reject {
    pub row: usize,
    pub question: String,
    pub answer: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct IngestOutcome {
    pub records: Vec<EncodedRecord>,
    /// Sorted by row.
    pub rejects: Vec<Reject>,
}

const ID_COLUMNS: [&str; 2] = ["id", "respondent_id"];
const DEMOGRAPHIC_COLUMNS: [&str; 4] = ["gender", "race_ethnicity", "age_group", "state"];

enum Column {
    Id,
    Demographic(usize),
    Svi,
    Cvss,
    Question(String),
    Other,
}

fn classify(header: &str, schema: &EncodingSchema) -> Column {
    let h = header.trim();
    if ID_COLUMNS.contains(&h) {
        Column::Id
    } else if let Some(i) = DEMOGRAPHIC_COLUMNS.iter().position(|c| *c == h) {
        Column::Demographic(i)
    } else if h == "svi" {
        Column::Svi
    } else if h == "cvss" {
        Column::Cvss
    } else if schema.has_question(h) {
        Column::Question(h.to_string())
    } else {
        Column::Other
    }
}

fn reject(row: usize, question: &str, answer: &str, reason: impl ToString) -> Reject {
    Reject {
        row,
        question: question.to_string(),
        answer: answer.to_string(),
        reason: reason.to_string(),
    }
}

fn parse_external(row: usize, col: &str, cell: &str) -> Result<Option<f64>, Reject> {
    let cell = cell.trim();
    if cell.is_empty() {
        return Ok(None);
    }
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        _ => Err(reject(row, col, cell, "not a finite number")),
    }
}

fn encode_row(
    row: usize,
    cells: &csv::StringRecord,
    columns: &[Column],
    schema: &EncodingSchema,
) -> Result<EncodedRecord, Reject> {
    let mut id = row.to_string();
    let mut demo = [""; 4];
    let mut svi = None;
    let mut cvss = None;
    let mut scores = BTreeMap::new();
    for (col, cell) in columns.iter().zip(cells.iter()) {
        match col {
            Column::Id if !cell.trim().is_empty() => id = cell.trim().to_string(),
            Column::Id | Column::Other => {}
            Column::Demographic(i) => demo[*i] = cell,
            Column::Svi => svi = parse_external(row, "svi", cell)?,
            Column::Cvss => cvss = parse_external(row, "cvss", cell)?,
            Column::Question(q) => {
                if cell.trim().is_empty() {
                    continue;
                }
                // A dimension without a rule for this answer skips it, as long
                // as some dimension recognises the answer.
                let mut matched = false;
                for d in schema.dimensions() {
                    if let Some(action) = d.question(q).and_then(|spec| spec.encode(cell)) {
                        scores.insert((d.id, q.clone()), action);
                        matched = true;
                    }
                }
                if !matched {
                    return Err(reject(row, q, cell, "answer does not match any rule"));
                }
            }
        }
    }
    let demographics = Demographics::parse(demo[0], demo[1], demo[2], demo[3]).map_err(|e| {
        let (field, value) = match &e {
            RecordError::Vocabulary { field, value } => (*field, value.as_str()),
            _ => ("demographics", ""),
        };
        reject(row, field, value, &e)
    })?;
    let mut rec = EncodedRecord::new(id, scores, demographics, schema);
    rec.external_svi = svi;
    rec.external_cvss = cvss;
    Ok(rec)
}

/// Reads and encodes a survey table. Rows that fail to encode go to the
/// rejects list; the rest of the file is still processed.
pub fn ingest_survey<R: Read>(input: R, schema: &EncodingSchema) -> Result<IngestOutcome, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.is_empty() || headers.iter().all(|h| h.trim().is_empty()) {
        return Err(IngestError::MissingHeader);
    }
    let columns: Vec<Column> = headers.iter().map(|h| classify(h, schema)).collect();

    let mut rows = Vec::new();
    let mut rejects = Vec::new();
    for (i, result) in reader.records().enumerate() {
        match result {
            Ok(r) => rows.push((i + 1, r)),
            Err(e) if matches!(e.kind(), csv::ErrorKind::UnequalLengths { .. }) => {
                rejects.push(reject(i + 1, "", "", "row has the wrong number of fields"));
            }
            Err(e) => return Err(e.into()),
        }
    }

    let encoded: Vec<_> = rows
        .par_iter()
        .map(|(row, cells)| encode_row(*row, cells, &columns, schema))
        .collect();
    let mut records = Vec::with_capacity(encoded.len());
    for e in encoded {
        match e {
            Ok(rec) => records.push(rec),
            Err(r) => rejects.push(r),
        }
    }
    rejects.sort_by_key(|r| r.row);
    Ok(IngestOutcome { records, rejects })
}

/// Writes the rejects report as JSON lines.
pub fn write_rejects<W: Write>(mut out: W, rejects: &[Reject]) -> std::io::Result<()> {
    for r in rejects {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
