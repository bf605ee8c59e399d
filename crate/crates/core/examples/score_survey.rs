//! Encodes the bundled sample survey and prints mean scores per state.

use std::collections::BTreeMap;
use std::fs::File;
use std::path::Path;

use scvi::index::WeightConfig;
use scvi::scores::ScoreRow;
use scvi::survey::{ingest_survey, DivisorMode, EncodingSchema};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).map(Into::into).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/survey_sample.csv")
    });
    let schema = EncodingSchema::bundled_ipoll();
    let out = ingest_survey(File::open(&path)?, &schema)?;
    println!("{} records, {} rejected", out.records.len(), out.rejects.len());
    for r in &out.rejects {
        println!("  row {}: {} = {:?} ({})", r.row, r.question, r.answer, r.reason);
    }

    let w = WeightConfig::uniform();
    let rows: Vec<ScoreRow> = out
        .records
        .iter()
        .map(|r| ScoreRow::from_record(r, &w, DivisorMode::PresentCount))
        .collect();

    let mut by_state: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for r in &rows {
        if let Some(v) = r.scvi() {
            by_state.entry(r.state.as_str()).or_default().push(v);
        }
    }
    println!("{:<6} {:>3} {:>6}", "state", "n", "scvi");
    for (state, xs) in by_state {
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        println!("{state:<6} {:>3} {m:>6.3}", xs.len());
    }
    Ok(())
}
