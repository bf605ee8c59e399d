//! Scores the sample survey with SCVI and both comparators, then prints the
//! rank correlations between the three indices.

use std::fs::File;
use std::path::Path;

use scvi::comparators::{cvss_like, svi_like, ComparatorMapping};
use scvi::index::WeightConfig;
use scvi::scores::ScoreRow;
use scvi::stats::{format_p, spearman};
use scvi::survey::{ingest_survey, DivisorMode, EncodingSchema};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/survey_sample.csv");
    let out = ingest_survey(File::open(path)?, &EncodingSchema::bundled_ipoll())?;
    let w = WeightConfig::uniform();
    let rows: Vec<ScoreRow> = out
        .records
        .iter()
        .map(|r| ScoreRow::from_record(r, &w, DivisorMode::PresentCount))
        .filter(|r| r.scvi().is_some())
        .collect();

    let cvss_map = ComparatorMapping::bundled_cvss();
    let scvi: Vec<f64> = rows.iter().map(|r| r.scvi().unwrap()).collect();
    let cvss = rows
        .iter()
        .map(|r| cvss_like(r, &cvss_map).map(|s| s.value()))
        .collect::<Result<Vec<_>, _>>()?;
    let svi: Vec<f64> = svi_like(&rows, &ComparatorMapping::bundled_svi())?
        .into_iter()
        .map(|s| s.value())
        .collect();

    for (a, x, b, y) in [("SCVI", &scvi, "CVSS", &cvss), ("SCVI", &scvi, "SVI", &svi), ("CVSS", &cvss, "SVI", &svi)] {
        let c = spearman(x, y)?;
        println!("{a:>4} vs {b:<4} rho={:+.3} p={} n={}", c.rho, format_p(c.p), c.n);
    }
    Ok(())
}
