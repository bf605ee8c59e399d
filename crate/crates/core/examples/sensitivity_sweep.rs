//! Sweeps every weight over [0, 1] on the sample survey and prints the
//! spread of mean SCVI each one produces.

use std::fs::File;
use std::path::Path;

use scvi::index::{WeightConfig, WeightKey};
use scvi::scores::ScoreRow;
use scvi::stats::sensitivity_sweep;
use scvi::survey::{ingest_survey, DivisorMode, EncodingSchema};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/survey_sample.csv");
    let out = ingest_survey(File::open(path)?, &EncodingSchema::bundled_ipoll())?;
    let w = WeightConfig::uniform();
    let data: Vec<_> = out
        .records
        .iter()
        .filter_map(|r| ScoreRow::from_record(r, &w, DivisorMode::PresentCount).composites())
        .collect();

    let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    for key in WeightKey::ALL {
        let curve = sensitivity_sweep(&data, &w, key, &grid)?;
        let means: Vec<f64> = curve.points.iter().map(|p| p.mean_scvi).collect();
        let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        println!("{:<6} range {:.3} .. {:.3} (spread {:.3})", key.name(), lo, hi, hi - lo);
    }
    Ok(())
}
