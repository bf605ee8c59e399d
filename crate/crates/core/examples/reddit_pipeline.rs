//! Runs the text pipeline over the sample report corpus with the keyword
//! annotator and prints the per-type severity table and each report's score.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use scvi::reddit::{read_reports, score_corpus, KeywordProvider, PipelineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/reports_sample.jsonl");
    let reports = read_reports(BufReader::new(File::open(path)?))?;
    let out = score_corpus(reports, &KeywordProvider, &PipelineConfig::default())?;

    println!("{:<16} {:>3} {:>5} {:>5} {:>5}", "type", "n", "F", "C", "S");
    for t in &out.types {
        let soph = t.sophistication.map_or("-".to_string(), |s| format!("{:.2}", s.value()));
        println!(
            "{:<16} {:>3} {:>5.2} {:>5.2} {:>5}",
            t.scam_type.as_str(),
            t.reports,
            t.frequency.value(),
            t.consequence.value(),
            soph
        );
    }
    println!();
    for r in &out.reports {
        println!("{} {:<16} scvi={:.3}  {}", r.id, r.scam_type.as_str(), r.scvi.value(), r.normalized);
    }
    Ok(())
}
