//! Scores one hand-built respondent under the uniform weights and under a
//! custom configuration read from TOML.

use scvi::index::{score_factors, validate_weights, AsiFactors, IviFactors, RawWeights, WeightConfig};
use scvi::Score;

fn s(v: f64) -> Option<Score> {
    Some(Score::new(v).unwrap())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ivi = IviFactors {
        unfamiliarity: s(4.0),
        protective_knowledge_gap: s(3.0),
        risky_behavior: s(2.5),
        security_practice_gap: None,
        trust: s(4.5),
        impulsivity: s(1.0),
        past_encounters: s(5.0),
        incident_response: s(2.0),
    };
    let asi = AsiFactors {
        attempted: s(3.0),
        financial: s(4.0),
        mimicry: s(2.0),
        ..Default::default()
    };

    let uniform = score_factors(&ivi, &asi, &WeightConfig::uniform())?;
    println!("uniform:  ivi={:.3} asi={:.3} scvi={:.3}", uniform.ivi.value(), uniform.asi.value(), uniform.scvi.value());

    let raw: RawWeights = toml::from_str(
        "alpha = 0.7\nbeta = 0.3\nw_a = 0.4\nw_b = 0.2\nw_p = 0.3\nw_e = 0.1\nw_f = 0.2\nw_c = 0.6\nw_s = 0.2\n",
    )?;
    let w = validate_weights(&raw)?;
    let custom = score_factors(&ivi, &asi, &w)?;
    println!("custom:   ivi={:.3} asi={:.3} scvi={:.3}", custom.ivi.value(), custom.asi.value(), custom.scvi.value());
    println!("{}", serde_json::to_string_pretty(&custom)?);

    let bad = RawWeights { alpha: 0.9, ..raw };
    if let Err(e) = validate_weights(&bad) {
        println!("rejected: {e}");
    }
    Ok(())
}
