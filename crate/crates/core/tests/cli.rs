mod common;

use std::ffi::OsString;
use std::fs;
use std::path::Path;
use std::process::Command;

use common::fixture;
use scvi::manifest::{RunManifest, MANIFEST_FILE};
use scvi::scores::{read_scores, write_scores};

fn run(args: &[&dyn AsRef<std::ffi::OsStr>]) -> i32 {
    let mut argv: Vec<OsString> = vec!["scvi".into()];
    argv.extend(args.iter().map(|a| a.as_ref().to_os_string()));
    scvi::cli::run(argv)
}

fn manifest(dir: &Path) -> RunManifest {
    serde_json::from_slice(&fs::read(dir.join(MANIFEST_FILE)).unwrap()).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12
}

#[test]
fn score_hand_fixture() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run1");
    let input = fixture("survey_hand.csv");
    assert_eq!(run(&[&"score", &"--input", &input, &"--weights", &"uniform", &"--out", &out]), 0);

    let rows = read_scores(fs::File::open(out.join("scores.csv")).unwrap()).unwrap();
    let ids: Vec<&str> = rows.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids, ["r1", "r2", "r4"]);

    // r1: A = (0 + 5)/2, B = 5, P = (5 + 0)/2, E = ((5 + 5)/2 + 0)/2;
    // F = (5 + 0)/10 * 5, C = S = 0.
    let r1 = &rows[0];
    assert!(close(r1.ivi().unwrap(), 3.125));
    assert!(close(r1.asi().unwrap(), 5.0 / 6.0));
    assert!(close(r1.scvi().unwrap(), 95.0 / 48.0));
    assert!(close(r1.get("ipoll_ivi").unwrap(), 20.0 / 7.0));
    assert_eq!(r1.state, "CA");

    // r2: A = 3, B = 0, P = 2.5, E = ((3 + 0)/2 + 5)/2; F = 6/10 * 5, C = S = 5.
    let r2 = &rows[1];
    assert!(close(r2.ivi().unwrap(), 2.1875));
    assert!(close(r2.asi().unwrap(), 13.0 / 3.0));
    assert!(close(r2.scvi().unwrap(), 313.0 / 96.0));

    // r4 answered one awareness question only: no index values
    let r4 = &rows[2];
    assert_eq!(r4.get("a_a"), Some(1.0));
    assert_eq!(r4.scvi(), None);
    assert_eq!(r4.state, "OH");

    let rejects = fs::read_to_string(out.join("rejects.jsonl")).unwrap();
    assert_eq!(rejects.lines().count(), 1);
    let rej: serde_json::Value = serde_json::from_str(rejects.trim()).unwrap();
    assert_eq!(rej["row"], 3);
    assert_eq!(rej["question"], "Q7");
    assert_eq!(rej["answer"], "Maybe");

    let m = manifest(&out);
    assert_eq!(m.subcommand, "score");
    assert_eq!(m.outputs, ["scores.csv", "rejects.jsonl"]);
    assert_eq!(m.inputs[0].role, "survey");
    assert_eq!(m.inputs[0].sha256, scvi::manifest::sha256_hex(&fs::read(&input).unwrap()));
    assert_eq!(m.weights.unwrap().alpha, 0.5);
    assert_eq!(m.params["records_without_scvi"], 1);
}

#[test]
fn scores_file_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("s");
    assert_eq!(run(&[&"score", &"--input", &fixture("survey_sample.csv"), &"--out", &out]), 0);
    let bytes = fs::read(out.join("scores.csv")).unwrap();
    let rows = read_scores(bytes.as_slice()).unwrap();
    assert_eq!(rows.len(), 60);
    let mut again = Vec::new();
    write_scores(&rows, &mut again).unwrap();
    assert_eq!(again, bytes);
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let scores = tmp.path().join("s");
    assert_eq!(run(&[&"score", &"--input", &fixture("survey_sample.csv"), &"--out", &scores]), 0);
    let input = scores.join("scores.csv");
    for sub in ["montecarlo", "sensitivity"] {
        let a = tmp.path().join(format!("{sub}-a"));
        let b = tmp.path().join(format!("{sub}-b"));
        for dir in [&a, &b] {
            let code = if sub == "montecarlo" {
                run(&[&sub, &"--input", &input, &"--iterations", &"10", &"--seed", &"7", &"--out", dir])
            } else {
                run(&[&sub, &"--input", &input, &"--out", dir])
            };
            assert_eq!(code, 0, "{sub}");
        }
        let m = manifest(&a);
        assert!(!m.outputs.is_empty());
        for name in m.outputs.iter().map(String::as_str).chain([MANIFEST_FILE]) {
            assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{sub}/{name}");
        }
    }
    let m = manifest(&tmp.path().join("montecarlo-a"));
    assert_eq!(m.seed, Some(7));
    assert!(m.ranges.is_some());
    let runs = fs::read_to_string(tmp.path().join("montecarlo-a/runs.jsonl")).unwrap();
    assert_eq!(runs.lines().count(), 10);
}

#[test]
fn missing_input_is_io_error_without_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("never");
    let missing = tmp.path().join("nope.csv");
    assert_eq!(run(&[&"score", &"--input", &missing, &"--out", &out]), 2);
    assert!(!out.exists());
    assert_eq!(fs::read_dir(tmp.path()).unwrap().count(), 0);
}

#[test]
fn validation_errors_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let weights = tmp.path().join("w.toml");
    fs::write(
        &weights,
        "alpha = 0.6\nbeta = 0.5\nw_a = 0.25\nw_b = 0.25\nw_p = 0.25\nw_e = 0.25\nw_f = 0.4\nw_c = 0.3\nw_s = 0.3\n",
    )
    .unwrap();
    let out = tmp.path().join("o");
    let code = run(&[&"score", &"--input", &fixture("survey_hand.csv"), &"--weights", &weights, &"--out", &out]);
    assert_eq!(code, 1);
    assert!(!out.exists());

    let ranges = tmp.path().join("r.toml");
    fs::write(&ranges, "w_a = [0.6, 0.7]\nw_b = [0.6, 0.7]\n").unwrap();
    let scores = tmp.path().join("s");
    assert_eq!(run(&[&"score", &"--input", &fixture("survey_sample.csv"), &"--out", &scores]), 0);
    let code = run(&[
        &"montecarlo",
        &"--input",
        &scores.join("scores.csv"),
        &"--ranges",
        &ranges,
        &"--iterations",
        &"5",
        &"--out",
        &out,
    ]);
    assert_eq!(code, 1);
    assert!(!out.exists());

    let bad_groups = tmp.path().join("g.csv");
    fs::write(&bad_groups, "group,n,mean_ivi,mean_asi,mean_scvi,ci_lower,ci_upper\nZZ,3,1,1,1,0.5,1.5\n").unwrap();
    assert_eq!(run(&[&"heatmap", &"--input", &bad_groups, &"--out", &out]), 1);
}

#[test]
fn weights_file_is_used_and_recorded() {
    let tmp = tempfile::tempdir().unwrap();
    let weights = tmp.path().join("w.toml");
    fs::write(
        &weights,
        "alpha = 1.0\nbeta = 0.0\nw_a = 0.25\nw_b = 0.25\nw_p = 0.25\nw_e = 0.25\nw_f = 0.4\nw_c = 0.3\nw_s = 0.3\n",
    )
    .unwrap();
    let out = tmp.path().join("o");
    let code = run(&[&"score", &"--input", &fixture("survey_hand.csv"), &"--weights", &weights, &"--out", &out]);
    assert_eq!(code, 0);
    let rows = read_scores(fs::File::open(out.join("scores.csv")).unwrap()).unwrap();
    assert!(close(rows[0].scvi().unwrap(), 3.125));
    let m = manifest(&out);
    assert_eq!(m.inputs.iter().filter(|i| i.role == "weights").count(), 1);
    assert_eq!(m.weights.unwrap().w_f, 0.4);
}

#[test]
fn full_survey_chain() {
    let tmp = tempfile::tempdir().unwrap();
    let p = |s: &str| tmp.path().join(s);
    assert_eq!(run(&[&"encode", &"--input", &fixture("survey_sample.csv"), &"--out", &p("enc")]), 0);
    let encoded = fs::read_to_string(p("enc/encoded.csv")).unwrap();
    assert!(encoded.starts_with("id,gender,race_ethnicity,age_group,state,AA,AK,BR,PC,PI,EE,ER,F,C,S\n"));
    assert_eq!(encoded.lines().count(), 61);

    assert_eq!(run(&[&"score", &"--input", &fixture("survey_sample.csv"), &"--out", &p("s")]), 0);
    let scores = p("s/scores.csv");

    assert_eq!(run(&[&"aggregate", &"--input", &scores, &"--group-by", &"state", &"--out", &p("agg")]), 0);
    let groups = fs::read_to_string(p("agg/groups.csv")).unwrap();
    assert!(groups.starts_with("group,n,mean_ivi,mean_asi,mean_scvi,ci_lower,ci_upper\n"));

    assert_eq!(run(&[&"aggregate", &"--input", &scores, &"--group-by", &"gender", &"--ci", &"t", &"--out", &p("aggt")]), 0);
    assert_eq!(manifest(&p("aggt")).params["ci"], "t");

    assert_eq!(run(&[&"heatmap", &"--input", &p("agg/groups.csv"), &"--out", &p("map")]), 0);
    let svg = fs::read_to_string(p("map/heatmap.svg")).unwrap();
    roxmltree::Document::parse(&svg).unwrap();
    let tiles = fs::read_to_string(p("map/heatmap.csv")).unwrap();
    assert_eq!(tiles.lines().count(), 52);

    assert_eq!(run(&[&"compare", &"--input", &scores, &"--out", &p("cmp")]), 0);
    for f in ["comparison.csv", "correlations.csv", "gender.csv", "race_ethnicity.csv", "age_group.csv", "gaps.csv"] {
        assert!(p("cmp").join(f).exists(), "{f}");
    }
    let gender = fs::read_to_string(p("cmp/gender.csv")).unwrap();
    assert!(gender.starts_with("Gender,SVI,CVSS,SCVI\n"));
    let corr = fs::read_to_string(p("cmp/correlations.csv")).unwrap();
    let pairs: Vec<String> = corr.lines().skip(1).map(|l| l.splitn(3, ',').take(2).collect::<Vec<_>>().join(",")).collect();
    assert_eq!(pairs, ["SCVI,CVSS", "SCVI,SVI", "CVSS,SVI"]);

    assert_eq!(run(&[&"sensitivity", &"--input", &scores, &"--target", &"alpha", &"--steps", &"3", &"--out", &p("sens")]), 0);
    let sens = fs::read_to_string(p("sens/sensitivity.csv")).unwrap();
    assert_eq!(sens.lines().count(), 1 + 3);
}

#[test]
fn compare_with_explicit_mappings() {
    let tmp = tempfile::tempdir().unwrap();
    let scores = tmp.path().join("s");
    assert_eq!(run(&[&"score", &"--input", &fixture("survey_sample.csv"), &"--out", &scores]), 0);
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let out = tmp.path().join("c");
    let code = run(&[
        &"compare",
        &"--input",
        &scores.join("scores.csv"),
        &"--mapping",
        &data.join("cvss_like.mapping.toml"),
        &"--mapping",
        &data.join("svi_like.mapping.toml"),
        &"--out",
        &out,
    ]);
    assert_eq!(code, 0);
    let m = manifest(&out);
    assert_eq!(m.inputs.iter().filter(|i| i.role == "mapping").count(), 2);
    assert_eq!(m.versions["cvss_mapping"], "cvss-like@1");
}

#[test]
fn reddit_score_fixture() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("r");
    assert_eq!(run(&[&"reddit-score", &"--input", &fixture("reports_sample.jsonl"), &"--out", &out]), 0);
    let m = manifest(&out);
    assert_eq!(m.params["annotation_provider"], "keyword-v1");
    assert_eq!(m.versions["text_tables"], scvi::reddit::TABLES_VERSION);
    let rows = read_scores(fs::File::open(out.join("scores.csv")).unwrap()).unwrap();
    // every report ends up annotated by the fixture or the keyword provider
    assert_eq!(rows.len(), 14);
    for r in &rows {
        let s = r.scvi().unwrap();
        assert!((0.0..=5.0).contains(&s));
    }
    let types = fs::read_to_string(out.join("types.csv")).unwrap();
    assert_eq!(types.lines().count(), 1 + 8);
    assert_eq!(run(&[&"reddit-score", &"--input", &fixture("reports_sample.jsonl"), &"--financial-weight", &"1.5", &"--out", &tmp.path().join("x")]), 1);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_scvi");
    let status = Command::new(bin).arg("--help").output().unwrap();
    assert!(status.status.success());
    let out = Command::new(bin).args(["score", "--input", "/nonexistent/x.csv", "--out"]).arg(std::env::temp_dir().join("scvi-never")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    let out = Command::new(bin).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
