//! The `scvi` command line.
//!
//! Every subcommand reads its inputs fully before touching the output
//! directory, stages outputs next to it, and moves them into place together
//! with `manifest.json` only on success. Exit codes: 0 success, 1 invalid
//! input, 2 I/O failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::comparators::{
    compare_indices, cvss_like, load_mapping, write_correlations, write_group_table, ComparatorKind,
    ComparatorMapping, ComparedRow, SviRanker,
};
use crate::heatmap::{render_svg, tiles, write_tiles_csv};
use crate::index::{validate_weights, RawWeights, WeightConfig, WeightKey};
use crate::manifest::{RunManifest, StagedOutput};
use crate::reddit::{provider_from_env, score_corpus, read_reports, ConsequenceConfig, LexiconSet, PipelineConfig};
use crate::scores::{read_scores, write_scores, ScoreRow};
use crate::stats::{
    group_aggregate, monte_carlo, peak_stats, percentage_gap, read_group_csv, sensitivity_sweep,
    write_group_csv, write_run_jsonl, CiMethod, GroupRow, Selector, WeightRangeSpec,
};
use crate::survey::{
    ingest_survey, load_schema, write_rejects, DimensionId, DivisorMode, EncodingSchema,
};

#[derive(Debug, Parser)]
#[command(name = "scvi", version, about = "Social cyber vulnerability scoring and analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode raw survey answers into dimension scores.
    Encode(EncodeArgs),
    /// Encode survey answers and compute IVI, ASI, and SCVI per respondent.
    Score(ScoreArgs),
    /// Score a JSON-lines corpus of scam reports.
    RedditScore(RedditArgs),
    /// One-at-a-time weight sensitivity sweep over a scores table.
    Sensitivity(SensitivityArgs),
    /// Monte Carlo weight sampling over a scores table.
    Montecarlo(MonteCarloArgs),
    /// Compare SCVI with CVSS-like and SVI-like scores.
    Compare(CompareArgs),
    /// Group means and confidence intervals.
    Aggregate(AggregateArgs),
    /// Render a state choropleth from group summaries.
    Heatmap(HeatmapArgs),
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Schema file; the bundled survey schema when omitted.
    #[arg(long)]
    pub schema: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// `uniform` or a TOML weights file.
    #[arg(long, default_value = "uniform")]
    pub weights: String,
    /// Divide the survey IVI average by seven even when dimensions are missing.
    #[arg(long)]
    pub strict_seven: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RedditArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Directory of lexicon files; the bundled lexicons when omitted.
    #[arg(long)]
    pub lexicons: Option<PathBuf>,
    #[arg(long, default_value = "uniform")]
    pub weights: String,
    /// Share of consequence attributed to financial loss.
    #[arg(long, default_value_t = 0.5)]
    pub financial_weight: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SensitivityArgs {
    /// A scores table.
    #[arg(long)]
    pub input: PathBuf,
    /// Baseline weights.
    #[arg(long, default_value = "uniform")]
    pub weights: String,
    /// Weight to sweep (`alpha`, `w_a`, ...); all eight when omitted.
    #[arg(long)]
    pub target: Option<String>,
    /// Number of evenly spaced grid points on [0, 1].
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MonteCarloArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// TOML weight ranges; `[0, 1]` for every weight when omitted.
    #[arg(long)]
    pub ranges: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    pub iterations: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Comparator mapping files (one CVSS-like and one SVI-like); the bundled
    /// ones fill in whichever is not given.
    #[arg(long)]
    pub mapping: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AggregateArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// `state`, `gender`, `race_ethnicity`, or `age_group`.
    #[arg(long, default_value = "state")]
    pub group_by: String,
    #[arg(long, default_value = "z")]
    pub ci: CiMethod,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct HeatmapArgs {
    /// Group summaries keyed by state code or name.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

/// Failure of a subcommand, split by exit code.
#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Io(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Io(m) => m,
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

fn io_fail(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

type Result<T> = std::result::Result<T, CliError>;

fn read_input(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_weights(spec: &str, m: &mut RunManifest) -> Result<WeightConfig> {
    let w = if spec == "uniform" {
        WeightConfig::uniform()
    } else {
        let path = Path::new(spec);
        let bytes = read_input(path)?;
        m.input("weights", path, &bytes);
        let text = String::from_utf8(bytes).map_err(invalid)?;
        let raw: RawWeights = toml::from_str(&text).map_err(|e| invalid(format!("{spec}: {e}")))?;
        validate_weights(&raw).map_err(invalid)?
    };
    m.weights = Some(w.to_raw());
    Ok(w)
}

fn load_schema_arg(path: &Option<PathBuf>, m: &mut RunManifest) -> Result<EncodingSchema> {
    let schema = match path {
        None => EncodingSchema::bundled_ipoll(),
        Some(p) => {
            let bytes = read_input(p)?;
            m.input("schema", p, &bytes);
            let text = String::from_utf8(bytes).map_err(invalid)?;
            load_schema(&text).map_err(|e| invalid(format!("{}: {e}", p.display())))?
        }
    };
    m.version("schema", format!("{}@{}", schema.name, schema.version));
    Ok(schema)
}

fn load_score_rows(path: &Path, m: &mut RunManifest) -> Result<Vec<ScoreRow>> {
    let bytes = read_input(path)?;
    m.input("scores", path, &bytes);
    read_scores(bytes.as_slice()).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn to_bytes(f: impl FnOnce(&mut Vec<u8>) -> std::result::Result<(), String>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf).map_err(io_fail)?;
    Ok(buf)
}

fn json_line<T: Serialize>(items: &[T]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    for it in items {
        serde_json::to_writer(&mut buf, it).map_err(io_fail)?;
        buf.push(b'\n');
    }
    Ok(buf)
}

fn pretty_json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut buf = serde_json::to_vec_pretty(v).map_err(io_fail)?;
    buf.push(b'\n');
    Ok(buf)
}

fn commit(out: &Path, files: Vec<(&str, Vec<u8>)>, manifest: RunManifest) -> Result<()> {
    let mut stage = StagedOutput::new(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    for (name, bytes) in files {
        stage.write(name, &bytes).map_err(io_fail)?;
    }
    stage
        .commit(manifest)
        .map_err(|e| CliError::Io(format!("{}: {e}", out.display())))
}

fn encode(a: &EncodeArgs) -> Result<()> {
    let mut m = RunManifest::new("encode");
    let schema = load_schema_arg(&a.schema, &mut m)?;
    let bytes = read_input(&a.input)?;
    m.input("survey", &a.input, &bytes);
    let outcome = ingest_survey(bytes.as_slice(), &schema).map_err(invalid)?;

    let dims: Vec<DimensionId> = schema.dimensions().iter().map(|d| d.id).collect();
    let encoded = to_bytes(|buf| {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(buf);
        let mut header = vec!["id", "gender", "race_ethnicity", "age_group", "state"];
        header.extend(dims.iter().map(|d| d.as_str()));
        w.write_record(&header).map_err(|e| e.to_string())?;
        for r in &outcome.records {
            let d = &r.demographics;
            let mut rec = vec![
                r.id.clone(),
                d.gender.clone().unwrap_or_default(),
                d.race_ethnicity.clone().unwrap_or_default(),
                d.age_group.clone().unwrap_or_default(),
                d.state.clone().unwrap_or_default(),
            ];
            rec.extend(dims.iter().map(|id| r.dimension(*id).map(|s| s.value().to_string()).unwrap_or_default()));
            w.write_record(&rec).map_err(|e| e.to_string())?;
        }
        w.flush().map_err(|e| e.to_string())
    })?;
    let rejects = to_bytes(|buf| write_rejects(buf, &outcome.rejects).map_err(|e| e.to_string()))?;
    m.param("records", outcome.records.len());
    m.param("rejected_rows", outcome.rejects.len());
    commit(&a.out, vec![("encoded.csv", encoded), ("rejects.jsonl", rejects)], m)
}

fn score(a: &ScoreArgs) -> Result<()> {
    let mut m = RunManifest::new("score");
    let schema = load_schema_arg(&a.schema, &mut m)?;
    let w = load_weights(&a.weights, &mut m)?;
    let bytes = read_input(&a.input)?;
    m.input("survey", &a.input, &bytes);
    let mode = if a.strict_seven {
        DivisorMode::StrictSeven
    } else {
        DivisorMode::PresentCount
    };
    let outcome = ingest_survey(bytes.as_slice(), &schema).map_err(invalid)?;
    let rows: Vec<ScoreRow> = outcome
        .records
        .iter()
        .map(|r| ScoreRow::from_record(r, &w, mode))
        .collect();
    let scores = to_bytes(|buf| write_scores(&rows, buf).map_err(|e| e.to_string()))?;
    let rejects = to_bytes(|buf| write_rejects(buf, &outcome.rejects).map_err(|e| e.to_string()))?;
    m.param("divisor", mode);
    m.param("records", rows.len());
    m.param("rejected_rows", outcome.rejects.len());
    m.param("records_without_scvi", rows.iter().filter(|r| r.scvi().is_none()).count());
    commit(&a.out, vec![("scores.csv", scores), ("rejects.jsonl", rejects)], m)
}

fn reddit(a: &RedditArgs) -> Result<()> {
    let mut m = RunManifest::new("reddit-score");
    let w = load_weights(&a.weights, &mut m)?;
    let lexicons = match &a.lexicons {
        None => LexiconSet::bundled(),
        Some(dir) => LexiconSet::load_dir(dir).map_err(|e| match e {
            crate::reddit::LexiconError::Io(e) => CliError::Io(format!("{}: {e}", dir.display())),
            e => invalid(e),
        })?,
    };
    m.version("lexicons", lexicons.version.clone());
    m.version("text_tables", crate::reddit::TABLES_VERSION);
    let bytes = read_input(&a.input)?;
    m.input("reports", &a.input, &bytes);
    let reports = read_reports(bytes.as_slice()).map_err(invalid)?;
    let cfg = PipelineConfig {
        lexicons,
        consequence: ConsequenceConfig::new(a.financial_weight).map_err(invalid)?,
        weights: w,
    };
    let provider = provider_from_env();
    m.param("annotation_provider", provider.name());
    m.param("financial_weight", a.financial_weight);
    let out = score_corpus(reports, provider.as_ref(), &cfg).map_err(invalid)?;

    let rows: Vec<ScoreRow> = out
        .reports
        .iter()
        .map(|r| {
            let mut row = ScoreRow::new(r.id.clone());
            let c = r.composites;
            for (name, s) in ["a", "b", "p", "e", "f", "c", "s"].iter().zip(c.ivi.iter().chain(c.asi.iter())) {
                row.set(name, Some(s.value()));
            }
            row.set("ivi", Some(r.ivi.value()));
            row.set("asi", Some(r.asi.value()));
            row.set("scvi", Some(r.scvi.value()));
            row
        })
        .collect();
    let scores = to_bytes(|buf| write_scores(&rows, buf).map_err(|e| e.to_string()))?;
    let types = to_bytes(|buf| {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(buf);
        w.write_record([
            "scam_type", "reports", "successes", "frequency", "financial", "emotional", "consequence", "sophistication",
        ])
        .map_err(|e| e.to_string())?;
        for t in &out.types {
            w.write_record([
                t.scam_type.to_string(),
                t.reports.to_string(),
                t.successes.to_string(),
                t.frequency.value().to_string(),
                t.financial.value().to_string(),
                t.emotional.value().to_string(),
                t.consequence.value().to_string(),
                t.sophistication.map(|s| s.value().to_string()).unwrap_or_default(),
            ])
            .map_err(|e| e.to_string())?;
        }
        w.flush().map_err(|e| e.to_string())
    })?;
    m.param("reports_scored", out.reports.len());
    m.param("reports_skipped", out.skipped.len());
    commit(
        &a.out,
        vec![
            ("scores.csv", scores),
            ("reports.jsonl", json_line(&out.reports)?),
            ("types.csv", types),
            ("skipped.jsonl", json_line(&out.skipped)?),
        ],
        m,
    )
}

/// Rows usable for weight analysis: all seven composites present.
fn composites_of(rows: &[ScoreRow]) -> Vec<crate::index::Composites> {
    rows.iter().filter_map(ScoreRow::composites).collect()
}

fn sensitivity(a: &SensitivityArgs) -> Result<()> {
    let mut m = RunManifest::new("sensitivity");
    let w = load_weights(&a.weights, &mut m)?;
    let rows = load_score_rows(&a.input, &mut m)?;
    let targets: Vec<WeightKey> = match &a.target {
        None => WeightKey::ALL.to_vec(),
        Some(t) => vec![WeightKey::parse(t).ok_or_else(|| invalid(format!("unknown weight `{t}`")))?],
    };
    if a.steps < 2 {
        return Err(invalid("--steps must be at least 2"));
    }
    let grid: Vec<f64> = (0..a.steps).map(|i| i as f64 / (a.steps - 1) as f64).collect();
    let data = composites_of(&rows);
    let curves = targets
        .iter()
        .map(|t| sensitivity_sweep(&data, &w, *t, &grid))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(invalid)?;
    let csv = to_bytes(|buf| {
        let mut wr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(buf);
        wr.write_record(["target", "value", "mean_scvi", "std_scvi", "degenerate_block"])
            .map_err(|e| e.to_string())?;
        for c in &curves {
            for p in &c.points {
                wr.write_record([
                    c.target.clone(),
                    p.value.to_string(),
                    p.mean_scvi.to_string(),
                    p.std_scvi.to_string(),
                    c.degenerate_block.to_string(),
                ])
                .map_err(|e| e.to_string())?;
            }
        }
        wr.flush().map_err(|e| e.to_string())
    })?;
    m.param("steps", a.steps);
    m.param("redistribution", "proportional");
    m.param("records_used", data.len());
    commit(&a.out, vec![("sensitivity.csv", csv), ("sensitivity.json", pretty_json(&curves)?)], m)
}

fn montecarlo(a: &MonteCarloArgs) -> Result<()> {
    let mut m = RunManifest::new("montecarlo");
    let ranges = match &a.ranges {
        None => WeightRangeSpec::default(),
        Some(p) => {
            let bytes = read_input(p)?;
            m.input("ranges", p, &bytes);
            let text = String::from_utf8(bytes).map_err(invalid)?;
            toml::from_str(&text).map_err(|e| invalid(format!("{}: {e}", p.display())))?
        }
    };
    let rows = load_score_rows(&a.input, &mut m)?;
    let data = composites_of(&rows);
    let run = monte_carlo(&data, &ranges, a.iterations, a.seed).map_err(invalid)?;
    let runs = to_bytes(|buf| write_run_jsonl(&run, buf).map_err(|e| e.to_string()))?;

    #[derive(Serialize)]
    struct Peaks {
        selector: Selector,
        stats: Option<Vec<crate::stats::WeightStat>>,
    }
    let peaks: Vec<Peaks> = [Selector::peaks(), Selector::top_outliers(), Selector::bottom_outliers()]
        .into_iter()
        .map(|s| Peaks {
            selector: s,
            stats: peak_stats(&run, &s).ok(),
        })
        .collect();
    m.ranges = Some(ranges);
    m.seed = Some(a.seed);
    m.param("iterations", a.iterations);
    m.param("records_used", data.len());
    commit(
        &a.out,
        vec![
            ("runs.jsonl", runs),
            ("summary.json", pretty_json(&run.summary())?),
            ("peaks.json", pretty_json(&peaks)?),
        ],
        m,
    )
}

fn compare(a: &CompareArgs) -> Result<()> {
    let mut m = RunManifest::new("compare");
    let mut cvss_map = None;
    let mut svi_map = None;
    for p in &a.mapping {
        let bytes = read_input(p)?;
        m.input("mapping", p, &bytes);
        let text = String::from_utf8(bytes).map_err(invalid)?;
        let map = load_mapping(&text).map_err(|e| invalid(format!("{}: {e}", p.display())))?;
        match map.kind {
            ComparatorKind::CvssLike => cvss_map = Some(map),
            ComparatorKind::SviLike => svi_map = Some(map),
        }
    }
    let cvss_map = cvss_map.unwrap_or_else(ComparatorMapping::bundled_cvss);
    let svi_map = svi_map.unwrap_or_else(ComparatorMapping::bundled_svi);
    m.version("cvss_mapping", format!("{}@{}", cvss_map.name, cvss_map.version));
    m.version("svi_mapping", format!("{}@{}", svi_map.name, svi_map.version));
    let rows = load_score_rows(&a.input, &mut m)?;
    let rows: Vec<ScoreRow> = rows.into_iter().filter(|r| r.scvi().is_some()).collect();
    let ranker = SviRanker::fit(&rows, &svi_map).map_err(invalid)?;
    let mut supplied = 0usize;
    let compared = rows
        .iter()
        .map(|r| {
            let cvss = match r.get("cvss") {
                Some(v) => {
                    supplied += 1;
                    v
                }
                None => cvss_like(r, &cvss_map)?.value(),
            };
            let svi = match r.get("svi") {
                Some(v) => {
                    supplied += 1;
                    v
                }
                None => ranker.score(r)?.value(),
            };
            Ok(ComparedRow {
                id: r.id.clone(),
                gender: r.gender.clone(),
                race_ethnicity: r.race_ethnicity.clone(),
                age_group: r.age_group.clone(),
                scvi: r.scvi().expect("filtered"),
                cvss,
                svi,
            })
        })
        .collect::<std::result::Result<Vec<_>, crate::comparators::ComparatorError>>()
        .map_err(invalid)?;
    let cmp = compare_indices(&compared).map_err(invalid)?;

    let comparison = to_bytes(|buf| {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(buf);
        w.write_record(["id", "scvi", "cvss", "svi"]).map_err(|e| e.to_string())?;
        for r in &compared {
            w.write_record([r.id.clone(), r.scvi.to_string(), r.cvss.to_string(), r.svi.to_string()])
                .map_err(|e| e.to_string())?;
        }
        w.flush().map_err(|e| e.to_string())
    })?;
    let correlations = to_bytes(|buf| write_correlations(&cmp, buf).map_err(|e| e.to_string()))?;
    let table = |label: &str, g: &[crate::comparators::GroupMeans]| {
        to_bytes(|buf| write_group_table(label, g, buf).map_err(|e| e.to_string()))
    };
    let gaps = to_bytes(|buf| {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(buf);
        w.write_record(["index", "group_a", "group_b", "a", "b", "gap_percent"])
            .map_err(|e| e.to_string())?;
        let f = cmp.gender.iter().find(|g| g.group == "Female");
        let male = cmp.gender.iter().find(|g| g.group == "Male");
        if let (Some(f), Some(male)) = (f, male) {
            for (name, a, b) in [("SVI", f.svi, male.svi), ("CVSS", f.cvss, male.cvss), ("SCVI", f.scvi, male.scvi)] {
                let gap = percentage_gap(a, b).map(|g| format!("{g:.2}")).unwrap_or_default();
                w.write_record([name, "Female", "Male", &format!("{a:.2}"), &format!("{b:.2}"), &gap])
                    .map_err(|e| e.to_string())?;
            }
        }
        w.flush().map_err(|e| e.to_string())
    })?;
    m.param("records", compared.len());
    m.param("supplied_comparator_values", supplied);
    m.param("cvss_rescale", "native [0, 10] halved onto [0, 5]");
    commit(
        &a.out,
        vec![
            ("comparison.csv", comparison),
            ("correlations.csv", correlations),
            ("gender.csv", table("Gender", &cmp.gender)?),
            ("race_ethnicity.csv", table("Race-Ethnicity", &cmp.race_ethnicity)?),
            ("age_group.csv", table("Age Group", &cmp.age_group)?),
            ("gaps.csv", gaps),
        ],
        m,
    )
}

fn aggregate(a: &AggregateArgs) -> Result<()> {
    let mut m = RunManifest::new("aggregate");
    if !["state", "gender", "race_ethnicity", "age_group"].contains(&a.group_by.as_str()) {
        return Err(invalid(format!("cannot group by `{}`", a.group_by)));
    }
    let rows = load_score_rows(&a.input, &mut m)?;
    let groups: Vec<GroupRow> = rows
        .iter()
        .filter_map(|r| {
            Some(GroupRow {
                group: r.text(&a.group_by)?.to_string(),
                ivi: r.ivi()?,
                asi: r.asi()?,
                scvi: r.scvi()?,
            })
        })
        .collect();
    if groups.is_empty() {
        return Err(invalid("no scored records carry the grouping field"));
    }
    let summaries = group_aggregate(&groups, a.ci);
    let csv = to_bytes(|buf| write_group_csv(&summaries, buf).map_err(|e| e.to_string()))?;
    m.param("group_by", &a.group_by);
    m.param("ci", a.ci);
    m.param("records_used", groups.len());
    m.param(
        "degenerate_groups",
        summaries.iter().filter(|s| s.degenerate).map(|s| s.group.clone()).collect::<Vec<_>>(),
    );
    commit(&a.out, vec![("groups.csv", csv)], m)
}

fn heatmap(a: &HeatmapArgs) -> Result<()> {
    let mut m = RunManifest::new("heatmap");
    let bytes = read_input(&a.input)?;
    m.input("groups", &a.input, &bytes);
    let summaries = read_group_csv(bytes.as_slice()).map_err(invalid)?;
    let t = tiles(&summaries).map_err(invalid)?;
    let csv = to_bytes(|buf| write_tiles_csv(&t, buf).map_err(|e| e.to_string()))?;
    m.param("opacity", "min(1, log10(1 + n) / 3)");
    m.param("ramp", "rgb(255,255,204) at 0 to rgb(189,0,38) at 5");
    commit(
        &a.out,
        vec![("heatmap.svg", render_svg(&t).into_bytes()), ("heatmap.csv", csv)],
        m,
    )
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Encode(a) => encode(a),
        Command::Score(a) => score(a),
        Command::RedditScore(a) => reddit(a),
        Command::Sensitivity(a) => sensitivity(a),
        Command::Montecarlo(a) => montecarlo(a),
        Command::Compare(a) => compare(a),
        Command::Aggregate(a) => aggregate(a),
        Command::Heatmap(a) => heatmap(a),
    }
}

/// Parses `args` (program name first), runs, reports errors on stderr, and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
