use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::describe::{mean, sample_std};
use super::StatsError;

pub const GROUP_CSV_HEADER: [&str; 7] = [
    "group", "n", "mean_ivi", "mean_asi", "mean_scvi", "ci_lower", "ci_upper",
];

/// How the 95% interval around mean SCVI is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CiMethod {
    /// Normal approximation, 1.96 standard errors.
    #[default]
    Z,
    /// Student-t quantile with n - 1 degrees of freedom.
    T,
}

impl std::str::FromStr for CiMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "z" => Ok(CiMethod::Z),
            "t" => Ok(CiMethod::T),
            _ => Err(format!("unknown CI method `{s}` (expected z or t)")),
        }
    }
}

/// One record's contribution to a group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupRow {
    pub group: String,
    pub ivi: f64,
    pub asi: f64,
    pub scvi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub group: String,
    pub n: usize,
    pub mean_ivi: f64,
    pub mean_asi: f64,
    pub mean_scvi: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    /// Single-record group; the interval collapses to the mean.
    pub degenerate: bool,
}

fn critical(method: CiMethod, n: usize) -> f64 {
    match method {
        CiMethod::Z => 1.96,
        CiMethod::T => StudentsT::new(0.0, 1.0, (n - 1) as f64)
            .expect("n > 1")
            .inverse_cdf(0.975),
    }
}

/// Per-group means with a 95% interval on mean SCVI, sorted by group key.
pub fn group_aggregate(rows: &[GroupRow], method: CiMethod) -> Vec<GroupSummary> {
    let mut groups: BTreeMap<&str, Vec<&GroupRow>> = BTreeMap::new();
    for r in rows {
        groups.entry(r.group.as_str()).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(g, rs)| {
            let col = |f: fn(&GroupRow) -> f64| rs.iter().map(|r| f(r)).collect::<Vec<_>>();
            let scvi = col(|r| r.scvi);
            let m = mean(&scvi).expect("non-empty group");
            let n = rs.len();
            let (lo, hi) = match sample_std(&scvi) {
                Some(s) => {
                    let half = critical(method, n) * s / (n as f64).sqrt();
                    (m - half, m + half)
                }
                None => (m, m),
            };
            GroupSummary {
                group: g.to_string(),
                n,
                mean_ivi: mean(&col(|r| r.ivi)).expect("non-empty group"),
                mean_asi: mean(&col(|r| r.asi)).expect("non-empty group"),
                mean_scvi: m,
                ci_lower: lo,
                ci_upper: hi,
                degenerate: n == 1,
            }
        })
        .collect()
}

fn csv_err(e: impl std::fmt::Display) -> StatsError {
    StatsError::GroupCsv(e.to_string())
}

/// Writes summaries with four decimals, `\n` line endings.
pub fn write_group_csv<W: Write>(rows: &[GroupSummary], out: W) -> Result<(), StatsError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(GROUP_CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.group.clone(),
            r.n.to_string(),
            format!("{:.4}", r.mean_ivi),
            format!("{:.4}", r.mean_asi),
            format!("{:.4}", r.mean_scvi),
            format!("{:.4}", r.ci_lower),
            format!("{:.4}", r.ci_upper),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a group-summary CSV, keeping row order.
pub fn read_group_csv<R: Read>(input: R) -> Result<Vec<GroupSummary>, StatsError> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().ne(GROUP_CSV_HEADER) {
        return Err(StatsError::GroupCsv(format!(
            "expected header `{}`",
            GROUP_CSV_HEADER.join(",")
        )));
    }
    let mut out = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let line = i + 2;
        let num = |k: usize| -> Result<f64, StatsError> {
            rec[k]
                .parse()
                .map_err(|_| StatsError::GroupCsv(format!("line {line}: bad number `{}`", &rec[k])))
        };
        let n: usize = rec[1]
            .parse()
            .map_err(|_| StatsError::GroupCsv(format!("line {line}: bad count `{}`", &rec[1])))?;
        let row = GroupSummary {
            group: rec[0].to_string(),
            n,
            mean_ivi: num(2)?,
            mean_asi: num(3)?,
            mean_scvi: num(4)?,
            ci_lower: num(5)?,
            ci_upper: num(6)?,
            degenerate: n == 1,
        };
        if n == 0 || !(row.ci_lower <= row.mean_scvi && row.mean_scvi <= row.ci_upper) {
            return Err(StatsError::GroupCsv(format!(
                "line {line}: need n >= 1 and ci_lower <= mean_scvi <= ci_upper"
            )));
        }
        out.push(row);
    }
    Ok(out)
}
