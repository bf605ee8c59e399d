//! State choropleth on a tile grid.
//!
//! Fill colour encodes mean SCVI by linear RGB interpolation from
//! `rgb(255,255,204)` at 0 to `rgb(189,0,38)` at 5, each channel rounded to
//! the nearest integer. Fill opacity encodes sample size as
//! `min(1, log10(1 + n) / 3)`, saturating at n = 999. States without data are
//! drawn in `#cccccc` at full opacity.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use thiserror::Error;

use crate::regions::{state_code, GRID_COLUMNS, GRID_ROWS, STATES};
use crate::stats::GroupSummary;

pub const RAMP_LOW: [u8; 3] = [255, 255, 204];
pub const RAMP_HIGH: [u8; 3] = [189, 0, 38];
pub const MISSING_FILL: &str = "#cccccc";

const TILE: u32 = 44;
const GAP: u32 = 4;
const MARGIN: u32 = 20;
const LEGEND_HEIGHT: u32 = 70;

#[derive(Debug, Error)]
pub enum HeatmapError {
    #[error("no group summaries to draw")]
    EmptyInput,
    #[error("`{0}` is not a US state code or name")]
    UnknownStateCode(String),
    #[error("state {0} appears more than once")]
    DuplicateState(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// Ramp colour for a mean SCVI, clamped to `[0, 5]`.
pub fn ramp(value: f64) -> [u8; 3] {
    let t = (value / 5.0).clamp(0.0, 1.0);
    let mut out = [0u8; 3];
    for i in 0..3 {
        let (lo, hi) = (f64::from(RAMP_LOW[i]), f64::from(RAMP_HIGH[i]));
        out[i] = (lo + (hi - lo) * t).round() as u8;
    }
    out
}

pub fn opacity(n: usize) -> f64 {
    ((1.0 + n as f64).log10() / 3.0).min(1.0)
}

/// One tile of the map.
#[derive(Debug, Clone, PartialEq)]
pub struct Tile {
    pub code: &'static str,
    pub name: &'static str,
    pub n: usize,
    pub mean_scvi: Option<f64>,
    pub fill: String,
    pub opacity: f64,
}

/// All 51 tiles in region-table order. Group keys may be state codes or
/// full names.
pub fn tiles(summaries: &[GroupSummary]) -> Result<Vec<Tile>, HeatmapError> {
    if summaries.is_empty() {
        return Err(HeatmapError::EmptyInput);
    }
    let mut by_code: BTreeMap<&str, &GroupSummary> = BTreeMap::new();
    for s in summaries {
        let code = state_code(&s.group).ok_or_else(|| HeatmapError::UnknownStateCode(s.group.clone()))?;
        if by_code.insert(code, s).is_some() {
            return Err(HeatmapError::DuplicateState(code.to_string()));
        }
    }
    Ok(STATES
        .iter()
        .map(|&(code, name, _, _)| match by_code.get(code) {
            Some(s) => {
                let [r, g, b] = ramp(s.mean_scvi);
                Tile {
                    code,
                    name,
                    n: s.n,
                    mean_scvi: Some(s.mean_scvi),
                    fill: format!("rgb({r},{g},{b})"),
                    opacity: opacity(s.n),
                }
            }
            None => Tile {
                code,
                name,
                n: 0,
                mean_scvi: None,
                fill: MISSING_FILL.to_string(),
                opacity: 1.0,
            },
        })
        .collect())
}

fn position(code: &str) -> (u32, u32) {
    let &(_, _, c, r) = STATES.iter().find(|s| s.0 == code).expect("known code");
    (
        MARGIN + u32::from(c) * (TILE + GAP),
        MARGIN + u32::from(r) * (TILE + GAP),
    )
}

/// Renders the tiles as a standalone SVG 1.1 document.
pub fn render_svg(tiles: &[Tile]) -> String {
    let grid_w = u32::from(GRID_COLUMNS) * (TILE + GAP) - GAP;
    let grid_h = u32::from(GRID_ROWS) * (TILE + GAP) - GAP;
    let width = grid_w + 2 * MARGIN;
    let height = grid_h + 2 * MARGIN + LEGEND_HEIGHT;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif">"#
    );
    let [lr, lg, lb] = RAMP_LOW;
    let [hr, hg, hb] = RAMP_HIGH;
    let _ = writeln!(s, "  <defs>");
    let _ = writeln!(s, r#"    <linearGradient id="ramp" x1="0" y1="0" x2="1" y2="0">"#);
    let _ = writeln!(s, r#"      <stop offset="0" stop-color="rgb({lr},{lg},{lb})"/>"#);
    let _ = writeln!(s, r#"      <stop offset="1" stop-color="rgb({hr},{hg},{hb})"/>"#);
    let _ = writeln!(s, "    </linearGradient>");
    let _ = writeln!(s, "  </defs>");
    let _ = writeln!(s, r#"  <g id="states">"#);
    for t in tiles {
        let (x, y) = position(t.code);
        let title = match t.mean_scvi {
            Some(m) => format!("{}: mean SCVI {m:.4}, n = {}", t.name, t.n),
            None => format!("{}: no data", t.name),
        };
        let _ = writeln!(s, r#"    <g id="state-{}">"#, t.code);
        let _ = writeln!(s, "      <title>{title}</title>");
        let _ = writeln!(
            s,
            r##"      <rect x="{x}" y="{y}" width="{TILE}" height="{TILE}" fill="{}" fill-opacity="{:.4}" stroke="#ffffff" stroke-width="1"/>"##,
            t.fill, t.opacity
        );
        let _ = writeln!(
            s,
            r##"      <text x="{}" y="{}" font-size="12" text-anchor="middle" fill="#222222">{}</text>"##,
            x + TILE / 2,
            y + TILE / 2 + 4,
            t.code
        );
        let _ = writeln!(s, "    </g>");
    }
    let _ = writeln!(s, "  </g>");

    let ly = MARGIN + grid_h + 24;
    let bar_w = 220;
    let _ = writeln!(s, r#"  <g id="legend">"#);
    let _ = writeln!(
        s,
        r##"    <text x="{MARGIN}" y="{}" font-size="12" fill="#222222">Mean SCVI (opacity: sample size)</text>"##,
        ly - 6
    );
    let _ = writeln!(
        s,
        r##"    <rect x="{MARGIN}" y="{ly}" width="{bar_w}" height="12" fill="url(#ramp)" stroke="#888888" stroke-width="0.5"/>"##
    );
    for (v, label) in [(0, "0"), (1, "1"), (2, "2"), (3, "3"), (4, "4"), (5, "5")] {
        let x = MARGIN + bar_w * v / 5;
        let _ = writeln!(
            s,
            r##"    <text x="{x}" y="{}" font-size="10" text-anchor="middle" fill="#222222">{label}</text>"##,
            ly + 26
        );
    }
    let nx = MARGIN + bar_w + 30;
    let _ = writeln!(
        s,
        r##"    <rect x="{nx}" y="{ly}" width="12" height="12" fill="{MISSING_FILL}" stroke="#888888" stroke-width="0.5"/>"##
    );
    let _ = writeln!(
        s,
        r##"    <text x="{}" y="{}" font-size="10" fill="#222222">no data</text>"##,
        nx + 18,
        ly + 10
    );
    let _ = writeln!(s, "  </g>");
    let _ = writeln!(s, "</svg>");
    s
}

/// `state,name,n,mean_scvi,fill,opacity` for every tile.
pub fn write_tiles_csv<W: Write>(tiles: &[Tile], out: W) -> Result<(), HeatmapError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let err = |e: csv::Error| HeatmapError::Io(e.into());
    w.write_record(["state", "name", "n", "mean_scvi", "fill", "opacity"]).map_err(err)?;
    for t in tiles {
        w.write_record([
            t.code.to_string(),
            t.name.to_string(),
            t.n.to_string(),
            t.mean_scvi.map(|m| format!("{m:.4}")).unwrap_or_default(),
            t.fill.clone(),
            format!("{:.4}", t.opacity),
        ])
        .map_err(err)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(group: &str, n: usize, mean: f64) -> GroupSummary {
        GroupSummary {
            group: group.into(),
            n,
            mean_ivi: mean,
            mean_asi: mean,
            mean_scvi: mean,
            ci_lower: mean,
            ci_upper: mean,
            degenerate: n == 1,
        }
    }

    #[test]
    fn ramp_endpoints_and_midpoint() {
        assert_eq!(ramp(0.0), RAMP_LOW);
        assert_eq!(ramp(5.0), RAMP_HIGH);
        assert_eq!(ramp(2.5), [222, 128, 121]);
        assert_eq!(ramp(9.0), RAMP_HIGH);
    }

    #[test]
    fn opacity_formula() {
        assert_eq!(opacity(1000), 1.0);
        assert!((opacity(1) - 2f64.log10() / 3.0).abs() < 1e-15);
        assert!((opacity(1) - 0.100).abs() < 1e-3);
    }

    #[test]
    fn single_state() {
        let t = tiles(&[summary("CA", 1000, 2.5)]).unwrap();
        assert_eq!(t.len(), 51);
        let ca = t.iter().find(|t| t.code == "CA").unwrap();
        assert_eq!(ca.fill, "rgb(222,128,121)");
        assert_eq!(ca.opacity, 1.0);
        let ak = t.iter().find(|t| t.code == "AK").unwrap();
        assert_eq!(ak.fill, MISSING_FILL);
    }

    #[test]
    fn errors() {
        assert!(matches!(tiles(&[]), Err(HeatmapError::EmptyInput)));
        assert!(matches!(tiles(&[summary("ZZ", 1, 1.0)]), Err(HeatmapError::UnknownStateCode(_))));
        assert!(matches!(
            tiles(&[summary("CA", 1, 1.0), summary("California", 2, 1.0)]),
            Err(HeatmapError::DuplicateState(_))
        ));
    }

    #[test]
    fn svg_is_deterministic() {
        let t = tiles(&[summary("Texas", 10, 1.0)]).unwrap();
        let a = render_svg(&t);
        assert_eq!(a, render_svg(&t));
        assert_eq!(a.matches("<rect").count(), 51 + 2);
    }
}
