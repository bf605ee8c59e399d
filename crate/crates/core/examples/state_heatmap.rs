//! Renders the per-state summary table as a tile-grid SVG heatmap.
//!
//! Usage: `cargo run --example state_heatmap [groups.csv] [out.svg]`

use std::fs::{self, File};
use std::path::{Path, PathBuf};

use scvi::heatmap::{render_svg, tiles};
use scvi::stats::read_group_csv;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let input: PathBuf = args.next().map(Into::into).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/state_summary.csv")
    });
    let output: PathBuf = args
        .next()
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("scvi-heatmap.svg"));

    let groups = read_group_csv(File::open(&input)?)?;
    let tiles = tiles(&groups)?;
    fs::write(&output, render_svg(&tiles))?;

    let drawn = tiles.iter().filter(|t| t.mean_scvi.is_some()).count();
    println!("{drawn} of {} states drawn, written to {}", tiles.len(), output.display());
    Ok(())
}
