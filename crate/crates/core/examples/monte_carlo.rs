//! Samples random weight configurations over synthetic composites, then
//! reports the peaks of the mean-SCVI distribution and the weights behind
//! them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scvi::index::{Composites, WeightKey};
use scvi::stats::{histogram_modes, monte_carlo, peak_stats, Selector, WeightRange, WeightRangeSpec};
use scvi::Score;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let data: Vec<Composites> = (0..500)
        .map(|_| Composites {
            ivi: std::array::from_fn(|_| Score::new(rng.random_range(0.0..5.0)).unwrap()),
            asi: std::array::from_fn(|_| Score::new(rng.random_range(0.0..5.0)).unwrap()),
        })
        .collect();

    let mut ranges = WeightRangeSpec::default();
    ranges.set(WeightKey::Alpha, WeightRange::new(0.3, 0.7));
    ranges.set(WeightKey::WC, WeightRange::new(0.2, 0.6));

    let run = monte_carlo(&data, &ranges, 5000, 42)?;
    let summary = run.summary();
    println!(
        "mean {:.4}  std {:.4}  p05 {:.4}  median {:.4}  p95 {:.4}",
        summary.mean, summary.std, summary.p05, summary.median, summary.p95
    );
    println!("modes: {:?}", histogram_modes(&run.means()));

    for (label, sel) in [
        ("peaks", Selector::peaks()),
        ("top 1%", Selector::top_outliers()),
        ("bottom 1%", Selector::bottom_outliers()),
    ] {
        println!("{label}:");
        for s in peak_stats(&run, &sel)? {
            println!("  {:<6} {:.3} +/- {:.3}", s.weight, s.mean, s.std);
        }
    }
    Ok(())
}
