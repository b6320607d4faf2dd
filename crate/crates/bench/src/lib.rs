//! Synthetic workloads for the benchmarks.

use odte_core::Dataset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `k` axis-aligned blobs in `n` dimensions, `m` rows in total.
///
/// Class centres sit on the axes at distance `separation`; noise is uniform
/// in `[-1, 1]` per feature, so classes overlap when `separation < 2`.
pub fn blobs(m: usize, n: usize, k: usize, separation: f64, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(m);
    let mut labels = Vec::with_capacity(m);
    for i in 0..m {
        let class = i % k;
        let row: Vec<f64> = (0..n)
            .map(|j| {
                let centre = if j == class % n { separation } else { 0.0 };
                centre + rng.random_range(-1.0..1.0)
            })
            .collect();
        rows.push(row);
        labels.push(format!("c{class}"));
    }
    Dataset::from_named_labels(rows, &labels).expect("well-formed synthetic data")
}
