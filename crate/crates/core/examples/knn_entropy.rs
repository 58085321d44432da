//! Kozachenko-Leonenko entropy from samples alone.
//!
//! Run: cargo run --release --example knn_entropy

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use tempsal::entropy::knn_entropy;
use tempsal::SampleSet;

fn main() -> tempsal::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let m = 10_000;

    let normal: Vec<f64> = (0..2 * m).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let h = knn_entropy(&SampleSet::from_flat(2, normal)?, 3)?;
    let exact = (2.0 * std::f64::consts::PI * std::f64::consts::E).ln();
    println!("2-D standard normal: {:.4} (exact {:.4})", h.value, exact);

    let uniform: Vec<f64> = (0..m).map(|_| rng.random::<f64>() * 4.0).collect();
    let h = knn_entropy(&SampleSet::from_flat(1, uniform)?, 3)?;
    println!("Uniform(0, 4): {:.4} (exact {:.4})", h.value, 4f64.ln());

    let coins: Vec<f64> = (0..1000).map(|_| f64::from(rng.random_range(0..2u8))).collect();
    let h = knn_entropy(&SampleSet::from_flat(1, coins)?, 3)?;
    println!("discrete data: {:.2} with {} zero distances clamped", h.value, h.clamped_distances);
    Ok(())
}
