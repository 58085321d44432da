//! Entropy of an autoregressive forecast as the sum of per-step entropies.
//!
//! Each step's density is conditioned on the previous steps, so the
//! per-step terms are reported alongside their sum.
//!
//! Run: cargo run --example autoregressive_steps

use tempsal::entropy::{stepwise_entropy_sum, stepwise_entropy_terms};
use tempsal::{DiagonalGaussian, EntropyOptions, FutureDensity, StepSequence};

fn main() -> tempsal::Result<()> {
    // Uncertainty that grows with the forecast horizon.
    let steps = (1..=8)
        .map(|t| {
            let sigma = 0.1 * (t as f64).sqrt();
            Ok(FutureDensity::from(DiagonalGaussian::new(vec![0.0; 2], vec![sigma, 2.0 * sigma])?))
        })
        .collect::<tempsal::Result<Vec<_>>>()?;
    let seq = StepSequence::new(steps)?;
    let opts = EntropyOptions::default();
    for (t, term) in stepwise_entropy_terms(&seq, &opts)?.iter().enumerate() {
        println!("step {}: {:+.4} nats", t + 1, term.value);
    }
    let total = stepwise_entropy_sum(&seq, &opts)?;
    println!("sum: {:+.4} nats ({})", total.value, total.method.as_str());
    Ok(())
}
