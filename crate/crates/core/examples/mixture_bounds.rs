//! Entropy bounds for a Gaussian mixture as its components drift apart.
//!
//! The upper bound is the entropy of the joint (component, value) pair; the
//! lower bound uses pairwise Bhattacharyya distances. Both are compared with
//! a Monte-Carlo estimate.
//!
//! Run: cargo run --release --example mixture_bounds

use tempsal::entropy::{gmm_entropy_bounds, monte_carlo_entropy};
use tempsal::{DiagonalGaussian, Gaussian, GaussianMixture};

fn main() -> tempsal::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>18}", "sep", "lower", "upper", "monte carlo");
    for sep in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let comps = [0.0, sep, 2.0 * sep]
            .iter()
            .map(|&m| Ok(Gaussian::Diagonal(DiagonalGaussian::new(vec![m, -m], vec![1.0, 0.5])?)))
            .collect::<tempsal::Result<Vec<_>>>()?;
        let mix = GaussianMixture::new(vec![0.5, 0.3, 0.2], comps)?;
        let (lo, hi) = gmm_entropy_bounds(&mix)?;
        let mc = monte_carlo_entropy(&mix.into(), 50_000, 1)?;
        println!(
            "{sep:>6.1} {:>10.4} {:>10.4} {:>10.4} +/- {:.4}",
            lo.value,
            hi.value,
            mc.value,
            mc.std_error.unwrap()
        );
    }
    Ok(())
}
