//! Closed-form Gaussian entropy against a Monte-Carlo estimate, plus the
//! translation and scaling identities.
//!
//! Run: cargo run --release --example gaussian_entropy

use nalgebra::{dmatrix, dvector};
use tempsal::entropy::{gaussian_entropy, monte_carlo_entropy};
use tempsal::{FullGaussian, FutureDensity, Gaussian};

fn main() -> tempsal::Result<()> {
    let g = FullGaussian::new(
        dvector![1.0, -2.0, 0.5],
        dmatrix![2.0, 0.3, 0.1;
                 0.3, 1.0, -0.2;
                 0.1, -0.2, 0.5],
    )?;
    let closed = gaussian_entropy(&Gaussian::Full(g.clone()));
    let mc = monte_carlo_entropy(&FutureDensity::from(g.clone()), 200_000, 7)?;
    println!("closed form : {:.6} nats", closed.value);
    println!("monte carlo : {:.6} +/- {:.6}", mc.value, mc.std_error.unwrap());

    let moved = gaussian_entropy(&Gaussian::Full(g.translated(&[100.0, 100.0, 100.0])?));
    println!("translated  : {:.6} (unchanged)", moved.value);

    let a = dmatrix![2.0, 1.0, 0.0;
                     0.0, 1.0, 0.0;
                     0.0, 0.0, 3.0];
    let transformed = gaussian_entropy(&Gaussian::Full(g.transformed(&a)?));
    println!(
        "h(AY) - h(Y): {:.6}, ln|det A| = {:.6}",
        transformed.value - closed.value,
        a.determinant().abs().ln()
    );
    Ok(())
}
