//! Plug a hand-written forecaster into the saliency pipeline.
//!
//! Any `Fn(&[f64], TimeWindow, TimeWindow) -> Result<FutureDensity>` is a
//! forecaster. This one grows more certain the more speaking activity it
//! observes, and returns a two-component mixture.
//!
//! Run: cargo run --example custom_forecaster

use tempsal::{
    generate, run_pipeline, ConversationConfig, DiagonalGaussian, FutureDensity, Gaussian,
    GaussianMixture, Prior, SaliencyConfig, TimeWindow,
};

fn main() -> tempsal::Result<()> {
    let conv = generate(&ConversationConfig::default())?;

    let forecaster = |observed: &[f64], t_obs: TimeWindow, t_fut: TimeWindow| -> tempsal::Result<FutureDensity> {
        let mean_pitch = observed.chunks(5).map(|f| f[2].abs()).sum::<f64>() / observed.len() as f64;
        let sigma = 1.0 / (1.0 + 50.0 * mean_pitch);
        let d = t_fut.len();
        let a = DiagonalGaussian::new(vec![-1.0; d], vec![sigma; d])?;
        let b = DiagonalGaussian::new(vec![1.0; d], vec![sigma; d])?;
        let w = 0.5 + 0.4 * (t_obs.start() as f64 / 200.0).min(1.0);
        Ok(GaussianMixture::new(vec![w, 1.0 - w], vec![Gaussian::Diagonal(a), Gaussian::Diagonal(b)])?.into())
    };

    let mut config = SaliencyConfig::looking_back(TimeWindow::new(183, 10)?, 100, 30, 2)?;
    config.prior = Some(Prior::Uniform);
    let map = run_pipeline(&forecaster, &conv.sequence, &config)?;
    let surprisal = map.surprisal.as_ref().expect("prior was set");
    for j in (0..map.len()).step_by(5) {
        println!(
            "window {:>3}: phi {:+.3}  S {:.3e}  surprisal {:+.3}",
            map.window_starts[j], map.phi[j], map.saliency[j], surprisal[j]
        );
    }
    println!("peak at window start {}", map.window_starts[map.argmax().unwrap()]);
    Ok(())
}
