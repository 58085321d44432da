//! Which observed window makes a forecast certain?
//!
//! An observed window is salient toward a future window when observing it
//! changes how uncertain the forecast of that future is. The crate maps each
//! candidate observed window to the differential entropy of the predicted
//! future ([`saliency::feature_map`]), then scores window positions by the
//! squared rate of change of that entropy ([`saliency::saliency_map`]).
//!
//! Pieces:
//!
//! - [`window`]: frame windows and the sliding sweep;
//! - [`density`] / [`mod@entropy`]: predictive densities and their entropies
//!   (closed form, mixture bounds, Monte-Carlo, k-NN, per-step sums);
//! - [`forecast`]: the [`Forecaster`] contract;
//! - [`saliency`]: the sweep itself;
//! - [`synth`] / [`oracle`]: a synthetic turn-taking dataset and the
//!   perfect-model forecaster over it;
//! - [`io`] / [`plot`] / [`cli`]: file formats, SVG figures and the
//!   `tempsal` command line.

pub mod cli;
pub mod density;
pub mod entropy;
pub mod error;
pub mod forecast;
pub mod io;
pub mod oracle;
pub mod plot;
pub mod quat;
pub mod saliency;
pub mod sequence;
pub mod synth;
pub mod window;

pub use density::{DiagonalGaussian, FullGaussian, FutureDensity, Gaussian, GaussianMixture, SampleSet, StepSequence};
pub use entropy::{entropy, EntropyMethod, EntropyOptions, EntropyResult};
pub use error::{Error, Result};
pub use forecast::Forecaster;
pub use oracle::OracleForecaster;
pub use saliency::{run_pipeline, DerivativeScheme, Prior, SaliencyConfig, SaliencyMap};
pub use sequence::BehaviorSequence;
pub use synth::{generate, ConversationConfig};
pub use window::{slide_windows, TimeWindow};
