//! The forecaster contract consumed by the saliency sweep.

use crate::density::FutureDensity;
use crate::error::Result;
use crate::window::TimeWindow;

/// A probabilistic forecaster `p(Y | X)`.
///
/// `observed` holds the features over `t_obs`, flattened frame-major
/// (see [`BehaviorSequence`](crate::sequence::BehaviorSequence)). The
/// forecaster predicts the joint distribution of the features over `t_fut`;
/// the gap `t_fut.start() - t_obs.last()` is available through
/// [`offset`](crate::window::offset) for models that decode directly at the
/// future window instead of rolling forward through the gap.
pub trait Forecaster {
    fn predict(
        &self,
        observed: &[f64],
        t_obs: TimeWindow,
        t_fut: TimeWindow,
    ) -> Result<FutureDensity>;
}

impl<F> Forecaster for F
where
    F: Fn(&[f64], TimeWindow, TimeWindow) -> Result<FutureDensity>,
{
    fn predict(&self, observed: &[f64], t_obs: TimeWindow, t_fut: TimeWindow) -> Result<FutureDensity> {
        self(observed, t_obs, t_fut)
    }
}

/// Wraps a forecaster so every prediction is the law of `a * Y`.
#[derive(Debug, Clone)]
pub struct Rescaled<F> {
    pub inner: F,
    pub factor: f64,
}

impl<F: Forecaster> Forecaster for Rescaled<F> {
    fn predict(&self, observed: &[f64], t_obs: TimeWindow, t_fut: TimeWindow) -> Result<FutureDensity> {
        self.inner.predict(observed, t_obs, t_fut)?.scaled(self.factor)
    }
}

/// Wraps a forecaster so every prediction is the law of `Y + c`.
#[derive(Debug, Clone)]
pub struct Shifted<F> {
    pub inner: F,
    pub offset: Vec<f64>,
}

impl<F: Forecaster> Forecaster for Shifted<F> {
    fn predict(&self, observed: &[f64], t_obs: TimeWindow, t_fut: TimeWindow) -> Result<FutureDensity> {
        self.inner
            .predict(observed, t_obs, t_fut)?
            .translated(&self.offset)
    }
}
