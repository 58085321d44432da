//! Temporal saliency: entropy of the predicted future as a feature of the
//! observed window position, differentiated along the window index.
//!
//! For a scalar feature over a scalar index, `det(J^T J)` reduces to the
//! squared derivative, which is estimated by finite differences over window
//! starts (normalized by the stride so different strides estimate the same
//! derivative).

use serde::{Deserialize, Serialize};

use crate::entropy::{entropy, EntropyOptions};
use crate::error::{Error, Result};
use crate::forecast::Forecaster;
use crate::sequence::BehaviorSequence;
use crate::window::{offset, slide_windows, TimeWindow};

pub const DEFAULT_SURPRISAL_FLOOR: f64 = 1e-12;

/// Tolerance on `|sum(prior) - 1|`.
pub const PRIOR_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeScheme {
    /// Central differences inside, one-sided at both ends.
    #[default]
    Central,
    /// Forward differences, last value replicated.
    Forward,
}

impl DerivativeScheme {
    pub fn min_windows(&self) -> usize {
        match self {
            DerivativeScheme::Central => 3,
            DerivativeScheme::Forward => 2,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            DerivativeScheme::Central => "central",
            DerivativeScheme::Forward => "forward",
        }
    }
}

/// Prior over window positions.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prior {
    #[default]
    Uniform,
    /// One positive weight per window, summing to one.
    Weights(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaliencyConfig {
    pub t_fut: TimeWindow,
    /// Look-back span the observed windows slide over; must end before `t_fut`.
    pub horizon: TimeWindow,
    pub window_length: usize,
    pub stride: usize,
    pub scheme: DerivativeScheme,
    /// When set, the surprisal `-ln p(x) + 0.5 ln S` is computed as well.
    pub prior: Option<Prior>,
    pub surprisal_floor: f64,
    pub entropy: EntropyOptions,
}

impl SaliencyConfig {
    pub fn new(t_fut: TimeWindow, horizon: TimeWindow, window_length: usize, stride: usize) -> Self {
        Self {
            t_fut,
            horizon,
            window_length,
            stride,
            scheme: DerivativeScheme::Central,
            prior: None,
            surprisal_floor: DEFAULT_SURPRISAL_FLOOR,
            entropy: EntropyOptions::default(),
        }
    }

    /// Look back `horizon_length` frames from the start of `t_fut`.
    pub fn looking_back(
        t_fut: TimeWindow,
        horizon_length: usize,
        window_length: usize,
        stride: usize,
    ) -> Result<Self> {
        if horizon_length > t_fut.start() {
            return Err(Error::param(format!(
                "horizon of {horizon_length} frames does not fit before t_fut {t_fut}"
            )));
        }
        let horizon = TimeWindow::new(t_fut.start() - horizon_length, horizon_length)?;
        Ok(Self::new(t_fut, horizon, window_length, stride))
    }

    /// Check the config against a sequence of `frame_count` frames and
    /// return the observed windows.
    pub fn windows(&self, frame_count: usize) -> Result<Vec<TimeWindow>> {
        if self.horizon.end() > self.t_fut.start() {
            return Err(Error::param(format!(
                "horizon {} must end before t_fut starts at frame {}",
                self.horizon,
                self.t_fut.start()
            )));
        }
        if self.t_fut.end() > frame_count {
            return Err(Error::param(format!(
                "t_fut {} runs past the last frame {}",
                self.t_fut,
                frame_count.saturating_sub(1)
            )));
        }
        if !(self.surprisal_floor > 0.0) {
            return Err(Error::param("surprisal floor must be > 0"));
        }
        let windows = slide_windows(self.horizon, self.window_length, self.stride)?;
        if windows.len() < self.scheme.min_windows() {
            return Err(Error::param(format!(
                "{} differences need at least {} windows; horizon {} with window {} and stride {} gives {}",
                self.scheme.as_str(),
                self.scheme.min_windows(),
                self.horizon,
                self.window_length,
                self.stride,
                windows.len()
            )));
        }
        Ok(windows)
    }
}

/// Where a map came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub stride: usize,
    pub scheme: DerivativeScheme,
    pub window_length: Option<usize>,
    pub t_fut: Option<TimeWindow>,
    /// Dimension of the predicted future, when every window agreed on it.
    pub future_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaliencyMap {
    pub window_starts: Vec<usize>,
    /// Entropy of the predicted future per window (nats).
    pub phi: Vec<f64>,
    /// Squared finite-difference derivative of `phi` (nats^2 / frame^2).
    pub saliency: Vec<f64>,
    pub surprisal: Option<Vec<f64>>,
    pub provenance: Provenance,
}

impl SaliencyMap {
    pub fn len(&self) -> usize {
        self.window_starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window_starts.is_empty()
    }

    /// `phi` divided by the future dimension: mean entropy per future value.
    pub fn phi_mean(&self) -> Option<Vec<f64>> {
        let d = self.provenance.future_dim? as f64;
        Some(self.phi.iter().map(|p| p / d).collect())
    }

    /// Index of the largest saliency; first one wins ties.
    pub fn argmax(&self) -> Option<usize> {
        argmax(&self.saliency)
    }

    /// Window positions whose saliency fell below `floor`.
    pub fn floored(&self, floor: f64) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.saliency[j] < floor).collect()
    }
}

pub(crate) fn argmax(xs: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, x) in xs.iter().enumerate() {
        if best.is_none_or(|b| *x > xs[b]) {
            best = Some(i);
        }
    }
    best
}

/// Entropy of the forecast for each observed window, with the future's dimension.
fn evaluate_windows<F: Forecaster + ?Sized>(
    forecaster: &F,
    sequence: &BehaviorSequence,
    windows: &[TimeWindow],
    t_fut: TimeWindow,
    options: &EntropyOptions,
) -> Result<(Vec<f64>, Option<usize>)> {
    let mut phi = Vec::with_capacity(windows.len());
    let mut dim: Option<Option<usize>> = None;
    for (index, &window) in windows.iter().enumerate() {
        let wrap = |source: Error| Error::Forecast {
            index,
            window,
            source: Box::new(source),
        };
        offset(&window, &t_fut).map_err(wrap)?;
        let observed = sequence.window_features(&window).map_err(wrap)?;
        let density = forecaster.predict(observed, window, t_fut).map_err(wrap)?;
        let h = entropy(&density, options).map_err(wrap)?;
        phi.push(h.value);
        dim = match dim {
            None => Some(Some(density.dim())),
            Some(Some(d)) if d == density.dim() => Some(Some(d)),
            _ => Some(None),
        };
    }
    Ok((phi, dim.flatten()))
}

/// `phi_j = h(Y | X = X_j)` for every window, in window order.
pub fn feature_map<F: Forecaster + ?Sized>(
    forecaster: &F,
    sequence: &BehaviorSequence,
    windows: &[TimeWindow],
    t_fut: TimeWindow,
    options: &EntropyOptions,
) -> Result<Vec<f64>> {
    evaluate_windows(forecaster, sequence, windows, t_fut, options).map(|(phi, _)| phi)
}

/// Squared finite-difference derivative of `phi` over evenly spaced window starts.
pub fn saliency_map(
    phi: &[f64],
    window_starts: &[usize],
    scheme: DerivativeScheme,
) -> Result<SaliencyMap> {
    if phi.len() != window_starts.len() {
        return Err(Error::param(format!(
            "{} feature values for {} windows",
            phi.len(),
            window_starts.len()
        )));
    }
    let m = phi.len();
    if m < scheme.min_windows() {
        return Err(Error::param(format!(
            "{} differences need at least {} windows, got {m}",
            scheme.as_str(),
            scheme.min_windows()
        )));
    }
    let stride = window_starts[1]
        .checked_sub(window_starts[0])
        .filter(|s| *s > 0)
        .ok_or_else(|| Error::param("window starts must be strictly increasing"))?;
    if window_starts.windows(2).any(|p| p[1] <= p[0] || p[1] - p[0] != stride) {
        return Err(Error::param("window starts must be evenly spaced and increasing"));
    }
    let h = stride as f64;
    let sq = |x: f64| x * x;
    let saliency: Vec<f64> = match scheme {
        DerivativeScheme::Central => (0..m)
            .map(|j| match j {
                0 => sq((phi[1] - phi[0]) / h),
                j if j == m - 1 => sq((phi[j] - phi[j - 1]) / h),
                j => sq((phi[j + 1] - phi[j - 1]) / (2.0 * h)),
            })
            .collect(),
        DerivativeScheme::Forward => (0..m)
            .map(|j| {
                let j = j.min(m - 2);
                sq((phi[j + 1] - phi[j]) / h)
            })
            .collect(),
    };
    Ok(SaliencyMap {
        window_starts: window_starts.to_vec(),
        phi: phi.to_vec(),
        saliency,
        surprisal: None,
        provenance: Provenance {
            stride,
            scheme,
            window_length: None,
            t_fut: None,
            future_dim: None,
        },
    })
}

/// Surprisal `-ln p(x_j) + 0.5 ln max(S_j, floor)` per window.
pub fn surprisal_map(map: &SaliencyMap, prior: &Prior, floor: f64) -> Result<Vec<f64>> {
    if !(floor > 0.0) {
        return Err(Error::param("surprisal floor must be > 0"));
    }
    let m = map.len();
    let neg_log_prior: Vec<f64> = match prior {
        Prior::Uniform => vec![(m as f64).ln(); m],
        Prior::Weights(w) => {
            if w.len() != m {
                return Err(Error::param(format!(
                    "prior has {} weights for {m} windows",
                    w.len()
                )));
            }
            if let Some(i) = w.iter().position(|p| !(p.is_finite() && *p > 0.0)) {
                return Err(Error::param(format!("prior weight {i} must be > 0")));
            }
            let total: f64 = w.iter().sum();
            if (total - 1.0).abs() > PRIOR_SUM_TOLERANCE {
                return Err(Error::param(format!("prior sums to {total}, expected 1")));
            }
            w.iter().map(|p| -p.ln()).collect()
        }
    };
    Ok(neg_log_prior
        .iter()
        .zip(&map.saliency)
        .map(|(lp, s)| lp + 0.5 * s.max(floor).ln())
        .collect())
}

/// Slide windows over the horizon, map each to the entropy of its forecast,
/// and differentiate.
pub fn run_pipeline<F: Forecaster + ?Sized>(
    forecaster: &F,
    sequence: &BehaviorSequence,
    config: &SaliencyConfig,
) -> Result<SaliencyMap> {
    let windows = config.windows(sequence.frame_count())?;
    let (phi, future_dim) =
        evaluate_windows(forecaster, sequence, &windows, config.t_fut, &config.entropy)?;
    let starts: Vec<usize> = windows.iter().map(TimeWindow::start).collect();
    let mut map = saliency_map(&phi, &starts, config.scheme)?;
    map.provenance = Provenance {
        stride: config.stride,
        scheme: config.scheme,
        window_length: Some(config.window_length),
        t_fut: Some(config.t_fut),
        future_dim,
    };
    if let Some(prior) = &config.prior {
        map.surprisal = Some(surprisal_map(&map, prior, config.surprisal_floor)?);
    }
    Ok(map)
}
