use thiserror::Error;

use crate::window::TimeWindow;

/// Errors produced anywhere in the saliency pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter violates its contract.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Window arithmetic produced no usable windows.
    #[error("no windows of length {window_length} fit in horizon {horizon} (stride {stride})")]
    EmptyWindows {
        horizon: TimeWindow,
        window_length: usize,
        stride: usize,
    },

    /// Input data violates a structural invariant (non-unit quaternion, bad speaking flag, ...).
    #[error("invalid data: {0}")]
    InvalidData(String),

    /// A density could not be evaluated (non-positive-definite covariance, zero std, ...).
    #[error("degenerate density: {0}")]
    DegenerateDensity(String),

    /// The oracle found no occurrence of the observed window in its corpus.
    #[error("empty support: observation over {t_obs} never occurs in the corpus")]
    EmptySupport { t_obs: TimeWindow },

    /// A forecaster failed for one window of a saliency sweep.
    #[error("forecast failed for window {index} ({window}): {source}")]
    Forecast {
        index: usize,
        window: TimeWindow,
        #[source]
        source: Box<Error>,
    },

    /// A file did not match its expected schema.
    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegenerateDensity(msg.into())
    }

    /// True for failures of the numerical machinery rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::DegenerateDensity(_) | Error::EmptySupport { .. } => true,
            Error::Forecast { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
