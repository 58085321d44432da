//! Per-frame, per-participant behavior features.

use crate::error::{Error, Result};
use crate::quat::Quat;
use crate::window::TimeWindow;

/// Features per participant per frame: `qw, qx, qy, qz, speaking`.
pub const FEATURE_DIM: usize = 5;

pub const FEATURE_NAMES: [&str; FEATURE_DIM] = ["qw", "qx", "qy", "qz", "speaking"];

/// Allowed deviation of a head-pose quaternion from unit norm.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-9;

/// One participant's cues at one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticipantState {
    pub orientation: Quat,
    pub speaking: bool,
}

impl ParticipantState {
    pub fn to_features(&self) -> [f64; FEATURE_DIM] {
        let [w, x, y, z] = self.orientation.to_array();
        [w, x, y, z, if self.speaking { 1.0 } else { 0.0 }]
    }
}

/// A validated multi-participant behavior recording.
///
/// Features are stored flat, frame-major: frame `t`, participant `i`,
/// feature `f` lives at `(t * n + i) * 5 + f`. Any window therefore maps to
/// one contiguous slice, flattened frame by frame with participant 0's five
/// features first.
#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorSequence {
    participants: usize,
    data: Vec<f64>,
}

impl BehaviorSequence {
    /// Build from flat frame-major features, validating every frame.
    pub fn new(participants: usize, data: Vec<f64>) -> Result<Self> {
        if participants == 0 {
            return Err(Error::param("participant count must be at least 1"));
        }
        let row = participants * FEATURE_DIM;
        if !data.len().is_multiple_of(row) {
            return Err(Error::InvalidData(format!(
                "feature buffer of {} values is not a whole number of {participants}-participant frames",
                data.len()
            )));
        }
        for (k, chunk) in data.chunks_exact(FEATURE_DIM).enumerate() {
            let (frame, who) = (k / participants, k % participants);
            let q = Quat::new(chunk[0], chunk[1], chunk[2], chunk[3]);
            let norm = q.norm();
            if !norm.is_finite() || (norm - 1.0).abs() > UNIT_NORM_TOLERANCE {
                return Err(Error::InvalidData(format!(
                    "frame {frame}, participant {who}: quaternion norm {norm} is not unit"
                )));
            }
            if chunk[4] != 0.0 && chunk[4] != 1.0 {
                return Err(Error::InvalidData(format!(
                    "frame {frame}, participant {who}: speaking must be 0 or 1, got {}",
                    chunk[4]
                )));
            }
        }
        Ok(Self { participants, data })
    }

    pub fn from_frames(frames: &[Vec<ParticipantState>]) -> Result<Self> {
        let participants = frames.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(frames.len() * participants * FEATURE_DIM);
        for (t, frame) in frames.iter().enumerate() {
            if frame.len() != participants {
                return Err(Error::InvalidData(format!(
                    "frame {t} has {} participants, expected {participants}",
                    frame.len()
                )));
            }
            for state in frame {
                data.extend_from_slice(&state.to_features());
            }
        }
        Self::new(participants, data)
    }

    pub fn participants(&self) -> usize {
        self.participants
    }

    pub fn frame_count(&self) -> usize {
        self.data.len() / self.frame_width()
    }

    /// Values per frame (`5 * n`).
    pub fn frame_width(&self) -> usize {
        self.participants * FEATURE_DIM
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn frame(&self, t: usize) -> &[f64] {
        let w = self.frame_width();
        &self.data[t * w..(t + 1) * w]
    }

    pub fn features(&self, t: usize, participant: usize) -> &[f64] {
        let start = (t * self.participants + participant) * FEATURE_DIM;
        &self.data[start..start + FEATURE_DIM]
    }

    pub fn state(&self, t: usize, participant: usize) -> ParticipantState {
        let f = self.features(t, participant);
        ParticipantState {
            orientation: Quat::new(f[0], f[1], f[2], f[3]),
            speaking: f[4] == 1.0,
        }
    }

    /// Participant holding the floor at frame `t`, if exactly one does.
    pub fn speaker(&self, t: usize) -> Option<usize> {
        let mut who = None;
        for i in 0..self.participants {
            if self.features(t, i)[4] == 1.0 {
                if who.is_some() {
                    return None;
                }
                who = Some(i);
            }
        }
        who
    }

    pub fn span(&self) -> Option<TimeWindow> {
        TimeWindow::new(0, self.frame_count()).ok()
    }

    /// Flattened features over `window`, or an error if it runs past the end.
    pub fn window_features(&self, window: &TimeWindow) -> Result<&[f64]> {
        if window.end() > self.frame_count() {
            return Err(Error::param(format!(
                "window {window} exceeds sequence of {} frames",
                self.frame_count()
            )));
        }
        let w = self.frame_width();
        Ok(&self.data[window.start() * w..window.end() * w])
    }
}
