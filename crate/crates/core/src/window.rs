//! Contiguous frame windows and the sliding-window sweep.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A contiguous run of frames `start .. start + length`.
///
/// Frames are 0-based. Windows order by `start`, then `length`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TimeWindow {
    start: usize,
    length: usize,
}

impl TimeWindow {
    pub fn new(start: usize, length: usize) -> Result<Self> {
        if length == 0 {
            return Err(Error::param("window length must be at least 1"));
        }
        Ok(Self { start, length })
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn len(&self) -> usize {
        self.length
    }

    /// Always false; windows cover at least one frame.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Last covered frame (inclusive).
    pub fn last(&self) -> usize {
        self.start + self.length - 1
    }

    /// One past the last covered frame.
    pub fn end(&self) -> usize {
        self.start + self.length
    }

    pub fn contains(&self, frame: usize) -> bool {
        frame >= self.start && frame < self.end()
    }

    /// True when `self` lies entirely inside `outer`.
    pub fn within(&self, outer: &TimeWindow) -> bool {
        self.start >= outer.start && self.end() <= outer.end()
    }

    pub fn frames(&self) -> std::ops::Range<usize> {
        self.start..self.end()
    }
}

impl fmt::Display for TimeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.last())
    }
}

/// Frame gap between the last observed frame and the first future frame.
///
/// Fails unless `t_fut` starts strictly after `t_obs` ends.
pub fn offset(t_obs: &TimeWindow, t_fut: &TimeWindow) -> Result<usize> {
    if t_fut.start() <= t_obs.last() {
        return Err(Error::param(format!(
            "future window {t_fut} must start after observed window {t_obs} ends"
        )));
    }
    Ok(t_fut.start() - t_obs.last())
}

/// Every window of `window_length` frames inside `horizon`, starts spaced by `stride`.
pub fn slide_windows(
    horizon: TimeWindow,
    window_length: usize,
    stride: usize,
) -> Result<Vec<TimeWindow>> {
    if stride == 0 {
        return Err(Error::param("stride must be at least 1"));
    }
    if window_length == 0 || window_length > horizon.len() {
        return Err(Error::EmptyWindows {
            horizon,
            window_length,
            stride,
        });
    }
    let count = (horizon.len() - window_length) / stride + 1;
    Ok((0..count)
        .map(|i| TimeWindow {
            start: horizon.start() + i * stride,
            length: window_length,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(start: usize, len: usize) -> TimeWindow {
        TimeWindow::new(start, len).unwrap()
    }

    #[test]
    fn look_back_horizon_yields_71_windows() {
        let ws = slide_windows(w(83, 100), 30, 1).unwrap();
        assert_eq!(ws.len(), 71);
        assert_eq!(ws.first().unwrap().start(), 83);
        assert_eq!(ws.last().unwrap().start(), 153);
        assert_eq!(ws.last().unwrap().last(), 182);
    }

    #[test]
    fn window_equal_to_horizon() {
        let ws = slide_windows(w(0, 10), 10, 1).unwrap();
        assert_eq!(ws, vec![w(0, 10)]);
    }

    #[test]
    fn strided_starts() {
        let starts: Vec<_> = slide_windows(w(0, 10), 4, 3)
            .unwrap()
            .iter()
            .map(TimeWindow::start)
            .collect();
        assert_eq!(starts, vec![0, 3, 6]);
    }

    #[test]
    fn oversized_window_is_an_error() {
        assert!(matches!(
            slide_windows(w(0, 10), 11, 1),
            Err(Error::EmptyWindows { .. })
        ));
        assert!(slide_windows(w(0, 10), 3, 0).is_err());
    }

    #[test]
    fn zero_length_rejected() {
        assert!(TimeWindow::new(4, 0).is_err());
    }

    #[test]
    fn offset_requires_future_after_observation() {
        assert_eq!(offset(&w(153, 30), &w(183, 46)).unwrap(), 1);
        assert_eq!(offset(&w(83, 30), &w(183, 46)).unwrap(), 71);
        assert!(offset(&w(160, 30), &w(183, 46)).is_err());
    }
}
