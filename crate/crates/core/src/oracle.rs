//! The perfect-model forecaster: look up every place in the corpus where the
//! observed window occurs and fit an independent Gaussian to the futures
//! that followed.

use crate::density::{DiagonalGaussian, FutureDensity};
use crate::error::{Error, Result};
use crate::forecast::Forecaster;
use crate::sequence::BehaviorSequence;
use crate::window::TimeWindow;

pub const DEFAULT_MATCH_TOLERANCE: f64 = 1e-6;
/// Std assigned to any dimension on which all matched futures agree.
pub const DEFAULT_STD_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct OracleForecaster {
    corpus: Vec<BehaviorSequence>,
    tolerance: f64,
    std_floor: f64,
}

impl OracleForecaster {
    pub fn new(corpus: Vec<BehaviorSequence>) -> Result<Self> {
        Self::with_params(corpus, DEFAULT_MATCH_TOLERANCE, DEFAULT_STD_FLOOR)
    }

    pub fn with_params(corpus: Vec<BehaviorSequence>, tolerance: f64, std_floor: f64) -> Result<Self> {
        let Some(first) = corpus.first() else {
            return Err(Error::param("oracle corpus is empty"));
        };
        let n = first.participants();
        if let Some(i) = corpus.iter().position(|e| e.participants() != n) {
            return Err(Error::param(format!(
                "episode {i} has {} participants, expected {n}",
                corpus[i].participants()
            )));
        }
        if !(tolerance >= 0.0) {
            return Err(Error::param("match tolerance must be >= 0"));
        }
        if !(std_floor > 0.0) {
            return Err(Error::param("std floor must be > 0"));
        }
        Ok(Self {
            corpus,
            tolerance,
            std_floor,
        })
    }

    pub fn corpus(&self) -> &[BehaviorSequence] {
        &self.corpus
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn std_floor(&self) -> f64 {
        self.std_floor
    }

    fn frame_width(&self) -> usize {
        self.corpus[0].frame_width()
    }

    /// Futures that followed every occurrence of `observed` in the corpus.
    ///
    /// An occurrence is any alignment `p` whose window `[p, p + |t_obs|)`
    /// lies within `tolerance` (max-norm) of `observed`; the future taken is
    /// the same distance ahead as `t_fut` is from `t_obs`. Alignments whose
    /// future would run off the end of an episode are skipped. Duplicate
    /// futures are kept.
    pub fn match_futures(
        &self,
        observed: &[f64],
        t_obs: TimeWindow,
        t_fut: TimeWindow,
    ) -> Result<Vec<Vec<f64>>> {
        crate::window::offset(&t_obs, &t_fut)?;
        let width = self.frame_width();
        if observed.len() != t_obs.len() * width {
            return Err(Error::param(format!(
                "observed features have {} values, expected {} for {t_obs}",
                observed.len(),
                t_obs.len() * width
            )));
        }
        let lead = t_fut.start() - t_obs.start();
        let mut futures = Vec::new();
        for episode in &self.corpus {
            let frames = episode.frame_count();
            if lead + t_fut.len() > frames {
                continue;
            }
            let data = episode.as_slice();
            for p in 0..=(frames - lead - t_fut.len()) {
                let window = &data[p * width..(p + t_obs.len()) * width];
                let hit = window
                    .iter()
                    .zip(observed)
                    .all(|(a, b)| (a - b).abs() <= self.tolerance);
                if hit {
                    let f = p + lead;
                    futures.push(data[f * width..(f + t_fut.len()) * width].to_vec());
                }
            }
        }
        if futures.is_empty() {
            return Err(Error::EmptySupport { t_obs });
        }
        Ok(futures)
    }

    /// Independent Gaussian over the matched futures: per-dimension mean and
    /// population std, floored at `std_floor`.
    pub fn fit(&self, futures: &[Vec<f64>]) -> Result<DiagonalGaussian> {
        let m = futures.len() as f64;
        let d = futures.first().map_or(0, Vec::len);
        let mut means = vec![0.0; d];
        for f in futures {
            for (acc, v) in means.iter_mut().zip(f) {
                *acc += v;
            }
        }
        means.iter_mut().for_each(|v| *v /= m);
        let mut vars = vec![0.0; d];
        for f in futures {
            for ((acc, v), mu) in vars.iter_mut().zip(f).zip(&means) {
                *acc += (v - mu) * (v - mu);
            }
        }
        let stds = vars
            .iter()
            .map(|v| (v / m).sqrt().max(self.std_floor))
            .collect();
        DiagonalGaussian::new(means, stds)
    }
}

impl Forecaster for OracleForecaster {
    fn predict(
        &self,
        observed: &[f64],
        t_obs: TimeWindow,
        t_fut: TimeWindow,
    ) -> Result<FutureDensity> {
        let futures = self.match_futures(observed, t_obs, t_fut)?;
        Ok(self.fit(&futures)?.into())
    }
}

/// Number of distinct vectors in `futures` (exact comparison).
pub fn distinct_count(futures: &[Vec<f64>]) -> usize {
    let mut seen: Vec<&Vec<f64>> = Vec::new();
    for f in futures {
        if !seen.contains(&f) {
            seen.push(f);
        }
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{gaussian_entropy, HALF_LN_2PI_E};
    use crate::density::Gaussian;
    use crate::synth::{generate, ConversationConfig};

    fn w(s: usize, l: usize) -> TimeWindow {
        TimeWindow::new(s, l).unwrap()
    }

    fn default_oracle() -> (OracleForecaster, BehaviorSequence) {
        let seq = generate(&ConversationConfig::default()).unwrap().sequence;
        (OracleForecaster::new(vec![seq.clone()]).unwrap(), seq)
    }

    #[test]
    fn stable_window_has_two_futures() {
        let (oracle, seq) = default_oracle();
        let obs = w(83, 30);
        let futures = oracle
            .match_futures(seq.window_features(&obs).unwrap(), obs, w(183, 46))
            .unwrap();
        assert_eq!(distinct_count(&futures), 2);
    }

    #[test]
    fn nod_window_has_one_future() {
        let (oracle, seq) = default_oracle();
        for start in [109, 120, 140, 153] {
            let obs = w(start, 30);
            let futures = oracle
                .match_futures(seq.window_features(&obs).unwrap(), obs, w(183, 46))
                .unwrap();
            assert_eq!(distinct_count(&futures), 1, "window {start}");
        }
    }

    #[test]
    fn exact_self_match() {
        let seq = generate(&ConversationConfig::default()).unwrap().sequence;
        let oracle = OracleForecaster::with_params(vec![seq.clone()], 0.0, 1e-10).unwrap();
        let obs = w(400, 30);
        let fut = w(450, 20);
        let futures = oracle
            .match_futures(seq.window_features(&obs).unwrap(), obs, fut)
            .unwrap();
        let own = seq.window_features(&fut).unwrap();
        assert!(futures.iter().any(|f| f == own));
    }

    #[test]
    fn unseen_observation_is_empty_support() {
        let (oracle, seq) = default_oracle();
        let obs = w(83, 2);
        let mut x = seq.window_features(&obs).unwrap().to_vec();
        x[0] += 0.5;
        let err = oracle.match_futures(&x, obs, w(183, 46)).unwrap_err();
        assert!(matches!(err, Error::EmptySupport { .. }));
        assert!(err.is_numerical());
    }

    #[test]
    fn fit_examples() {
        let oracle = OracleForecaster::new(vec![generate(&ConversationConfig::default())
            .unwrap()
            .sequence])
        .unwrap();
        let single = oracle.fit(&[vec![0.3, -0.2]]).unwrap();
        assert!(single.stds().iter().all(|s| *s == 1e-10));
        let h = gaussian_entropy(&Gaussian::Diagonal(single)).value;
        assert!((h - 2.0 * (HALF_LN_2PI_E + 1e-10f64.ln())).abs() < 1e-12);

        let delta = 0.25;
        let two = oracle.fit(&[vec![1.0, 5.0 - delta], vec![1.0, 5.0 + delta]]).unwrap();
        assert_eq!(two.stds()[0], 1e-10);
        assert!((two.means()[1] - 5.0).abs() < 1e-15);
        assert!((two.stds()[1] - delta).abs() < 1e-15);
    }

    #[test]
    fn rejects_mixed_corpus_and_bad_params() {
        let four = generate(&ConversationConfig::default()).unwrap().sequence;
        let three = generate(&ConversationConfig { participants: 3, ..Default::default() })
            .unwrap()
            .sequence;
        assert!(OracleForecaster::new(vec![four.clone(), three]).is_err());
        assert!(OracleForecaster::new(vec![]).is_err());
        assert!(OracleForecaster::with_params(vec![four.clone()], -1.0, 1e-10).is_err());
        assert!(OracleForecaster::with_params(vec![four], 0.0, 0.0).is_err());
    }
}
