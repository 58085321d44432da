//! Differential entropy of predictive densities, in nats.
//!
//! Gaussians use the closed form. Mixtures get a pair of closed-form bounds
//! (pairwise Bhattacharyya lower bound, weight-entropy upper bound) or a
//! Monte-Carlo estimate. Raw samples go through the Kozachenko-Leonenko
//! k-nearest-neighbour estimator. Autoregressive step sequences are summed
//! per step.

use std::f64::consts::PI;

use nalgebra::Cholesky;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{digamma, ln_gamma};

use crate::density::{FutureDensity, Gaussian, GaussianMixture, SampleSet, StepSequence, LN_2PI};
use crate::error::{Error, Result};

/// Entropy of a unit-variance 1-D Gaussian, `0.5 * ln(2 pi e)`.
pub const HALF_LN_2PI_E: f64 = 0.5 * (LN_2PI + 1.0);

/// Smallest neighbour distance the k-NN estimator will take the log of.
pub const KNN_DISTANCE_FLOOR: f64 = 1e-12;

pub const DEFAULT_KNN_K: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyMethod {
    ClosedForm,
    GmmLowerBound,
    GmmUpperBound,
    /// Midpoint of the two mixture bounds; `std_error` holds the half-gap.
    GmmBoundsMidpoint,
    MonteCarlo,
    KnnEstimator,
    StepwiseSum,
}

impl EntropyMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            EntropyMethod::ClosedForm => "closed_form",
            EntropyMethod::GmmLowerBound => "gmm_lower_bound",
            EntropyMethod::GmmUpperBound => "gmm_upper_bound",
            EntropyMethod::GmmBoundsMidpoint => "gmm_bounds_midpoint",
            EntropyMethod::MonteCarlo => "monte_carlo",
            EntropyMethod::KnnEstimator => "knn_estimator",
            EntropyMethod::StepwiseSum => "stepwise_sum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult {
    /// Entropy in nats.
    pub value: f64,
    pub method: EntropyMethod,
    pub std_error: Option<f64>,
    /// Zero k-NN distances clamped to [`KNN_DISTANCE_FLOOR`].
    pub clamped_distances: usize,
}

impl EntropyResult {
    fn exact(value: f64, method: EntropyMethod) -> Self {
        Self {
            value,
            method,
            std_error: None,
            clamped_distances: 0,
        }
    }
}

/// How mixtures are reduced to a single number by [`entropy`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixtureMethod {
    #[default]
    BoundsMidpoint,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyOptions {
    pub mixture: MixtureMethod,
    pub knn_k: usize,
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for EntropyOptions {
    fn default() -> Self {
        Self {
            mixture: MixtureMethod::BoundsMidpoint,
            knn_k: DEFAULT_KNN_K,
            mc_samples: 100_000,
            seed: 0,
        }
    }
}

/// Closed-form entropy `0.5 * ln((2 pi e)^d det K)`.
///
/// Diagonal Gaussians are summed per dimension as `0.5 ln(2 pi e) + ln sigma_i`.
pub fn gaussian_entropy(density: &Gaussian) -> EntropyResult {
    let value = match density {
        Gaussian::Diagonal(g) => g.stds().iter().map(|s| HALF_LN_2PI_E + s.ln()).sum(),
        Gaussian::Full(g) => g.dim() as f64 * HALF_LN_2PI_E + 0.5 * g.log_det(),
    };
    EntropyResult::exact(value, EntropyMethod::ClosedForm)
}

/// Bhattacharyya distance between two Gaussians.
fn bhattacharyya(a: &Gaussian, b: &Gaussian) -> Result<f64> {
    let avg = (a.covariance_matrix() + b.covariance_matrix()) * 0.5;
    let chol = Cholesky::new(avg)
        .ok_or_else(|| Error::degenerate("averaged component covariance is not positive-definite"))?;
    let diff = a.mean_vector() - b.mean_vector();
    let solved = chol.solve(&diff);
    let maha = diff.dot(&solved);
    let log_det_avg: f64 = chol.l_dirty().diagonal().iter().map(|p| 2.0 * p.ln()).sum();
    Ok(0.125 * maha + 0.5 * (log_det_avg - 0.5 * (a.log_det() + b.log_det())))
}

/// Closed-form lower and upper bounds on a Gaussian mixture's entropy.
///
/// Lower: `sum_i w_i H_i - sum_i w_i ln sum_j w_j exp(-D_B(i, j))` with the
/// Bhattacharyya distance `D_B`. Upper: `sum_i w_i (H_i - ln w_i)`.
/// Both equal the component entropy for a single component.
pub fn gmm_entropy_bounds(mixture: &GaussianMixture) -> Result<(EntropyResult, EntropyResult)> {
    let w = mixture.weights();
    let comps = mixture.components();
    let h: Vec<f64> = comps.iter().map(|c| gaussian_entropy(c).value).collect();
    let mean_h: f64 = w.iter().zip(&h).map(|(w, h)| w * h).sum();

    let mut cross = 0.0;
    for (i, ci) in comps.iter().enumerate() {
        let mut terms = Vec::with_capacity(comps.len());
        for (j, cj) in comps.iter().enumerate() {
            let d = if i == j { 0.0 } else { bhattacharyya(ci, cj)? };
            terms.push(w[j].ln() - d);
        }
        cross += w[i] * crate::density::log_sum_exp(&terms);
    }
    let weight_entropy: f64 = w.iter().map(|w| -w * w.ln()).sum();

    let lower = mean_h - cross;
    let upper = mean_h + weight_entropy;
    Ok((
        EntropyResult::exact(lower.min(upper), EntropyMethod::GmmLowerBound),
        EntropyResult::exact(upper, EntropyMethod::GmmUpperBound),
    ))
}

/// Monte-Carlo estimate `-(1/m) sum ln p(y_k)` with `y_k` drawn from the density.
///
/// Deterministic for a given `seed`.
pub fn monte_carlo_entropy(
    density: &FutureDensity,
    sample_count: usize,
    seed: u64,
) -> Result<EntropyResult> {
    if sample_count < 100 {
        return Err(Error::param(format!(
            "Monte-Carlo entropy needs at least 100 samples, got {sample_count}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buf = vec![0.0; density.dim()];
    let mut draw = |rng: &mut ChaCha8Rng| -> Result<f64> {
        Ok(match density {
            FutureDensity::DiagonalGaussian(g) => {
                g.sample_into(rng, &mut buf);
                -g.log_pdf(&buf)
            }
            FutureDensity::FullGaussian(g) => {
                g.sample_into(rng, &mut buf);
                -g.log_pdf(&buf)
            }
            FutureDensity::GaussianMixture(m) => {
                m.sample_into(rng, &mut buf);
                -m.log_pdf(&buf)
            }
            other => {
                return Err(Error::param(format!(
                    "Monte-Carlo entropy needs an explicit density, got {}",
                    other.kind()
                )))
            }
        })
    };
    // Welford accumulation keeps the variance stable for large m.
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for k in 0..sample_count {
        let x = draw(&mut rng)?;
        let delta = x - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (x - mean);
    }
    let var = m2 / (sample_count - 1) as f64;
    Ok(EntropyResult {
        value: mean,
        method: EntropyMethod::MonteCarlo,
        std_error: Some((var / sample_count as f64).sqrt()),
        clamped_distances: 0,
    })
}

/// Squared distance from every sample to its k-th nearest other sample.
///
/// Exact search: samples are sorted lexicographically and each query scans
/// outward along the first coordinate until that gap alone exceeds the
/// current k-th best distance.
fn kth_neighbor_sq_distances(samples: &SampleSet, k: usize) -> Vec<f64> {
    let d = samples.dim();
    let mut order: Vec<&[f64]> = samples.iter().collect();
    order.sort_by(|a, b| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let m = order.len();
    let sq = |a: &[f64], b: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..d {
            let t = a[i] - b[i];
            s += t * t;
        }
        s
    };

    let mut out = Vec::with_capacity(m);
    let mut best: Vec<f64> = Vec::with_capacity(k + 1);
    for (pos, q) in order.iter().enumerate() {
        best.clear();
        let push = |dist: f64, best: &mut Vec<f64>| {
            if best.len() == k && dist >= best[k - 1] {
                return;
            }
            let at = best.partition_point(|b| *b <= dist);
            best.insert(at, dist);
            best.truncate(k);
        };
        let (mut lo, mut hi) = (pos, pos + 1);
        let (mut lo_open, mut hi_open) = (lo > 0, hi < m);
        while lo_open || hi_open {
            if lo_open {
                let c = order[lo - 1];
                let gap = q[0] - c[0];
                if best.len() == k && gap * gap > best[k - 1] {
                    lo_open = false;
                } else {
                    push(sq(q, c), &mut best);
                    lo -= 1;
                    lo_open = lo > 0;
                }
            }
            if hi_open {
                let c = order[hi];
                let gap = c[0] - q[0];
                if best.len() == k && gap * gap > best[k - 1] {
                    hi_open = false;
                } else {
                    push(sq(q, c), &mut best);
                    hi += 1;
                    hi_open = hi < m;
                }
            }
        }
        out.push(best[k - 1]);
    }
    out
}

/// Kozachenko-Leonenko estimate
/// `psi(m) - psi(k) + ln V_d + (d/m) sum_i ln eps_i`.
///
/// `eps_i` is the Euclidean distance from sample `i` to its k-th nearest
/// neighbour; zero distances are clamped to [`KNN_DISTANCE_FLOOR`] and
/// counted in `clamped_distances`.
pub fn knn_entropy(samples: &SampleSet, k: usize) -> Result<EntropyResult> {
    let m = samples.len();
    if k == 0 || k >= m {
        return Err(Error::param(format!(
            "k must satisfy 1 <= k < m (k = {k}, m = {m})"
        )));
    }
    let d = samples.dim() as f64;
    let mut clamped = 0;
    let mut log_sum = 0.0;
    for sq in kth_neighbor_sq_distances(samples, k) {
        let eps = sq.sqrt();
        let eps = if eps < KNN_DISTANCE_FLOOR {
            clamped += 1;
            KNN_DISTANCE_FLOOR
        } else {
            eps
        };
        log_sum += eps.ln();
    }
    let log_unit_ball = 0.5 * d * PI.ln() - ln_gamma(0.5 * d + 1.0);
    let value = digamma(m as f64) - digamma(k as f64) + log_unit_ball + d * log_sum / m as f64;
    Ok(EntropyResult {
        value,
        method: EntropyMethod::KnnEstimator,
        std_error: None,
        clamped_distances: clamped,
    })
}

/// Per-step entropies of an autoregressive forecast, each by its preferred method.
pub fn stepwise_entropy_terms(
    steps: &StepSequence,
    options: &EntropyOptions,
) -> Result<Vec<EntropyResult>> {
    steps.steps().iter().map(|s| entropy(s, options)).collect()
}

/// Sum of per-step entropies.
///
/// Approximates the joint entropy of the future by treating each step as
/// conditionally independent given the decoder state; it is not the joint
/// entropy in general.
pub fn stepwise_entropy_sum(
    steps: &StepSequence,
    options: &EntropyOptions,
) -> Result<EntropyResult> {
    let terms = stepwise_entropy_terms(steps, options)?;
    let value = terms.iter().map(|t| t.value).sum();
    let var: Option<f64> = terms
        .iter()
        .filter_map(|t| t.std_error)
        .map(|s| s * s)
        .reduce(|a, b| a + b);
    Ok(EntropyResult {
        value,
        method: EntropyMethod::StepwiseSum,
        std_error: var.map(f64::sqrt),
        clamped_distances: terms.iter().map(|t| t.clamped_distances).sum(),
    })
}

/// Entropy of any [`FutureDensity`] using its preferred method.
pub fn entropy(density: &FutureDensity, options: &EntropyOptions) -> Result<EntropyResult> {
    match density {
        FutureDensity::DiagonalGaussian(g) => Ok(gaussian_entropy(&Gaussian::Diagonal(g.clone()))),
        FutureDensity::FullGaussian(g) => Ok(gaussian_entropy(&Gaussian::Full(g.clone()))),
        FutureDensity::GaussianMixture(m) => match options.mixture {
            MixtureMethod::BoundsMidpoint => {
                let (lo, hi) = gmm_entropy_bounds(m)?;
                Ok(EntropyResult {
                    value: 0.5 * (lo.value + hi.value),
                    method: EntropyMethod::GmmBoundsMidpoint,
                    std_error: Some(0.5 * (hi.value - lo.value)),
                    clamped_distances: 0,
                })
            }
            MixtureMethod::MonteCarlo => {
                monte_carlo_entropy(density, options.mc_samples, options.seed)
            }
        },
        FutureDensity::SampleSet(s) => knn_entropy(s, options.knn_k),
        FutureDensity::StepSequence(s) => stepwise_entropy_sum(s, options),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{DiagonalGaussian, FullGaussian};
    use rand::Rng;

    fn diag(means: &[f64], stds: &[f64]) -> Gaussian {
        Gaussian::Diagonal(DiagonalGaussian::new(means.to_vec(), stds.to_vec()).unwrap())
    }

    /// Composite Simpson rule for `-int p ln p` of a 1-D Gaussian, in raw coordinates.
    fn quadrature_gaussian_entropy(sigma: f64) -> f64 {
        let (a, b, n) = (-40.0 * sigma, 40.0 * sigma, 200_000usize);
        let h = (b - a) / n as f64;
        let integrand = |y: f64| {
            let z = y / sigma;
            let log_p = -0.5 * z * z - sigma.ln() - 0.5 * (2.0 * PI).ln();
            -log_p.exp() * log_p
        };
        let mut s = integrand(a) + integrand(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * integrand(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn frozen_values_match_quadrature() {
        // Frozen from the quadrature oracle above (and scipy.integrate.quad).
        assert!((quadrature_gaussian_entropy(1.0) - 1.418_938_533_204_673).abs() < 1e-9);
        assert!((quadrature_gaussian_entropy(1e-10) - -21.606_912_396_735_783).abs() < 1e-8);
    }

    #[test]
    fn standard_normal_closed_form() {
        let r = gaussian_entropy(&diag(&[0.0], &[1.0]));
        assert!((r.value - 1.418_938_533_204_673).abs() < 1e-12);
        assert_eq!(r.method, EntropyMethod::ClosedForm);
        assert!(r.std_error.is_none());
    }

    #[test]
    fn identity_covariance_scales_with_dimension() {
        for d in 1..6 {
            let g = FullGaussian::from_rows(
                vec![0.0; d],
                &(0..d)
                    .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            let h = gaussian_entropy(&Gaussian::Full(g)).value;
            assert!((h - d as f64 * HALF_LN_2PI_E).abs() < 1e-12);
        }
    }

    #[test]
    fn std_floor_entropy() {
        let h = gaussian_entropy(&diag(&[0.0], &[1e-10])).value;
        assert!((h - -21.606_912_396_735_783).abs() < 1e-12);
    }

    #[test]
    fn diagonal_matches_full() {
        let d = DiagonalGaussian::new(vec![1.0, 2.0, 3.0], vec![0.1, 2.0, 7.5]).unwrap();
        let a = gaussian_entropy(&Gaussian::Diagonal(d.clone())).value;
        let b = gaussian_entropy(&Gaussian::Full(d.to_full())).value;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn single_component_bounds_coincide() {
        let g = diag(&[0.3, -1.0], &[0.5, 2.0]);
        let m = GaussianMixture::new(vec![1.0], vec![g.clone()]).unwrap();
        let (lo, hi) = gmm_entropy_bounds(&m).unwrap();
        let h = gaussian_entropy(&g).value;
        assert!((lo.value - h).abs() < 1e-12);
        assert!((hi.value - h).abs() < 1e-12);
    }

    #[test]
    fn identical_components_bounds() {
        let g = diag(&[0.0], &[1.0]);
        let m = GaussianMixture::new(vec![0.5, 0.5], vec![g.clone(), g.clone()]).unwrap();
        let (lo, hi) = gmm_entropy_bounds(&m).unwrap();
        let h = gaussian_entropy(&g).value;
        assert_eq!(lo.value, h);
        assert!((hi.value - (h + 2f64.ln())).abs() < 1e-12);
    }

    /// Independent MC oracle: own RNG stream, own Box-Muller, own mixture pdf.
    fn far_mixture_oracle(m: usize) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
        let pdf = |y: f64| {
            0.5 * ((-0.5 * y * y).exp() + (-0.5 * (y - 50.0) * (y - 50.0)).exp())
                / (2.0 * PI).sqrt()
        };
        let mut acc = 0.0;
        for _ in 0..m {
            let u1: f64 = rng.random::<f64>().max(1e-300);
            let u2: f64 = rng.random();
            let z = (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos();
            let y = if rng.random::<bool>() { z } else { 50.0 + z };
            acc -= pdf(y).ln();
        }
        acc / m as f64
    }

    #[test]
    fn far_apart_mixture_bounds_and_monte_carlo() {
        let oracle = far_mixture_oracle(1_000_000);
        // Frozen: quadrature gives 2.1120857137646185.
        assert!((oracle - 2.112_085_713_764_618).abs() < 0.01);
        let m = GaussianMixture::new(vec![0.5, 0.5], vec![diag(&[0.0], &[1.0]), diag(&[50.0], &[1.0])])
            .unwrap();
        let (lo, hi) = gmm_entropy_bounds(&m).unwrap();
        for b in [lo.value, hi.value] {
            assert!((b - 2.112_085_713_764_618).abs() < 0.01, "bound {b}");
        }
        let mc = monte_carlo_entropy(&m.clone().into(), 1_000_000, 7).unwrap();
        let se = mc.std_error.unwrap();
        assert!((mc.value - 2.112_085_713_764_618).abs() <= 3.0 * se.max(1e-12), "{mc:?}");
    }

    #[test]
    fn monte_carlo_standard_normal_and_determinism() {
        let d: FutureDensity = DiagonalGaussian::new(vec![0.0], vec![1.0]).unwrap().into();
        let a = monte_carlo_entropy(&d, 100_000, 11).unwrap();
        let b = monte_carlo_entropy(&d, 100_000, 11).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert!((a.value - HALF_LN_2PI_E).abs() <= 3.0 * a.std_error.unwrap());
        assert!(monte_carlo_entropy(&d, 99, 0).is_err());
    }

    fn normal_samples(m: usize, seed: u64) -> SampleSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..m)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        SampleSet::from_flat(1, data).unwrap()
    }

    fn uniform_samples(m: usize, width: f64, seed: u64) -> SampleSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SampleSet::from_flat(1, (0..m).map(|_| width * rng.random::<f64>()).collect()).unwrap()
    }

    #[test]
    fn knn_standard_normal() {
        let h = knn_entropy(&normal_samples(10_000, 3), 3).unwrap();
        assert!((h.value - 1.418_939).abs() < 0.05, "{h:?}");
    }

    #[test]
    fn knn_uniform_and_scaling() {
        let a = knn_entropy(&uniform_samples(10_000, 1.0, 5), 3).unwrap().value;
        let b = knn_entropy(&uniform_samples(10_000, 2.0, 6), 3).unwrap().value;
        assert!(a.abs() < 0.05, "{a}");
        assert!((b - a - 2f64.ln()).abs() < 0.07, "{a} {b}");
    }

    #[test]
    fn knn_matches_brute_force_distances() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let data: Vec<f64> = (0..3 * 300).map(|_| rng.random::<f64>()).collect();
        let s = SampleSet::from_flat(3, data).unwrap();
        let fast = kth_neighbor_sq_distances(&s, 4);
        let mut fast_sorted = fast.clone();
        fast_sorted.sort_by(f64::total_cmp);
        let mut brute: Vec<f64> = (0..s.len())
            .map(|i| {
                let mut ds: Vec<f64> = (0..s.len())
                    .filter(|&j| j != i)
                    .map(|j| {
                        s.sample(i)
                            .iter()
                            .zip(s.sample(j))
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum()
                    })
                    .collect();
                ds.sort_by(f64::total_cmp);
                ds[3]
            })
            .collect();
        brute.sort_by(f64::total_cmp);
        assert_eq!(fast_sorted, brute);
    }

    #[test]
    fn knn_duplicates_are_clamped() {
        let s = SampleSet::new(&[vec![1.0], vec![1.0], vec![1.0], vec![2.0]]).unwrap();
        let r = knn_entropy(&s, 1).unwrap();
        assert!(r.value.is_finite());
        assert_eq!(r.clamped_distances, 3);
        assert!(knn_entropy(&s, 4).is_err());
        assert!(knn_entropy(&s, 0).is_err());
    }

    #[test]
    fn stepwise_examples() {
        let unit: FutureDensity = DiagonalGaussian::new(vec![0.0], vec![1.0]).unwrap().into();
        let wide: FutureDensity = DiagonalGaussian::new(vec![0.0], vec![1f64.exp()]).unwrap().into();
        let opts = EntropyOptions::default();

        let two = StepSequence::new(vec![unit.clone(), unit.clone()]).unwrap();
        let r = stepwise_entropy_sum(&two, &opts).unwrap();
        assert!((r.value - 2.837_877_066_409_345).abs() < 1e-12);
        assert_eq!(r.method, EntropyMethod::StepwiseSum);

        let one = StepSequence::new(vec![unit.clone()]).unwrap();
        assert_eq!(stepwise_entropy_sum(&one, &opts).unwrap().value, HALF_LN_2PI_E);

        let mixed = StepSequence::new(vec![unit, wide]).unwrap();
        let r = stepwise_entropy_sum(&mixed, &opts).unwrap();
        assert!((r.value - 3.837_877_066_409_345).abs() < 1e-12);
        assert_eq!(stepwise_entropy_terms(&mixed, &opts).unwrap().len(), 2);
    }

    #[test]
    fn dispatch_identities() {
        let opts = EntropyOptions::default();
        let full = FullGaussian::from_rows(vec![0.0, 1.0], &[vec![2.0, 0.3], vec![0.3, 1.0]]).unwrap();
        let via = entropy(&full.clone().into(), &opts).unwrap();
        assert_eq!(via, gaussian_entropy(&Gaussian::Full(full)));

        let s = normal_samples(500, 1);
        assert_eq!(entropy(&s.clone().into(), &opts).unwrap(), knn_entropy(&s, 3).unwrap());

        let m = GaussianMixture::new(vec![0.3, 0.7], vec![diag(&[0.0], &[1.0]), diag(&[1.5], &[0.5])])
            .unwrap();
        let (lo, hi) = gmm_entropy_bounds(&m).unwrap();
        let mid = entropy(&m.clone().into(), &opts).unwrap();
        assert!(lo.value <= mid.value && mid.value <= hi.value);
        assert_eq!(mid.std_error, Some(0.5 * (hi.value - lo.value)));

        let mc_opts = EntropyOptions {
            mixture: MixtureMethod::MonteCarlo,
            ..opts
        };
        assert_eq!(entropy(&m.into(), &mc_opts).unwrap().method, EntropyMethod::MonteCarlo);
    }
}
