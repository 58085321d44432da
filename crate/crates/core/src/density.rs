//! Predictive densities over a flattened future window.


use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Absolute tolerance on `|K - K^T|`, relative to the largest covariance entry.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Allowed `|sum(weights) - 1|` for a mixture.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

pub(crate) const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Independent per-dimension Gaussian.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalGaussian {
    means: Vec<f64>,
    stds: Vec<f64>,
}

impl DiagonalGaussian {
    pub fn new(means: Vec<f64>, stds: Vec<f64>) -> Result<Self> {
        if means.is_empty() {
            return Err(Error::param("diagonal Gaussian needs at least one dimension"));
        }
        if means.len() != stds.len() {
            return Err(Error::param(format!(
                "diagonal Gaussian has {} means but {} stds",
                means.len(),
                stds.len()
            )));
        }
        if let Some(i) = means.iter().position(|m| !m.is_finite()) {
            return Err(Error::param(format!("means[{i}] is not finite")));
        }
        if let Some(i) = stds.iter().position(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::degenerate(format!(
                "stds[{i}] = {} must be finite and > 0",
                stds[i]
            )));
        }
        Ok(Self { means, stds })
    }

    pub fn dim(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn stds(&self) -> &[f64] {
        &self.stds
    }

    /// Equivalent full-covariance Gaussian.
    pub fn to_full(&self) -> FullGaussian {
        let cov = DMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.stds.iter().map(|s| s * s),
        ));
        FullGaussian::new(DVector::from_column_slice(&self.means), cov)
            .expect("positive stds give a positive-definite diagonal")
    }

    pub fn log_pdf(&self, y: &[f64]) -> f64 {
        let mut acc = 0.0;
        for ((yi, m), s) in y.iter().zip(&self.means).zip(&self.stds) {
            let z = (yi - m) / s;
            acc += -0.5 * z * z - s.ln();
        }
        acc - 0.5 * self.dim() as f64 * LN_2PI
    }

    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        for ((o, m), s) in out.iter_mut().zip(&self.means).zip(&self.stds) {
            let z: f64 = rng.sample(StandardNormal);
            *o = m + s * z;
        }
    }

    /// Scale every std by `|a|` (and every mean by `a`): the law of `aY`.
    pub fn scaled(&self, a: f64) -> Result<Self> {
        Self::new(
            self.means.iter().map(|m| a * m).collect(),
            self.stds.iter().map(|s| a.abs() * s).collect(),
        )
    }

    pub fn translated(&self, c: &[f64]) -> Result<Self> {
        check_len(c.len(), self.dim())?;
        Self::new(
            self.means.iter().zip(c).map(|(m, c)| m + c).collect(),
            self.stds.clone(),
        )
    }
}

/// Gaussian with dense, symmetric positive-definite covariance.
#[derive(Debug, Clone)]
pub struct FullGaussian {
    mean: DVector<f64>,
    covariance: DMatrix<f64>,
    cholesky: Cholesky<f64, Dyn>,
    log_det: f64,
}

impl PartialEq for FullGaussian {
    fn eq(&self, other: &Self) -> bool {
        self.mean == other.mean && self.covariance == other.covariance
    }
}

impl FullGaussian {
    pub fn new(mean: DVector<f64>, covariance: DMatrix<f64>) -> Result<Self> {
        let d = mean.len();
        if d == 0 {
            return Err(Error::param("full Gaussian needs at least one dimension"));
        }
        if covariance.nrows() != d || covariance.ncols() != d {
            return Err(Error::param(format!(
                "covariance is {}x{}, expected {d}x{d}",
                covariance.nrows(),
                covariance.ncols()
            )));
        }
        if mean.iter().any(|m| !m.is_finite()) || covariance.iter().any(|k| !k.is_finite()) {
            return Err(Error::param("mean and covariance must be finite"));
        }
        let scale = covariance.amax().max(1.0);
        for i in 0..d {
            for j in 0..i {
                if (covariance[(i, j)] - covariance[(j, i)]).abs() > SYMMETRY_TOLERANCE * scale {
                    return Err(Error::degenerate(format!(
                        "covariance[{i}][{j}] != covariance[{j}][{i}]"
                    )));
                }
            }
        }
        let cholesky = Cholesky::new(covariance.clone())
            .ok_or_else(|| Error::degenerate("covariance is not positive-definite"))?;
        let l = cholesky.l_dirty();
        let mut log_det = 0.0;
        for i in 0..d {
            let pivot = l[(i, i)];
            if !(pivot > 0.0) {
                return Err(Error::degenerate(format!("Cholesky pivot {i} is {pivot}")));
            }
            log_det += 2.0 * pivot.ln();
        }
        Ok(Self {
            mean,
            covariance,
            cholesky,
            log_det,
        })
    }

    /// Convenience constructor from row-major nested vectors.
    pub fn from_rows(mean: Vec<f64>, covariance: &[Vec<f64>]) -> Result<Self> {
        let d = mean.len();
        if covariance.len() != d || covariance.iter().any(|r| r.len() != d) {
            return Err(Error::param(format!("covariance must be {d}x{d}")));
        }
        let cov = DMatrix::from_fn(d, d, |i, j| covariance[i][j]);
        Self::new(DVector::from_vec(mean), cov)
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    /// `log det K`, from the Cholesky pivots.
    pub fn log_det(&self) -> f64 {
        self.log_det
    }

    pub fn log_pdf(&self, y: &[f64]) -> f64 {
        let diff = DVector::from_iterator(self.dim(), y.iter().zip(self.mean.iter()).map(|(a, b)| a - b));
        let l = self.cholesky.l_dirty();
        // Forward substitution on the lower factor; avoids allocating L.
        let d = self.dim();
        let mut z = vec![0.0; d];
        let mut quad = 0.0;
        for i in 0..d {
            let mut s = diff[i];
            for (j, zj) in z.iter().enumerate().take(i) {
                s -= l[(i, j)] * zj;
            }
            z[i] = s / l[(i, i)];
            quad += z[i] * z[i];
        }
        -0.5 * (quad + self.log_det + d as f64 * LN_2PI)
    }

    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        let d = self.dim();
        let l = self.cholesky.l_dirty();
        let z: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        for i in 0..d {
            let mut s = self.mean[i];
            for (j, zj) in z.iter().enumerate().take(i + 1) {
                s += l[(i, j)] * zj;
            }
            out[i] = s;
        }
    }

    /// Law of `A Y`: mean `A mu`, covariance `A K A^T`.
    pub fn transformed(&self, a: &DMatrix<f64>) -> Result<Self> {
        if a.nrows() != self.dim() || a.ncols() != self.dim() {
            return Err(Error::param("transform must be square with the density's dimension"));
        }
        let cov = a * &self.covariance * a.transpose();
        let cov = (&cov + cov.transpose()) * 0.5;
        Self::new(a * &self.mean, cov)
    }

    pub fn translated(&self, c: &[f64]) -> Result<Self> {
        check_len(c.len(), self.dim())?;
        Self::new(&self.mean + DVector::from_column_slice(c), self.covariance.clone())
    }
}

/// One mixture component.
#[derive(Debug, Clone, PartialEq)]
pub enum Gaussian {
    Diagonal(DiagonalGaussian),
    Full(FullGaussian),
}

impl Gaussian {
    pub fn dim(&self) -> usize {
        match self {
            Gaussian::Diagonal(g) => g.dim(),
            Gaussian::Full(g) => g.dim(),
        }
    }

    pub fn mean_vector(&self) -> DVector<f64> {
        match self {
            Gaussian::Diagonal(g) => DVector::from_column_slice(g.means()),
            Gaussian::Full(g) => g.mean().clone(),
        }
    }

    pub fn covariance_matrix(&self) -> DMatrix<f64> {
        match self {
            Gaussian::Diagonal(g) => DMatrix::from_diagonal(&DVector::from_iterator(
                g.dim(),
                g.stds().iter().map(|s| s * s),
            )),
            Gaussian::Full(g) => g.covariance().clone(),
        }
    }

    pub fn log_det(&self) -> f64 {
        match self {
            Gaussian::Diagonal(g) => g.stds().iter().map(|s| 2.0 * s.ln()).sum(),
            Gaussian::Full(g) => g.log_det(),
        }
    }

    pub fn log_pdf(&self, y: &[f64]) -> f64 {
        match self {
            Gaussian::Diagonal(g) => g.log_pdf(y),
            Gaussian::Full(g) => g.log_pdf(y),
        }
    }

    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        match self {
            Gaussian::Diagonal(g) => g.sample_into(rng, out),
            Gaussian::Full(g) => g.sample_into(rng, out),
        }
    }

    pub fn translated(&self, c: &[f64]) -> Result<Self> {
        Ok(match self {
            Gaussian::Diagonal(g) => Gaussian::Diagonal(g.translated(c)?),
            Gaussian::Full(g) => Gaussian::Full(g.translated(c)?),
        })
    }

    pub fn scaled(&self, a: f64) -> Result<Self> {
        Ok(match self {
            Gaussian::Diagonal(g) => Gaussian::Diagonal(g.scaled(a)?),
            Gaussian::Full(g) => {
                Gaussian::Full(g.transformed(&(DMatrix::identity(g.dim(), g.dim()) * a))?)
            }
        })
    }
}

/// Finite mixture of Gaussians with a shared dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMixture {
    weights: Vec<f64>,
    components: Vec<Gaussian>,
}

impl GaussianMixture {
    pub fn new(weights: Vec<f64>, components: Vec<Gaussian>) -> Result<Self> {
        if components.is_empty() || weights.len() != components.len() {
            return Err(Error::param(format!(
                "mixture needs one weight per component ({} weights, {} components)",
                weights.len(),
                components.len()
            )));
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::param(format!("weights[{i}] = {} must be > 0", weights[i])));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::param(format!("weights sum to {total}, expected 1")));
        }
        let d = components[0].dim();
        if let Some(i) = components.iter().position(|c| c.dim() != d) {
            return Err(Error::param(format!(
                "components[{i}] has dimension {}, expected {d}",
                components[i].dim()
            )));
        }
        Ok(Self {
            weights,
            components,
        })
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[Gaussian] {
        &self.components
    }

    pub fn log_pdf(&self, y: &[f64]) -> f64 {
        let terms: Vec<f64> = self
            .weights
            .iter()
            .zip(&self.components)
            .map(|(w, c)| w.ln() + c.log_pdf(y))
            .collect();
        log_sum_exp(&terms)
    }

    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut pick = self.components.len() - 1;
        for (i, w) in self.weights.iter().enumerate() {
            acc += w;
            if u < acc {
                pick = i;
                break;
            }
        }
        self.components[pick].sample_into(rng, out);
    }

    pub fn translated(&self, c: &[f64]) -> Result<Self> {
        let comps = self
            .components
            .iter()
            .map(|g| g.translated(c))
            .collect::<Result<_>>()?;
        Self::new(self.weights.clone(), comps)
    }

    pub fn scaled(&self, a: f64) -> Result<Self> {
        let comps = self
            .components
            .iter()
            .map(|g| g.scaled(a))
            .collect::<Result<_>>()?;
        Self::new(self.weights.clone(), comps)
    }
}

/// `m >= 2` samples of a common dimension, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    dim: usize,
    data: Vec<f64>,
}

impl SampleSet {
    pub fn new(samples: &[Vec<f64>]) -> Result<Self> {
        let dim = samples.first().map_or(0, Vec::len);
        if let Some(i) = samples.iter().position(|s| s.len() != dim) {
            return Err(Error::param(format!(
                "samples[{i}] has dimension {}, expected {dim}",
                samples[i].len()
            )));
        }
        Self::from_flat(dim, samples.concat())
    }

    pub fn from_flat(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("samples must have dimension at least 1"));
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::param("sample buffer is not a multiple of the dimension"));
        }
        if data.len() / dim < 2 {
            return Err(Error::param("a sample set needs at least 2 samples"));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("samples must be finite"));
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn sample(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn scaled(&self, a: f64) -> Result<Self> {
        Self::from_flat(self.dim, self.data.iter().map(|v| a * v).collect())
    }

    pub fn translated(&self, c: &[f64]) -> Result<Self> {
        check_len(c.len(), self.dim)?;
        let data = self
            .data
            .chunks_exact(self.dim)
            .flat_map(|s| s.iter().zip(c).map(|(v, c)| v + c))
            .collect();
        Self::from_flat(self.dim, data)
    }
}

/// One density per future timestep, as emitted by an autoregressive decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSequence {
    steps: Vec<FutureDensity>,
}

impl StepSequence {
    pub fn new(steps: Vec<FutureDensity>) -> Result<Self> {
        let Some(first) = steps.first() else {
            return Err(Error::param("step sequence must contain at least one step"));
        };
        let d = first.dim();
        for (i, s) in steps.iter().enumerate() {
            if matches!(s, FutureDensity::StepSequence(_)) {
                return Err(Error::param(format!("steps[{i}] is itself a step sequence")));
            }
            if s.dim() != d {
                return Err(Error::param(format!(
                    "steps[{i}] has dimension {}, expected {d}",
                    s.dim()
                )));
            }
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> &[FutureDensity] {
        &self.steps
    }

    pub fn step_dim(&self) -> usize {
        self.steps[0].dim()
    }
}

/// A forecaster's predictive distribution over the future window.
#[derive(Debug, Clone, PartialEq)]
pub enum FutureDensity {
    DiagonalGaussian(DiagonalGaussian),
    FullGaussian(FullGaussian),
    GaussianMixture(GaussianMixture),
    SampleSet(SampleSet),
    StepSequence(StepSequence),
}

impl FutureDensity {
    /// Total dimension of the future (steps times per-step dimension for sequences).
    pub fn dim(&self) -> usize {
        match self {
            FutureDensity::DiagonalGaussian(g) => g.dim(),
            FutureDensity::FullGaussian(g) => g.dim(),
            FutureDensity::GaussianMixture(m) => m.dim(),
            FutureDensity::SampleSet(s) => s.dim(),
            FutureDensity::StepSequence(s) => s.steps().len() * s.step_dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            FutureDensity::DiagonalGaussian(_) => "diagonal_gaussian",
            FutureDensity::FullGaussian(_) => "full_gaussian",
            FutureDensity::GaussianMixture(_) => "gaussian_mixture",
            FutureDensity::SampleSet(_) => "sample_set",
            FutureDensity::StepSequence(_) => "step_sequence",
        }
    }

    /// Law of `aY` for a scalar `a != 0`.
    pub fn scaled(&self, a: f64) -> Result<Self> {
        if a == 0.0 || !a.is_finite() {
            return Err(Error::param("scale factor must be finite and non-zero"));
        }
        Ok(match self {
            FutureDensity::DiagonalGaussian(g) => FutureDensity::DiagonalGaussian(g.scaled(a)?),
            FutureDensity::FullGaussian(g) => FutureDensity::FullGaussian(
                g.transformed(&(DMatrix::identity(g.dim(), g.dim()) * a))?,
            ),
            FutureDensity::GaussianMixture(m) => FutureDensity::GaussianMixture(m.scaled(a)?),
            FutureDensity::SampleSet(s) => FutureDensity::SampleSet(s.scaled(a)?),
            FutureDensity::StepSequence(s) => FutureDensity::StepSequence(StepSequence::new(
                s.steps().iter().map(|d| d.scaled(a)).collect::<Result<_>>()?,
            )?),
        })
    }

    /// Law of `Y + c`. For step sequences `c` spans all steps, step-major.
    pub fn translated(&self, c: &[f64]) -> Result<Self> {
        Ok(match self {
            FutureDensity::DiagonalGaussian(g) => FutureDensity::DiagonalGaussian(g.translated(c)?),
            FutureDensity::FullGaussian(g) => FutureDensity::FullGaussian(g.translated(c)?),
            FutureDensity::GaussianMixture(m) => FutureDensity::GaussianMixture(m.translated(c)?),
            FutureDensity::SampleSet(s) => FutureDensity::SampleSet(s.translated(c)?),
            FutureDensity::StepSequence(s) => {
                check_len(c.len(), self.dim())?;
                let d = s.step_dim();
                FutureDensity::StepSequence(StepSequence::new(
                    s.steps()
                        .iter()
                        .zip(c.chunks_exact(d))
                        .map(|(step, c)| step.translated(c))
                        .collect::<Result<_>>()?,
                )?)
            }
        })
    }
}

impl From<DiagonalGaussian> for FutureDensity {
    fn from(g: DiagonalGaussian) -> Self {
        FutureDensity::DiagonalGaussian(g)
    }
}

impl From<FullGaussian> for FutureDensity {
    fn from(g: FullGaussian) -> Self {
        FutureDensity::FullGaussian(g)
    }
}

impl From<GaussianMixture> for FutureDensity {
    fn from(m: GaussianMixture) -> Self {
        FutureDensity::GaussianMixture(m)
    }
}

impl From<SampleSet> for FutureDensity {
    fn from(s: SampleSet) -> Self {
        FutureDensity::SampleSet(s)
    }
}

impl From<StepSequence> for FutureDensity {
    fn from(s: StepSequence) -> Self {
        FutureDensity::StepSequence(s)
    }
}

impl From<Gaussian> for FutureDensity {
    fn from(g: Gaussian) -> Self {
        match g {
            Gaussian::Diagonal(g) => FutureDensity::DiagonalGaussian(g),
            Gaussian::Full(g) => FutureDensity::FullGaussian(g),
        }
    }
}

pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

fn check_len(got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::param(format!(
            "offset has dimension {got}, density has {want}"
        )));
    }
    Ok(())
}
