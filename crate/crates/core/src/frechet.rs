//! Gaussian Fréchet distance between embedding sets, and the trajectory
//! distance built on it (windowing, agent-centric normalization, pooling).

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::{EmbeddingSet, Trajectory};

/// Tolerance on input asymmetry accepted by [`psd_sqrt`], relative to the
/// largest absolute entry (floored at 1).
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FtdConfig {
    /// Window length in steps.
    pub horizon: usize,
    /// Step between window starts.
    pub stride: usize,
    /// Diagonal regularizer added to each covariance.
    pub epsilon: f64,
    /// Trace-target shrinkage weight; 0 disables shrinkage.
    pub shrinkage_lambda: f64,
}

impl Default for FtdConfig {
    fn default() -> Self {
        FtdConfig {
            horizon: 10,
            stride: 10,
            epsilon: 1e-6,
            shrinkage_lambda: 0.0,
        }
    }
}

impl FtdConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon < 2 {
            return Err(Error::Config(format!("horizon must be >= 2, got {}", self.horizon)));
        }
        if self.stride < 1 {
            return Err(Error::Config("stride must be >= 1".into()));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::Config(format!("ftd epsilon must be > 0, got {}", self.epsilon)));
        }
        if !(0.0..=1.0).contains(&self.shrinkage_lambda) {
            return Err(Error::Config(format!(
                "shrinkage_lambda must lie in [0, 1], got {}",
                self.shrinkage_lambda
            )));
        }
        Ok(())
    }

    /// Length of a [`reference_featurize`] vector.
    pub fn reference_dim(&self) -> usize {
        2 * self.horizon + 2 * (self.horizon - 1)
    }
}

/// Mean and covariance of an embedding set.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianMoments {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
}

impl GaussianMoments {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

/// Sample mean and unbiased covariance, optionally shrunk toward
/// `(trace / d) * I` with weight `shrinkage_lambda`.
pub fn estimate_moments(set: &EmbeddingSet, shrinkage_lambda: f64) -> Result<GaussianMoments> {
    let n = set.len();
    if n < 2 {
        return Err(Error::TooFewVectors { min: 2, actual: n });
    }
    if !(0.0..=1.0).contains(&shrinkage_lambda) {
        return Err(Error::Invalid(format!(
            "shrinkage_lambda must lie in [0, 1], got {shrinkage_lambda}"
        )));
    }
    let d = set.dim();
    let data = DMatrix::from_fn(n, d, |i, j| set.vectors()[i][j]);
    let mean = data.row_mean().transpose();
    let mut centered = data;
    for mut row in centered.row_iter_mut() {
        row -= mean.transpose();
    }
    let cov = centered.transpose() * &centered / (n - 1) as f64;
    let mut cov = symmetrize(&cov);
    if shrinkage_lambda > 0.0 {
        let target = cov.trace() / d as f64;
        cov *= 1.0 - shrinkage_lambda;
        for i in 0..d {
            cov[(i, i)] += shrinkage_lambda * target;
        }
    }
    Ok(GaussianMoments { mean, cov })
}

pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Principal square root of a symmetric positive semi-definite matrix.
///
/// Negative eigenvalues (round-off) are clamped to zero.
pub fn psd_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            actual: m.ncols(),
        });
    }
    let scale = m.amax().max(1.0);
    let asym = (m - m.transpose()).amax();
    if asym > SYMMETRY_TOLERANCE * scale {
        return Err(Error::NotSymmetric(asym));
    }
    let d = m.nrows();
    let eig = symmetrize(m)
        .try_symmetric_eigen(f64::EPSILON, 1000 * d.max(1))
        .ok_or(Error::NoConvergence)?;
    let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    let v = &eig.eigenvectors;
    let s = v * DMatrix::from_diagonal(&roots) * v.transpose();
    Ok(symmetrize(&s))
}

/// `‖μa − μb‖² + Tr(Σa + Σb − 2 (Σa^½ Σb Σa^½)^½)` with `epsilon * I` added
/// to both covariances. Round-off below zero is clamped.
pub fn frechet_distance(a: &GaussianMoments, b: &GaussianMoments, epsilon: f64) -> Result<f64> {
    let d = a.dim();
    if b.dim() != d || a.cov.nrows() != d || b.cov.nrows() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: b.dim(),
        });
    }
    let reg = DMatrix::<f64>::identity(d, d) * epsilon;
    let cov_a = symmetrize(&a.cov) + &reg;
    let cov_b = symmetrize(&b.cov) + &reg;
    let sqrt_a = psd_sqrt(&cov_a)?;
    let inner = symmetrize(&(&sqrt_a * &cov_b * &sqrt_a));
    let cross = psd_sqrt(&inner)?;
    let mean_term = (&a.mean - &b.mean).norm_squared();
    let trace_term = cov_a.trace() + cov_b.trace() - 2.0 * cross.trace();
    Ok((mean_term + trace_term).max(0.0))
}

/// FVD-style distance between per-video embeddings.
pub fn fvd(generated: &EmbeddingSet, reference: &EmbeddingSet, epsilon: f64) -> Result<f64> {
    if generated.dim() != reference.dim() {
        return Err(Error::DimensionMismatch {
            expected: reference.dim(),
            actual: generated.dim(),
        });
    }
    let a = estimate_moments(generated, 0.0)?;
    let b = estimate_moments(reference, 0.0)?;
    frechet_distance(&a, &b, epsilon)
}

/// One trajectory window in its local frame: first point at the origin,
/// initial heading along +x.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedWindow {
    pub points: Vec<(f64, f64)>,
    pub dt: f64,
}

/// Cuts `traj` into windows of `cfg.horizon` points starting every
/// `cfg.stride` steps; a trailing remainder shorter than the horizon is dropped.
pub fn slice_windows(traj: &Trajectory, cfg: &FtdConfig) -> Result<Vec<NormalizedWindow>> {
    cfg.validate()?;
    let h = cfg.horizon;
    if traj.len() < h {
        return Err(Error::TooShort {
            len: traj.len(),
            min: h,
        });
    }
    let xy: Vec<(f64, f64)> = traj.xy().collect();
    let dt = traj.dt();
    Ok((0..=traj.len() - h)
        .step_by(cfg.stride)
        .map(|start| normalize_window(&xy[start..start + h], dt))
        .collect())
}

fn normalize_window(xy: &[(f64, f64)], dt: f64) -> NormalizedWindow {
    let (x0, y0) = xy[0];
    let local: Vec<(f64, f64)> = xy.iter().map(|&(x, y)| (x - x0, y - y0)).collect();
    let heading = local
        .windows(2)
        .map(|w| (w[1].0 - w[0].0, w[1].1 - w[0].1))
        .find(|&(dx, dy)| dx != 0.0 || dy != 0.0)
        .map(|(dx, dy)| dy.atan2(dx));
    let points = match heading {
        Some(h) => {
            let (s, c) = (-h).sin_cos();
            local
                .into_iter()
                .map(|(x, y)| (c * x - s * y, s * x + c * y))
                .collect()
        }
        None => local,
    };
    NormalizedWindow { points, dt }
}

/// Deterministic, model-free window embedding: the normalized positions
/// followed by forward-difference velocities, both as interleaved `(x, y)`.
pub fn reference_featurize(window: &NormalizedWindow, horizon: usize) -> Result<Vec<f64>> {
    if window.points.len() != horizon {
        return Err(Error::Invalid(format!(
            "window has {} points, expected {horizon}",
            window.points.len()
        )));
    }
    let mut out = Vec::with_capacity(2 * horizon + 2 * (horizon - 1));
    for &(x, y) in &window.points {
        out.push(x);
        out.push(y);
    }
    for w in window.points.windows(2) {
        out.push((w[1].0 - w[0].0) / window.dt);
        out.push((w[1].1 - w[0].1) / window.dt);
    }
    Ok(out)
}

/// Maps the windows of one trajectory to embedding vectors.
pub trait WindowFeaturizer: Sync {
    fn name(&self) -> &str;

    /// `key` identifies the trajectory (a video id); featurizers that compute
    /// embeddings from geometry may ignore it.
    fn featurize(&self, key: &str, windows: &[NormalizedWindow]) -> Result<Vec<Vec<f64>>>;
}

#[derive(Clone, Copy, Debug)]
pub struct ReferenceFeaturizer {
    pub horizon: usize,
}

impl WindowFeaturizer for ReferenceFeaturizer {
    fn name(&self) -> &str {
        "reference"
    }

    fn featurize(&self, _key: &str, windows: &[NormalizedWindow]) -> Result<Vec<Vec<f64>>> {
        windows
            .iter()
            .map(|w| reference_featurize(w, self.horizon))
            .collect()
    }
}

/// Window embeddings produced ahead of time by an external encoder.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PrecomputedWindows {
    by_key: BTreeMap<String, Vec<Vec<f64>>>,
}

impl PrecomputedWindows {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: impl Into<String>, windows: Vec<Vec<f64>>) {
        self.by_key.insert(key.into(), windows);
    }
}

impl WindowFeaturizer for PrecomputedWindows {
    fn name(&self) -> &str {
        "precomputed"
    }

    fn featurize(&self, key: &str, windows: &[NormalizedWindow]) -> Result<Vec<Vec<f64>>> {
        let stored = self
            .by_key
            .get(key)
            .ok_or_else(|| Error::record(key, "window_embeddings", "no window embeddings"))?;
        if stored.len() != windows.len() {
            return Err(Error::record(
                key,
                "window_embeddings",
                format!(
                    "{} window embeddings for {} trajectory windows",
                    stored.len(),
                    windows.len()
                ),
            ));
        }
        Ok(stored.clone())
    }
}

/// Mean of a trajectory's window embeddings.
pub fn trajectory_embedding(
    key: &str,
    traj: &Trajectory,
    cfg: &FtdConfig,
    featurizer: &dyn WindowFeaturizer,
) -> Result<Vec<f64>> {
    let windows = slice_windows(traj, cfg)?;
    let feats = featurizer.featurize(key, &windows)?;
    let dim = feats[0].len();
    let mut mean = vec![0.0; dim];
    for f in &feats {
        if f.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: f.len(),
            });
        }
        for (m, v) in mean.iter_mut().zip(f) {
            *m += v;
        }
    }
    let n = feats.len() as f64;
    mean.iter_mut().for_each(|m| *m /= n);
    Ok(mean)
}

/// Fréchet distance between pooled trajectory embeddings of two sets.
pub fn ftd(
    generated: &[(&str, &Trajectory)],
    reference: &[(&str, &Trajectory)],
    cfg: &FtdConfig,
    featurizer: &dyn WindowFeaturizer,
    exec: Execution,
) -> Result<f64> {
    cfg.validate()?;
    let embed = |side: &[(&str, &Trajectory)]| -> Result<EmbeddingSet> {
        let vectors = exec.try_map(side, |(key, traj)| {
            trajectory_embedding(key, traj, cfg, featurizer)
        })?;
        if vectors.is_empty() {
            return Err(Error::TooFewVectors { min: 2, actual: 0 });
        }
        EmbeddingSet::new(vectors)
    };
    let gen = embed(generated)?;
    let reference = embed(reference)?;
    if gen.dim() != reference.dim() {
        return Err(Error::DimensionMismatch {
            expected: reference.dim(),
            actual: gen.dim(),
        });
    }
    let a = estimate_moments(&gen, cfg.shrinkage_lambda)?;
    let b = estimate_moments(&reference, cfg.shrinkage_lambda)?;
    frechet_distance(&a, &b, cfg.epsilon)
}
