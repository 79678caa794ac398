//! Particle and weight bookkeeping shared by every sampler.

use crate::error::AbcError;
use crate::rng::StreamRng;
use rand::Rng;

/// A point in parameter space (model-specific dimension).
pub type ParameterVector = Vec<f64>;

/// One particle: a parameter plus its cached simulation distances.
///
/// `hf_distances` may be empty only before the particle's first HF
/// simulation (a pre-filtered or deferred state). Downstream code treats an
/// empty HF cache as "never simulated", not as distance infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct ParticleState {
    pub theta: ParameterVector,
    pub hf_distances: Vec<f64>,
    pub lf_distances: Vec<f64>,
    /// Cached minimum of `lf_distances`; +inf while the LF cache is empty.
    pub min_lf_distance: f64,
}

impl ParticleState {
    pub fn new(theta: ParameterVector) -> Self {
        ParticleState {
            theta,
            hf_distances: Vec::new(),
            lf_distances: Vec::new(),
            min_lf_distance: f64::INFINITY,
        }
    }

    pub fn set_lf_distances(&mut self, distances: Vec<f64>) {
        self.min_lf_distance = distances.iter().cloned().fold(f64::INFINITY, f64::min);
        self.lf_distances = distances;
    }

    pub fn set_hf_distances(&mut self, distances: Vec<f64>) {
        self.hf_distances = distances;
    }

    /// Number of cached HF distances strictly below `eps`. Zero on an empty cache.
    pub fn hf_pass_count(&self, eps: f64) -> usize {
        self.hf_distances.iter().filter(|&&d| d < eps).count()
    }

    /// Number of cached LF distances strictly below `eps`.
    pub fn lf_pass_count(&self, eps: f64) -> usize {
        self.lf_distances.iter().filter(|&&d| d < eps).count()
    }

    /// Minimum cached HF distance; +inf on an empty cache.
    pub fn min_hf_distance(&self) -> f64 {
        self.hf_distances.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Resampling scheme. Systematic is the default; multinomial is kept for
/// oracle tests of resampling moments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResamplingScheme {
    Systematic,
    Multinomial,
}

/// Rescale nonnegative weights to sum to one.
///
/// Errors with `ZeroTotalMass` when every entry is zero, which signals
/// ensemble collapse to the caller.
pub fn normalize_weights(weights: &[f64]) -> Result<Vec<f64>, AbcError> {
    debug_assert!(weights.iter().all(|w| w.is_finite() && *w >= 0.0));
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(AbcError::ZeroTotalMass);
    }
    Ok(weights.iter().map(|w| w / total).collect())
}

/// Effective sample size 1 / sum(w_i^2) of normalized weights.
pub fn ess(weights: &[f64]) -> f64 {
    let sum_sq: f64 = weights.iter().map(|w| w * w).sum();
    1.0 / sum_sq
}

/// Fraction of entries that are strictly positive.
pub fn proportion_active(weights: &[f64]) -> f64 {
    if weights.is_empty() {
        return 0.0;
    }
    weights.iter().filter(|&&w| w > 0.0).count() as f64 / weights.len() as f64
}

/// Left-continuous inverse of the weighted CDF: the smallest value `v` such
/// that the normalized weight of `{values <= v}` reaches `q`. Ties take the
/// smaller value; cumulative-weight comparisons carry a 1e-9 relative slack
/// so that exact-arithmetic quantiles survive float summation.
pub fn weighted_quantile(values: &[f64], weights: &[f64], q: f64) -> Result<f64, AbcError> {
    assert_eq!(values.len(), weights.len(), "values/weights length mismatch");
    assert!((0.0..=1.0).contains(&q), "quantile level must be in [0,1]");
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by(|&a, &b| values[a].total_cmp(&values[b]));
    let total: f64 = order.iter().map(|&i| weights[i]).sum();
    if total <= 0.0 {
        return Err(AbcError::ZeroTotalMass);
    }
    let threshold = q * total;
    let slack = 1e-9 * total;
    let mut cum = 0.0;
    for &i in &order {
        cum += weights[i];
        if cum + slack >= threshold {
            return Ok(values[i]);
        }
    }
    Ok(values[*order.last().expect("nonempty by total > 0")])
}

/// Draw `n` particle indices with probabilities proportional to `weights`.
pub fn resample_indices(
    weights: &[f64],
    scheme: ResamplingScheme,
    rng: &mut StreamRng,
) -> Result<Vec<usize>, AbcError> {
    let n = weights.len();
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(AbcError::ZeroTotalMass);
    }
    let mut cum = Vec::with_capacity(n);
    let mut acc = 0.0;
    for &w in weights {
        acc += w;
        cum.push(acc);
    }
    match scheme {
        ResamplingScheme::Systematic => {
            let u: f64 = rng.random();
            let step = total / n as f64;
            let mut indices = Vec::with_capacity(n);
            let mut j = 0usize;
            for i in 0..n {
                let pos = (u + i as f64) * step;
                while j < n - 1 && cum[j] < pos {
                    j += 1;
                }
                indices.push(j);
            }
            Ok(indices)
        }
        ResamplingScheme::Multinomial => {
            let indices = (0..n)
                .map(|_| {
                    let pos: f64 = rng.random::<f64>() * total;
                    cum.partition_point(|&c| c < pos).min(n - 1)
                })
                .collect();
            Ok(indices)
        }
    }
}

/// N particles with weights and a normalization flag.
#[derive(Clone, Debug)]
pub struct WeightedEnsemble {
    pub particles: Vec<ParticleState>,
    pub weights: Vec<f64>,
    pub normalized: bool,
}

impl WeightedEnsemble {
    pub fn new(particles: Vec<ParticleState>, weights: Vec<f64>) -> Self {
        assert_eq!(particles.len(), weights.len());
        assert!(!particles.is_empty(), "ensemble must hold at least one particle");
        WeightedEnsemble { particles, weights, normalized: false }
    }

    pub fn uniform(particles: Vec<ParticleState>) -> Self {
        let n = particles.len();
        assert!(n > 0);
        WeightedEnsemble {
            particles,
            weights: vec![1.0 / n as f64; n],
            normalized: true,
        }
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn normalize(&mut self) -> Result<(), AbcError> {
        self.weights = normalize_weights(&self.weights)?;
        self.normalized = true;
        Ok(())
    }

    pub fn ess(&self) -> f64 {
        debug_assert!(self.normalized);
        ess(&self.weights)
    }

    pub fn proportion_active(&self) -> f64 {
        proportion_active(&self.weights)
    }

    /// Weighted mean of the parameter vectors.
    pub fn weighted_mean(&self) -> Vec<f64> {
        let d = self.particles[0].theta.len();
        let total: f64 = self.weights.iter().sum();
        let mut mean = vec![0.0; d];
        for (p, &w) in self.particles.iter().zip(&self.weights) {
            for (m, &t) in mean.iter_mut().zip(&p.theta) {
                *m += w * t;
            }
        }
        for m in &mut mean {
            *m /= total;
        }
        mean
    }

    /// Weighted covariance matrix (population form, normalized weights).
    pub fn weighted_covariance(&self) -> Vec<Vec<f64>> {
        let d = self.particles[0].theta.len();
        let total: f64 = self.weights.iter().sum();
        let mean = self.weighted_mean();
        let mut cov = vec![vec![0.0; d]; d];
        for (p, &w) in self.particles.iter().zip(&self.weights) {
            for i in 0..d {
                let di = p.theta[i] - mean[i];
                for j in 0..d {
                    cov[i][j] += w / total * di * (p.theta[j] - mean[j]);
                }
            }
        }
        cov
    }

    /// Resample N particles with replacement; output weights are uniform and
    /// every cached distance vector is copied bit-exactly.
    pub fn resample(
        &self,
        scheme: ResamplingScheme,
        rng: &mut StreamRng,
    ) -> Result<WeightedEnsemble, AbcError> {
        let indices = resample_indices(&self.weights, scheme, rng)?;
        let particles = indices.iter().map(|&i| self.particles[i].clone()).collect();
        Ok(WeightedEnsemble::uniform(particles))
    }
}
