//! Metropolis-Hastings proposal kernels.

use crate::ensemble::WeightedEnsemble;
use crate::rng::StreamRng;
use rand::Rng;
use rand_distr::StandardNormal;

/// One-step proposal kernel q(theta* | theta).
pub trait ProposalKernel: Sync {
    /// Re-fit the kernel to the current weighted ensemble. Called once per
    /// iteration, between the serial reweight/resample barrier and the
    /// parallel move phase.
    fn adapt(&mut self, ensemble: &WeightedEnsemble);
    fn propose(&self, from: &[f64], rng: &mut StreamRng) -> Vec<f64>;
    /// log q(from | to) - log q(to | from); zero for symmetric kernels.
    fn log_density_ratio(&self, from: &[f64], to: &[f64]) -> f64;
}

/// Gaussian random walk whose covariance is `scale` times the weighted
/// sample covariance of the current ensemble (the usual adaptive SMC
/// choice, `scale = 2`). Symmetric, so the density ratio is zero.
#[derive(Clone, Debug)]
pub struct AdaptiveGaussianWalk {
    scale: f64,
    chol: Vec<Vec<f64>>,
    dim: usize,
}

impl AdaptiveGaussianWalk {
    pub fn new(dim: usize, scale: f64) -> Self {
        assert!(scale > 0.0);
        // identity fallback until the first adapt() call
        let mut chol = vec![vec![0.0; dim]; dim];
        for (i, row) in chol.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        AdaptiveGaussianWalk { scale, chol, dim }
    }
}

/// Lower-triangular Cholesky factor with progressive diagonal jitter so a
/// (numerically) singular covariance still yields a usable factor.
fn cholesky_with_jitter(mut a: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let d = a.len();
    let mean_diag = (a.iter().enumerate().map(|(i, r)| r[i]).sum::<f64>() / d as f64).max(1e-300);
    let mut jitter = 0.0;
    for _ in 0..20 {
        if let Some(l) = try_cholesky(&a) {
            return l;
        }
        jitter = if jitter == 0.0 { 1e-12 * mean_diag } else { jitter * 10.0 };
        for (i, row) in a.iter_mut().enumerate() {
            row[i] += jitter;
        }
    }
    // fully degenerate: fall back to a tiny isotropic step
    let mut l = vec![vec![0.0; d]; d];
    for (i, row) in l.iter_mut().enumerate() {
        row[i] = (1e-12 * mean_diag).sqrt();
    }
    l
}

fn try_cholesky(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let d = a.len();
    let mut l = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}

impl ProposalKernel for AdaptiveGaussianWalk {
    fn adapt(&mut self, ensemble: &WeightedEnsemble) {
        let mut cov = ensemble.weighted_covariance();
        for row in &mut cov {
            for v in row.iter_mut() {
                *v *= self.scale;
            }
        }
        self.chol = cholesky_with_jitter(cov);
    }

    fn propose(&self, from: &[f64], rng: &mut StreamRng) -> Vec<f64> {
        let z: Vec<f64> = (0..self.dim).map(|_| rng.sample(StandardNormal)).collect();
        let mut out = from.to_vec();
        for i in 0..self.dim {
            let mut step = 0.0;
            for j in 0..=i {
                step += self.chol[i][j] * z[j];
            }
            out[i] += step;
        }
        out
    }

    fn log_density_ratio(&self, _from: &[f64], _to: &[f64]) -> f64 {
        0.0
    }
}

/// Independent uniform proposal over a finite atom set (symmetric). Used by
/// the discrete oracle models where a Gaussian walk would leave the support.
#[derive(Clone, Debug)]
pub struct UniformAtomProposal {
    atoms: Vec<f64>,
}

impl UniformAtomProposal {
    pub fn new(atoms: Vec<f64>) -> Self {
        assert!(!atoms.is_empty());
        UniformAtomProposal { atoms }
    }
}

impl ProposalKernel for UniformAtomProposal {
    fn adapt(&mut self, _ensemble: &WeightedEnsemble) {}

    fn propose(&self, _from: &[f64], rng: &mut StreamRng) -> Vec<f64> {
        vec![self.atoms[rng.random_range(0..self.atoms.len())]]
    }

    fn log_density_ratio(&self, _from: &[f64], _to: &[f64]) -> f64 {
        0.0
    }
}

/// Gaussian random walk with a fixed per-dimension step. Used by the
/// reference ABC-MCMC chains.
#[derive(Clone, Debug)]
pub struct FixedGaussianWalk {
    step_sd: Vec<f64>,
}

impl FixedGaussianWalk {
    pub fn new(step_sd: Vec<f64>) -> Self {
        assert!(step_sd.iter().all(|s| *s > 0.0));
        FixedGaussianWalk { step_sd }
    }
}

impl ProposalKernel for FixedGaussianWalk {
    fn adapt(&mut self, _ensemble: &WeightedEnsemble) {}

    fn propose(&self, from: &[f64], rng: &mut StreamRng) -> Vec<f64> {
        from.iter()
            .zip(&self.step_sd)
            .map(|(&x, &s)| x + s * rng.sample::<f64, _>(StandardNormal))
            .collect()
    }

    fn log_density_ratio(&self, _from: &[f64], _to: &[f64]) -> f64 {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::ParticleState;
    use crate::rng::{RngStream, StreamPurpose};

    #[test]
    fn adapted_walk_matches_target_variance() {
        // ensemble with known variance 1 in each of 2 dims
        let mut particles = Vec::new();
        let mut rng = RngStream::new(11).derive(StreamPurpose::Oracle, 0, 0).rng();
        for _ in 0..20_000 {
            let t: Vec<f64> = (0..2).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            particles.push(ParticleState::new(t));
        }
        let ens = WeightedEnsemble::uniform(particles);
        let mut walk = AdaptiveGaussianWalk::new(2, 2.0);
        walk.adapt(&ens);
        let mut acc = [0.0f64; 2];
        let m = 20_000;
        for _ in 0..m {
            let p = walk.propose(&[0.0, 0.0], &mut rng);
            acc[0] += p[0] * p[0];
            acc[1] += p[1] * p[1];
        }
        for v in acc {
            let var = v / m as f64;
            assert!((var - 2.0).abs() < 0.15, "proposal variance {var} should be near 2");
        }
    }

    #[test]
    fn degenerate_covariance_still_proposes() {
        let particles = vec![ParticleState::new(vec![1.0, 2.0]); 5];
        let ens = WeightedEnsemble::uniform(particles);
        let mut walk = AdaptiveGaussianWalk::new(2, 2.0);
        walk.adapt(&ens);
        let mut rng = RngStream::new(2).derive(StreamPurpose::Move, 1, 0).rng();
        let p = walk.propose(&[1.0, 2.0], &mut rng);
        assert!(p.iter().all(|x| x.is_finite()));
    }
}
