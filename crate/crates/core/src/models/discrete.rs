//! Discrete Bernoulli model on a parameter grid.
//!
//! Oracle apparatus: with datasets in {0, 1} and discrepancy |x - y|, the
//! acceptance probabilities p_eps(theta) and their LF counterparts are known
//! in closed form for any threshold in (0, 1], so sampler output can be
//! checked against the exact target distribution.

use crate::rng::StreamRng;
use crate::simulator::{CostCounter, FidelityPair, FidelitySimulator};
use rand::Rng;

/// Bernoulli simulator over a finite 1-D atom set: at atom j the output is 1
/// with probability `success[j]`, else 0.
#[derive(Debug)]
pub struct BernoulliGridSim {
    atoms: Vec<f64>,
    success: Vec<f64>,
    calls: CostCounter,
}

impl BernoulliGridSim {
    pub fn new(atoms: Vec<f64>, success: Vec<f64>) -> Self {
        assert_eq!(atoms.len(), success.len());
        assert!(success.iter().all(|p| (0.0..=1.0).contains(p)));
        BernoulliGridSim { atoms, success, calls: CostCounter::new() }
    }

    pub fn success_at(&self, theta: f64) -> f64 {
        self.success[self.index_of(theta)]
    }

    fn index_of(&self, theta: f64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, &a) in self.atoms.iter().enumerate() {
            let d = (a - theta).abs();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }
}

impl FidelitySimulator for BernoulliGridSim {
    type Output = f64;

    fn param_dim(&self) -> usize {
        1
    }

    fn sample(&self, theta: &[f64], rng: &mut StreamRng) -> f64 {
        self.calls.record();
        let p = self.success_at(theta[0]);
        if rng.random::<f64>() < p {
            1.0
        } else {
            0.0
        }
    }

    fn summarize(&self, output: &f64) -> Vec<f64> {
        vec![*output]
    }

    fn discrepancy(&self, summary: &[f64], observed: &[f64]) -> f64 {
        (summary[0] - observed[0]).abs()
    }

    fn calls(&self) -> u64 {
        self.calls.get()
    }

    fn reset_calls(&self) {
        self.calls.reset()
    }
}

/// HF/LF Bernoulli pair observing y = 1, so that for thresholds in (0, 1]
/// the HF acceptance probability at atom j is exactly `hf_success[j]` and
/// the LF one is `lf_success[j]`.
pub fn build_bernoulli_pair(
    atoms: Vec<f64>,
    hf_success: Vec<f64>,
    lf_success: Vec<f64>,
) -> FidelityPair<BernoulliGridSim, BernoulliGridSim> {
    let hf = BernoulliGridSim::new(atoms.clone(), hf_success);
    let lf = BernoulliGridSim::new(atoms, lf_success);
    FidelityPair::new(hf, lf, vec![1.0], vec![1.0])
}
