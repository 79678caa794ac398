//! Nonlinear Gaussian toy model.
//!
//! HF: x | theta ~ N(4 theta^2 + 0.3 cos(5 pi theta), 0.2^2)
//! LF: x | theta ~ N(4 theta^2, 0.2^2)
//! Discrepancy: (x - y)^2. Prior: uniform on [-2, 2].

use crate::prior::UniformBoxPrior;
use crate::rng::StreamRng;
use crate::simulator::{CostCounter, FidelityPair, FidelitySimulator};
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

pub const TOY_NOISE_SD: f64 = 0.2;

pub fn toy_hf_mean(theta: f64) -> f64 {
    4.0 * theta * theta + 0.3 * (5.0 * PI * theta).cos()
}

pub fn toy_lf_mean(theta: f64) -> f64 {
    4.0 * theta * theta
}

#[derive(Debug, Default)]
pub struct ToyHf {
    calls: CostCounter,
}

#[derive(Debug, Default)]
pub struct ToyLf {
    calls: CostCounter,
}

impl FidelitySimulator for ToyHf {
    type Output = f64;

    fn param_dim(&self) -> usize {
        1
    }

    fn sample(&self, theta: &[f64], rng: &mut StreamRng) -> f64 {
        self.calls.record();
        toy_hf_mean(theta[0]) + TOY_NOISE_SD * rng.sample::<f64, _>(StandardNormal)
    }

    fn summarize(&self, output: &f64) -> Vec<f64> {
        vec![*output]
    }

    fn discrepancy(&self, summary: &[f64], observed: &[f64]) -> f64 {
        (summary[0] - observed[0]).powi(2)
    }

    fn calls(&self) -> u64 {
        self.calls.get()
    }

    fn reset_calls(&self) {
        self.calls.reset()
    }
}

impl FidelitySimulator for ToyLf {
    type Output = f64;

    fn param_dim(&self) -> usize {
        1
    }

    fn sample(&self, theta: &[f64], rng: &mut StreamRng) -> f64 {
        self.calls.record();
        toy_lf_mean(theta[0]) + TOY_NOISE_SD * rng.sample::<f64, _>(StandardNormal)
    }

    fn summarize(&self, output: &f64) -> Vec<f64> {
        vec![*output]
    }

    fn discrepancy(&self, summary: &[f64], observed: &[f64]) -> f64 {
        (summary[0] - observed[0]).powi(2)
    }

    fn calls(&self) -> u64 {
        self.calls.get()
    }

    fn reset_calls(&self) {
        self.calls.reset()
    }
}

pub fn toy_prior() -> UniformBoxPrior {
    UniformBoxPrior::new(&[(-2.0, 2.0)])
}

/// Build the HF/LF pair for a scalar observation `y_obs`. The data spaces
/// coincide, so both fidelities compare against the same observed value.
pub fn build_toy_pair(y_obs: f64) -> FidelityPair<ToyHf, ToyLf> {
    FidelityPair::new(ToyHf::default(), ToyLf::default(), vec![y_obs], vec![y_obs])
}
