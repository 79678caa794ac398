//! The fidelity-simulator abstraction and HF/LF pairing.

use crate::rng::StreamRng;
use std::sync::atomic::{AtomicU64, Ordering};

/// Thread-safe simulation call counter.
#[derive(Debug, Default)]
pub struct CostCounter(AtomicU64);

impl CostCounter {
    pub fn new() -> Self {
        CostCounter(AtomicU64::new(0))
    }

    pub fn record(&self) {
        self.0.fetch_add(1, Ordering::Relaxed);
    }

    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.0.store(0, Ordering::Relaxed);
    }
}

/// One simulation model at a fixed fidelity level: a stochastic sampler, a
/// summary map, and a discrepancy on summaries. `sample` increments the cost
/// counter exactly once per call; everything else is pure.
pub trait FidelitySimulator: Sync {
    type Output;

    fn param_dim(&self) -> usize;
    fn sample(&self, theta: &[f64], rng: &mut StreamRng) -> Self::Output;
    fn summarize(&self, output: &Self::Output) -> Vec<f64>;
    fn discrepancy(&self, summary: &[f64], observed: &[f64]) -> f64;
    fn calls(&self) -> u64;
    fn reset_calls(&self);

    /// Simulate once and return the discrepancy to the observed summary.
    fn distance(&self, theta: &[f64], observed: &[f64], rng: &mut StreamRng) -> f64 {
        let out = self.sample(theta, rng);
        self.discrepancy(&self.summarize(&out), observed)
    }
}

/// An HF simulator, an LF simulator, and the observed summaries each one is
/// compared against. Both simulators accept the same parameter dimension.
pub struct FidelityPair<H: FidelitySimulator, L: FidelitySimulator> {
    pub hf: H,
    pub lf: L,
    pub observed_hf_summary: Vec<f64>,
    pub observed_lf_summary: Vec<f64>,
}

impl<H: FidelitySimulator, L: FidelitySimulator> FidelityPair<H, L> {
    pub fn new(hf: H, lf: L, observed_hf_summary: Vec<f64>, observed_lf_summary: Vec<f64>) -> Self {
        assert_eq!(hf.param_dim(), lf.param_dim());
        FidelityPair { hf, lf, observed_hf_summary, observed_lf_summary }
    }

    pub fn hf_distance(&self, theta: &[f64], rng: &mut StreamRng) -> f64 {
        self.hf.distance(theta, &self.observed_hf_summary, rng)
    }

    pub fn lf_distance(&self, theta: &[f64], rng: &mut StreamRng) -> f64 {
        self.lf.distance(theta, &self.observed_lf_summary, rng)
    }

    pub fn hf_distances(&self, theta: &[f64], n: usize, rng: &mut StreamRng) -> Vec<f64> {
        (0..n).map(|_| self.hf_distance(theta, rng)).collect()
    }

    pub fn lf_distances(&self, theta: &[f64], n: usize, rng: &mut StreamRng) -> Vec<f64> {
        (0..n).map(|_| self.lf_distance(theta, rng)).collect()
    }

    pub fn reset_calls(&self) {
        self.hf.reset_calls();
        self.lf.reset_calls();
    }
}
