//! Kuramoto oscillator network with an Ott-Antonsen mean-field LF surrogate.
//!
//! HF: M = 32 coupled oscillators, phi_i' = omega_i + (K/M) sum_j
//! sin(phi_j - phi_i), omega_i ~ Cauchy(omega0, gamma) redrawn per sample,
//! zero initial phases, classical RK4 with step 0.1 on [0, 20]. Output: the
//! order-parameter magnitude R(t) and unwrapped phase Phi(t).
//! LF: R' = (K/2 - gamma) R - (K/2) R^3, Phi' = omega0, Euler with the same
//! step, R(0) = 1, Phi(0) = 0. Deterministic.
//! Parameters: (K, omega0, gamma).

use crate::error::AbcError;
use crate::prior::UniformBoxPrior;
use crate::rng::StreamRng;
use crate::simulator::{CostCounter, FidelityPair, FidelitySimulator};
use rand::Rng;
use std::f64::consts::PI;

pub const KURAMOTO_M: usize = 32;
pub const KURAMOTO_STEP: f64 = 0.1;
pub const KURAMOTO_GRID_LEN: usize = 201; // t = 0, 0.1, ..., 20
pub const KURAMOTO_TRUE_PARAMS: [f64; 3] = [2.0, PI / 3.0, 0.1];

/// Order-parameter trajectories on the fixed 0.1 grid.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderParameterSeries {
    pub r: Vec<f64>,
    pub phi: Vec<f64>,
}

/// Draw from Cauchy(location, scale) by inverting the CDF.
pub fn cauchy_sample(location: f64, scale: f64, rng: &mut StreamRng) -> Result<f64, AbcError> {
    if scale <= 0.0 {
        return Err(AbcError::NonPositiveScale(scale));
    }
    let u: f64 = rng.random();
    Ok(location + scale * (PI * (u - 0.5)).tan())
}

/// One classical RK4 step of the autonomous system y' = f(y).
pub fn rk4_step(f: &dyn Fn(&[f64], &mut [f64]), y: &mut Vec<f64>, h: f64) {
    let n = y.len();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    f(y, &mut k1);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k1[i];
    }
    f(&tmp, &mut k2);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k2[i];
    }
    f(&tmp, &mut k3);
    for i in 0..n {
        tmp[i] = y[i] + h * k3[i];
    }
    f(&tmp, &mut k4);
    for i in 0..n {
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

fn order_parameter(phases: &[f64]) -> (f64, f64) {
    let m = phases.len() as f64;
    let (mut sx, mut sy) = (0.0, 0.0);
    for &p in phases {
        sx += p.cos();
        sy += p.sin();
    }
    let re = sx / m;
    let im = sy / m;
    ((re * re + im * im).sqrt(), im.atan2(re))
}

fn wrap_to_pi(x: f64) -> f64 {
    let mut y = x % (2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    } else if y < -PI {
        y += 2.0 * PI;
    }
    y
}

#[derive(Debug)]
pub struct KuramotoHf {
    /// Grid index of the observed trajectory's midpoint crossing, shared by
    /// HF and LF summaries.
    pub t_half_index: usize,
    calls: CostCounter,
}

impl KuramotoHf {
    pub fn new(t_half_index: usize) -> Self {
        KuramotoHf { t_half_index, calls: CostCounter::new() }
    }
}

/// Integrate the M-oscillator network and record (R, Phi) on the grid. The
/// phase is accumulated from principal-branch increments of arg(Z1) between
/// consecutive grid points.
pub fn simulate_network(
    coupling: f64,
    omegas: &[f64],
    step: f64,
    grid_len: usize,
) -> OrderParameterSeries {
    let m = omegas.len();
    let mut phases = vec![0.0; m];
    let deriv = |p: &[f64], out: &mut [f64]| {
        let (mut sx, mut sy) = (0.0, 0.0);
        for &phi in p {
            sx += phi.cos();
            sy += phi.sin();
        }
        let km = coupling / m as f64;
        for i in 0..m {
            // (K/M) sum_j sin(phi_j - phi_i) = (K/M)(sy cos phi_i - sx sin phi_i)
            out[i] = omegas[i] + km * (sy * p[i].cos() - sx * p[i].sin());
        }
    };
    let mut r = Vec::with_capacity(grid_len);
    let mut phi = Vec::with_capacity(grid_len);
    let (r0, mut prev_angle) = order_parameter(&phases);
    r.push(r0);
    let mut unwrapped = prev_angle;
    phi.push(unwrapped);
    for _ in 1..grid_len {
        rk4_step(&deriv, &mut phases, step);
        let (rt, angle) = order_parameter(&phases);
        unwrapped += wrap_to_pi(angle - prev_angle);
        prev_angle = angle;
        r.push(rt);
        phi.push(unwrapped);
    }
    OrderParameterSeries { r, phi }
}

impl FidelitySimulator for KuramotoHf {
    type Output = OrderParameterSeries;

    fn param_dim(&self) -> usize {
        3
    }

    fn sample(&self, theta: &[f64], rng: &mut StreamRng) -> OrderParameterSeries {
        self.calls.record();
        let (coupling, omega0, gamma) = (theta[0], theta[1], theta[2]);
        let omegas: Vec<f64> = (0..KURAMOTO_M)
            .map(|_| cauchy_sample(omega0, gamma, rng).expect("prior support keeps gamma > 0"))
            .collect();
        simulate_network(coupling, &omegas, KURAMOTO_STEP, KURAMOTO_GRID_LEN)
    }

    fn summarize(&self, output: &OrderParameterSeries) -> Vec<f64> {
        kuramoto_summary(output, self.t_half_index)
    }

    fn discrepancy(&self, summary: &[f64], observed: &[f64]) -> f64 {
        summary.iter().zip(observed).map(|(a, b)| (a - b).powi(2)).sum()
    }

    fn calls(&self) -> u64 {
        self.calls.get()
    }

    fn reset_calls(&self) {
        self.calls.reset()
    }
}

#[derive(Debug)]
pub struct KuramotoLf {
    pub t_half_index: usize,
    calls: CostCounter,
}

impl KuramotoLf {
    pub fn new(t_half_index: usize) -> Self {
        KuramotoLf { t_half_index, calls: CostCounter::new() }
    }

    /// Deterministic mean-field trajectories (no RNG consumed).
    pub fn trajectories(theta: &[f64]) -> OrderParameterSeries {
        let (coupling, omega0, gamma) = (theta[0], theta[1], theta[2]);
        let mut r = Vec::with_capacity(KURAMOTO_GRID_LEN);
        let mut phi = Vec::with_capacity(KURAMOTO_GRID_LEN);
        let mut rt = 1.0f64;
        let mut pt = 0.0f64;
        r.push(rt);
        phi.push(pt);
        for _ in 1..KURAMOTO_GRID_LEN {
            let drdt = (coupling / 2.0 - gamma) * rt - coupling / 2.0 * rt.powi(3);
            rt += KURAMOTO_STEP * drdt;
            pt += KURAMOTO_STEP * omega0;
            r.push(rt);
            phi.push(pt);
        }
        OrderParameterSeries { r, phi }
    }
}

impl FidelitySimulator for KuramotoLf {
    type Output = OrderParameterSeries;

    fn param_dim(&self) -> usize {
        3
    }

    fn sample(&self, theta: &[f64], _rng: &mut StreamRng) -> OrderParameterSeries {
        self.calls.record();
        Self::trajectories(theta)
    }

    fn summarize(&self, output: &OrderParameterSeries) -> Vec<f64> {
        kuramoto_summary(output, self.t_half_index)
    }

    fn discrepancy(&self, summary: &[f64], observed: &[f64]) -> f64 {
        summary.iter().zip(observed).map(|(a, b)| (a - b).powi(2)).sum()
    }

    fn calls(&self) -> u64 {
        self.calls.get()
    }

    fn reset_calls(&self) {
        self.calls.reset()
    }
}

/// S1 = (trapezoid mean of R)^2, S2 = (Phi(20) - Phi(0)) / 20, S3 = R at the
/// observed midpoint-crossing time.
pub fn kuramoto_summary(series: &OrderParameterSeries, t_half_index: usize) -> Vec<f64> {
    let n = series.r.len();
    assert_eq!(n, KURAMOTO_GRID_LEN);
    let mut integral = 0.0;
    for i in 1..n {
        integral += 0.5 * (series.r[i - 1] + series.r[i]) * KURAMOTO_STEP;
    }
    let s1 = (integral / 20.0).powi(2);
    let s2 = (series.phi[n - 1] - series.phi[0]) / 20.0;
    let s3 = series.r[t_half_index];
    vec![s1, s2, s3]
}

/// Earliest grid index at which the observed R crosses the midpoint between
/// its initial value and its long-term average (mean over t in [10, 20]).
/// Falls back to the final index if no crossing occurs.
pub fn t_half_index(r_obs: &[f64]) -> usize {
    let n = r_obs.len();
    let tail_start = (n - 1) / 2; // t = 10 on the 0.1 grid
    let long_term = r_obs[tail_start..].iter().sum::<f64>() / (n - tail_start) as f64;
    let mid = 0.5 * (r_obs[0] + long_term);
    let from_above = r_obs[0] >= mid;
    for (i, &r) in r_obs.iter().enumerate() {
        if (from_above && r <= mid) || (!from_above && r >= mid) {
            return i;
        }
    }
    n - 1
}

pub fn kuramoto_prior() -> UniformBoxPrior {
    UniformBoxPrior::new(&[(0.1, 5.0), (0.0, 2.0 * PI), (0.01, 1.0)])
}

pub fn build_kuramoto_pair(
    observed: &OrderParameterSeries,
) -> FidelityPair<KuramotoHf, KuramotoLf> {
    let idx = t_half_index(&observed.r);
    let hf = KuramotoHf::new(idx);
    let lf = KuramotoLf::new(idx);
    let obs_summary = kuramoto_summary(observed, idx);
    FidelityPair::new(hf, lf, obs_summary.clone(), obs_summary)
}
