//! Ornstein-Uhlenbeck process with a stationary-distribution LF surrogate.
//!
//! HF: dX = gamma (mu - X) dt + sigma dW by Euler-Maruyama, dt = 0.01 on
//! [0, 30], X(0) ~ N(mu + mu_offset, 0.1^2), recorded every 0.1 time units
//! (301 points). LF: 200 iid draws from N(mu, (sigma / (2.5 gamma))^2).
//! Parameters: (mu, sigma, gamma, mu_offset).

use crate::error::AbcError;
use crate::prior::UniformBoxPrior;
use crate::rng::StreamRng;
use crate::simulator::{CostCounter, FidelityPair, FidelitySimulator};
use rand::Rng;
use rand_distr::StandardNormal;

pub const OU_TRAJECTORY_LEN: usize = 301;
pub const OU_LF_LEN: usize = 200;
pub const OU_TRUE_PARAMS: [f64; 4] = [2.0, 0.5, 1.0, 3.0];

/// Divisor used in the first HF summary statistic. The window x_151..x_301
/// holds 151 terms; the sum is divided by 150 as printed in the source
/// material, with the 151 variant available as a config switch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum S1Divisor {
    #[serde(rename = "150")]
    AsPrinted,
    #[serde(rename = "151")]
    TermCount,
}

impl S1Divisor {
    fn value(self) -> f64 {
        match self {
            S1Divisor::AsPrinted => 150.0,
            S1Divisor::TermCount => 151.0,
        }
    }
}

impl Default for S1Divisor {
    fn default() -> Self {
        S1Divisor::AsPrinted
    }
}

/// Four HF summaries: tail mean, scaled tail spread, initial offset from the
/// tail mean, and the early decay increment.
pub fn ou_hf_summary(trajectory: &[f64], divisor: S1Divisor) -> Result<Vec<f64>, AbcError> {
    if trajectory.len() != OU_TRAJECTORY_LEN {
        return Err(AbcError::LengthMismatch { expected: OU_TRAJECTORY_LEN, got: trajectory.len() });
    }
    let tail = &trajectory[150..]; // x_151..x_301, 151 values
    let s1 = tail.iter().sum::<f64>() / divisor.value();
    let tail_mean = tail.iter().sum::<f64>() / tail.len() as f64;
    let var = tail.iter().map(|x| (x - tail_mean).powi(2)).sum::<f64>() / (tail.len() - 1) as f64;
    let s2 = 10.0 * var.sqrt();
    let s3 = trajectory[0] - s1;
    let s4 = trajectory[0] - trajectory[20];
    Ok(vec![s1, s2, s3, s4])
}

/// Two LF summaries: mean and scaled standard deviation of the 200 points.
pub fn ou_lf_summary(points: &[f64]) -> Result<Vec<f64>, AbcError> {
    if points.len() != OU_LF_LEN {
        return Err(AbcError::LengthMismatch { expected: OU_LF_LEN, got: points.len() });
    }
    let mean = points.iter().sum::<f64>() / points.len() as f64;
    let var = points.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (points.len() - 1) as f64;
    Ok(vec![mean, 10.0 * var.sqrt()])
}

#[derive(Debug)]
pub struct OuHf {
    /// Internal Euler-Maruyama step.
    pub dt: f64,
    pub s1_divisor: S1Divisor,
    calls: CostCounter,
}

impl OuHf {
    pub fn new(s1_divisor: S1Divisor) -> Self {
        OuHf { dt: 0.01, s1_divisor, calls: CostCounter::new() }
    }

    /// Simulate with an explicit step size (order-of-convergence tests).
    pub fn sample_with_dt(&self, theta: &[f64], dt: f64, rng: &mut StreamRng) -> Vec<f64> {
        let (mu, sigma, gamma, mu_offset) = (theta[0], theta[1], theta[2], theta[3]);
        let record_dt = 0.1;
        let steps_per_record = (record_dt / dt).round() as usize;
        let x0 = mu + mu_offset + 0.1 * rng.sample::<f64, _>(StandardNormal);
        let mut x = x0;
        let mut out = Vec::with_capacity(OU_TRAJECTORY_LEN);
        out.push(x);
        let sqrt_dt = dt.sqrt();
        for _ in 1..OU_TRAJECTORY_LEN {
            for _ in 0..steps_per_record {
                let z: f64 = rng.sample(StandardNormal);
                x += gamma * (mu - x) * dt + sigma * sqrt_dt * z;
            }
            out.push(x);
        }
        out
    }
}

impl Default for OuHf {
    fn default() -> Self {
        OuHf::new(S1Divisor::default())
    }
}

impl FidelitySimulator for OuHf {
    type Output = Vec<f64>;

    fn param_dim(&self) -> usize {
        4
    }

    fn sample(&self, theta: &[f64], rng: &mut StreamRng) -> Vec<f64> {
        self.calls.record();
        self.sample_with_dt(theta, self.dt, rng)
    }

    fn summarize(&self, output: &Vec<f64>) -> Vec<f64> {
        ou_hf_summary(output, self.s1_divisor).expect("HF trajectory has fixed length")
    }

    fn discrepancy(&self, summary: &[f64], observed: &[f64]) -> f64 {
        0.25 * summary.iter().zip(observed).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
    }

    fn calls(&self) -> u64 {
        self.calls.get()
    }

    fn reset_calls(&self) {
        self.calls.reset()
    }
}

#[derive(Debug, Default)]
pub struct OuLf {
    calls: CostCounter,
}

impl FidelitySimulator for OuLf {
    type Output = Vec<f64>;

    fn param_dim(&self) -> usize {
        4
    }

    fn sample(&self, theta: &[f64], rng: &mut StreamRng) -> Vec<f64> {
        self.calls.record();
        let (mu, sigma, gamma) = (theta[0], theta[1], theta[2]);
        let sd = sigma / (2.5 * gamma);
        (0..OU_LF_LEN).map(|_| mu + sd * rng.sample::<f64, _>(StandardNormal)).collect()
    }

    fn summarize(&self, output: &Vec<f64>) -> Vec<f64> {
        ou_lf_summary(output).expect("LF sample has fixed length")
    }

    fn discrepancy(&self, summary: &[f64], observed: &[f64]) -> f64 {
        0.5 * summary.iter().zip(observed).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
    }

    fn calls(&self) -> u64 {
        self.calls.get()
    }

    fn reset_calls(&self) {
        self.calls.reset()
    }
}

pub fn ou_prior() -> UniformBoxPrior {
    UniformBoxPrior::new(&[(0.1, 3.0), (0.1, 1.0), (0.1, 2.0), (2.0, 6.0)])
}

/// Pair an observed HF trajectory with the two simulators. The LF summary is
/// compared against the first two components of the observed HF summary.
pub fn build_ou_pair(
    observed_trajectory: &[f64],
    s1_divisor: S1Divisor,
) -> Result<FidelityPair<OuHf, OuLf>, AbcError> {
    let obs_hf = ou_hf_summary(observed_trajectory, s1_divisor)?;
    let obs_lf = obs_hf[..2].to_vec();
    Ok(FidelityPair::new(OuHf::new(s1_divisor), OuLf::default(), obs_hf, obs_lf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{RngStream, StreamPurpose};

    #[test]
    fn trajectory_length_is_301() {
        let hf = OuHf::default();
        let mut rng = RngStream::new(1).derive(StreamPurpose::Oracle, 0, 0).rng();
        let x = hf.sample(&[2.0, 0.5, 1.0, 3.0], &mut rng);
        assert_eq!(x.len(), OU_TRAJECTORY_LEN);
    }

    #[test]
    fn deterministic_limit_reverts_to_mean() {
        // sigma -> 0: x(t) = mu + (x0 - mu) exp(-gamma t); at t = 30 the
        // transient is ~e^{-30}, so x_301 sits on mu up to Euler error
        let hf = OuHf::default();
        let mut rng = RngStream::new(2).derive(StreamPurpose::Oracle, 0, 1).rng();
        let x = hf.sample(&[2.0, 1e-9, 1.0, 3.0], &mut rng);
        assert!((x[OU_TRAJECTORY_LEN - 1] - 2.0).abs() < 1e-3);
    }

    #[test]
    fn stationary_level_at_true_params() {
        let hf = OuHf::default();
        let reps = 1000;
        let mut acc = 0.0;
        for r in 0..reps {
            let mut rng = RngStream::new(r).derive(StreamPurpose::Oracle, 1, 0).rng();
            let x = hf.sample(&OU_TRUE_PARAMS, &mut rng);
            acc += x[150..].iter().sum::<f64>() / 151.0;
        }
        let mean = acc / reps as f64;
        assert!((mean - 2.0).abs() < 0.05, "tail mean {mean}");
    }

    #[test]
    fn lf_moments_and_length() {
        let lf = OuLf::default();
        let mut rng = RngStream::new(3).derive(StreamPurpose::Oracle, 2, 0).rng();
        let one = lf.sample(&[2.0, 0.5, 1.0, 3.0], &mut rng);
        assert_eq!(one.len(), OU_LF_LEN);
        // pooled draws: sd should be sigma/(2.5 gamma) = 0.2
        let mut all = Vec::with_capacity(100_000);
        for _ in 0..500 {
            all.extend(lf.sample(&[2.0, 0.5, 1.0, 3.0], &mut rng));
        }
        let mean = all.iter().sum::<f64>() / all.len() as f64;
        let sd = (all.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (all.len() - 1) as f64).sqrt();
        assert!((mean - 2.0).abs() < 0.005);
        assert!((sd - 0.2).abs() < 0.003);
    }

    #[test]
    fn summary_plugin_values() {
        // constant trajectory c: s1 = c*151/150, s2 = 0, s4 = 0
        let c = 2.5;
        let traj = vec![c; OU_TRAJECTORY_LEN];
        let s = ou_hf_summary(&traj, S1Divisor::AsPrinted).unwrap();
        assert!((s[0] - c * 151.0 / 150.0).abs() < 1e-12);
        assert_eq!(s[1], 0.0);
        assert_eq!(s[3], 0.0);
        let s_alt = ou_hf_summary(&traj, S1Divisor::TermCount).unwrap();
        assert!((s_alt[0] - c).abs() < 1e-12);
    }

    #[test]
    fn summary_length_mismatch() {
        assert!(matches!(
            ou_hf_summary(&[0.0; 10], S1Divisor::AsPrinted),
            Err(AbcError::LengthMismatch { expected: 301, got: 10 })
        ));
        assert!(matches!(
            ou_lf_summary(&[0.0; 10]),
            Err(AbcError::LengthMismatch { expected: 200, got: 10 })
        ));
    }

    #[test]
    fn discrepancy_zero_on_observed() {
        let hf = OuHf::default();
        let mut rng = RngStream::new(5).derive(StreamPurpose::Observed, 0, 0).rng();
        let obs = hf.sample(&OU_TRUE_PARAMS, &mut rng);
        let pair = build_ou_pair(&obs, S1Divisor::AsPrinted).unwrap();
        let s = pair.hf.summarize(&obs);
        assert_eq!(pair.hf.discrepancy(&s, &pair.observed_hf_summary), 0.0);
    }

    #[test]
    fn doubling_noise_doubles_s2() {
        // sd linearity of the scaled spread statistic
        let mut rng = RngStream::new(6).derive(StreamPurpose::Oracle, 3, 0).rng();
        let noise: Vec<f64> = (0..OU_TRAJECTORY_LEN)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        let t1: Vec<f64> = noise.iter().map(|z| 2.0 + z).collect();
        let t2: Vec<f64> = noise.iter().map(|z| 2.0 + 2.0 * z).collect();
        let s1 = ou_hf_summary(&t1, S1Divisor::AsPrinted).unwrap();
        let s2 = ou_hf_summary(&t2, S1Divisor::AsPrinted).unwrap();
        assert!((s2[1] - 2.0 * s1[1]).abs() < 1e-9);
    }

    #[test]
    fn euler_maruyama_first_order_in_dt() {
        // sigma = 0 reduces to deterministic Euler; global error is O(dt)
        let hf = OuHf::default();
        let theta = [2.0, 0.0, 1.5, 3.0];
        let mut err = [0.0f64; 2];
        for (k, dt) in [0.01, 0.005].iter().enumerate() {
            // same stream both times: x0 is the first draw, so it matches
            let mut rng = RngStream::new(7).derive(StreamPurpose::Oracle, 4, 0).rng();
            let x = hf.sample_with_dt(&theta, *dt, &mut rng);
            let x0 = x[0];
            let mut worst = 0.0f64;
            for (j, &xj) in x.iter().enumerate() {
                let t = 0.1 * j as f64;
                let exact = 2.0 + (x0 - 2.0) * (-1.5 * t).exp();
                worst = worst.max((xj - exact).abs());
            }
            err[k] = worst;
        }
        let ratio = err[0] / err[1];
        assert!(
            (1.6..=2.4).contains(&ratio),
            "halving dt should halve the error, ratio {ratio} (errors {err:?})"
        );
    }
}
