//! Pre-filtering hierarchical importance sampling.
//!
//! Each of N parameter draws from the proposal first runs n_L cheap LF
//! simulations; only draws whose LF weight is positive go on to the n_H
//! expensive HF simulations. The final weight of a surviving draw reduces
//! algebraically to (prior/proposal) times its HF pass count, so the
//! pre-filter spends no accuracy beyond the survival indicator itself.

use crate::ensemble::{ParticleState, WeightedEnsemble};
use crate::error::AbcError;
use crate::prior::Density;
use crate::rng::{RngStream, StreamPurpose};
use crate::simulator::{FidelityPair, FidelitySimulator};
use rayon::prelude::*;

#[derive(Clone, Debug)]
pub struct IsConfig {
    pub n_particles: usize,
    pub n_lf: usize,
    pub n_hf: usize,
    /// HF tolerance.
    pub eps: f64,
    /// LF (pre-filter) tolerance.
    pub eps_lf: f64,
}

impl IsConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.n_particles == 0 || self.n_lf == 0 || self.n_hf == 0 {
            return Err("n_particles, n_lf and n_hf must all be at least 1".into());
        }
        if !(self.eps > 0.0) || !(self.eps_lf > 0.0) {
            return Err("tolerances eps and eps_lf must be positive".into());
        }
        Ok(())
    }
}

/// LF-stage weight of one draw: (prior/proposal) times the LF pass count.
pub fn lf_weight(
    theta: &[f64],
    lf_distances: &[f64],
    eps_lf: f64,
    prior: &dyn Density,
    proposal: &dyn Density,
) -> Result<f64, AbcError> {
    let q = proposal.density(theta);
    if q <= 0.0 {
        return Err(AbcError::ZeroProposalDensity);
    }
    let ratio = prior.density(theta) / q;
    let count = lf_distances.iter().filter(|&&d| d < eps_lf).count();
    Ok(ratio * count as f64)
}

/// HF-stage update: multiply the LF weight by the ratio of HF to LF pass
/// counts. Dividing the LF count back out keeps this bit-identical to
/// (prior/proposal) * hf_count whenever the prior/proposal ratio is exact
/// (in particular for the default proposal q = prior).
pub fn hf_weight_update(
    lf_weight: f64,
    lf_distances: &[f64],
    hf_distances: &[f64],
    eps_lf: f64,
    eps: f64,
) -> f64 {
    let lf_count = lf_distances.iter().filter(|&&d| d < eps_lf).count();
    debug_assert!(lf_count > 0, "HF update requires a surviving pre-filter batch");
    let hf_count = hf_distances.iter().filter(|&&d| d < eps).count();
    (lf_weight / lf_count as f64) * hf_count as f64
}

#[derive(Clone, Debug)]
pub struct IsRunReport {
    pub hf_calls: u64,
    pub lf_calls: u64,
    /// Draws rejected by the pre-filter (no HF simulation spent).
    pub prefiltered: usize,
    /// Unnormalized final weights, one per draw.
    pub raw_weights: Vec<f64>,
}

/// Run the pre-filtering importance sampler. `proposal` defaults to the
/// prior when `None`.
pub fn run_prefilter_is<H, L, P, Q>(
    config: &IsConfig,
    pair: &FidelityPair<H, L>,
    prior: &P,
    proposal: Option<&Q>,
    stream: RngStream,
) -> Result<(WeightedEnsemble, IsRunReport), AbcError>
where
    H: FidelitySimulator,
    L: FidelitySimulator,
    P: Density,
    Q: Density,
{
    struct DynDensity<'a>(&'a dyn Density);
    impl Density for DynDensity<'_> {
        fn dim(&self) -> usize {
            self.0.dim()
        }
        fn density(&self, theta: &[f64]) -> f64 {
            self.0.density(theta)
        }
        fn sample(&self, rng: &mut crate::rng::StreamRng) -> Vec<f64> {
            self.0.sample(rng)
        }
    }
    let q: DynDensity = match proposal {
        Some(p) => DynDensity(p),
        None => DynDensity(prior),
    };

    let hf_before = pair.hf.calls();
    let lf_before = pair.lf.calls();

    let results: Result<Vec<(ParticleState, f64)>, AbcError> = (0..config.n_particles)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream.derive(StreamPurpose::Init, 0, i as u64).rng();
            let theta = q.sample(&mut rng);
            let lf_distances = pair.lf_distances(&theta, config.n_lf, &mut rng);
            let w_lf = lf_weight(&theta, &lf_distances, config.eps_lf, prior, &q)?;
            let mut state = ParticleState::new(theta);
            state.set_lf_distances(lf_distances);
            let weight = if w_lf > 0.0 {
                let hf_distances = pair.hf_distances(&state.theta, config.n_hf, &mut rng);
                let w = hf_weight_update(
                    w_lf,
                    &state.lf_distances,
                    &hf_distances,
                    config.eps_lf,
                    config.eps,
                );
                state.set_hf_distances(hf_distances);
                w
            } else {
                // pre-filtered: exact zero weight, HF cache left empty
                0.0
            };
            Ok((state, weight))
        })
        .collect();
    let results = results?;

    let raw_weights: Vec<f64> = results.iter().map(|(_, w)| *w).collect();
    let prefiltered = results.iter().filter(|(s, _)| s.hf_distances.is_empty()).count();
    let particles: Vec<ParticleState> = results.into_iter().map(|(s, _)| s).collect();

    let mut ensemble = WeightedEnsemble::new(particles, raw_weights.clone());
    ensemble.normalize()?;

    Ok((
        ensemble,
        IsRunReport {
            hf_calls: pair.hf.calls() - hf_before,
            lf_calls: pair.lf.calls() - lf_before,
            prefiltered,
            raw_weights,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::toy::{build_toy_pair, toy_prior};
    use crate::prior::UniformBoxPrior;

    #[test]
    fn lf_weight_examples() {
        let prior = toy_prior();
        // q = prior: full pass count with ratio 1
        let dists = vec![0.01; 20];
        let w = lf_weight(&[0.3], &dists, 0.5, &prior, &prior).unwrap();
        assert_eq!(w, 20.0);
        // nothing below the tolerance
        let w0 = lf_weight(&[0.3], &vec![2.0; 20], 0.5, &prior, &prior).unwrap();
        assert_eq!(w0, 0.0);
        // ratio 2 with 3 of 10 passing -> 6
        let half = UniformBoxPrior::new(&[(-1.0, 1.0)]); // density 0.5, prior 0.25
        let mut d = vec![2.0; 10];
        d[0] = 0.1;
        d[1] = 0.2;
        d[2] = 0.3;
        let w6 = lf_weight(&[0.3], &d, 0.5, &half, &prior).unwrap();
        assert!((w6 - 6.0).abs() < 1e-12);
    }

    #[test]
    fn hf_update_examples() {
        let lf = vec![0.01; 20];
        let mut hf = vec![9.0; 10];
        for d in hf.iter_mut().take(4) {
            *d = 0.01;
        }
        // ratio 1, all 20 LF pass, 4 of 10 HF pass -> 4
        assert_eq!(hf_weight_update(20.0, &lf, &hf, 0.5, 0.1), 4.0);
        // no HF pass -> 0
        assert_eq!(hf_weight_update(20.0, &lf, &vec![9.0; 10], 0.5, 0.1), 0.0);
        // ratio 2 with 3 LF pass and weight 6; 5 HF pass -> 10
        let mut lf3 = vec![2.0; 10];
        lf3[0] = 0.1;
        lf3[1] = 0.1;
        lf3[2] = 0.1;
        let mut hf5 = vec![9.0; 10];
        for d in hf5.iter_mut().take(5) {
            *d = 0.01;
        }
        assert_eq!(hf_weight_update(6.0, &lf3, &hf5, 0.5, 0.1), 10.0);
    }

    #[test]
    fn infinite_prefilter_matches_plain_is() {
        // eps_lf accepting everything reduces to plain ABC importance
        // sampling: every particle gets an HF batch and the weight is the
        // HF pass count
        let pair = build_toy_pair(0.5);
        let prior = toy_prior();
        let cfg = IsConfig { n_particles: 512, n_lf: 5, n_hf: 10, eps: 0.1, eps_lf: f64::MAX };
        let (ens, report) =
            run_prefilter_is(&cfg, &pair, &prior, None::<&UniformBoxPrior>, RngStream::new(42))
                .unwrap();
        assert_eq!(report.prefiltered, 0);
        assert_eq!(report.hf_calls, (cfg.n_particles * cfg.n_hf) as u64);
        for (state, &raw) in ens.particles.iter().zip(&report.raw_weights) {
            assert_eq!(raw, state.hf_pass_count(cfg.eps) as f64);
        }
    }

    #[test]
    fn hf_budget_never_exceeded_and_saved_by_filtering() {
        let pair = build_toy_pair(0.5);
        let prior = toy_prior();
        let cfg = IsConfig { n_particles: 2000, n_lf: 20, n_hf: 10, eps: 0.1, eps_lf: 0.1 };
        let (_, report) =
            run_prefilter_is(&cfg, &pair, &prior, None::<&UniformBoxPrior>, RngStream::new(7))
                .unwrap();
        let max = (cfg.n_particles * cfg.n_hf) as u64;
        assert!(report.hf_calls <= max);
        assert!(report.prefiltered > 0, "tight LF tolerance should filter something");
        assert_eq!(report.hf_calls, max - (report.prefiltered * cfg.n_hf) as u64);
        assert_eq!(report.lf_calls, (cfg.n_particles * cfg.n_lf) as u64);
    }

    #[test]
    fn weight_identity_is_bit_exact_with_prior_proposal() {
        let pair = build_toy_pair(0.5);
        let prior = toy_prior();
        let cfg = IsConfig { n_particles: 4000, n_lf: 20, n_hf: 10, eps: 0.1, eps_lf: 0.2 };
        let (ens, report) =
            run_prefilter_is(&cfg, &pair, &prior, None::<&UniformBoxPrior>, RngStream::new(3))
                .unwrap();
        for (state, &raw) in ens.particles.iter().zip(&report.raw_weights) {
            if state.hf_distances.is_empty() {
                assert_eq!(raw, 0.0);
            } else {
                // ratio is exactly 1 for q = prior inside the box
                assert_eq!(raw, state.hf_pass_count(cfg.eps) as f64);
            }
        }
    }

    #[test]
    fn survival_monotone_in_lf_tolerance() {
        // same cached LF draws: raising eps_lf never un-survives a particle
        let pair = build_toy_pair(0.5);
        let prior = toy_prior();
        let cfg = IsConfig { n_particles: 500, n_lf: 10, n_hf: 5, eps: 0.5, eps_lf: 0.05 };
        let (ens, _) =
            run_prefilter_is(&cfg, &pair, &prior, None::<&UniformBoxPrior>, RngStream::new(9))
                .unwrap();
        for state in &ens.particles {
            let tight = state.lf_pass_count(0.05) > 0;
            let loose = state.lf_pass_count(0.5) > 0;
            assert!(!tight || loose);
        }
    }
}
