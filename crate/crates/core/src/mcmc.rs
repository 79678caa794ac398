//! Reference ABC-MCMC chains.
//!
//! Long single-tolerance chains used as ground truth for the SMC samplers'
//! accuracy diagnostics, and exposed through the CLI as the
//! `mcmc-reference` sampler. Not tuned for production use.

use crate::error::AbcError;
use crate::prior::Density;
use crate::proposal::{FixedGaussianWalk, ProposalKernel};
use crate::rng::{RngStream, StreamPurpose};
use crate::simulator::FidelitySimulator;
use rand::Rng;
use rayon::prelude::*;

#[derive(Clone, Debug)]
pub struct McmcConfig {
    pub chains: usize,
    pub iterations: usize,
    /// Fraction of each chain discarded as burn-in.
    pub burn_in_frac: f64,
    pub thin: usize,
    /// Simulations per proposed parameter.
    pub n_sims: usize,
    pub eps: f64,
    /// Random-walk step standard deviation per dimension.
    pub step_sd: Vec<f64>,
    /// Attempts to find a starting point with at least one passing draw.
    pub init_attempts: usize,
}

/// The acceptance ratio of the ABC-MH kernel on the extended space
/// (theta, x_{1:n}): prior ratio times pass-count ratio times proposal
/// density ratio. Shared by the SMC rejuvenation moves.
pub fn mh_acceptance_ratio(
    prior_new: f64,
    count_new: usize,
    prior_cur: f64,
    count_cur: usize,
    log_q_ratio: f64,
) -> f64 {
    debug_assert!(count_cur > 0, "current state must have a passing draw");
    (prior_new * count_new as f64) / (prior_cur * count_cur as f64) * log_q_ratio.exp()
}

/// Run independent chains and pool their post-burn-in, thinned draws.
pub fn run_abc_mcmc<S, P>(
    config: &McmcConfig,
    sim: &S,
    observed: &[f64],
    prior: &P,
    stream: RngStream,
) -> Result<Vec<Vec<f64>>, AbcError>
where
    S: FidelitySimulator,
    P: Density,
{
    let kernel = FixedGaussianWalk::new(config.step_sd.clone());
    let chains: Result<Vec<Vec<Vec<f64>>>, AbcError> = (0..config.chains)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream.derive(StreamPurpose::Chain, 0, c as u64).rng();
            // find a live starting state
            let mut theta = prior.sample(&mut rng);
            let mut count = 0usize;
            let mut found = false;
            for _ in 0..config.init_attempts {
                theta = prior.sample(&mut rng);
                count = (0..config.n_sims)
                    .filter(|_| sim.distance(&theta, observed, &mut rng) < config.eps)
                    .count();
                if count > 0 {
                    found = true;
                    break;
                }
            }
            if !found {
                return Err(AbcError::NoAcceptedSamples);
            }
            let burn = (config.iterations as f64 * config.burn_in_frac) as usize;
            let mut kept = Vec::new();
            for it in 0..config.iterations {
                let proposal = kernel.propose(&theta, &mut rng);
                let prior_new = prior.density(&proposal);
                if prior_new > 0.0 {
                    let count_new = (0..config.n_sims)
                        .filter(|_| sim.distance(&proposal, observed, &mut rng) < config.eps)
                        .count();
                    let a = mh_acceptance_ratio(
                        prior_new,
                        count_new,
                        prior.density(&theta),
                        count,
                        kernel.log_density_ratio(&theta, &proposal),
                    );
                    if rng.random::<f64>() < a {
                        theta = proposal;
                        count = count_new;
                    }
                }
                if it >= burn && (it - burn) % config.thin == 0 {
                    kept.push(theta.clone());
                }
            }
            Ok(kept)
        })
        .collect();
    let pooled: Vec<Vec<f64>> = chains?.into_iter().flatten().collect();
    if pooled.is_empty() {
        return Err(AbcError::EmptyReference);
    }
    Ok(pooled)
}
