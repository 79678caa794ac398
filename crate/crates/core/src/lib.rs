//! Multifidelity approximate Bayesian computation with LF pre-filtering.
//!
//! Likelihood-free posterior inference for simulator pairs with a cheap
//! low-fidelity (LF) and an expensive high-fidelity (HF) level. LF
//! simulations screen out parameters that cannot contribute before any HF
//! simulation is spent on them. The crate provides:
//!
//! - pre-filtering hierarchical importance sampling ([`abc_is`]),
//! - a baseline adaptive ABC-SMC sampler ([`asmc`]),
//! - the adaptive pre-filtering SMC sampler ([`maps`]),
//! - an LF-model suitability metric ([`suitability`]),
//! - accuracy and theory-check diagnostics ([`diagnostics`]),
//! - three benchmark models ([`models`]) and a config-driven runner
//!   ([`runner`]) behind the `mfabc` CLI.

pub mod abc_is;
pub mod asmc;
pub mod config;
pub mod diagnostics;
pub mod ensemble;
pub mod error;
pub mod maps;
pub mod mcmc;
pub mod models;
pub mod prior;
pub mod proposal;
pub mod rng;
pub mod runner;
pub mod simulator;
pub mod suitability;
pub mod thresholds;

pub use ensemble::{
    ess, normalize_weights, proportion_active, weighted_quantile, ParameterVector, ParticleState,
    ResamplingScheme, WeightedEnsemble,
};
pub use error::AbcError;
pub use rng::{RngStream, StreamPurpose, StreamRng};
pub use simulator::{FidelityPair, FidelitySimulator};
