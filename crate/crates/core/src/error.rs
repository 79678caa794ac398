use thiserror::Error;

/// Errors surfaced by the samplers and diagnostics.
#[derive(Debug, Error)]
pub enum AbcError {
    /// Every particle weight is zero. The ensemble has collapsed; the caller
    /// must abort or rerun with wider tolerances.
    #[error("all particle weights are zero (ensemble collapse; tolerances too tight)")]
    ZeroTotalMass,

    /// The proportion-active target rounded down to zero particles.
    #[error("threshold selection target is zero active particles")]
    NoActiveParticles,

    /// The importance proposal assigned zero density to a point it sampled.
    #[error("proposal density is zero at a sampled parameter")]
    ZeroProposalDensity,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("scale parameter must be positive, got {0}")]
    NonPositiveScale(f64),

    /// Suitability assessment found no sample with positive weight.
    #[error("no accepted samples: no parameter draw attained positive weight")]
    NoAcceptedSamples,

    /// The false-rejection mass a_L reached 1; the LF filter excludes the
    /// whole posterior and the error bound is vacuous.
    #[error("assumption violated: false-rejection mass a_L = {0} is not < 1")]
    AssumptionViolated(f64),

    #[error("empty reference distribution")]
    EmptyReference,

    #[error("iteration cap {0} reached before the target tolerance")]
    IterationCap(usize),

    #[error("metric unavailable: {0}")]
    MetricUnavailable(String),
}
