//! Counter-based random number streams.
//!
//! Every unit of stochastic work (one particle in one iteration, one
//! resampling step, one observed-data generation) owns a `(seed, stream_id)`
//! pair. Equal pairs reproduce the identical sequence; distinct pairs are
//! statistically independent. Results are therefore invariant to worker
//! count and scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Concrete RNG used everywhere in the crate.
pub type StreamRng = ChaCha8Rng;

/// What a derived stream is used for. Keeps stream ids disjoint across
/// pipeline stages without manual bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamPurpose {
    /// Initial draw + initial simulations of one particle.
    Init = 1,
    /// MH move of one particle in one iteration.
    Move = 2,
    /// Resampling step of one iteration (serial).
    Resample = 3,
    /// Observed-data generation.
    Observed = 4,
    /// Deferred simulation batch of one particle in one iteration.
    DeferredSim = 5,
    /// One reference MCMC chain.
    Chain = 6,
    /// Suitability assessment sample.
    Assess = 7,
    /// Test oracles and diagnostics.
    Oracle = 8,
}

/// A reproducible RNG stream identified by `(seed, stream_id)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { seed, stream_id: 0 }
    }

    /// Derive the stream for (`purpose`, `iteration`, `particle`).
    ///
    /// Layout: 8 bits purpose | 24 bits iteration | 32 bits particle.
    pub fn derive(&self, purpose: StreamPurpose, iteration: u64, particle: u64) -> Self {
        debug_assert!(iteration < (1 << 24), "iteration index too large");
        debug_assert!(particle < (1 << 32), "particle index too large");
        RngStream {
            seed: self.seed,
            stream_id: ((purpose as u64) << 56) | (iteration << 32) | particle,
        }
    }

    /// Instantiate the generator for this stream.
    pub fn rng(&self) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_pair_same_sequence() {
        let s = RngStream::new(7).derive(StreamPurpose::Move, 3, 11);
        let a: Vec<f64> = (0..16).map(|_| s.rng().random()).collect();
        // fresh rng per draw above is wasteful but checks instantiation too
        let mut r = s.rng();
        let b: Vec<f64> = (0..16).map(|_| r.random()).collect();
        let mut r2 = s.rng();
        let c: Vec<f64> = (0..16).map(|_| r2.random()).collect();
        assert_eq!(b, c);
        assert_eq!(a[0], b[0]);
    }

    #[test]
    fn distinct_pairs_distinct_sequences() {
        let base = RngStream::new(7);
        let mut a = base.derive(StreamPurpose::Move, 3, 11).rng();
        let mut b = base.derive(StreamPurpose::Move, 3, 12).rng();
        let mut c = base.derive(StreamPurpose::Init, 3, 11).rng();
        let xa: Vec<u64> = (0..8).map(|_| a.random()).collect();
        let xb: Vec<u64> = (0..8).map(|_| b.random()).collect();
        let xc: Vec<u64> = (0..8).map(|_| c.random()).collect();
        assert_ne!(xa, xb);
        assert_ne!(xa, xc);
    }
}
