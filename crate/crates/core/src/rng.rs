//! Counter-based random streams for threshold sampling.
//!
//! A run is identified by `(rng_seed, run_index)`; node `j`'s threshold in
//! that run is the `j`-th output of a SplitMix64 stream keyed by the run.
//! Thresholds can therefore be looked up in any order, and two simulations
//! that share a run key see identical thresholds.

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

/// Identifier of the generator, recorded in run manifests.
pub const RNG_ALGORITHM: &str = "splitmix64-counter/v1";

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Output `index` of the SplitMix64 stream seeded with `seed`.
fn splitmix_at(seed: u64, index: u64) -> u64 {
    SplitMix64::seed_from_u64(seed.wrapping_add(index.wrapping_mul(GOLDEN_GAMMA))).next_u64()
}

/// Key of run `run` under `rng_seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunKey(u64);

impl RunKey {
    pub fn new(rng_seed: u64, run: u64) -> Self {
        RunKey(splitmix_at(rng_seed, run))
    }

    /// `Θ_j ~ U(0, 1]` for this run. The interval excludes zero so that a
    /// node with no active in-neighbors never activates.
    #[inline]
    pub fn threshold(self, node: usize) -> f64 {
        let u: f64 = SplitMix64::seed_from_u64(self.0.wrapping_add((node as u64).wrapping_mul(GOLDEN_GAMMA))).gen();
        1.0 - u
    }
}

/// Derives an independent seed for a named sub-stream such as an optimizer round.
pub fn derive_seed(rng_seed: u64, tag: u64) -> u64 {
    splitmix_at(rng_seed ^ 0x6c74_2d69_6e66_6c75, tag)
}
