//! Seeding conventions.
//!
//! Every run owns one ChaCha8 generator. Initial conditions and the Brownian
//! increments come from two distinct streams of the same seed, and draws are
//! taken in agent-index order, so results never depend on thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

const INIT_STREAM: u64 = 0;
const DYNAMICS_STREAM: u64 = 1;

/// Seed of run `index` within a batch started from `master`.
pub fn run_seed(master: u64, index: u64) -> u64 {
    master ^ index
}

/// Generator for sampling initial conditions.
pub fn init_rng(seed: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(INIT_STREAM);
    rng
}

/// Generator for the Brownian increments of a run.
pub fn dynamics_rng(seed: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(DYNAMICS_STREAM);
    rng
}
