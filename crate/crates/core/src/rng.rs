//! Seed handling.
//!
//! Every random draw in the crate comes from a ChaCha8 generator identified by
//! a `(seed, stream)` pair: the master seed is expanded with
//! `ChaCha8Rng::seed_from_u64` and the stream index selects an independent
//! ChaCha stream. Restart `r` of a fit uses stream `r`, so it can be
//! reproduced on its own with the same master seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use rand_chacha::ChaCha8Rng as Rng;

/// Stream offsets reserved for the simulator, far from the restart streams.
pub mod streams {
    pub const SIM_CANDIDATES: u64 = 1 << 32;
    pub const SIM_SPARSIFY: u64 = (1 << 32) + 1;
    pub const SIM_CALIBRATION: u64 = (1 << 32) + 2;
    pub const SIM_JITTER: u64 = (1 << 32) + 3;
    pub const SIM_SAMPLES: u64 = (1 << 32) + 4;
}

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
