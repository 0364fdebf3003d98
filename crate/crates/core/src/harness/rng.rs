//! Seeding for scans.
//!
//! Every sample draws from its own `ChaCha8Rng`, seeded with
//! `splitmix64(seed ^ splitmix64(index))`. Samples are therefore reproducible
//! one at a time and independent of evaluation order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fields::splitmix64;

pub fn sample_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(sample_seed(seed, index))
}
