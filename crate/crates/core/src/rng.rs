//! Deterministic pseudorandom sampling for the sampled checks.

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::free_algebra::Word;

/// Identifier written into reports so sampled runs can be replayed.
pub const PRNG_ID: &str = "splitmix64";

pub type Prng = SplitMix64;

pub fn prng(seed: u64) -> Prng {
    SplitMix64::seed_from_u64(seed)
}

/// A word with letters in `0..letters` and length in `min_len..=max_len`.
pub fn random_word(rng: &mut Prng, letters: usize, min_len: usize, max_len: usize) -> Word {
    let len = rng.random_range(min_len..=max_len);
    Word::new((0..len).map(|_| rng.random_range(0..letters)))
}
