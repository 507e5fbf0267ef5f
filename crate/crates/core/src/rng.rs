//! Seeded random-number streams for disorder realizations.
//!
//! All stochastic builders draw from ChaCha12 (`rand_chacha`), a named,
//! versioned generator, so ensembles reproduce bitwise across machines and
//! worker schedules. Each disorder realization gets its own stream derived
//! from `(base_seed, realization_index)`; realizations can therefore be
//! generated in any order, or in parallel, without changing any draw.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Independent stream for one disorder realization.
pub fn realization_rng(base_seed: u64, realization_index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(base_seed);
    rng.set_stream(realization_index);
    rng
}

/// SplitMix64-style mixer used to derive per-grid-point base seeds in sweeps.
pub fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
