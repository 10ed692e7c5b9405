//! Deterministic seed derivation and sampling helpers.
//!
//! Every stochastic choice in the toolkit flows through a `ChaCha8Rng` whose
//! seed is derived from the run seed plus a fixed salt path, so per-image and
//! per-step streams are independent yet reproducible across runs and platforms.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// splitmix64 step; the standard 64-bit mixer.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a base seed with a salt path into a new 64-bit seed.
///
/// Distinct salt paths give statistically independent streams; the same
/// (base, salt) pair always yields the same seed.
pub fn derive_seed(base: u64, salt: &[u64]) -> u64 {
    let mut state = base ^ 0x51ed_270b_7a1c_4e6d;
    let mut out = splitmix64(&mut state);
    for &s in salt {
        state ^= s.wrapping_mul(0x2545_f491_4f6c_dd1d);
        out ^= splitmix64(&mut state);
    }
    out
}

/// ChaCha8 stream for the given (base, salt) pair.
pub fn rng_from(base: u64, salt: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(base, salt))
}

/// Draws `k` items from `pool` without replacement via partial Fisher-Yates.
///
/// Output order is the draw order. Returns the whole pool (shuffled) when
/// `k >= pool.len()`.
pub fn sample_without_replacement<T: Copy>(pool: &[T], k: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    let mut pool = pool.to_vec();
    let take = k.min(pool.len());
    for i in 0..take {
        let j = rng.gen_range(i..pool.len());
        pool.swap(i, j);
    }
    pool.truncate(take);
    pool
}
