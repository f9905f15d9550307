//! Seeded randomness for sampling and searches.
//!
//! Every randomized routine in the crate takes an explicit seed and runs on
//! ChaCha, so identical inputs always reproduce identical output.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;

pub const DEFAULT_SEED: u64 = 0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational with numerator in `[-bound, bound]` and denominator in
/// `{1, 2, 3}`.
pub fn small_rational(rng: &mut ChaCha8Rng, bound: i64) -> Scalar {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=3i64);
    Scalar::ratio(num, den)
}

/// A nonzero rational with the same shape.
pub fn small_nonzero_rational(rng: &mut ChaCha8Rng, bound: i64) -> Scalar {
    loop {
        let s = small_rational(rng, bound);
        if !s.is_zero() {
            return s;
        }
    }
}
