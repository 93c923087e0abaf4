//! Seeded random number streams.
//!
//! Every randomized routine in this crate draws from a ChaCha stream that is
//! a pure function of a master seed and a stream index, so results are
//! bit-reproducible and independent of how work is scheduled. The uniform
//! and normal transforms are fixed here rather than delegated to a
//! distributions crate, so output does not shift under dependency upgrades.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// RNG for stream `stream` under `master_seed`. Streams with distinct
/// indices are statistically independent; adding streams never perturbs
/// existing ones.
pub fn stream_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

/// Uniform draw from [0, 1) with 53 bits of precision.
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw from [lo, hi).
pub fn uniform_in(rng: &mut impl RngCore, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * uniform(rng)
}

/// Standard normal draw (Box-Muller; two uniforms consumed per call).
pub fn normal(rng: &mut impl RngCore) -> f64 {
    // u1 in (0, 1] so the log is finite.
    let u1 = 1.0 - uniform(rng);
    let u2 = uniform(rng);
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
}
