//! Deterministic sampling primitives.
//!
//! Every random draw in the crate is a pure function of `(seed, index)` built
//! on SplitMix64. That makes samplers reentrant: trials can be recomputed,
//! reordered or run concurrently without sharing RNG state, and a logged
//! `(seed, index)` pair is enough to reproduce any point after the fact.
//!
//! The derivation scheme is part of the output contract and is frozen:
//!
//! * `mix64(x)` is the SplitMix64 finalizer.
//! * `unit_draw(seed, index) = (mix64(seed + (index + 1) * GOLDEN) >> 11) * 2^-53`.
//! * `derive_seed(master, n, trial) = mix64(mix64(master ^ n * GOLDEN) ^ trial * LEAP)`.

pub const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
pub const LEAP: u64 = 0xD1B5_4A32_D192_ED03;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(GOLDEN);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The `index`-th uniform draw in `[0, 1)` of the stream keyed by `seed`.
#[inline]
pub fn unit_draw(seed: u64, index: u64) -> f64 {
    let word = mix64(seed.wrapping_add(index.wrapping_mul(GOLDEN)));
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Per-trial seed for a convergence run: a fixed, published combination of
/// the master seed, the matrix size and the trial index.
#[inline]
pub fn derive_seed(master: u64, n: u64, trial: u64) -> u64 {
    mix64(mix64(master ^ n.wrapping_mul(GOLDEN)) ^ trial.wrapping_mul(LEAP))
}
