//! Deterministic seed derivation. Every episode seed is a pure function of
//! the run seed, a stream tag and an index, so results do not depend on
//! evaluation order.

/// SplitMix64 finalizer.
#[inline]
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for `(stream, index)` under `base`.
#[inline]
pub fn derive(base: u64, stream: u64, index: u64) -> u64 {
    mix(mix(base ^ mix(stream)).wrapping_add(index))
}

pub mod stream {
    pub const ENV: u64 = 1;
    pub const MACHINE: u64 = 2;
    pub const EPISODE: u64 = 3;
    pub const BURN_IN: u64 = 4;
    pub const POLICY_INIT: u64 = 5;
    pub const SAMPLER: u64 = 6;
    pub const EXPERT: u64 = 7;
    pub const FINAL: u64 = 8;
}
