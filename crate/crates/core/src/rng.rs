//! Seed derivation for reproducible parallel replicates.
//!
//! Every replicate (and every redraw of a replicate) gets its own generator
//! whose seed is a pure function of the master seed and a tag path, so the
//! results never depend on how rayon schedules the work.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes `tags` into `master`, one splitmix round per tag.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    tags.iter()
        .fold(splitmix64(master), |acc, &t| splitmix64(acc ^ splitmix64(t)))
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

pub fn derived_rng(master: u64, tags: &[u64]) -> SimRng {
    rng_from_seed(derive_seed(master, tags))
}

// Tag namespaces so different consumers of one master seed never share a stream.
pub(crate) const TAG_REPLICATE: u64 = 0x5245_504c;
pub(crate) const TAG_SPLIT: u64 = 0x5350_4c54;
pub(crate) const TAG_REFERENCE: u64 = 0x5245_4652;
pub(crate) const TAG_SAMPLE: u64 = 0x534d_504c;
