//! Counter-based random streams.
//!
//! Every random draw is addressed by a key `(seed, domain, k1, k2, counter)`
//! so the value of a mode never depends on iteration order or on how many
//! other modes exist. Truncation `N` samples are therefore prefixes of
//! truncation `N' > N` samples.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::spectral::WaveIndex;

/// Purpose tag separating otherwise identical keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Measure = 0x6d75,
    Wiener = 0x7769,
    Probe = 0x7072,
    Member = 0x6d65,
}

fn mix(mut z: u64) -> u64 {
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hashes a key tuple into a 64-bit stream seed.
pub fn stream_key(seed: u64, domain: Domain, k: WaveIndex, counter: u64) -> u64 {
    let mut h = mix(seed ^ 0x9e37_79b9_7f4a_7c15);
    h = mix(h ^ domain as u64);
    h = mix(h ^ (k.k1 as i64 as u64));
    h = mix(h ^ (k.k2 as i64 as u64).rotate_left(32));
    mix(h ^ counter.wrapping_mul(0xd1b5_4a32_d192_ed03))
}

/// Derives an independent child seed, e.g. for ensemble member `index`.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    mix(mix(seed ^ Domain::Member as u64) ^ index.wrapping_add(0x632b_e59b_d9b4_e019))
}

pub fn stream(seed: u64, domain: Domain, k: WaveIndex, counter: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(stream_key(seed, domain, k, counter))
}

/// A pair of independent standard normals for the keyed draw.
pub fn normal_pair(seed: u64, domain: Domain, k: WaveIndex, counter: u64) -> (f64, f64) {
    let mut rng = stream(seed, domain, k, counter);
    (rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Circular complex Gaussian with `E|z|² = variance`.
pub fn complex_normal(seed: u64, domain: Domain, k: WaveIndex, counter: u64, variance: f64) -> Complex64 {
    let (a, b) = normal_pair(seed, domain, k, counter);
    let s = (0.5 * variance).sqrt();
    Complex64::new(a * s, b * s)
}
