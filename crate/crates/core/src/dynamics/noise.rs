//! Mode-wise complex Brownian increments.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::{complex_normal, Domain};
use crate::spectral::{Lattice, WaveIndex};

/// Seeded source of increments `Δβ_k` over steps of length `dt`.
///
/// Increments are keyed by `(seed, step, k)`, so truncations sharing a seed
/// see identical increments on their common modes. A stream with
/// `substeps > 1` sums consecutive fine increments, giving a coarser step
/// driven by the same Brownian path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseStream {
    seed: u64,
    dt: f64,
    substeps: u64,
}

impl NoiseStream {
    pub fn new(seed: u64, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("time step must be > 0, got {dt}")));
        }
        Ok(Self { seed, dt, substeps: 1 })
    }

    /// Stream whose steps span `factor` steps of `self`.
    pub fn coarsened(&self, factor: u64) -> Self {
        Self { substeps: self.substeps * factor.max(1), ..*self }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Step length of this stream.
    pub fn dt(&self) -> f64 {
        self.dt * self.substeps as f64
    }

    /// `Δβ_k` for the given step; `E|Δβ_k|² = dt`.
    pub fn wiener_increment(&self, step: u64, k: WaveIndex) -> Result<Complex64> {
        if !k.is_upper() {
            return Err(Error::NotUpperHalf { k1: k.k1, k2: k.k2 });
        }
        Ok(self.increment_unchecked(step, k))
    }

    fn increment_unchecked(&self, step: u64, k: WaveIndex) -> Complex64 {
        (0..self.substeps)
            .map(|j| complex_normal(self.seed, Domain::Wiener, k, step * self.substeps + j, self.dt))
            .sum()
    }

    /// Increments for every stored mode of `lattice`.
    pub fn increments(&self, step: u64, lattice: &Lattice) -> Vec<Complex64> {
        lattice.modes().iter().map(|&k| self.increment_unchecked(step, k)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_upper_only() {
        let s = NoiseStream::new(3, 1e-3).unwrap();
        let k = WaveIndex::new(2, -1).unwrap();
        assert_eq!(s.wiener_increment(5, k).unwrap(), s.wiener_increment(5, k).unwrap());
        assert!(s.wiener_increment(5, k.neg()).is_err());
        assert!(NoiseStream::new(3, 0.0).is_err());
    }

    #[test]
    fn coarse_increment_is_sum_of_fine() {
        let s = NoiseStream::new(11, 0.01).unwrap();
        let c = s.coarsened(2);
        let k = WaveIndex::new(1, 1).unwrap();
        let want = s.wiener_increment(6, k).unwrap() + s.wiener_increment(7, k).unwrap();
        assert_eq!(c.wiener_increment(3, k).unwrap(), want);
        assert_eq!(c.dt(), 0.02);
    }

    #[test]
    fn prefix_property() {
        let s = NoiseStream::new(99, 0.1).unwrap();
        let small = Lattice::new(3);
        let big = Lattice::new(6);
        let a = s.increments(4, &small);
        let b = s.increments(4, &big);
        for (i, &k) in small.modes().iter().enumerate() {
            assert_eq!(a[i], b[big.slot(k).unwrap()]);
        }
    }
}
