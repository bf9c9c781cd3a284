//! Wave indices and the truncated half-lattice.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A nonzero point of the integer lattice, labelling one Fourier mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WaveIndex {
    pub k1: i32,
    pub k2: i32,
}

impl WaveIndex {
    pub fn new(k1: i32, k2: i32) -> Result<Self> {
        if k1 == 0 && k2 == 0 {
            return Err(Error::ZeroWaveIndex);
        }
        Ok(Self { k1, k2 })
    }

    /// Upper half-lattice membership: `k1 > 0`, or `k1 == 0` and `k2 > 0`.
    pub fn is_upper(self) -> bool {
        self.k1 > 0 || (self.k1 == 0 && self.k2 > 0)
    }

    pub fn norm_sq(self) -> i64 {
        let (a, b) = (self.k1 as i64, self.k2 as i64);
        a * a + b * b
    }

    pub fn norm(self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    /// The rotated vector `(-k2, k1)`.
    pub fn perp(self) -> Self {
        Self { k1: -self.k2, k2: self.k1 }
    }

    pub fn dot(self, other: Self) -> i64 {
        self.k1 as i64 * other.k1 as i64 + self.k2 as i64 * other.k2 as i64
    }

    /// `self - other`, or `None` when the difference is the origin.
    pub fn minus(self, other: Self) -> Option<Self> {
        Self::new(self.k1 - other.k1, self.k2 - other.k2).ok()
    }

    pub fn neg(self) -> Self {
        Self { k1: -self.k1, k2: -self.k2 }
    }

    /// Representative in the upper half-lattice together with a flag telling
    /// whether `self` had to be reflected.
    pub fn upper(self) -> (Self, bool) {
        if self.is_upper() {
            (self, false)
        } else {
            (self.neg(), true)
        }
    }

    pub fn within(self, n: usize) -> bool {
        self.norm_sq() <= (n as i64) * (n as i64)
    }
}

impl fmt::Display for WaveIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.k1, self.k2)
    }
}

/// The modes `k` of the upper half-lattice with `1 <= |k| <= n`, in
/// lexicographic `(k1, k2)` order, plus dense lookup tables over the square
/// `[-n, n]^2`.
#[derive(Debug)]
pub struct Lattice {
    n: usize,
    modes: Vec<WaveIndex>,
    // upper-half slot for each cell of the (2n+1)^2 square
    slots: Vec<Option<u32>>,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl Eq for Lattice {}

impl Lattice {
    pub fn new(n: usize) -> Arc<Self> {
        let ni = n as i32;
        let side = 2 * n + 1;
        let mut modes = Vec::new();
        let mut slots = vec![None; side * side];
        for k1 in 0..=ni {
            for k2 in -ni..=ni {
                let Ok(k) = WaveIndex::new(k1, k2) else { continue };
                if k.is_upper() && k.within(n) {
                    slots[(k1 + ni) as usize * side + (k2 + ni) as usize] = Some(modes.len() as u32);
                    modes.push(k);
                }
            }
        }
        Arc::new(Self { n, modes, slots })
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    /// Number of stored (upper half-lattice) modes.
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[WaveIndex] {
        &self.modes
    }

    pub fn mode(&self, slot: usize) -> WaveIndex {
        self.modes[slot]
    }

    /// Side of the dense square `[-n, n]^2`.
    pub fn side(&self) -> usize {
        2 * self.n + 1
    }

    /// Position of `k` in the dense `(2n+1)^2` square, if inside it.
    pub fn dense_index(&self, k: WaveIndex) -> Option<usize> {
        let n = self.n as i32;
        if k.k1.abs() > n || k.k2.abs() > n {
            return None;
        }
        Some((k.k1 + n) as usize * self.side() + (k.k2 + n) as usize)
    }

    /// Storage slot of an upper half-lattice index within the truncation.
    pub fn slot(&self, k: WaveIndex) -> Option<usize> {
        self.dense_index(k).and_then(|d| self.slots[d]).map(|s| s as usize)
    }

    /// Every nonzero `k` with `|k| <= n`, upper and lower halves.
    pub fn full_modes(&self) -> impl Iterator<Item = WaveIndex> + '_ {
        self.modes.iter().flat_map(|&k| [k, k.neg()])
    }
}
