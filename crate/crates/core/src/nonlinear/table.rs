//! Precomputed interaction table and the Galerkin-truncated bilinear operator.

use std::sync::Arc;

use num_complex::Complex64;

use super::coefficients::interaction_im;
use crate::error::{Error, Result};
use crate::spectral::{Lattice, SpectralField, WaveIndex};

#[derive(Debug, Clone, Copy)]
struct Entry {
    h: u32,
    kh: u32,
    d_im: f64,
}

/// For every upper mode `k`, all `h` with `0 < |h|, |k-h|, |k| <= N`, `h != k`,
/// together with `Im d_{h,k}`. Immutable after construction.
#[derive(Debug)]
pub struct CoefficientTable {
    lattice: Arc<Lattice>,
    offsets: Vec<usize>,
    entries: Vec<Entry>,
    // dense index -> wave index, for inspection
    dense_modes: Vec<Option<WaveIndex>>,
}

impl CoefficientTable {
    pub fn new(lattice: Arc<Lattice>) -> Self {
        let n = lattice.truncation() as i32;
        let side = lattice.side();
        let mut dense_modes = vec![None; side * side];
        for k1 in -n..=n {
            for k2 in -n..=n {
                if let Ok(k) = WaveIndex::new(k1, k2) {
                    if k.within(n as usize) {
                        dense_modes[lattice.dense_index(k).unwrap()] = Some(k);
                    }
                }
            }
        }
        let mut offsets = Vec::with_capacity(lattice.len() + 1);
        let mut entries = Vec::new();
        offsets.push(0);
        for &k in lattice.modes() {
            for h1 in -n..=n {
                for h2 in -n..=n {
                    let Ok(h) = WaveIndex::new(h1, h2) else { continue };
                    if h == k || !h.within(n as usize) {
                        continue;
                    }
                    let kh = k.minus(h).expect("h != k");
                    if !kh.within(n as usize) {
                        continue;
                    }
                    entries.push(Entry {
                        h: lattice.dense_index(h).unwrap() as u32,
                        kh: lattice.dense_index(kh).unwrap() as u32,
                        d_im: interaction_im(h, k, kh),
                    });
                }
            }
            offsets.push(entries.len());
        }
        Self { lattice, offsets, entries, dense_modes }
    }

    pub fn for_truncation(n: usize) -> Self {
        Self::new(Lattice::new(n))
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn truncation(&self) -> usize {
        self.lattice.truncation()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The `(h, k - h, d_{h,k})` triples feeding component `k` (upper half).
    pub fn pairs(&self, k: WaveIndex) -> Option<impl Iterator<Item = (WaveIndex, WaveIndex, Complex64)> + '_> {
        let slot = self.lattice.slot(k)?;
        let range = self.offsets[slot]..self.offsets[slot + 1];
        Some(self.entries[range].iter().map(|e| {
            (
                self.dense_modes[e.h as usize].unwrap(),
                self.dense_modes[e.kh as usize].unwrap(),
                Complex64::new(0.0, e.d_im),
            )
        }))
    }

    /// `B^N(u, v)` with components `Σ_h d_{h,k} u_h v_{k-h}`.
    pub fn bilinear(&self, u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
        for f in [u, v] {
            if f.truncation() != self.truncation() {
                return Err(Error::TruncationMismatch(f.truncation(), self.truncation()));
            }
        }
        let ud = u.dense_basis_coefficients();
        let vd = if std::ptr::eq(u, v) { ud.clone() } else { v.dense_basis_coefficients() };
        Ok(self.apply_dense(&ud, &vd))
    }

    /// `B^N(u) = B^N(u, u)`.
    pub fn quadratic(&self, u: &SpectralField) -> Result<SpectralField> {
        if u.truncation() != self.truncation() {
            return Err(Error::TruncationMismatch(u.truncation(), self.truncation()));
        }
        let ud = u.dense_basis_coefficients();
        Ok(self.apply_dense(&ud, &ud))
    }

    fn apply_dense(&self, ud: &[Complex64], vd: &[Complex64]) -> SpectralField {
        let coeffs = self
            .offsets
            .windows(2)
            .map(|w| {
                let mut acc = Complex64::new(0.0, 0.0);
                for e in &self.entries[w[0]..w[1]] {
                    acc += ud[e.h as usize] * vd[e.kh as usize] * e.d_im;
                }
                // d is purely imaginary
                Complex64::new(-acc.im, acc.re)
            })
            .collect();
        SpectralField::from_coeffs(self.lattice.clone(), coeffs).expect("table matches lattice")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_exclusion() {
        let t = CoefficientTable::for_truncation(6);
        for &k in t.lattice().modes() {
            for (h, kh, _) in t.pairs(k).unwrap() {
                assert_ne!(h, k);
                assert_ne!(kh, k);
                assert!(h.within(6) && kh.within(6));
            }
        }
    }

    #[test]
    fn truncation_mismatch() {
        let t = CoefficientTable::for_truncation(3);
        let u = SpectralField::zeros(3);
        let v = SpectralField::zeros(4);
        assert!(matches!(t.bilinear(&u, &v), Err(Error::TruncationMismatch(4, 3))));
    }
}
