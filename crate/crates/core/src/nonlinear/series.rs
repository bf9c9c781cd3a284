//! The lattice convolution series `S(k) = Σ_{h ≠ 0, k} 1/(|h|²|k-h|²)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::spectral::WaveIndex;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEstimate {
    pub k: WaveIndex,
    pub cutoff: usize,
    /// Sum over `0 < |h| <= R`, `h != k`, in lexicographic order of `h`.
    pub partial: f64,
    /// Rigorous upper bound on the omitted terms `|h| > R`.
    pub tail_bound: f64,
}

impl SeriesEstimate {
    pub fn upper(&self) -> f64 {
        self.partial + self.tail_bound
    }

    /// `S(k) |k|² / log|k|` using the partial sum and, second, its upper bound.
    pub fn shape_ratio(&self) -> (f64, f64) {
        let w = self.k.norm_sq() as f64 / self.k.norm().ln();
        (self.partial * w, self.upper() * w)
    }
}

/// Bound on `Σ_{|h| > R} 1/(|h|²|k-h|²)` valid for `R >= 4|k|`.
///
/// There `|k-h| >= 3|h|/4`, so each term is at most `(16/9)|h|^{-4}`. The unit
/// square around `h` lies in `|x| >= |h| - 1/√2`, on which `(|x| - 1/√2)^{-4}`
/// dominates `|h|^{-4}`; integrating that majorant over `|x| > R - 1/√2` gives
/// `(16/9)·2π [1/(2a²) + δ/(3a³)]` with `δ = 1/√2` and `a = R - 2δ`.
pub fn tail_bound(cutoff: usize) -> f64 {
    let delta = FRAC_1_SQRT_2;
    let a = cutoff as f64 - 2.0 * delta;
    (16.0 / 9.0) * 2.0 * PI * (1.0 / (2.0 * a * a) + delta / (3.0 * a * a * a))
}

pub fn convolution_series(k: WaveIndex, cutoff: usize) -> Result<SeriesEstimate> {
    if (cutoff as f64) < 4.0 * k.norm() {
        return Err(Error::InvalidParameter(format!(
            "series cutoff {cutoff} must be at least 4|k| = {:.3}",
            4.0 * k.norm()
        )));
    }
    let r = cutoff as i32;
    let r2 = (cutoff as i64) * (cutoff as i64);
    let mut partial = 0.0;
    for h1 in -r..=r {
        for h2 in -r..=r {
            let Ok(h) = WaveIndex::new(h1, h2) else { continue };
            if h == k || h.norm_sq() > r2 {
                continue;
            }
            let kh = k.minus(h).expect("h != k");
            partial += 1.0 / ((h.norm_sq() * kh.norm_sq()) as f64);
        }
    }
    Ok(SeriesEstimate { k, cutoff, partial, tail_bound: tail_bound(cutoff) })
}
