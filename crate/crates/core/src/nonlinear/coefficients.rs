//! Interaction coefficients of the projected transport term.
//!
//! With `e_k = k⊥ e^{ik·ξ}/(2π|k|)`, the `k`-th component of
//! `Π[(u·∇)v]` is `Σ_h d_{h,k} u_h v_{k-h}` where
//!
//! ```text
//! d_{h,k} = i (h⊥·k) ((k-h)·k) / (2π |h| |k-h| |k|)
//! ```
//!
//! Its symmetrization `c_{h,k} = (d_{h,k} + d_{k-h,k})/2` equals
//! `-i (h⊥·k)/(4π|h||k-h|) [|k| - 2 (h·k)/|k|]`: the textbook real coefficient
//! up to the phase `-i`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::WaveIndex;

/// Imaginary part of `d_{h,k}` (the real part is zero).
pub(crate) fn interaction_im(h: WaveIndex, k: WaveIndex, kh: WaveIndex) -> f64 {
    let num = (h.perp().dot(k) * kh.dot(k)) as f64;
    num / (2.0 * PI * h.norm() * kh.norm() * k.norm())
}

/// `d_{h,k}`, the coefficient of `u_h v_{k-h}` in the `k`-th component of
/// `B(u, v)`.
pub fn bilinear_coefficient(h: WaveIndex, k: WaveIndex) -> Result<Complex64> {
    let kh = k.minus(h).ok_or(Error::DegenerateIndices { h, k })?;
    Ok(Complex64::new(0.0, interaction_im(h, k, kh)))
}

/// `c_{h,k} = (d_{h,k} + d_{k-h,k}) / 2`.
pub fn symmetrized_coefficient(h: WaveIndex, k: WaveIndex) -> Result<Complex64> {
    let kh = k.minus(h).ok_or(Error::DegenerateIndices { h, k })?;
    Ok(Complex64::new(0.0, 0.5 * (interaction_im(h, k, kh) + interaction_im(kh, k, h))))
}

/// The textbook real form `-(1/4π) (h⊥·k)/(|h||k-h|) [|k| - 2 (h·k)/|k|]`.
pub fn textbook_coefficient(h: WaveIndex, k: WaveIndex) -> Result<f64> {
    let kh = k.minus(h).ok_or(Error::DegenerateIndices { h, k })?;
    let nk = k.norm();
    Ok(-(h.perp().dot(k) as f64) / (4.0 * PI * h.norm() * kh.norm()) * (nk - 2.0 * h.dot(k) as f64 / nk))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn k(a: i32, b: i32) -> WaveIndex {
        WaveIndex::new(a, b).unwrap()
    }

    #[test]
    fn parallel_indices_do_not_interact() {
        assert_eq!(bilinear_coefficient(k(1, 0), k(2, 0)).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn vanishing_bracket() {
        // |k| - 2 h·k/|k| = √2 - √2
        assert!(symmetrized_coefficient(k(1, 0), k(1, 1)).unwrap().norm() < 1e-16);
    }

    #[test]
    fn hand_evaluated_modulus_and_symmetry() {
        let want = 1.0 / (4.0 * PI * 10f64.sqrt());
        let c = symmetrized_coefficient(k(1, 0), k(2, 1)).unwrap();
        let c_sym = symmetrized_coefficient(k(1, 1), k(2, 1)).unwrap();
        assert_relative_eq!(c.norm(), want, epsilon = 1e-16);
        assert_relative_eq!(c_sym.norm(), want, epsilon = 1e-16);
        assert_eq!(c, c_sym);
    }

    #[test]
    fn symmetrized_matches_textbook_up_to_phase() {
        for h1 in -4..=4 {
            for h2 in -4..=4 {
                for &kk in &[k(2, 1), k(-3, 2), k(0, 5), k(1, -1)] {
                    let Ok(h) = WaveIndex::new(h1, h2) else { continue };
                    if h == kk {
                        assert!(bilinear_coefficient(h, kk).is_err());
                        continue;
                    }
                    let c = symmetrized_coefficient(h, kk).unwrap();
                    let t = textbook_coefficient(h, kk).unwrap();
                    assert!(c.re == 0.0);
                    assert!((c.im + t).abs() <= 1e-15 * (1.0 + t.abs()));
                }
            }
        }
    }
}
