//! Exact second moments of `B^N(u)` under `μ_ν` and the logarithmic majorant.

use crate::measure::mode_covariance;
use crate::spectral::{Lattice, WaveIndex};

use super::coefficients::interaction_im;

// E|Σ_{h∈D} d_{h,k} u_h u_{k-h}|² for a set D closed under h ↦ k-h:
// Σ_{h∈D} cov(h) cov(k-h) (|c_{h,k}|² + Re(c_{h,k} conj(c_{k-h,k}))), with the
// symmetrized coefficient c.
fn component_second_moment(nu: f64, k: WaveIndex, mut in_set: impl FnMut(WaveIndex, WaveIndex) -> bool, reach: i32) -> f64 {
    let mut sum = 0.0;
    for h1 in -reach..=reach {
        for h2 in -reach..=reach {
            let Ok(h) = WaveIndex::new(h1, h2) else { continue };
            let Some(kh) = k.minus(h) else { continue };
            if !in_set(h, kh) {
                continue;
            }
            let c = 0.5 * (interaction_im(h, k, kh) + interaction_im(kh, k, h));
            let c_swap = 0.5 * (interaction_im(kh, k, h) + interaction_im(h, k, kh));
            sum += (c * c + c * c_swap) * mode_covariance(nu, h) * mode_covariance(nu, kh);
        }
    }
    sum
}

/// `E_{μ_ν} ‖B^N(u)‖²_{H^{-r-1}}`: the double sum
/// `Σ_k |k|^{-2r-2} Σ_h (|c_{h,k}|² + Re(c_{h,k} conj(c_{k-h,k}))) / (2ν|h|²·2ν|k-h|²)`
/// over `0 < |h|, |k-h|, |k| <= N`.
pub fn bnorm_second_moment_analytic(nu: f64, r: f64, n: usize) -> f64 {
    let lattice = Lattice::new(n);
    let reach = n as i32;
    lattice
        .modes()
        .iter()
        .map(|&k| {
            let w = (k.norm_sq() as f64).powf(-r - 1.0);
            // the lower half mirrors the upper half
            2.0 * w * component_second_moment(nu, k, |h, kh| h.within(n) && kh.within(n), reach)
        })
        .sum()
}

/// `E_{μ_ν} ‖B^{hi}(u) - B^{lo}(u)‖²_{H^{-r-1}}` for `lo < hi`, with `B^{lo}`
/// acting on the restriction of `u` to `|k| <= lo`.
pub fn bnorm_difference_second_moment_analytic(nu: f64, r: f64, lo: usize, hi: usize) -> f64 {
    assert!(lo < hi, "need lo < hi");
    let lattice = Lattice::new(hi);
    let reach = hi as i32;
    lattice
        .modes()
        .iter()
        .map(|&k| {
            let w = (k.norm_sq() as f64).powf(-r - 1.0);
            let k_low = k.within(lo);
            let m = component_second_moment(
                nu,
                k,
                |h, kh| h.within(hi) && kh.within(hi) && !(k_low && h.within(lo) && kh.within(lo)),
                reach,
            );
            2.0 * w * m
        })
        .sum()
}

/// `Σ_{2 <= |k| <= N} log|k| / |k|^{2+2r}` over the full lattice.
pub fn bnorm_majorant(r: f64, n: usize) -> f64 {
    Lattice::new(n)
        .modes()
        .iter()
        .filter(|k| k.norm_sq() >= 4)
        .map(|k| 2.0 * k.norm().ln() / k.norm().powf(2.0 + 2.0 * r))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn finite_positive_and_scaling() {
        let a = bnorm_second_moment_analytic(1.0, 0.5, 8);
        assert!(a.is_finite() && a > 0.0);
        assert_relative_eq!(bnorm_second_moment_analytic(2.0, 0.5, 8), a / 4.0, epsilon = 1e-14);
    }

    #[test]
    fn majorant_shape() {
        let mut prev = 0.0;
        for n in 1..=20 {
            let m = bnorm_majorant(0.5, n);
            assert!(m >= prev);
            prev = m;
        }
        assert_eq!(bnorm_majorant(0.5, 1), 0.0);
        assert!(bnorm_majorant(1.0, 10) < bnorm_majorant(0.5, 10));
    }

    #[test]
    fn difference_moment_is_positive() {
        let d = bnorm_difference_second_moment_analytic(1.0, 0.5, 4, 8);
        assert!(d > 0.0 && d.is_finite());
    }
}
