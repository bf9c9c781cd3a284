//! The enstrophy Gaussian measure `μ_ν` on truncated fields.
//!
//! Under `μ_ν` the upper half-lattice coefficients are independent circular
//! complex Gaussians with `E|u_k|² = 1/(2ν|k|²)`.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::report::{ExperimentReport, Gate, ReportRow};
use crate::rng::{child_seed, complex_normal, Domain};
use crate::spectral::{Lattice, SpectralField, WaveIndex};
use crate::stats::MeanEstimate;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureParams {
    pub nu: f64,
    pub n: usize,
    pub seed: u64,
}

impl MeasureParams {
    pub fn new(nu: f64, n: usize, seed: u64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::InvalidParameter(format!("viscosity must be > 0, got {nu}")));
        }
        if n < 1 {
            return Err(Error::InvalidParameter("truncation must be >= 1".into()));
        }
        Ok(Self { nu, n, seed })
    }

    /// Parameters of ensemble member `index` (independent seed).
    pub fn member(&self, index: u64) -> Self {
        Self { seed: child_seed(self.seed, index), ..*self }
    }
}

/// `E_{μ_ν}|u_k|² = 1/(2ν|k|²)`.
pub fn mode_covariance(nu: f64, k: WaveIndex) -> f64 {
    1.0 / (2.0 * nu * k.norm_sq() as f64)
}

/// One mode of a `μ_ν` sample; identical to the corresponding coefficient of
/// [`sample_mu_nu`] at any truncation containing `k`.
pub fn sample_mode(nu: f64, seed: u64, k: WaveIndex) -> Complex64 {
    complex_normal(seed, Domain::Measure, k, 0, mode_covariance(nu, k))
}

pub fn sample_mu_nu(params: &MeasureParams) -> SpectralField {
    sample_on(Lattice::new(params.n), params.nu, params.seed)
}

pub fn sample_on(lattice: Arc<Lattice>, nu: f64, seed: u64) -> SpectralField {
    SpectralField::from_fn(lattice, |k| sample_mode(nu, seed, k))
}

/// `M` independent samples (member seeds derived from `params.seed`).
pub fn sample_ensemble(params: &MeasureParams, m: usize) -> Vec<SpectralField> {
    let lattice = Lattice::new(params.n);
    (0..m as u64)
        .into_par_iter()
        .map(|i| sample_on(lattice.clone(), params.nu, params.member(i).seed))
        .collect()
}

/// `(2n)! / (2ⁿ n!)`, the `2n`-th moment of a standard real Gaussian.
pub fn moment_coefficient(n: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidParameter("moment order must be >= 1".into()));
    }
    // (2n-1)!! = 1·3·5···(2n-1)
    (1..=n as u64).try_fold(1u64, |acc, i| acc.checked_mul(2 * i - 1)).ok_or(Error::Overflow("(2n)!/(2^n n!)"))
}

/// `n!`, the `2n`-th moment coefficient of an isotropic Gaussian vector in the
/// plane: `E|V|^{2n} = n! (E|V|²)^n`.
pub fn planar_moment_coefficient(n: u32) -> Result<u64> {
    (1..=n as u64).try_fold(1u64, |acc, i| acc.checked_mul(i)).ok_or(Error::Overflow("n!"))
}

/// The real linear functional `X_γ(u) = √2 Re Σ_{k ∈ Z²₊} γ_k u_k`, which
/// equals `Σ_{k ∈ Z²₀} γ_k u_k / √2` with `γ` completed Hermitian-symmetrically.
/// It is a centered real Gaussian with variance `Σ |γ_k|² E|u_k|²`.
pub fn linear_functional(gamma: &[(WaveIndex, Complex64)], u: impl Fn(WaveIndex) -> Complex64) -> f64 {
    std::f64::consts::SQRT_2 * gamma.iter().map(|&(k, g)| (g * u(k)).re).sum::<f64>()
}

/// Monte-Carlo check of `E|X_γ|^{2n} = (2n)!/(2ⁿn!) [Σ|γ_k|² E|u_k|²]ⁿ`.
pub fn moment_test(
    params: &MeasureParams,
    gamma: &[(WaveIndex, Complex64)],
    n: u32,
    samples: usize,
) -> Result<ExperimentReport> {
    if samples < 100 {
        return Err(Error::InvalidParameter(format!("moment test needs at least 100 samples, got {samples}")));
    }
    for &(k, _) in gamma {
        if !k.is_upper() {
            return Err(Error::NotUpperHalf { k1: k.k1, k2: k.k2 });
        }
        if !k.within(params.n) {
            return Err(Error::OutsideTruncation(k, params.n));
        }
    }
    let coef = moment_coefficient(n)? as f64;
    let variance: f64 = gamma.iter().map(|&(k, g)| g.norm_sqr() * mode_covariance(params.nu, k)).sum();
    let target = coef * variance.powi(n as i32);

    let draws: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let seed = params.member(i).seed;
            linear_functional(gamma, |k| sample_mode(params.nu, seed, k)).powi(2 * n as i32)
        })
        .collect();
    let est = MeanEstimate::from_samples(&draws);

    let mut report = ExperimentReport::new(format!("moment-test-n{n}"));
    report.provenance.seed = params.seed;
    report.push(ReportRow::from_mean(format!("E|X|^{}", 2 * n), &est, target, Gate::sigma3()));
    report.note(format!("coefficient {coef}, variance {variance:.6e}, samples {samples}"));
    Ok(report)
}

/// Closed form of `E_{μ_ν} ‖u‖^{2n}_{H^{-s}_{2n}}` at truncation `N`:
/// `4π² · n! · [Σ_{0<|k|≤N} |k|^{-2s} E|u_k|² / 4π²]ⁿ`.
///
/// The field `Σ u_k |k|^{-s} e_k(ξ)` is, at every point, an isotropic planar
/// Gaussian vector (the truncation disk is invariant under quarter turns), so
/// its `2n`-th moment carries the planar coefficient `n!`.
pub fn hnorm_expectation_analytic(nu: f64, s: f64, n: u32, trunc: usize) -> Result<f64> {
    let coef = planar_moment_coefficient(n)? as f64;
    let four_pi2 = 4.0 * std::f64::consts::PI.powi(2);
    let lattice = Lattice::new(trunc);
    // each upper mode stands for the pair ±k
    let inner: f64 = lattice
        .modes()
        .iter()
        .map(|&k| 2.0 * (k.norm_sq() as f64).powf(-s) * mode_covariance(nu, k) / four_pi2)
        .sum();
    Ok(coef * four_pi2 * inner.powi(n as i32))
}
