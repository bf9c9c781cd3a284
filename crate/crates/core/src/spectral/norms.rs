//! Sobolev, Lebesgue and Besov norms, enstrophy, and the diagonal operators
//! (Stokes operator, heat semigroup).

use std::f64::consts::PI;

use num_complex::Complex64;

use super::field::{min_grid, synthesize, GridField, ScalarSpectral, SpectralField};
use crate::error::{Error, Result};

/// `sqrt(Σ_{0<|k|≤N} |u_k|² |k|^{2s})` over the full lattice.
pub fn sobolev_norm(field: &SpectralField, s: f64) -> f64 {
    let sum: f64 = field.iter().map(|(k, c)| c.norm_sqr() * (k.norm_sq() as f64).powf(s)).sum();
    (2.0 * sum).sqrt()
}

/// Trapezoidal `L_p(T²)` norm of the Euclidean modulus of the grid values.
pub fn lp_norm(grid: &GridField, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("L_p exponent must satisfy 1 <= p < inf, got {p}")));
    }
    let h = 2.0 * PI / grid.m as f64;
    let sum: f64 = if p == 2.0 {
        grid.values.iter().map(|v| v[0] * v[0] + v[1] * v[1]).sum()
    } else {
        grid.values.iter().map(|v| (v[0] * v[0] + v[1] * v[1]).powf(0.5 * p)).sum()
    };
    Ok((h * h * sum).powf(1.0 / p))
}

/// Grid size used for `L_p` norms of a field of truncation `n`: `8n + 1`,
/// raised to `p n + 1` for larger even `p` so the quadrature stays exact.
pub fn quadrature_grid(n: usize, p: f64) -> usize {
    let mut m = 8 * n + 1;
    if p.fract() == 0.0 && (p as usize) % 2 == 0 {
        m = m.max(p as usize * n + 1);
    }
    m.max(min_grid(n))
}

/// `L_p` norm of a spectral field on its default quadrature grid.
pub fn field_lp_norm(field: &SpectralField, p: f64) -> Result<f64> {
    if field.is_zero() {
        return Ok(0.0);
    }
    let grid = synthesize(field, quadrature_grid(field.truncation(), p))?;
    lp_norm(&grid, p)
}

/// Indices `j` of the dyadic blocks `2^j <= |k| < 2^{j+1}` that meet the
/// truncation disk `|k| <= n`.
pub fn dyadic_blocks(n: usize) -> impl Iterator<Item = u32> {
    (0u32..).take_while(move |&j| (1usize << j) <= n)
}

/// The `j`-th Littlewood–Paley block, expressed on the smallest truncation
/// containing it (so its quadrature grid depends on the block, not on `N`).
pub fn dyadic_block(field: &SpectralField, j: u32) -> SpectralField {
    let lo = 1i64 << (2 * j);
    let hi = 1i64 << (2 * (j + 1));
    let n_block = (1usize << (j + 1)).min(field.truncation());
    field
        .with_truncation(n_block)
        .filter(|k| (lo..hi).contains(&k.norm_sq()))
}

/// Sharp-cutoff dyadic Besov norm
/// `(Σ_j (2^{js} ‖Δ_j u‖_{L_p})^q)^{1/q}`.
pub fn besov_norm(field: &SpectralField, s: f64, p: f64, q: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite() && q >= 1.0 && q.is_finite()) {
        return Err(Error::InvalidParameter(format!("Besov exponents need 1 <= p, q < inf (p={p}, q={q})")));
    }
    let mut sum = 0.0;
    for j in dyadic_blocks(field.truncation()) {
        let block = dyadic_block(field, j);
        let lp = field_lp_norm(&block, p)?;
        sum += (2f64.powf(j as f64 * s) * lp).powf(q);
    }
    Ok(sum.powf(1.0 / q))
}

/// `S(u) = 2 Σ_{k ∈ Z²₊} |k|² |u_k|²`.
pub fn enstrophy(field: &SpectralField) -> f64 {
    2.0 * field.iter().map(|(k, c)| k.norm_sq() as f64 * c.norm_sqr()).sum::<f64>()
}

/// Vorticity `ω = ∇⊥·u` and stream function `ψ` (with `u = ∇⊥ψ`) as scalar
/// fields relative to `e^{ik·ξ}`: `ω_k = i|k| u_k / 2π`, `ψ_k = -i u_k / (2π|k|)`.
pub fn vorticity_and_stream(field: &SpectralField) -> (ScalarSpectral, ScalarSpectral) {
    let i = Complex64::new(0.0, 1.0);
    let (w, psi): (Vec<_>, Vec<_>) = field
        .iter()
        .map(|(k, u)| {
            let nk = k.norm();
            (i * u * (nk / (2.0 * PI)), -i * u / (2.0 * PI * nk))
        })
        .unzip();
    let lattice = field.lattice().clone();
    (ScalarSpectral::new(lattice.clone(), w), ScalarSpectral::new(lattice, psi))
}

/// `Au = Σ u_k |k|² e_k`.
pub fn stokes_apply(field: &SpectralField) -> SpectralField {
    field.map_modes(|k, c| c * k.norm_sq() as f64)
}

/// `e^{-νtA} u`, coefficientwise `exp(-ν t |k|²)`.
pub fn heat_semigroup(field: &SpectralField, t: f64, nu: f64) -> Result<SpectralField> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("heat semigroup time must be >= 0, got {t}")));
    }
    if !(nu > 0.0) {
        return Err(Error::InvalidParameter(format!("viscosity must be > 0, got {nu}")));
    }
    if t == 0.0 {
        return Ok(field.clone());
    }
    Ok(field.map_modes(|k, c| c * (-nu * t * k.norm_sq() as f64).exp()))
}

/// Trapezoidal `∫ f² dξ` of a scalar grid function.
pub fn scalar_l2_sq(values: &[f64], m: usize) -> f64 {
    let h = 2.0 * PI / m as f64;
    h * h * values.iter().map(|v| v * v).sum::<f64>()
}
