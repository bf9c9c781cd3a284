//! The truncated bilinear operator `B^N`, its conservation identities, exact
//! second moments and the convolution series bounding them.

mod checks;
mod coefficients;
mod moments;
mod series;
mod table;

use num_complex::Complex64;

use crate::error::Result;
use crate::spectral::{sobolev_norm, SpectralField};

pub use checks::{
    bnorm_shape, bnorm_test, check_coefficients, check_conservation, galerkin_convergence, series_table, SeriesRow,
};
pub use coefficients::{bilinear_coefficient, symmetrized_coefficient, textbook_coefficient};
pub use moments::{bnorm_difference_second_moment_analytic, bnorm_majorant, bnorm_second_moment_analytic};
pub use series::{convolution_series, tail_bound, SeriesEstimate};
pub use table::CoefficientTable;

/// `B^N(u)`.
pub fn nonlinear_term(table: &CoefficientTable, u: &SpectralField) -> Result<SpectralField> {
    table.quadratic(u)
}

/// `B^N(u, v)`.
pub fn bilinear_term(table: &CoefficientTable, u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    table.bilinear(u, v)
}

/// `‖B^N(u)‖²_{H^{-r-1}}`.
pub fn bnorm_sq(b: &SpectralField, r: f64) -> f64 {
    sobolev_norm(b, -r - 1.0).powi(2)
}

/// Neumaier-compensated sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Enstrophy flux `Σ_{0<|k|≤N} B_k^N(u) |k|² conj(u_k)` over the full lattice,
/// together with `Σ |B_k| |k|² |u_k|`, the natural scale of its cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnstrophyFlux {
    pub flux: Complex64,
    pub scale: f64,
}

impl EnstrophyFlux {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            self.flux.norm() / self.scale
        }
    }
}

pub fn enstrophy_flux(table: &CoefficientTable, u: &SpectralField) -> Result<EnstrophyFlux> {
    let b = table.quadratic(u)?;
    Ok(flux_of(&b, u))
}

/// Flux from a precomputed `B^N(u)`; `b` and `u` share the truncation.
pub fn flux_of(b: &SpectralField, u: &SpectralField) -> EnstrophyFlux {
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    let mut scale = 0.0;
    for &k in u.lattice().modes() {
        let w = k.norm_sq() as f64;
        for kk in [k, k.neg()] {
            // coefficients relative to e_k on both halves
            let t = b.basis_coefficient(kk) * u.basis_coefficient(kk).conj() * w;
            re.add(t.re);
            im.add(t.im);
            scale += t.norm();
        }
    }
    EnstrophyFlux { flux: Complex64::new(re.value(), im.value()), scale }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let mut s = CompensatedSum::default();
        for x in [1e16, 1.0, -1e16, 1.0] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }
}
