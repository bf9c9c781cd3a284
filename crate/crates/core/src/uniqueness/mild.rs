//! The mild-form map of the difference equation and bilinear estimate probes.

use crate::error::{Error, Result};
use crate::nonlinear::CoefficientTable;
use crate::spectral::{besov_norm, SpectralField};

use super::params::BesovParams;
use super::path::FieldPath;

/// `w(t) = -∫₀ᵗ e^{-ν(t-τ)A} [B(u, v) + B(v, ũ)](τ) dτ` on the grid of `v`,
/// integrand frozen at the left endpoint of each step and the semigroup
/// applied exactly:
/// `w_{n+1} = e^{-νλ dt} w_n - (1 - e^{-νλ dt})/(νλ) · F_n`, `w_0 = 0`.
pub fn mild_map(table: &CoefficientTable, nu: f64, v: &FieldPath, u: &FieldPath, u_tilde: &FieldPath) -> Result<FieldPath> {
    v.check_grid(u)?;
    v.check_grid(u_tilde)?;
    if v.truncation() != table.truncation() {
        return Err(Error::TruncationMismatch(v.truncation(), table.truncation()));
    }
    if !(nu > 0.0) {
        return Err(Error::InvalidParameter(format!("viscosity must be > 0, got {nu}")));
    }
    let lattice = table.lattice().clone();
    let (decay, gain): (Vec<f64>, Vec<f64>) = lattice
        .modes()
        .iter()
        .map(|&k| {
            let lam = nu * k.norm_sq() as f64;
            let e = (-lam * v.dt).exp_m1();
            (1.0 + e, -e / lam)
        })
        .unzip();
    let mut out = Vec::with_capacity(v.fields.len());
    let mut w = SpectralField::on(lattice);
    out.push(w.clone());
    for n in 0..v.steps() {
        let f1 = table.bilinear(&u.fields[n], &v.fields[n])?;
        let f2 = table.bilinear(&v.fields[n], &u_tilde.fields[n])?;
        for (i, x) in w.coeffs_mut().iter_mut().enumerate() {
            *x = *x * decay[i] - (f1.coeffs()[i] + f2.coeffs()[i]) * gain[i];
        }
        out.push(w.clone());
    }
    FieldPath::new(v.dt, out)
}

/// `‖B(u,v)‖_{B^{-s+a-2/p-1}} / (‖u‖_{B^{-s}} ‖v‖_{B^a})`.
pub fn bilinear_estimate_probe(table: &CoefficientTable, u: &SpectralField, v: &SpectralField, bp: &BesovParams) -> Result<f64> {
    let nu_ = besov_norm(u, -bp.s, bp.p, bp.q)?;
    let nv = besov_norm(v, bp.a, bp.p, bp.q)?;
    let den = nu_ * nv;
    if !(den > 0.0) {
        return Err(Error::ZeroDenominator("bilinear estimate probe"));
    }
    let b = table.bilinear(u, v)?;
    Ok(besov_norm(&b, bp.product_regularity(), bp.p, bp.q)? / den)
}
