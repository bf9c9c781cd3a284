//! Truncated divergence-free velocity fields and their grid synthesis.
//!
//! A field is `u(ξ) = Σ_k u_k e_k(ξ)` with `e_k(ξ) = k⊥ e^{ik·ξ} / (2π|k|)`.
//! Only the upper half-lattice is stored. The term at `-k` is the complex
//! conjugate of the term at `k`, which keeps the velocity real; relative to
//! `e_{-k}` itself (note `conj(e_k) = -e_{-k}`) the lower coefficient reads
//! `u_{-k} = -conj(u_k)`, see [`SpectralField::basis_coefficient`].

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use super::lattice::{Lattice, WaveIndex};
use crate::error::{Error, Result};

/// Evaluates the basis function `e_k` at `xi`.
pub fn basis_eval(k: WaveIndex, xi: [f64; 2]) -> Result<[Complex64; 2]> {
    if k.k1 == 0 && k.k2 == 0 {
        return Err(Error::ZeroWaveIndex);
    }
    let phase = Complex64::from_polar(1.0, k.k1 as f64 * xi[0] + k.k2 as f64 * xi[1]);
    let p = k.perp();
    let scale = 1.0 / (2.0 * PI * k.norm());
    Ok([phase * (p.k1 as f64 * scale), phase * (p.k2 as f64 * scale)])
}

#[derive(Debug, Clone)]
pub struct SpectralField {
    lattice: Arc<Lattice>,
    coeffs: Vec<Complex64>,
}

impl PartialEq for SpectralField {
    fn eq(&self, other: &Self) -> bool {
        self.truncation() == other.truncation() && self.coeffs == other.coeffs
    }
}

impl SpectralField {
    pub fn zeros(n: usize) -> Self {
        Self::on(Lattice::new(n))
    }

    /// Zero field sharing an existing lattice.
    pub fn on(lattice: Arc<Lattice>) -> Self {
        let coeffs = vec![Complex64::new(0.0, 0.0); lattice.len()];
        Self { lattice, coeffs }
    }

    pub fn from_fn(lattice: Arc<Lattice>, mut f: impl FnMut(WaveIndex) -> Complex64) -> Self {
        let coeffs = lattice.modes().iter().map(|&k| f(k)).collect();
        Self { lattice, coeffs }
    }

    pub fn from_coeffs(lattice: Arc<Lattice>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != lattice.len() {
            return Err(Error::InvalidParameter(format!(
                "{} coefficients for a lattice of {} modes",
                coeffs.len(),
                lattice.len()
            )));
        }
        Ok(Self { lattice, coeffs })
    }

    pub fn truncation(&self) -> usize {
        self.lattice.truncation()
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn iter(&self) -> impl Iterator<Item = (WaveIndex, Complex64)> + '_ {
        self.lattice.modes().iter().copied().zip(self.coeffs.iter().copied())
    }

    /// Stored coefficient of an upper half-lattice mode; zero beyond the
    /// truncation.
    pub fn get(&self, k: WaveIndex) -> Result<Complex64> {
        if !k.is_upper() {
            return Err(Error::NotUpperHalf { k1: k.k1, k2: k.k2 });
        }
        Ok(self.lattice.slot(k).map_or(Complex64::new(0.0, 0.0), |s| self.coeffs[s]))
    }

    pub fn set(&mut self, k: WaveIndex, value: Complex64) -> Result<()> {
        if !k.is_upper() {
            return Err(Error::NotUpperHalf { k1: k.k1, k2: k.k2 });
        }
        let slot = self.lattice.slot(k).ok_or(Error::OutsideTruncation(k, self.truncation()))?;
        self.coeffs[slot] = value;
        Ok(())
    }

    /// Builder-style [`set`](Self::set) that panics on invalid input; meant
    /// for literals in tests and examples.
    pub fn with(mut self, k1: i32, k2: i32, value: Complex64) -> Self {
        self.set(WaveIndex::new(k1, k2).expect("nonzero index"), value)
            .expect("index inside upper half-lattice and truncation");
        self
    }

    /// Coefficient in the conjugate-paired basis (`e_k` on the upper half,
    /// `conj(e_{-k})` on the lower): `u_{-k} = conj(u_k)`.
    pub fn hermitian(&self, k: WaveIndex) -> Complex64 {
        let (up, reflected) = k.upper();
        let c = self.lattice.slot(up).map_or(Complex64::new(0.0, 0.0), |s| self.coeffs[s]);
        if reflected {
            c.conj()
        } else {
            c
        }
    }

    /// Coefficient relative to the basis function `e_k` for any nonzero `k`.
    pub fn basis_coefficient(&self, k: WaveIndex) -> Complex64 {
        let (up, reflected) = k.upper();
        let c = self.lattice.slot(up).map_or(Complex64::new(0.0, 0.0), |s| self.coeffs[s]);
        if reflected {
            -c.conj()
        } else {
            c
        }
    }

    /// Coefficients relative to `e_k` on the dense `(2n+1)^2` square; zero
    /// outside the truncation disk and at the origin.
    pub fn dense_basis_coefficients(&self) -> Vec<Complex64> {
        let side = self.lattice.side();
        let mut dense = vec![Complex64::new(0.0, 0.0); side * side];
        for (k, c) in self.iter() {
            dense[self.lattice.dense_index(k).unwrap()] = c;
            dense[self.lattice.dense_index(k.neg()).unwrap()] = -c.conj();
        }
        dense
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn max_amplitude(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn map_modes(&self, mut f: impl FnMut(WaveIndex, Complex64) -> Complex64) -> Self {
        let coeffs = self.iter().map(|(k, c)| f(k, c)).collect();
        Self { lattice: self.lattice.clone(), coeffs }
    }

    /// Keeps the modes selected by `keep`, zeroing the rest.
    pub fn filter(&self, mut keep: impl FnMut(WaveIndex) -> bool) -> Self {
        self.map_modes(|k, c| if keep(k) { c } else { Complex64::new(0.0, 0.0) })
    }

    /// Re-expresses the field at truncation `n`, dropping modes with `|k| > n`
    /// or padding with zeros.
    pub fn with_truncation(&self, n: usize) -> Self {
        self.on_lattice(Lattice::new(n))
    }

    pub fn on_lattice(&self, lattice: Arc<Lattice>) -> Self {
        if lattice.truncation() == self.truncation() {
            return Self { lattice, coeffs: self.coeffs.clone() };
        }
        Self::from_fn(lattice, |k| self.get(k).unwrap_or_default())
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map_modes(|_, c| c * a)
    }

    pub fn scale_complex(&self, a: Complex64) -> Self {
        self.map_modes(|_, c| c * a)
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &Self) -> Result<()> {
        self.check_same(other)?;
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += y * a;
        }
        Ok(())
    }

    pub fn check_same(&self, other: &Self) -> Result<()> {
        if self.truncation() != other.truncation() {
            return Err(Error::TruncationMismatch(self.truncation(), other.truncation()));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.truncation(), other.truncation(), "truncation mismatch");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect();
        Self { lattice: self.lattice.clone(), coeffs }
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: Self) -> SpectralField {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: Self) -> SpectralField {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.scale(rhs)
    }
}

/// A real scalar field stored on the upper half-lattice with coefficients
/// relative to `e^{ik·ξ}` and the Hermitian completion `f_{-k} = conj(f_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSpectral {
    lattice: Arc<Lattice>,
    coeffs: Vec<Complex64>,
}

impl ScalarSpectral {
    pub fn new(lattice: Arc<Lattice>, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(lattice.len(), coeffs.len());
        Self { lattice, coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Grid values `f(ξ_ij)` on an `m × m` grid.
    pub fn synthesize(&self, m: usize) -> Result<Vec<f64>> {
        check_grid(m, self.lattice.truncation())?;
        Ok(synthesize_half(&self.lattice, m, &self.coeffs))
    }

    /// Grid values of `∇⊥f = (-∂₂f, ∂₁f)`.
    pub fn perp_gradient(&self, m: usize) -> Result<GridField> {
        check_grid(m, self.lattice.truncation())?;
        let (c0, c1): (Vec<_>, Vec<_>) = self
            .lattice
            .modes()
            .iter()
            .zip(&self.coeffs)
            .map(|(k, &f)| {
                let i = Complex64::new(0.0, 1.0);
                (i * f * (-k.k2 as f64), i * f * (k.k1 as f64))
            })
            .unzip();
        let a = synthesize_half(&self.lattice, m, &c0);
        let b = synthesize_half(&self.lattice, m, &c1);
        Ok(GridField { m, values: a.into_iter().zip(b).map(|(x, y)| [x, y]).collect() })
    }
}

/// Velocity sampled on the uniform grid `ξ_ij = 2π(i, j)/m`, row-major in `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub m: usize,
    pub values: Vec<[f64; 2]>,
}

impl GridField {
    pub fn zeros(m: usize) -> Self {
        Self { m, values: vec![[0.0; 2]; m * m] }
    }

    pub fn at(&self, i: usize, j: usize) -> [f64; 2] {
        self.values[i * self.m + j]
    }

    /// Grid point coordinates.
    pub fn point(&self, i: usize, j: usize) -> [f64; 2] {
        let h = 2.0 * PI / self.m as f64;
        [h * i as f64, h * j as f64]
    }
}

/// Smallest admissible grid for truncation `n`.
pub fn min_grid(n: usize) -> usize {
    4 * n + 1
}

fn check_grid(m: usize, n: usize) -> Result<()> {
    if m < min_grid(n) {
        return Err(Error::GridTooCoarse { m, n, min: min_grid(n) });
    }
    Ok(())
}

/// Evaluates the field on the `m × m` grid.
pub fn synthesize(field: &SpectralField, m: usize) -> Result<GridField> {
    check_grid(m, field.truncation())?;
    if !field.is_finite() {
        return Err(Error::NonFinite("spectral coefficients"));
    }
    let lattice = field.lattice();
    let (c0, c1): (Vec<_>, Vec<_>) = field
        .iter()
        .map(|(k, u)| {
            let s = 1.0 / (2.0 * PI * k.norm());
            let p = k.perp();
            (u * (p.k1 as f64 * s), u * (p.k2 as f64 * s))
        })
        .unzip();
    let a = synthesize_half(lattice, m, &c0);
    let b = synthesize_half(lattice, m, &c1);
    Ok(GridField { m, values: a.into_iter().zip(b).map(|(x, y)| [x, y]).collect() })
}

/// Direct evaluation `Σ_{k ∈ Z²₀, |k| ≤ n} u_k e_k(ξ)` over the full lattice,
/// returning the complex 2-vector before the imaginary part is dropped.
pub fn evaluate_at(field: &SpectralField, xi: [f64; 2]) -> [Complex64; 2] {
    let mut acc = [Complex64::new(0.0, 0.0); 2];
    for k in field.lattice().full_modes() {
        let e = basis_eval(k, xi).expect("lattice modes are nonzero");
        let c = field.basis_coefficient(k);
        acc[0] += c * e[0];
        acc[1] += c * e[1];
    }
    acc
}

// f(ξ_ij) = Σ_{k upper} 2 Re(g_k e^{i(k1 ξ_i + k2 ξ_j)}), evaluated separably:
// first over k2 for every column j, then over k1 for every row i.
fn synthesize_half(lattice: &Lattice, m: usize, g: &[Complex64]) -> Vec<f64> {
    let n = lattice.truncation();
    let ni = n as i64;
    let roots: Vec<Complex64> =
        (0..m).map(|r| Complex64::from_polar(1.0, 2.0 * PI * r as f64 / m as f64)).collect();
    let phase = |freq: i64, idx: usize| roots[(freq * idx as i64).rem_euclid(m as i64) as usize];

    let width = 2 * n + 1;
    let mut dense = vec![Complex64::new(0.0, 0.0); (n + 1) * width];
    for (k, &c) in lattice.modes().iter().zip(g) {
        dense[k.k1 as usize * width + (k.k2 as i64 + ni) as usize] = c;
    }

    // partial[k1][j] = Σ_{k2} g(k1, k2) e^{i k2 ξ_j}
    let mut partial = vec![Complex64::new(0.0, 0.0); (n + 1) * m];
    for k1 in 0..=n {
        let row = &dense[k1 * width..(k1 + 1) * width];
        if row.iter().all(|c| c.re == 0.0 && c.im == 0.0) {
            continue;
        }
        for j in 0..m {
            let mut s = Complex64::new(0.0, 0.0);
            for (off, &c) in row.iter().enumerate() {
                if c.re != 0.0 || c.im != 0.0 {
                    s += c * phase(off as i64 - ni, j);
                }
            }
            partial[k1 * m + j] = s;
        }
    }

    let mut out = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            let mut s = Complex64::new(0.0, 0.0);
            for k1 in 0..=n {
                s += partial[k1 * m + j] * phase(k1 as i64, i);
            }
            out[i * m + j] = 2.0 * s.re;
        }
    }
    out
}
