#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use snse::rng::{complex_normal, Domain};
use snse::spectral::{Lattice, SpectralField, WaveIndex};

/// Field with independent unit complex normal coefficients.
pub fn random_field(n: usize, seed: u64) -> SpectralField {
    SpectralField::from_fn(Lattice::new(n), |k| complex_normal(seed, Domain::Probe, k, 0, 1.0))
}

pub fn wave(k1: i32, k2: i32) -> WaveIndex {
    WaveIndex::new(k1, k2).unwrap()
}

pub fn grid_point(i: usize, j: usize, m: usize) -> [f64; 2] {
    [2.0 * PI * i as f64 / m as f64, 2.0 * PI * j as f64 / m as f64]
}

/// `∂_j u` as a field in the same basis: coefficients `i k_j u_k`.
pub fn derivative(u: &SpectralField, j: usize) -> SpectralField {
    u.map_modes(|k, c| c * Complex64::new(0.0, if j == 0 { k.k1 } else { k.k2 } as f64))
}

/// `∫ f · conj(e_k) dξ` by the trapezoid rule for a vector grid function.
pub fn project(values: &[[f64; 2]], m: usize, k: WaveIndex) -> Complex64 {
    let h = 2.0 * PI / m as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..m {
        for j in 0..m {
            let e = snse::spectral::basis_eval(k, grid_point(i, j, m)).unwrap();
            let v = values[i * m + j];
            acc += e[0].conj() * v[0] + e[1].conj() * v[1];
        }
    }
    acc * h * h
}
