mod common;

use std::f64::consts::PI;

use common::{grid_point, random_field, wave};
use num_complex::Complex64;
use proptest::prelude::*;
use snse::measure::{sample_mu_nu, MeasureParams};
use snse::spectral::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parseval(n in 1usize..=16, seed in any::<u64>()) {
        let u = random_field(n, seed);
        let l2 = field_lp_norm(&u, 2.0).unwrap();
        let h0 = sobolev_norm(&u, 0.0);
        prop_assert!((l2 * l2 - h0 * h0).abs() <= 1e-10 * h0 * h0);
    }

    #[test]
    fn synthesis_matches_direct_evaluation(n in 1usize..=6, seed in any::<u64>(), i in 0usize..25, j in 0usize..25) {
        let u = random_field(n, seed);
        let m = 25;
        let g = synthesize(&u, m).unwrap();
        let direct = evaluate_at(&u, grid_point(i, j, m));
        let scale = u.max_amplitude();
        for c in 0..2 {
            prop_assert!(direct[c].im.abs() <= 1e-12 * scale * (1.0 + u.coeffs().len() as f64));
            prop_assert!((direct[c].re - g.at(i, j)[c]).abs() <= 1e-12 * scale * u.coeffs().len() as f64);
        }
    }

    #[test]
    fn semigroup_law(seed in any::<u64>(), s in 0.0f64..1.0, t in 0.0f64..1.0, nu in 0.1f64..3.0) {
        let u = random_field(6, seed);
        let a = heat_semigroup(&heat_semigroup(&u, s, nu).unwrap(), t, nu).unwrap();
        let b = heat_semigroup(&u, s + t, nu).unwrap();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            prop_assert!((x - y).norm() <= 1e-14 * (1.0 + y.norm()));
        }
    }

    #[test]
    fn besov_sobolev_equivalence(seed in any::<u64>(), s in -2.0f64..2.0) {
        let u = random_field(12, seed);
        let b = besov_norm(&u, s, 2.0, 2.0).unwrap();
        let h = sobolev_norm(&u, s);
        let f = 2f64.powf(s.abs());
        prop_assert!(b <= f * h * (1.0 + 1e-10) && h <= f * b * (1.0 + 1e-10));
        for j in 0..3u32 {
            let blk = dyadic_block(&u, j).with_truncation(12);
            let bb = besov_norm(&blk, s, 2.0, 2.0).unwrap();
            let hb = sobolev_norm(&blk, s) * 2f64.powf(j as f64 * s)
                / (blk.iter().map(|(k, c)| c.norm_sqr() * (k.norm_sq() as f64).powf(s)).sum::<f64>()
                    / blk.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>())
                .sqrt();
            prop_assert!((bb - hb).abs() <= 1e-10 * hb);
        }
    }

    #[test]
    fn besov_monotone_in_smoothness(seed in any::<u64>(), s in 0.0f64..1.0, ds in 0.0f64..1.0) {
        let u = random_field(8, seed);
        let lo = besov_norm(&u, -(s + ds), 3.0, 3.0).unwrap();
        let hi = besov_norm(&u, -s, 3.0, 3.0).unwrap();
        prop_assert!(lo <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn stokes_is_linear(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let u = random_field(6, seed);
        let v = random_field(6, seed ^ 1);
        let lhs = stokes_apply(&(&u.scale(a) + &v.scale(b)));
        let rhs = &stokes_apply(&u).scale(a) + &stokes_apply(&v).scale(b);
        for (x, y) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            prop_assert!((x - y).norm() <= 1e-12 * (1.0 + y.norm()));
        }
    }
}

#[test]
fn single_block_besov_equals_sobolev() {
    let u = random_field(16, 3).filter(|k| (16..32).contains(&k.norm_sq()));
    let b = besov_norm(&u, 0.0, 2.0, 2.0).unwrap();
    let h = sobolev_norm(&u, 0.0);
    assert!((b - h).abs() <= 1e-10 * h);
    let one = SpectralField::zeros(4).with(1, 0, Complex64::new(0.3, -0.2));
    for s in [-1.0, 0.5, 2.0] {
        let b = besov_norm(&one, s, 2.0, 2.0).unwrap();
        assert!((b - sobolev_norm(&one, s)).abs() <= 1e-12);
    }
}

#[test]
fn synthesized_field_is_divergence_free() {
    let n = 4;
    let m = min_grid(n);
    let u = random_field(n, 11);
    let g = synthesize(&u, m).unwrap();
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for k1 in -(2 * n as i32)..=(2 * n as i32) {
        for k2 in -(2 * n as i32)..=(2 * n as i32) {
            let mut hat = [Complex64::new(0.0, 0.0); 2];
            for i in 0..m {
                for j in 0..m {
                    let xi = grid_point(i, j, m);
                    let ph = Complex64::from_polar(1.0, -(k1 as f64 * xi[0] + k2 as f64 * xi[1]));
                    let v = g.at(i, j);
                    hat[0] += ph * v[0];
                    hat[1] += ph * v[1];
                }
            }
            let div = (hat[0] * k1 as f64 + hat[1] * k2 as f64).norm();
            worst = worst.max(div);
            scale = scale.max(hat[0].norm() + hat[1].norm());
        }
    }
    assert!(worst <= 1e-11 * scale, "divergence {worst:e} vs scale {scale:e}");
}

#[test]
fn enstrophy_matches_grid_vorticity() {
    for n in [3, 8, 12] {
        let u = random_field(n, n as u64);
        let (w, _) = vorticity_and_stream(&u);
        let m = min_grid(n);
        let grid = w.synthesize(m).unwrap();
        let s = scalar_l2_sq(&grid, m);
        assert!((s - enstrophy(&u)).abs() <= 1e-10 * enstrophy(&u), "N={n}");
    }
}

#[test]
fn stream_function_reconstructs_velocity() {
    let u = random_field(6, 5);
    let (_, psi) = vorticity_and_stream(&u);
    let m = min_grid(6);
    let a = psi.perp_gradient(m).unwrap();
    let b = synthesize(&u, m).unwrap();
    let scale = b.values.iter().map(|v| v[0].abs().max(v[1].abs())).fold(0.0, f64::max);
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((x[0] - y[0]).abs() <= 1e-10 * scale && (x[1] - y[1]).abs() <= 1e-10 * scale);
    }
}

#[test]
fn vorticity_is_curl_on_grid() {
    // ω = ∂₁u₂ - ∂₂u₁ from grid finite spectral derivatives
    let n = 4;
    let u = random_field(n, 2);
    let m = min_grid(n);
    let d1 = synthesize(&common::derivative(&u, 0), m).unwrap();
    let d2 = synthesize(&common::derivative(&u, 1), m).unwrap();
    let (w, _) = vorticity_and_stream(&u);
    let wg = w.synthesize(m).unwrap();
    for idx in 0..m * m {
        let curl = d1.values[idx][1] - d2.values[idx][0];
        assert!((curl - wg[idx]).abs() <= 1e-10 * (1.0 + wg[idx].abs()));
    }
}

#[test]
fn lp_norm_closed_forms() {
    let u = SpectralField::zeros(1).with(1, 0, Complex64::new(1.0, 0.0));
    let want4 = (4.0 * PI * PI * 0.375 / PI.powi(4)).powf(0.25);
    let g = synthesize(&u, 9).unwrap();
    assert!((lp_norm(&g, 4.0).unwrap() - want4).abs() < 1e-12);
    // |cos|^3 has a kink, so the default grid is only accurate to a few digits
    let want3 = (2.0 * PI * (8.0 / 3.0) / PI.powi(3)).powf(1.0 / 3.0);
    let got3 = field_lp_norm(&u, 3.0).unwrap();
    assert!((got3 - want3).abs() < 1e-3 * want3, "{got3} vs {want3}");
}

#[test]
fn heat_smoothing_ratio_is_bounded() {
    let x = random_field(12, 9);
    let (a, b) = (0.5, -1.0 / 6.0);
    let mut sup: f64 = 0.0;
    for m in 0..12 {
        let t = 2f64.powi(-m);
        let num = besov_norm(&heat_semigroup(&x, t, 1.0).unwrap(), a, 3.0, 3.0).unwrap();
        let den = besov_norm(&x, b, 3.0, 3.0).unwrap();
        sup = sup.max(t.powf((a - b) / 2.0) * num / den);
    }
    assert!(sup.is_finite() && sup > 0.0 && sup < 10.0, "sup {sup}");
}

#[test]
fn support_contrast() {
    // mean |u|²_{L2} grows like log N while the B^{-1/6}_{33} cube stabilizes
    let samples = 200;
    let mut l2 = Vec::new();
    let mut besov = Vec::new();
    for n in [4, 8, 16] {
        let (mut a, mut b) = (0.0, 0.0);
        for i in 0..samples {
            let u = sample_mu_nu(&MeasureParams::new(1.0, n, 1000 + i).unwrap());
            a += sobolev_norm(&u, 0.0).powi(2);
            b += besov_norm(&u, -1.0 / 6.0, 3.0, 3.0).unwrap().powi(3);
        }
        l2.push(a / samples as f64);
        besov.push(b / samples as f64);
    }
    let l2_growth = l2[2] - l2[1];
    assert!(l2[1] - l2[0] > 0.5 && l2_growth > 0.5, "L2 means {l2:?}");
    let rel = |v: &[f64]| (v[2] - v[1]) / v[1];
    assert!(rel(&besov) < rel(&l2), "besov {besov:?} l2 {l2:?}");
    assert!(besov[2] / besov[1] < 1.25, "besov {besov:?}");
}

#[test]
fn truncated_besov_norms_are_cauchy() {
    let u = sample_mu_nu(&MeasureParams::new(1.0, 32, 4).unwrap());
    let vals: Vec<f64> = [4, 8, 16, 32]
        .iter()
        .map(|&n| besov_norm(&u.with_truncation(n), -1.0 / 6.0, 3.0, 3.0).unwrap())
        .collect();
    for w in vals.windows(2) {
        assert!(w[1] >= w[0] * (1.0 - 1e-12), "{vals:?}");
    }
    let inc: Vec<f64> = vals.windows(2).map(|w| w[1].powi(3) - w[0].powi(3)).collect();
    assert!(inc.iter().all(|d| d.is_finite()), "{inc:?}");
}

#[test]
fn coarse_grid_and_bad_inputs() {
    let u = random_field(4, 1);
    assert!(synthesize(&u, 16).is_err());
    assert!(synthesize(&u, 17).is_ok());
    assert!(lp_norm(&GridField::zeros(5), 0.5).is_err());
    assert!(heat_semigroup(&u, -1.0, 1.0).is_err());
    assert!(basis_eval(WaveIndex { k1: 0, k2: 0 }, [0.0, 0.0]).is_err());
    assert!(WaveIndex::new(0, 0).is_err());
    let mut v = u.clone();
    assert!(v.set(wave(-1, 0), Complex64::new(1.0, 0.0)).is_err());
}
