mod common;

use common::random_field;
use num_complex::Complex64;
use proptest::prelude::*;
use snse::measure::sample_on;
use snse::nonlinear::CoefficientTable;
use snse::spectral::{Lattice, SpectralField};
use snse::uniqueness::*;

#[test]
fn admissibility_examples() {
    let r = BesovParams::reference();
    assert!(validate_params(&r).unwrap().is_empty());
    assert_eq!(r.exponent_lalpha(), (1.0 - 1.0 / 6.0 - 2.0 / 3.0) / 2.0);
    assert!((r.exponent_sup() - 0.125).abs() < 1e-15);

    let bad = BesovParams { s: 0.0, ..r };
    assert_eq!(validate_params(&bad).unwrap(), vec![Clause::SPositive]);
    let bad = BesovParams { a: 0.1, ..r };
    assert!(validate_params(&bad).unwrap().contains(&Clause::SBelowA));
    let bad = BesovParams { p: 2.0, ..r };
    let v = validate_params(&bad).unwrap();
    assert!(v.contains(&Clause::PAboveTwo) && v.contains(&Clause::LalphaKernel), "{v:?}");
    let bad = BesovParams { a: 0.7, ..r };
    assert!(validate_params(&bad).unwrap().contains(&Clause::ABelowTwoOverP));
    assert!(validate_params(&BesovParams { alpha: 1.0, ..r }).is_err());
    assert!(validate_params(&BesovParams { s: f64::NAN, ..r }).is_err());
    assert!(require_valid(&BesovParams { s: -0.1, ..r }).is_err());
}

#[test]
fn unit_constant_horizon() {
    let bp = BesovParams::reference();
    let t = t_star(1.0, 1.0, 1.0, &bp).unwrap();
    assert!((t - 2f64.powi(-12)).abs() < 1e-18, "{t}");
    assert!(t_star(0.0, 1.0, 1.0, &bp).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn t_star_decreases_with_constants(c in 0.01f64..10.0, n in 0.01f64..10.0, f in 1.0f64..4.0) {
        let bp = BesovParams::reference();
        let base = t_star(c, c, n, &bp).unwrap();
        prop_assert!(t_star(c, c, n * f, &bp).unwrap() <= base);
        prop_assert!(t_star(c * f, c, n, &bp).unwrap() <= base);
        prop_assert!(t_star(c, c * f, n, &bp).unwrap() <= base);
    }

    #[test]
    fn probe_ratio_is_scale_invariant(seed in any::<u64>(), a in 0.1f64..10.0, b in 0.1f64..10.0) {
        let table = CoefficientTable::for_truncation(5);
        let bp = BesovParams::reference();
        let (u, v) = (random_field(5, seed), random_field(5, seed ^ 3));
        let r = bilinear_estimate_probe(&table, &u, &v, &bp).unwrap();
        let rs = bilinear_estimate_probe(&table, &u.scale(a), &v.scale(b), &bp).unwrap();
        prop_assert!((r - rs).abs() <= 1e-12 * r);
    }
}

#[test]
fn parallel_modes_do_not_interact() {
    let table = CoefficientTable::for_truncation(4);
    let bp = BesovParams::reference();
    let u = SpectralField::zeros(4).with(1, 1, Complex64::new(1.0, 0.5));
    let v = SpectralField::zeros(4).with(2, 2, Complex64::new(0.0, 1.0));
    assert_eq!(bilinear_estimate_probe(&table, &u, &v, &bp).unwrap(), 0.0);
    assert!(bilinear_estimate_probe(&table, &SpectralField::zeros(4), &v, &bp).is_err());
}

#[test]
fn bilinear_constant_is_stable_in_truncation() {
    let bp = BesovParams::reference();
    let a = bilinear_constant(&CoefficientTable::for_truncation(8), 1.0, &bp, 40, 5).unwrap();
    let b = bilinear_constant(&CoefficientTable::for_truncation(12), 1.0, &bp, 40, 5).unwrap();
    assert!(a > 0.0 && (b / a - 1.0).abs() < 0.2, "{a} {b}");
}

fn frozen(n: usize, seed: u64, t: f64, steps: usize) -> FieldPath {
    FieldPath::frozen(&sample_on(Lattice::new(n), 1.0, seed), t, steps).unwrap()
}

#[test]
fn mild_map_is_linear_and_vanishes_on_zero() {
    let table = CoefficientTable::for_truncation(6);
    let (u, ut) = (frozen(6, 1, 0.5, 16), frozen(6, 2, 0.5, 16));
    let v = probe_path(table.lattice(), 1.0, u.dt, 16, 9, 0).unwrap();
    let w = probe_path(table.lattice(), 1.0, u.dt, 16, 9, 1).unwrap();
    let zero = v.scale(0.0);
    assert!(mild_map(&table, 1.0, &zero, &u, &ut).unwrap().is_zero());
    assert!(mild_map(&table, 1.0, &v, &zero, &zero).unwrap().is_zero());
    let lhs = mild_map(&table, 1.0, &v.combine(2.0, &w, -0.5).unwrap(), &u, &ut).unwrap();
    let rhs = mild_map(&table, 1.0, &v, &u, &ut)
        .unwrap()
        .combine(2.0, &mild_map(&table, 1.0, &w, &u, &ut).unwrap(), -0.5)
        .unwrap();
    for (a, b) in lhs.fields.iter().zip(&rhs.fields) {
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() <= 1e-12 * (1.0 + y.norm()));
        }
    }
    assert!(lhs.fields[0].is_zero());
    let short = frozen(6, 1, 0.5, 8);
    assert!(mild_map(&table, 1.0, &v, &short, &ut).is_err());
}

#[test]
fn vt_norm_of_frozen_path() {
    let bp = BesovParams::reference();
    let x = random_field(6, 4);
    let p = FieldPath::frozen(&x, 2.0, 10).unwrap();
    let sup = snse::spectral::besov_norm(&x, -bp.s, bp.p, bp.q).unwrap();
    let la = snse::spectral::besov_norm(&x, bp.a, bp.p, bp.q).unwrap() * 2f64.powf(1.0 / bp.alpha);
    assert!((p.sup_norm(&bp).unwrap() - sup).abs() < 1e-12 * sup);
    assert!((p.lalpha_norm(&bp).unwrap() - la).abs() < 1e-12 * la);
    assert!((p.vt_norm(&bp).unwrap() - sup - la).abs() < 1e-12 * (sup + la));
    assert!(FieldPath::new(0.1, vec![x.clone()]).is_err());
}

#[test]
fn contraction_constants_are_scale_invariant() {
    let table = CoefficientTable::for_truncation(6);
    let bp = BesovParams::reference();
    let (u, ut) = (frozen(6, 1, 1.0, 16), frozen(6, 2, 1.0, 16));
    let a = contraction_factor(&table, 1.0, &u, &ut, &bp, 10, 3).unwrap();
    let b = contraction_factor(&table, 1.0, &u.scale(2.0), &ut.scale(2.0), &bp, 10, 3).unwrap();
    assert!((b.measured_factor / a.measured_factor - 2.0).abs() < 1e-9, "{a:?} {b:?}");
    assert!((b.c1 / a.c1 - 1.0).abs() < 1e-9 && (b.c2 / a.c2 - 1.0).abs() < 1e-9);
    assert!((b.n_t / a.n_t - 2.0).abs() < 1e-12);
    assert!(b.t_star < a.t_star);
    assert!(contraction_factor(&table, 1.0, &u, &ut, &bp, 5, 3).is_err());
    let z = u.scale(0.0);
    let c = contraction_factor(&table, 1.0, &z, &z, &bp, 10, 3).unwrap();
    assert_eq!(c.measured_factor, 0.0);
    assert!(c.t_star.is_infinite());
}

#[test]
fn contraction_csv() {
    let r = ContractionReport { t: 1.0, c1: 0.5, c2: 0.25, n_t: 2.0, t_star: 3.0, measured_factor: 0.1, probes: 10 };
    let mut out = Vec::new();
    ContractionReport::write_csv(&[r], &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "T,C1,C2,N_T,T_star,measured_factor");
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn equal_truncations_do_not_diverge() {
    let bp = BesovParams::reference();
    let c = shared_noise_divergence(6, 6, 1.0, 0.05, 1e-3, 3, &bp, 10).unwrap();
    assert!(c.points.iter().all(|&(_, d)| d == 0.0));
    assert_eq!(c.points.len(), 6);
    assert!(shared_noise_divergence(8, 4, 1.0, 0.05, 1e-3, 3, &bp, 10).is_err());
}

#[test]
fn divergence_starts_at_the_truncation_gap() {
    let bp = BesovParams::reference();
    let c = shared_noise_divergence(4, 8, 1.0, 0.05, 1e-3, 3, &bp, 10).unwrap();
    let gap = initial_gap(4, 8, 1.0, 3, &bp).unwrap();
    assert_eq!(c.points[0].0, 0.0);
    assert!((c.points[0].1 - gap).abs() <= 1e-14 * gap);
    assert!(c.max_distance() >= gap);
    let mut out = Vec::new();
    c.write_csv(&mut out).unwrap();
    assert!(String::from_utf8(out).unwrap().starts_with("t,distance"));
}
