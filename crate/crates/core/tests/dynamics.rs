mod common;

use common::{random_field, wave};
use num_complex::Complex64;
use snse::dynamics::*;
use snse::measure::{mode_covariance, sample_mu_nu, MeasureParams};
use snse::spectral::{enstrophy, Lattice, SpectralField};
use snse::stats::MeanEstimate;
use snse::GalerkinSystem;

#[test]
fn wiener_increments_have_unit_rate() {
    let dt = 0.01;
    let noise = NoiseStream::new(17, dt).unwrap();
    let (a, b) = (wave(1, 0), wave(2, 3));
    let draws = 100_000u64;
    let sq: Vec<f64> = (0..draws).map(|n| noise.wiener_increment(n, a).unwrap().norm_sqr() / dt).collect();
    let est = MeanEstimate::from_samples(&sq);
    assert!(est.within(1.0, 4.0, 0.0), "{est:?}");
    let cross: Vec<f64> = (0..draws)
        .map(|n| (noise.wiener_increment(n, a).unwrap() * noise.wiener_increment(n, b).unwrap().conj()).re / dt)
        .collect();
    assert!(MeanEstimate::from_samples(&cross).within(0.0, 4.0, 0.0));
    assert!(noise.wiener_increment(0, snse::spectral::WaveIndex::new(-1, 0).unwrap()).is_err());
}

#[test]
fn one_step_from_rest_has_ou_variance() {
    let nu = 0.7;
    let dt = 0.05;
    let sys = GalerkinSystem::new(nu, 3).unwrap();
    let k = wave(1, 1);
    let idx = sys.lattice().slot(k).unwrap();
    let samples = 40_000u64;
    let vals: Vec<f64> = (0..samples)
        .map(|s| {
            let noise = NoiseStream::new(s, dt).unwrap();
            let inc = noise.increments(0, sys.lattice());
            let u = step_mode(&sys.zero_field(), &sys, dt, &inc, Mode::LinearOnly).unwrap();
            u.coeffs()[idx].norm_sqr()
        })
        .collect();
    let lambda = nu * 2.0;
    let want = (1.0 - (-2.0 * lambda * dt).exp()) / (2.0 * lambda);
    let est = MeanEstimate::from_samples(&vals);
    assert!(est.within(want, 4.0, 0.0), "{est:?} vs {want}");
}

#[test]
fn rest_without_noise_stays_at_rest() {
    let sys = GalerkinSystem::new(1.0, 6).unwrap();
    let z = sys.zero_field();
    let inc = vec![Complex64::new(0.0, 0.0); z.coeffs().len()];
    let u = step(&z, &sys, 1e-3, &inc).unwrap();
    assert!(u.is_zero());
}

#[test]
fn deterministic_step_agrees_with_euler_to_second_order() {
    let sys = GalerkinSystem::new(1.0, 6).unwrap();
    let u = random_field(6, 4).scale(0.3);
    let zero = vec![Complex64::new(0.0, 0.0); u.coeffs().len()];
    let gap = |dt: f64| {
        let a = step(&u, &sys, dt, &zero).unwrap();
        let b = euler_maruyama_step(&u, &sys, dt, &zero).unwrap();
        (&a - &b).coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)
    };
    let ratios: Vec<f64> = [1e-2, 5e-3, 2.5e-3].windows(2).map(|w| gap(w[0]) / gap(w[1])).collect();
    for r in ratios {
        assert!((r - 4.0).abs() < 0.3, "ratio {r}");
    }
}

#[test]
fn phi_limits() {
    assert_eq!(phi(0.0), 1.0);
    assert!((phi(1e-9) - 1.0).abs() < 1e-9);
    assert!((phi(1.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
}

#[test]
fn same_seed_is_bitwise_reproducible() {
    let sys = GalerkinSystem::new(1.0, 8).unwrap();
    let x0 = sample_mu_nu(&MeasureParams::new(1.0, 8, 3).unwrap());
    let a = simulate(&x0, &sys, 0.1, 1e-3, 42, Mode::Full).unwrap();
    let b = simulate(&x0, &sys, 0.1, 1e-3, 42, Mode::Full).unwrap();
    for (x, y) in a.final_state.coeffs().iter().zip(b.final_state.coeffs()) {
        assert_eq!(x.re.to_bits(), y.re.to_bits());
        assert_eq!(x.im.to_bits(), y.im.to_bits());
    }
    let c = simulate(&x0, &sys, 0.1, 1e-3, 43, Mode::Full).unwrap();
    assert_ne!(a.final_state, c.final_state);
}

#[test]
fn unit_horizon_run_is_finite() {
    let sys = GalerkinSystem::new(1.0, 8).unwrap();
    let x0 = sample_mu_nu(&MeasureParams::new(1.0, 8, 8).unwrap());
    let tr = simulate(&x0, &sys, 1.0, default_dt(8), 5, Mode::Full).unwrap();
    assert_eq!(tr.times.len(), 101);
    assert!((tr.times.last().unwrap() - 1.0).abs() < 1e-12);
    let limit = blowup_limit(&x0, 1.0);
    assert!(tr.enstrophy_series().iter().all(|s| s.is_finite() && *s < limit));
    assert!(tr.bnorm_time_average.unwrap().is_finite());
    let mut csv = Vec::new();
    tr.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().count(), 102);
}

#[test]
fn linear_enstrophy_relaxes_to_stationary_mean() {
    // from rest, E S(t) = Σ_k 2|k|² (1 - e^{-2ν|k|²t}) / (2ν|k|²)
    let (nu, n, t, dt) = (1.0, 4, 0.2, 1e-3);
    let sys = GalerkinSystem::new(nu, n).unwrap();
    let lattice = Lattice::new(n);
    let want: f64 = lattice
        .modes()
        .iter()
        .map(|&k| {
            let l = nu * k.norm_sq() as f64;
            k.norm_sq() as f64 * (1.0 - (-2.0 * l * t).exp()) / l
        })
        .sum();
    let vals: Vec<f64> = (0..2000u64)
        .map(|s| enstrophy(&simulate(&sys.zero_field(), &sys, t, dt, s, Mode::LinearOnly).unwrap().final_state))
        .collect();
    // exponential Euler is exact in law for the linear part
    let est = MeanEstimate::from_samples(&vals);
    assert!(est.within(want, 4.0, 0.0), "{est:?} vs {want}");
}

#[test]
fn linear_dynamics_preserve_the_measure() {
    let sys = GalerkinSystem::new(1.0, 4).unwrap();
    let opts = InvarianceOptions { mode: Mode::LinearOnly, ..Default::default() };
    let r = invariance_test_with(&sys, 0.5, 1e-3, 2000, 11, &opts).unwrap();
    assert!(r.passed(), "{r:?}");
    let row = r.row(&format!("t=T |u_{}|^2", wave(1, 0))).unwrap();
    assert_eq!(row.target, mode_covariance(1.0, wave(1, 0)));
}

#[test]
fn zero_horizon_invariance_is_trivial() {
    let sys = GalerkinSystem::new(1.0, 4).unwrap();
    let r = invariance_test(&sys, 0.0, 1e-3, 200, 1).unwrap();
    for row in r.rows.iter().filter(|r| r.name.starts_with("t=T")) {
        let start = r.row(&row.name.replacen("t=T", "t=0", 1)).unwrap();
        assert_eq!(row.estimate, start.estimate);
    }
    assert!(invariance_test(&sys, 1.0, 1e-3, 50, 1).is_err());
}

#[test]
fn invalid_steps_are_rejected() {
    assert!(step_count(1.0, 0.3).is_err());
    assert!(step_count(1.0, 0.0).is_err());
    assert_eq!(step_count(1.0, 2.5e-4).unwrap(), 4000);
    assert_eq!(default_dt(8), 1e-3);
    assert_eq!(default_dt(16), 5e-4);
    assert_eq!(default_dt(24), 2.5e-4);
    let sys = GalerkinSystem::new(1.0, 4).unwrap();
    let x0 = SpectralField::zeros(4);
    assert!(simulate(&x0, &sys, 0.0, 1e-3, 1, Mode::Full).is_err());
    assert!(simulate(&x0, &sys, 0.1, 0.2, 1, Mode::Full).is_err());
    assert!(simulate(&SpectralField::zeros(5), &sys, 0.1, 1e-2, 1, Mode::Full).is_err());
    assert!(step(&x0, &sys, 1e-3, &[]).is_err());
}

#[test]
fn blowup_reference() {
    let x0 = SpectralField::zeros(4);
    assert_eq!(blowup_limit(&x0, 2.0), 1e6 * x0.coeffs().len() as f64 / 2.0);
    let u = x0.with(1, 0, Complex64::new(1.0, 0.0));
    assert_eq!(blowup_limit(&u, 1.0), 1e6 * enstrophy(&u));
}
