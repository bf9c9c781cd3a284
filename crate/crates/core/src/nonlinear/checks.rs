//! Report-producing checks of the nonlinearity: coefficient identities,
//! enstrophy conservation, second moments, the convolution series shape and
//! mean-square convergence in the truncation.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::sample_on;
use crate::report::{ExperimentReport, Gate, ReportRow};
use crate::rng::child_seed;
use crate::spectral::{Lattice, WaveIndex};
use crate::stats::MeanEstimate;

use super::coefficients::{symmetrized_coefficient, textbook_coefficient};
use super::moments::{bnorm_difference_second_moment_analytic, bnorm_majorant, bnorm_second_moment_analytic};
use super::series::convolution_series;
use super::table::CoefficientTable;
use super::{bnorm_sq, flux_of};

/// Over every `(h, k)` with `0 < |h|, |k-h|, |k| <= n`: the symmetry defect
/// `|c_{h,k} - c_{k-h,k}|`, the bound `4π²|c_{h,k}|²/|k|² <= 1`, and the
/// agreement of `|c|` with the textbook real form.
pub fn check_coefficients(n: usize) -> Result<ExperimentReport> {
    let lattice = Lattice::new(n);
    let full: Vec<WaveIndex> = lattice.full_modes().collect();
    let (mut sym, mut bound, mut textbook, mut pairs) = (0.0f64, 0.0f64, 0.0f64, 0usize);
    for &k in &full {
        for &h in &full {
            let Some(kh) = k.minus(h) else { continue };
            if !kh.within(n) {
                continue;
            }
            let c = symmetrized_coefficient(h, k)?;
            let c_swap = symmetrized_coefficient(kh, k)?;
            sym = sym.max((c - c_swap).norm());
            bound = bound.max(4.0 * PI * PI * c.norm_sqr() / k.norm_sq() as f64);
            textbook = textbook.max((c.im + textbook_coefficient(h, k)?).abs());
            pairs += 1;
        }
    }
    let mut report = ExperimentReport::new(format!("check-coefficients-N{n}"));
    report.push(ReportRow::new("max |c_hk - c_(k-h)k|", sym, 0.0, 0.0, Gate::AbsTol(1e-14)));
    report.push(ReportRow::new("max 4pi^2 |c_hk|^2 / |k|^2", bound, 1.0, 0.0, Gate::AtMost));
    report.push(ReportRow::new("max | |c_hk| - |textbook| |", textbook, 0.0, 0.0, Gate::AbsTol(1e-14)));
    report.note(format!("{pairs} interacting pairs"));
    Ok(report)
}

/// Largest relative enstrophy flux over `samples` draws from `μ_ν`.
pub fn check_conservation(nu: f64, n: usize, samples: usize, seed: u64) -> Result<ExperimentReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let table = CoefficientTable::for_truncation(n);
    let lattice = table.lattice().clone();
    let fluxes: Vec<(f64, f64)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let u = sample_on(lattice.clone(), nu, child_seed(seed, i));
            let f = flux_of(&table.quadratic(&u)?, &u);
            Ok((f.relative(), f.flux.norm()))
        })
        .collect::<Result<_>>()?;
    let rel = fluxes.iter().fold(0.0f64, |m, f| m.max(f.0));
    let abs = fluxes.iter().fold(0.0f64, |m, f| m.max(f.1));
    let mut report = ExperimentReport::new(format!("check-conservation-N{n}"));
    report.provenance.seed = seed;
    report.push(ReportRow::new("max relative |enstrophy flux|", rel, 1e-10, 0.0, Gate::AtMost));
    report.push(ReportRow::info("max |enstrophy flux|", abs));
    report.note(format!("{samples} samples, nu={nu}"));
    Ok(report)
}

/// Monte-Carlo `E‖B^N(u)‖²_{H^{-r-1}}` under `μ_ν` against the exact value.
pub fn bnorm_test(nu: f64, r: f64, n: usize, samples: usize, seed: u64) -> Result<ExperimentReport> {
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    let table = CoefficientTable::for_truncation(n);
    let lattice = table.lattice().clone();
    let xs: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| Ok(bnorm_sq(&table.quadratic(&sample_on(lattice.clone(), nu, child_seed(seed, i)))?, r)))
        .collect::<Result<_>>()?;
    let est = MeanEstimate::from_samples(&xs);
    let mut report = ExperimentReport::new(format!("bnorm-test-N{n}"));
    report.provenance.seed = seed;
    report.push(ReportRow::from_mean(
        format!("E|B^N|^2_H^{:.4}", -r - 1.0),
        &est,
        bnorm_second_moment_analytic(nu, r, n),
        Gate::sigma3(),
    ));
    report.note(format!("{samples} samples, nu={nu}, N={n}"));
    Ok(report)
}

/// `ν² E‖B^N‖²_{H^{-r-1}} / Σ_{2<=|k|<=N} log|k|/|k|^{2+2r}` for each `N`, and
/// its spread `max/min - 1` gated below `tolerance`.
pub fn bnorm_shape(nu: f64, r: f64, truncations: &[usize], tolerance: f64) -> Result<ExperimentReport> {
    if truncations.iter().any(|&n| n < 2) {
        return Err(Error::InvalidParameter("truncations must be >= 2".into()));
    }
    let mut report = ExperimentReport::new("bnorm-shape");
    let ratios: Vec<f64> = truncations
        .iter()
        .map(|&n| bnorm_second_moment_analytic(nu, r, n) * nu * nu / bnorm_majorant(r, n))
        .collect();
    for (n, q) in truncations.iter().zip(&ratios) {
        report.push(ReportRow::info(format!("ratio N={n}"), *q));
    }
    let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
    report.push(ReportRow::new("max/min - 1", max / min - 1.0, tolerance, 0.0, Gate::Below));
    Ok(report)
}

/// One row of the convolution series table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub norm: f64,
    pub partial: f64,
    pub shape: f64,
    pub tail_bound: f64,
}

/// `S(k)` for `k = (m, 0)`, `m = 2..=kmax`, at cutoff `R`, with
/// `S(k)|k|²/log|k|` gated at `10×` its value at `|k| = 4`.
pub fn series_table(kmax: usize, cutoff: usize) -> Result<(Vec<SeriesRow>, ExperimentReport)> {
    if kmax < 4 {
        return Err(Error::InvalidParameter(format!("kmax must be >= 4, got {kmax}")));
    }
    let rows: Vec<SeriesRow> = (2..=kmax as i32)
        .into_par_iter()
        .map(|m| {
            let est = convolution_series(WaveIndex::new(m, 0)?, cutoff)?;
            Ok(SeriesRow { norm: m as f64, partial: est.partial, shape: est.shape_ratio().0, tail_bound: est.tail_bound })
        })
        .collect::<Result<_>>()?;
    let at4 = rows.iter().find(|r| r.norm == 4.0).map(|r| r.shape).unwrap_or(f64::NAN);
    let max = rows.iter().map(|r| r.shape).fold(f64::MIN, f64::max);
    let min = rows.iter().map(|r| r.shape).fold(f64::MAX, f64::min);
    let tail = rows.iter().map(|r| r.tail_bound / r.partial).fold(0.0f64, f64::max);
    let mut report = ExperimentReport::new("series-bound");
    report.push(ReportRow::new("max S(k)|k|^2/log|k|", max, 10.0 * at4, 0.0, Gate::AtMost));
    report.push(ReportRow::info("max/min shape ratio", max / min));
    report.push(ReportRow::info("max tail bound / partial sum", tail));
    report.note(format!("k = (m, 0), m = 2..{kmax}, cutoff R = {cutoff}"));
    Ok((rows, report))
}

/// Monte-Carlo `E‖B^{2N}(u) - B^N(u)‖²_{H^{-r-1}}` for each `N`, gated to
/// decrease along the sequence, with exact values as info rows.
pub fn galerkin_convergence(nu: f64, r: f64, truncations: &[usize], samples: usize, seed: u64) -> Result<ExperimentReport> {
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    let mut report = ExperimentReport::new("galerkin-convergence");
    report.provenance.seed = seed;
    let mut prev: Option<f64> = None;
    for &n in truncations {
        let lo = CoefficientTable::for_truncation(n);
        let hi = CoefficientTable::for_truncation(2 * n);
        let xs: Vec<f64> = (0..samples as u64)
            .into_par_iter()
            .map(|i| {
                let u = sample_on(hi.lattice().clone(), nu, child_seed(seed, i));
                let b_hi = hi.quadratic(&u)?;
                let b_lo = lo.quadratic(&u.on_lattice(lo.lattice().clone()))?.on_lattice(hi.lattice().clone());
                Ok(bnorm_sq(&(&b_hi - &b_lo), r))
            })
            .collect::<Result<_>>()?;
        let est = MeanEstimate::from_samples(&xs);
        let exact = bnorm_difference_second_moment_analytic(nu, r, n, 2 * n);
        report.push(ReportRow::new(format!("exact N={n}"), exact, 0.0, 0.0, Gate::Info));
        let name = format!("E|B^{}-B^{n}|^2 N={n}", 2 * n);
        match prev {
            Some(p) => report.push(ReportRow::new(name, est.mean, p, est.std_error, Gate::Below)),
            None => report.push(ReportRow::from_mean(name, &est, exact, Gate::Info)),
        }
        prev = Some(est.mean);
    }
    report.note(format!("{samples} samples per N, nu={nu}, r={r}"));
    Ok(report)
}
