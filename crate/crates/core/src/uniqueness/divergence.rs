//! Shared-noise comparison of two Galerkin truncations.

use std::io::Write;

use crate::dynamics::{integrate, step_count, Mode, NoiseStream};
use crate::error::{Error, Result};
use crate::measure::sample_on;
use crate::report::{ExperimentReport, Gate, ReportRow};
use crate::spectral::{besov_norm, fmt_f64, Lattice};
use crate::system::GalerkinSystem;

use super::params::BesovParams;

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceCurve {
    pub n1: usize,
    pub n2: usize,
    pub seed: u64,
    pub points: Vec<(f64, f64)>,
}

impl DivergenceCurve {
    pub fn max_distance(&self) -> f64 {
        self.points.iter().fold(0.0f64, |m, p| m.max(p.1))
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,distance")?;
        for (t, d) in &self.points {
            writeln!(w, "{},{}", fmt_f64(*t), fmt_f64(*d))?;
        }
        Ok(())
    }
}

/// Integrates the full dynamics at truncations `n1 <= n2` from one `μ_ν`
/// draw (the `n1` run starts from its restriction) with a shared noise
/// stream, and records `‖u^{n2}(t) - u^{n1}(t)‖_{B^{-s}_{p,q}}` every
/// `stride` steps, `u^{n1}` padded with zeros.
#[allow(clippy::too_many_arguments)]
pub fn shared_noise_divergence(
    n1: usize,
    n2: usize,
    nu: f64,
    t_end: f64,
    dt: f64,
    seed: u64,
    bp: &BesovParams,
    stride: u64,
) -> Result<DivergenceCurve> {
    if n1 > n2 {
        return Err(Error::InvalidParameter(format!("need N1 <= N2, got {n1} > {n2}")));
    }
    if stride == 0 {
        return Err(Error::InvalidParameter("stride must be >= 1".into()));
    }
    let steps = step_count(t_end, dt)?;
    let sys1 = GalerkinSystem::new(nu, n1)?;
    let sys2 = if n1 == n2 { sys1.clone() } else { GalerkinSystem::new(nu, n2)? };
    let lattice2 = sys2.lattice().clone();
    let x2 = sample_on(lattice2.clone(), nu, seed);
    let x1 = x2.on_lattice(sys1.lattice().clone());
    let noise = NoiseStream::new(seed, dt)?;
    let keep = |n: u64| n % stride == 0 || n == steps;

    let mut coarse = Vec::new();
    integrate(&x1, &sys1, &noise, steps, Mode::Full, |n, u, _| {
        if keep(n) {
            coarse.push(u.on_lattice(lattice2.clone()));
        }
    })?;
    let mut diffs = Vec::new();
    let mut idx = 0;
    integrate(&x2, &sys2, &noise, steps, Mode::Full, |n, u, _| {
        if keep(n) {
            diffs.push((n as f64 * dt, u - &coarse[idx]));
            idx += 1;
        }
    })?;
    let points = diffs
        .iter()
        .map(|(t, d)| Ok((*t, besov_norm(d, -bp.s, bp.p, bp.q)?)))
        .collect::<Result<_>>()?;
    Ok(DivergenceCurve { n1, n2, seed, points })
}

/// `‖Σ_{n1<|k|<=n2} u_k e_k‖_{B^{-s}_{p,q}}` for the `μ_ν` draw used by
/// [`shared_noise_divergence`] with the same seed.
pub fn initial_gap(n1: usize, n2: usize, nu: f64, seed: u64, bp: &BesovParams) -> Result<f64> {
    let x2 = sample_on(Lattice::new(n2), nu, seed);
    besov_norm(&x2.filter(|k| !k.within(n1)), -bp.s, bp.p, bp.q)
}

/// Divergence curves for a sequence of truncation pairs over several seeds.
/// A seed passes when the time-max distance does not increase along the
/// sequence; the report gates the number of passing seeds at
/// `min_passing`.
#[allow(clippy::too_many_arguments)]
pub fn divergence_sequence(
    pairs: &[(usize, usize)],
    nu: f64,
    t_end: f64,
    dt: f64,
    seeds: &[u64],
    bp: &BesovParams,
    stride: u64,
    min_passing: usize,
) -> Result<(Vec<DivergenceCurve>, ExperimentReport)> {
    let mut curves = Vec::new();
    let mut report = ExperimentReport::new("uniqueness-divergence");
    let mut passing = 0;
    for &seed in seeds {
        let maxima: Vec<f64> = pairs
            .iter()
            .map(|&(a, b)| {
                let c = shared_noise_divergence(a, b, nu, t_end, dt, seed, bp, stride)?;
                let m = c.max_distance();
                curves.push(c);
                Ok(m)
            })
            .collect::<Result<_>>()?;
        let ok = maxima.windows(2).all(|w| w[1] <= w[0]);
        passing += ok as usize;
        for (&(a, b), m) in pairs.iter().zip(&maxima) {
            report.push(ReportRow::info(format!("seed {seed} max distance ({a},{b})"), *m));
        }
        report.push(ReportRow::info(format!("seed {seed} nonincreasing"), ok as u8 as f64));
    }
    report.push(ReportRow::new("seeds with nonincreasing maxima", passing as f64, min_passing as f64, 0.0, Gate::AtLeast));
    report.note(format!("nu={nu} T={t_end} dt={dt} stride={stride} pairs={pairs:?}"));
    Ok((curves, report))
}
