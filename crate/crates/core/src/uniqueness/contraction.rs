//! Operator-norm measurement of the mild map and the admissible horizon.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::sample_on;
use crate::nonlinear::CoefficientTable;
use crate::report::{ExperimentReport, Gate, ReportRow};
use crate::rng::{child_seed, complex_normal, stream, Domain};
use crate::spectral::{besov_norm, dyadic_blocks, fmt_f64, heat_semigroup, Lattice, SpectralField, WaveIndex};

use super::mild::{bilinear_estimate_probe, mild_map};
use super::params::{require_valid, t_star, BesovParams};
use super::path::FieldPath;

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionReport {
    pub t: f64,
    pub c1: f64,
    pub c2: f64,
    pub n_t: f64,
    pub t_star: f64,
    pub measured_factor: f64,
    /// Number of probe paths (including power iterates) behind
    /// `measured_factor`.
    pub probes: usize,
}

impl ContractionReport {
    pub const CSV_HEADER: &'static str = "T,C1,C2,N_T,T_star,measured_factor";

    pub fn csv_row(&self) -> String {
        [self.t, self.c1, self.c2, self.n_t, self.t_star, self.measured_factor]
            .iter()
            .map(|&x| fmt_f64(x))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn write_csv<W: Write>(reports: &[ContractionReport], mut w: W) -> Result<()> {
        writeln!(w, "{}", Self::CSV_HEADER)?;
        for r in reports {
            writeln!(w, "{}", r.csv_row())?;
        }
        Ok(())
    }
}

// per-time-point Besov norms of a path: (‖·‖_{B^{-s}}, ‖·‖_{B^a})
fn point_norms(path: &FieldPath, bp: &BesovParams) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut lo = Vec::with_capacity(path.fields.len());
    let mut hi = Vec::with_capacity(path.fields.len());
    for f in &path.fields {
        lo.push(besov_norm(f, -bp.s, bp.p, bp.q)?);
        hi.push(besov_norm(f, bp.a, bp.p, bp.q)?);
    }
    Ok((lo, hi))
}

fn prefix_sup(xs: &[f64], steps: usize) -> f64 {
    xs[..=steps].iter().fold(0.0f64, |m, &x| m.max(x))
}

fn prefix_lalpha(xs: &[f64], steps: usize, dt: f64, alpha: f64) -> f64 {
    let sum: f64 = xs[..=steps]
        .iter()
        .enumerate()
        .map(|(n, x)| if n == 0 || n == steps { 0.5 } else { 1.0 } * x.powf(alpha))
        .sum();
    (dt * sum).powf(1.0 / alpha)
}

// prefix lengths K, K/2, K/4, ... down to 2 steps
fn sweep_lengths(steps: usize) -> Vec<usize> {
    let mut out = vec![steps];
    let mut k = steps / 2;
    while k >= 2 {
        out.push(k);
        k /= 2;
    }
    out
}

/// A random probe path vanishing at `t = 0`:
/// `v(t) = sin(πωt/T) F + (t/T)^β G` with `ω`, `β` random, `F` drawn from
/// `μ_ν` and `G` concentrated on one dyadic block (chosen by `index`).
pub fn probe_path(lattice: &std::sync::Arc<Lattice>, nu: f64, dt: f64, steps: usize, seed: u64, index: u64) -> Result<FieldPath> {
    let mut rng = stream(seed, Domain::Probe, WaveIndex { k1: 0, k2: 1 }, index);
    let omega: f64 = rng.random_range(0.25..2.5);
    let beta: f64 = rng.random_range(0.3..2.0);
    let f = sample_on(lattice.clone(), nu, child_seed(seed, index));
    let blocks: Vec<u32> = dyadic_blocks(lattice.truncation()).collect();
    let j = blocks[(index as usize / 2) % blocks.len()];
    let (lo, hi) = (1i64 << (2 * j), 1i64 << (2 * (j + 1)));
    let g = SpectralField::from_fn(lattice.clone(), |k| {
        if (lo..hi).contains(&k.norm_sq()) {
            complex_normal(seed, Domain::Probe, k, index, 1.0)
        } else {
            Default::default()
        }
    });
    let t_end = dt * steps as f64;
    let fields = (0..=steps)
        .map(|n| {
            let tau = n as f64 * dt / t_end;
            &f.scale((std::f64::consts::PI * omega * tau).sin()) + &g.scale(tau.powf(beta))
        })
        .collect();
    FieldPath::new(dt, fields)
}

struct ProbeOutcome {
    ratio: f64,
    c1: f64,
    c2: f64,
    image: FieldPath,
}

fn evaluate_probe(
    table: &CoefficientTable,
    nu: f64,
    v: &FieldPath,
    u_norms: &[f64],
    ut_norms: &[f64],
    u: &FieldPath,
    u_tilde: &FieldPath,
    bp: &BesovParams,
) -> Result<ProbeOutcome> {
    if v.is_zero() {
        return Err(Error::InvalidParameter("degenerate probe: zero path".into()));
    }
    let w = mild_map(table, nu, v, u, u_tilde)?;
    let (v_lo, v_hi) = point_norms(v, bp)?;
    let (w_lo, w_hi) = point_norms(&w, bp)?;
    let dt = v.dt;
    let steps = v.steps();
    let vt = |lo: &[f64], hi: &[f64], k: usize| prefix_sup(lo, k) + prefix_lalpha(hi, k, dt, bp.alpha);
    let ratio = vt(&w_lo, &w_hi, steps) / vt(&v_lo, &v_hi, steps);
    let (mut c1, mut c2) = (0.0f64, 0.0f64);
    for k in sweep_lengths(steps) {
        let t = dt * k as f64;
        let n_t = prefix_sup(u_norms, k) + prefix_sup(ut_norms, k);
        let v_la = prefix_lalpha(&v_hi, k, dt, bp.alpha);
        if n_t == 0.0 || v_la == 0.0 {
            continue;
        }
        let den = n_t * v_la;
        c1 = c1.max(prefix_lalpha(&w_hi, k, dt, bp.alpha) / den / t.powf(bp.exponent_lalpha()));
        c2 = c2.max(prefix_sup(&w_lo, k) / den / t.powf(bp.exponent_sup()));
    }
    Ok(ProbeOutcome { ratio, c1, c2, image: w })
}

/// Estimates the `V_T` operator norm of the mild map around `(u, ũ)` as the
/// largest amplification over `probes` random paths and three power iterates
/// of the worst one. `C₁`, `C₂` are the smallest constants consistent with
/// every measured output norm over the prefixes `T, T/2, T/4, ...` of the
/// grid; `T*` follows from them and `N_T`.
pub fn contraction_factor(
    table: &CoefficientTable,
    nu: f64,
    u: &FieldPath,
    u_tilde: &FieldPath,
    bp: &BesovParams,
    probes: usize,
    seed: u64,
) -> Result<ContractionReport> {
    require_valid(bp)?;
    if probes < 10 {
        return Err(Error::InvalidParameter(format!("need at least 10 probes, got {probes}")));
    }
    u.check_grid(u_tilde)?;
    if u.truncation() != table.truncation() {
        return Err(Error::TruncationMismatch(u.truncation(), table.truncation()));
    }
    let (u_norms, _) = point_norms(u, bp)?;
    let (ut_norms, _) = point_norms(u_tilde, bp)?;
    let n_t = prefix_sup(&u_norms, u.steps()) + prefix_sup(&ut_norms, u.steps());
    let lattice = table.lattice().clone();

    let mut outcomes: Vec<ProbeOutcome> = (0..probes as u64)
        .into_par_iter()
        .map(|i| {
            let v = probe_path(&lattice, nu, u.dt, u.steps(), seed, i)?;
            evaluate_probe(table, nu, &v, &u_norms, &ut_norms, u, u_tilde, bp)
        })
        .collect::<Result<_>>()?;

    let worst = outcomes.iter().enumerate().max_by(|a, b| a.1.ratio.total_cmp(&b.1.ratio)).map(|(i, _)| i);
    if let Some(i) = worst {
        let mut v = outcomes[i].image.clone();
        for _ in 0..3 {
            if v.is_zero() {
                break;
            }
            let scale = 1.0 / v.vt_norm(bp)?;
            let out = evaluate_probe(table, nu, &v.scale(scale), &u_norms, &ut_norms, u, u_tilde, bp)?;
            v = out.image.clone();
            outcomes.push(out);
        }
    }

    let measured_factor = outcomes.iter().fold(0.0f64, |m, o| m.max(o.ratio));
    let c1 = outcomes.iter().fold(0.0f64, |m, o| m.max(o.c1));
    let c2 = outcomes.iter().fold(0.0f64, |m, o| m.max(o.c2));
    let t_star = if n_t > 0.0 && c1 > 0.0 && c2 > 0.0 { t_star(c1, c2, n_t, bp)? } else { f64::INFINITY };
    Ok(ContractionReport { t: u.horizon(), c1, c2, n_t, t_star, measured_factor, probes: outcomes.len() })
}

/// `V_T` norms of `v, Φ(v), Φ²(v), ...` for `iterations` applications of the
/// mild map `Φ`.
pub fn fixed_point_iteration(
    table: &CoefficientTable,
    nu: f64,
    v0: &FieldPath,
    u: &FieldPath,
    u_tilde: &FieldPath,
    bp: &BesovParams,
    iterations: usize,
) -> Result<Vec<f64>> {
    let mut v = v0.clone();
    let mut norms = vec![v.vt_norm(bp)?];
    for _ in 0..iterations {
        v = mild_map(table, nu, &v, u, u_tilde)?;
        norms.push(v.vt_norm(bp)?);
    }
    Ok(norms)
}

/// Largest bilinear estimate ratio over `samples` pairs `(u, v)` with `u`
/// drawn from `μ_ν` and `v = e^{-A/20} w`, `w` an independent `μ_ν` draw.
pub fn bilinear_constant(table: &CoefficientTable, nu: f64, bp: &BesovParams, samples: usize, seed: u64) -> Result<f64> {
    let lattice = table.lattice().clone();
    let ratios: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let u = sample_on(lattice.clone(), nu, child_seed(seed, 2 * i));
            let w = sample_on(lattice.clone(), nu, child_seed(seed, 2 * i + 1));
            let v = heat_semigroup(&w, 0.05, 1.0)?;
            bilinear_estimate_probe(table, &u, &v, bp)
        })
        .collect::<Result<_>>()?;
    Ok(ratios.into_iter().fold(0.0f64, f64::max))
}

/// Outcome of [`contraction_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionExperiment {
    /// Measurement at the requested horizon, then at the measured `T*` when
    /// that is finite.
    pub reports: Vec<ContractionReport>,
    /// Per-probe geometric decay ratios of the mild map iteration.
    pub iteration_ratios: Vec<f64>,
    pub report: ExperimentReport,
}

/// Frozen `μ_ν` paths `u`, `ũ` at truncation `table.truncation()` held over
/// `[0, horizon]`: measures the contraction factor there and at the measured
/// `T*`, iterates the mild map from `probes` random paths on the shorter of
/// the two horizons, and checks the unit-constant `T*` arithmetic.
#[allow(clippy::too_many_arguments)]
pub fn contraction_experiment(
    table: &CoefficientTable,
    nu: f64,
    bp: &BesovParams,
    horizon: f64,
    steps: usize,
    probes: usize,
    iterations: usize,
    seed: u64,
) -> Result<ContractionExperiment> {
    require_valid(bp)?;
    if iterations < 1 {
        return Err(Error::InvalidParameter("need at least one iteration".into()));
    }
    let lattice = table.lattice().clone();
    let u = sample_on(lattice.clone(), nu, child_seed(seed, 0));
    let ut = sample_on(lattice.clone(), nu, child_seed(seed, 1));
    let paths = |t: f64| -> Result<(FieldPath, FieldPath)> { Ok((FieldPath::frozen(&u, t, steps)?, FieldPath::frozen(&ut, t, steps)?)) };

    let mut report = ExperimentReport::new("contraction-test");
    report.provenance.seed = seed;
    let (pu, put) = paths(horizon)?;
    let first = contraction_factor(table, nu, &pu, &put, bp, probes, seed)?;
    let gate = if horizon <= first.t_star { Gate::Below } else { Gate::Info };
    report.push(ReportRow::new(format!("factor at T={horizon}"), first.measured_factor, 1.0, 0.0, gate));
    report.push(ReportRow::info("C1", first.c1));
    report.push(ReportRow::info("C2", first.c2));
    report.push(ReportRow::info("N_T", first.n_t));
    report.push(ReportRow::info("T*", first.t_star));
    let mut reports = vec![first.clone()];

    let mut t_iter = horizon;
    let mut factor = first.measured_factor;
    if first.t_star.is_finite() {
        let (pu, put) = paths(first.t_star)?;
        let at_star = contraction_factor(table, nu, &pu, &put, bp, probes, seed)?;
        report.push(ReportRow::new("factor at T=T*", at_star.measured_factor, 1.0, 0.0, Gate::Below));
        if first.t_star < horizon {
            t_iter = first.t_star;
            factor = at_star.measured_factor;
        }
        reports.push(at_star);
    }

    let (pu, put) = paths(t_iter)?;
    let iteration_ratios: Vec<f64> = (0..probes as u64)
        .into_par_iter()
        .map(|i| {
            let v = probe_path(&lattice, nu, pu.dt, steps, child_seed(seed, 1000), i)?;
            let norms = fixed_point_iteration(table, nu, &v, &pu, &put, bp, iterations)?;
            Ok((norms[iterations] / norms[0]).powf(1.0 / iterations as f64))
        })
        .collect::<Result<_>>()?;
    let worst = iteration_ratios.iter().cloned().fold(0.0f64, f64::max);
    report.push(ReportRow::new("max geometric iteration ratio", worst, factor + 0.05, 0.0, Gate::AtMost));

    let unit = t_star(1.0, 1.0, 1.0, bp)?;
    let expected = 0.5f64.powf(1.0 / bp.exponent_lalpha()).min(0.5f64.powf(1.0 / bp.exponent_sup()));
    report.push(ReportRow::new("T* with C1=C2=N_T=1", unit, expected, 0.0, Gate::AbsTol(1e-15)));
    report.note(format!(
        "frozen paths, N={}, nu={nu}, {steps} steps, {probes} probes, {iterations} iterations on T={t_iter:e}",
        table.truncation()
    ));
    Ok(ContractionExperiment { reports, iteration_ratios, report })
}
