//! Ensemble check that `μ_ν` is preserved by the truncated dynamics.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::{mode_covariance, sample_on};
use crate::nonlinear::{bnorm_second_moment_analytic, bnorm_sq, nonlinear_term};
use crate::report::{ExperimentReport, Gate, ReportRow};
use crate::rng::child_seed;
use crate::spectral::{enstrophy, sobolev_norm, SpectralField};
use crate::stats::MeanEstimate;
use crate::system::GalerkinSystem;

use super::integrator::{integrate, step_count, Mode};
use super::noise::NoiseStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceOptions {
    pub mode: Mode,
    /// Exponent of the `H^{-s}` functional.
    pub s: f64,
    /// `B` is measured in `H^{-r-1}`.
    pub r: f64,
    /// Rerun every member at step `2 dt` on the same Brownian path and use the
    /// difference of the two estimates as a time-discretization allowance.
    pub bias_check: bool,
}

impl Default for InvarianceOptions {
    fn default() -> Self {
        Self { mode: Mode::Full, s: 1.0 / 6.0, r: 0.5, bias_check: true }
    }
}

// functionals of one state: |u_k|² per stored mode, enstrophy, H^{-s}, B-norm
fn functionals(u: &SpectralField, b: &SpectralField, opts: &InvarianceOptions) -> Vec<f64> {
    let mut out: Vec<f64> = u.coeffs().iter().map(|c| c.norm_sqr()).collect();
    out.push(enstrophy(u));
    out.push(sobolev_norm(u, -opts.s).powi(2));
    out.push(bnorm_sq(b, opts.r));
    out
}

struct MemberRun {
    start: Vec<f64>,
    end: Vec<f64>,
    bnorm_avg: f64,
}

fn run_member(
    x0: &SpectralField,
    sys: &GalerkinSystem,
    noise: &NoiseStream,
    steps: u64,
    opts: &InvarianceOptions,
) -> Result<MemberRun> {
    let mut start = Vec::new();
    let mut end = Vec::new();
    let mut bsum = 0.0;
    let mut failure = None;
    integrate(x0, sys, noise, steps, opts.mode, |n, u, b| {
        let owned;
        let b = match b {
            Some(b) => b,
            None => match nonlinear_term(sys.table(), u) {
                Ok(b) => {
                    owned = b;
                    &owned
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    return;
                }
            },
        };
        if n == 0 || n == steps {
            let f = functionals(u, b, opts);
            if n == 0 {
                start = f.clone();
            }
            if n == steps {
                end = f;
            }
        }
        if n < steps {
            bsum += bnorm_sq(b, opts.r);
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let bnorm_avg = if steps == 0 { *start.last().unwrap_or(&f64::NAN) } else { bsum / steps as f64 };
    Ok(MemberRun { start, end, bnorm_avg })
}

/// [`invariance_test_with`] with default options (full dynamics, `s = 1/6`,
/// `r = 1/2`, bias check on).
pub fn invariance_test(sys: &GalerkinSystem, t_end: f64, dt: f64, m: usize, seed: u64) -> Result<ExperimentReport> {
    invariance_test_with(sys, t_end, dt, m, seed, &InvarianceOptions::default())
}

/// Draws `m` initial fields from `μ_ν`, integrates each to `t_end` with its
/// own noise stream, and compares ensemble means at `t_end` (and the time
/// average of the `B`-norm over `[0, t_end]`) with their `μ_ν` values at
/// 3 SE. Statistics at `t = 0` are recorded as info rows.
pub fn invariance_test_with(
    sys: &GalerkinSystem,
    t_end: f64,
    dt: f64,
    m: usize,
    seed: u64,
    opts: &InvarianceOptions,
) -> Result<ExperimentReport> {
    if m < 100 {
        return Err(Error::InvalidParameter(format!("invariance test needs M >= 100, got {m}")));
    }
    let steps = step_count(t_end, dt)?;
    let coarse = opts.bias_check && steps >= 2 && steps % 2 == 0;
    let lattice = sys.lattice().clone();
    let nu = sys.nu();

    let runs: Vec<(MemberRun, Option<MemberRun>)> = (0..m as u64)
        .into_par_iter()
        .map(|i| {
            let member = child_seed(seed, i);
            let x0 = sample_on(lattice.clone(), nu, member);
            let noise = NoiseStream::new(member, dt)?;
            let fine = run_member(&x0, sys, &noise, steps, opts)?;
            let rough = if coarse { Some(run_member(&x0, sys, &noise.coarsened(2), steps / 2, opts)?) } else { None };
            Ok((fine, rough))
        })
        .collect::<Result<_>>()?;

    let column = |f: &dyn Fn(&(MemberRun, Option<MemberRun>)) -> f64| -> MeanEstimate {
        MeanEstimate::from_samples(&runs.iter().map(f).collect::<Vec<_>>())
    };
    let allowance = |j: usize, fine: &MeanEstimate| -> f64 {
        if !coarse {
            return 0.0;
        }
        let c = column(&|r| r.1.as_ref().map_or(f64::NAN, |c| c.end[j]));
        (fine.mean - c.mean).abs()
    };

    let mut targets: Vec<(String, f64)> = lattice
        .modes()
        .iter()
        .map(|&k| (format!("|u_{k}|^2"), mode_covariance(nu, k)))
        .collect();
    targets.push(("enstrophy".into(), lattice.len() as f64 / nu));
    let hs: f64 = lattice.modes().iter().map(|&k| 2.0 * (k.norm_sq() as f64).powf(-opts.s) * mode_covariance(nu, k)).sum();
    targets.push((format!("|u|^2_H^{:.4}", -opts.s), hs));
    let b_target = bnorm_second_moment_analytic(nu, opts.r, sys.truncation());
    targets.push((format!("|B|^2_H^{:.4}", -opts.r - 1.0), b_target));

    let mut report = ExperimentReport::new(format!("invariance-test-{}", opts.mode));
    report.provenance.seed = seed;
    let mut max_allow: f64 = 0.0;
    for (j, (name, target)) in targets.iter().enumerate() {
        let start = column(&|r| r.0.start[j]);
        report.push(ReportRow::new(format!("t=0 {name}"), start.mean, *target, start.std_error, Gate::Info));
    }
    for (j, (name, target)) in targets.iter().enumerate() {
        let end = column(&|r| r.0.end[j]);
        let a = allowance(j, &end);
        max_allow = max_allow.max(a / target);
        report.push(ReportRow::from_mean(format!("t=T {name}"), &end, *target, Gate::Sigma { sigmas: 3.0, allowance: a }));
    }
    let avg = column(&|r| r.0.bnorm_avg);
    let avg_allow = if coarse {
        (avg.mean - column(&|r| r.1.as_ref().map_or(f64::NAN, |c| c.bnorm_avg)).mean).abs()
    } else {
        0.0
    };
    report.push(ReportRow::from_mean(
        format!("time-avg |B|^2_H^{:.4}", -opts.r - 1.0),
        &avg,
        b_target,
        Gate::Sigma { sigmas: 3.0, allowance: avg_allow },
    ));
    report.note(format!("nu={nu} N={} T={t_end} dt={dt} M={m} steps={steps} mode={}", sys.truncation(), opts.mode));
    if coarse {
        report.note(format!(
            "dt-bias allowance |est(dt) - est(2dt)| on a shared Brownian path; largest relative allowance {max_allow:.3e}, time-average allowance {avg_allow:.3e}"
        ));
    } else {
        report.note("no dt-bias allowance (bias check off or odd step count)");
    }
    Ok(report)
}
