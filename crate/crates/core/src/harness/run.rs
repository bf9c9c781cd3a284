//! Command dispatch and artifact writing.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::dynamics::{blowup_limit, invariance_test_with, simulate_with, InvarianceOptions, RecordOptions};
use crate::error::{Error, Result};
use crate::measure::{moment_test, sample_mu_nu, sample_on, MeasureParams};
use crate::nonlinear::{bnorm_shape, bnorm_test, check_coefficients, check_conservation, series_table};
use crate::report::{ExperimentReport, Gate, ReportRow};
use crate::spectral::{enstrophy, fmt_f64, write_snapshot};
use crate::system::GalerkinSystem;
use crate::uniqueness::{contraction_experiment, initial_gap, shared_noise_divergence, ContractionReport};

use super::config::ExperimentConfig;

/// Reports produced by one command and the files written.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub reports: Vec<ExperimentReport>,
    pub artifacts: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed())
    }

    /// `0` when every gate passed, `2` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            2
        }
    }
}

/// Process exit status for a run: `0` pass, `2` gate failure, `1` input error.
pub fn exit_code(result: &Result<RunOutcome>) -> i32 {
    match result {
        Ok(o) => o.exit_code(),
        Err(_) => 1,
    }
}

struct Artifacts {
    dir: PathBuf,
    hash: String,
    command: String,
    written: Vec<PathBuf>,
}

impl Artifacts {
    fn header(&self) -> String {
        format!("config_hash={} command={}", self.hash, self.command)
    }

    fn write(&mut self, name: &str, units: &str, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        let path = self.dir.join(name);
        let mut w = BufWriter::new(File::create(&path)?);
        writeln!(w, "# {}", self.header())?;
        writeln!(w, "# units: {units}")?;
        body(&mut w)?;
        w.flush()?;
        self.written.push(path);
        Ok(())
    }

    fn report(&mut self, report: &mut ExperimentReport, seed: u64) -> Result<()> {
        report.provenance.config_hash = self.hash.clone();
        report.provenance.seed = seed;
        let path = self.dir.join(format!("{}.report.csv", self.command));
        let mut w = BufWriter::new(File::create(&path)?);
        report.write_csv(&mut w)?;
        w.flush()?;
        self.written.push(path);
        Ok(())
    }
}

/// Validates `config`, runs its command and writes the artifacts into the
/// output directory.
pub fn run(config: &ExperimentConfig) -> Result<RunOutcome> {
    config.validate()?;
    let dir = config.out_dir();
    if !dir.is_dir() {
        return Err(Error::MissingOutputDir(dir));
    }
    let mut art = Artifacts { dir, hash: config.hash(), command: config.command.clone(), written: Vec::new() };
    let mut report = dispatch(config, &mut art)?;
    art.report(&mut report, config.seed)?;
    Ok(RunOutcome { reports: vec![report], artifacts: art.written })
}

fn dispatch(c: &ExperimentConfig, art: &mut Artifacts) -> Result<ExperimentReport> {
    let bp = c.besov();
    match c.command.as_str() {
        "sample" => {
            let u = sample_mu_nu(&MeasureParams::new(c.nu, c.n, c.seed)?);
            let header = vec![art.header()];
            art.write_snapshot("sample.csv", &u, c.nu, &header)?;
            let mut r = ExperimentReport::new("sample");
            r.push(ReportRow::info("enstrophy", enstrophy(&u)));
            Ok(r)
        }
        "simulate" => {
            let sys = GalerkinSystem::new(c.nu, c.n)?;
            let x0 = sample_on(sys.lattice().clone(), c.nu, c.seed);
            let opts = RecordOptions {
                stride: c.stride,
                s: bp.s,
                r: c.r,
                besov: Some((bp.s, bp.p, bp.q)),
                ..RecordOptions::default()
            };
            let mut r = ExperimentReport::new(format!("simulate-{}", c.mode));
            match simulate_with(&x0, &sys, c.horizon, c.dt(), c.seed, c.mode, &opts) {
                Ok(traj) => {
                    art.write("trajectory.csv", "t in model time units; norms dimensionless", |w| traj.write_csv(w))?;
                    let header = vec![art.header(), format!("t={}", fmt_f64(c.horizon))];
                    art.write_snapshot("final.csv", &traj.final_state, c.nu, &header)?;
                    let max = traj.observations.iter().map(|o| o.enstrophy).fold(0.0f64, f64::max);
                    r.push(ReportRow::new("max enstrophy", max, blowup_limit(&x0, c.nu), 0.0, Gate::Below));
                    if let Some(b) = traj.bnorm_time_average {
                        r.push(ReportRow::info("time-avg |B|^2", b));
                    }
                }
                Err(Error::BlowUp { t, enstrophy, limit }) => {
                    r.push(ReportRow::new("max enstrophy", enstrophy, limit, 0.0, Gate::Below));
                    r.note(format!("blow-up guard tripped at t={t}"));
                }
                Err(e) => return Err(e),
            }
            r.note(format!("nu={} N={} T={} dt={} mode={}", c.nu, c.n, c.horizon, c.dt(), c.mode));
            Ok(r)
        }
        "check-coefficients" => check_coefficients(c.n),
        "check-conservation" => check_conservation(c.nu, c.n, c.ensemble, c.seed),
        "moment-test" => moment_test(&MeasureParams::new(c.nu, c.n, c.seed)?, &c.gamma_modes()?, c.moment_order, c.ensemble),
        "bnorm-test" => {
            let mut r = bnorm_test(c.nu, c.r, c.n, c.ensemble, c.seed)?;
            r.extend(bnorm_shape(c.nu, c.r, &c.shape_truncations, 0.25)?);
            Ok(r)
        }
        "series-bound" => {
            let (rows, r) = series_table(c.kmax, c.cutoff)?;
            art.write("series.csv", "|k| lattice units; S(k) in |k|^-2 units", |w| {
                writeln!(w, "norm_k,S_k,shape_ratio,tail_bound")?;
                for row in &rows {
                    writeln!(w, "{},{},{},{}", fmt_f64(row.norm), fmt_f64(row.partial), fmt_f64(row.shape), fmt_f64(row.tail_bound))?;
                }
                Ok(())
            })?;
            Ok(r)
        }
        "invariance-test" => {
            let sys = GalerkinSystem::new(c.nu, c.n)?;
            let opts = InvarianceOptions { mode: c.mode, s: bp.s, r: c.r, bias_check: true };
            invariance_test_with(&sys, c.horizon, c.dt(), c.ensemble, c.seed, &opts)
        }
        "contraction-test" => {
            let sys = GalerkinSystem::new(c.nu, c.n)?;
            let exp = contraction_experiment(sys.table(), c.nu, &bp, c.horizon, c.steps, c.probes, 6, c.seed)?;
            art.write("contraction.csv", "T in model time units", |w| ContractionReport::write_csv(&exp.reports, w))?;
            Ok(exp.report)
        }
        "uniqueness-divergence" => {
            let curve = shared_noise_divergence(c.n1, c.n2, c.nu, c.horizon, c.dt(), c.seed, &bp, c.stride)?;
            art.write("divergence.csv", "t in model time units; distance dimensionless", |w| curve.write_csv(w))?;
            let gap = initial_gap(c.n1, c.n2, c.nu, c.seed, &bp)?;
            let mut r = ExperimentReport::new("uniqueness-divergence");
            let d0 = curve.points.first().map_or(f64::NAN, |p| p.1);
            r.push(ReportRow::new("distance at t=0", d0, gap, 0.0, Gate::AbsTol(1e-12 * gap.max(1.0))));
            r.push(ReportRow::info("max distance", curve.max_distance()));
            r.push(ReportRow::info("final distance", curve.points.last().map_or(f64::NAN, |p| p.1)));
            r.note(format!("N1={} N2={} nu={} T={} dt={}", c.n1, c.n2, c.nu, c.horizon, c.dt()));
            Ok(r)
        }
        "report" => summarize(&art.dir.clone(), art),
        other => Err(Error::InvalidParameter(format!("unknown command '{other}'"))),
    }
}

impl Artifacts {
    fn write_snapshot(&mut self, name: &str, field: &crate::spectral::SpectralField, nu: f64, header: &[String]) -> Result<()> {
        let path = self.dir.join(name);
        let mut w = BufWriter::new(File::create(&path)?);
        write_snapshot(&mut w, field, nu, header)?;
        w.flush()?;
        self.written.push(path);
        Ok(())
    }
}

/// Re-reads every `*.report.csv` in `dir` (except the one `report` writes),
/// re-derives each pass flag from its row and tabulates the results.
fn summarize(dir: &Path, art: &mut Artifacts) -> Result<ExperimentReport> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.ends_with(".report.csv") && n != "report.report.csv")
        })
        .collect();
    paths.sort();
    let mut loaded = Vec::new();
    for p in &paths {
        loaded.push((p.clone(), ExperimentReport::read_csv(BufReader::new(File::open(p)?))?));
    }
    let mut r = ExperimentReport::new("report");
    for (p, rep) in &loaded {
        let failed = rep.failures().count();
        let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("?").trim_end_matches(".report.csv").to_string();
        r.push(ReportRow::new(format!("{name} failed rows"), failed as f64, 0.0, 0.0, Gate::AtMost));
        r.push(ReportRow::new(format!("{name} audit mismatches"), (!rep.audit()) as u8 as f64, 0.0, 0.0, Gate::AtMost));
    }
    art.write("summary.csv", "counts", |w| {
        writeln!(w, "experiment,config_hash,rows,failed,audit_ok")?;
        for (_, rep) in &loaded {
            writeln!(w, "{},{},{},{},{}", rep.id, rep.provenance.config_hash, rep.rows.len(), rep.failures().count(), rep.audit())?;
        }
        Ok(())
    })?;
    r.note(format!("{} reports in {}", loaded.len(), dir.display()));
    Ok(r)
}
