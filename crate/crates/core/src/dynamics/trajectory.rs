//! Recorded trajectories and their CSV form.

use std::io::Write;

use crate::error::{Error, Result};
use crate::nonlinear::{bnorm_sq, nonlinear_term};
use crate::spectral::{besov_norm, enstrophy, fmt_f64, sobolev_norm, SpectralField, WaveIndex};
use crate::system::GalerkinSystem;

use super::integrator::{integrate, step_count, Mode};
use super::noise::NoiseStream;

/// What [`simulate_with`] records.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordOptions {
    /// Record every `stride` steps (the final time is always recorded).
    pub stride: u64,
    /// `h_norm_msq = ‖u‖²_{H^{-s}}`.
    pub s: f64,
    /// `bnorm_msq = ‖B(u)‖²_{H^{-r-1}}`.
    pub r: f64,
    /// Modes whose `|u_k|²` is recorded.
    pub modes: Vec<WaveIndex>,
    /// Optional `(s, p, q)` for a recorded `B^{-s}_{p,q}` norm.
    pub besov: Option<(f64, f64, f64)>,
    /// Keep the recorded states.
    pub keep_states: bool,
}

impl Default for RecordOptions {
    fn default() -> Self {
        Self {
            stride: 10,
            s: 1.0 / 6.0,
            r: 0.5,
            modes: vec![WaveIndex { k1: 1, k2: 0 }],
            besov: None,
            keep_states: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub t: f64,
    pub enstrophy: f64,
    pub h_norm_msq: f64,
    pub bnorm_msq: f64,
    pub modes: Vec<(WaveIndex, f64)>,
    pub besov: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub nu: f64,
    pub truncation: usize,
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
    pub observations: Vec<Observation>,
    /// Left-endpoint time average of `‖B(u)‖²_{H^{-r-1}}` over every step
    /// (full mode only).
    pub bnorm_time_average: Option<f64>,
    pub final_state: SpectralField,
}

impl Trajectory {
    /// Writes `t,enstrophy,h_norm_msq,bnorm_msq,mode_k1,mode_k2,abs_u_sq`,
    /// one row per recorded time and tracked mode.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,enstrophy,h_norm_msq,bnorm_msq,mode_k1,mode_k2,abs_u_sq")?;
        for o in &self.observations {
            let head = format!("{},{},{},{}", fmt_f64(o.t), fmt_f64(o.enstrophy), fmt_f64(o.h_norm_msq), fmt_f64(o.bnorm_msq));
            if o.modes.is_empty() {
                writeln!(w, "{head},,,")?;
            }
            for (k, a) in &o.modes {
                writeln!(w, "{head},{},{},{}", k.k1, k.k2, fmt_f64(*a))?;
            }
        }
        Ok(())
    }

    pub fn enstrophy_series(&self) -> Vec<f64> {
        self.observations.iter().map(|o| o.enstrophy).collect()
    }
}

/// [`simulate_with`] using default recording options.
pub fn simulate(x0: &SpectralField, sys: &GalerkinSystem, t_end: f64, dt: f64, seed: u64, mode: Mode) -> Result<Trajectory> {
    simulate_with(x0, sys, t_end, dt, seed, mode, &RecordOptions::default())
}

pub fn simulate_with(
    x0: &SpectralField,
    sys: &GalerkinSystem,
    t_end: f64,
    dt: f64,
    seed: u64,
    mode: Mode,
    opts: &RecordOptions,
) -> Result<Trajectory> {
    if !(t_end > 0.0) {
        return Err(Error::InvalidParameter(format!("horizon must be > 0, got {t_end}")));
    }
    if dt > t_end {
        return Err(Error::InvalidParameter(format!("time step {dt} exceeds horizon {t_end}")));
    }
    if opts.stride == 0 {
        return Err(Error::InvalidParameter("record stride must be >= 1".into()));
    }
    for &k in &opts.modes {
        if !k.is_upper() {
            return Err(Error::NotUpperHalf { k1: k.k1, k2: k.k2 });
        }
        if !k.within(sys.truncation()) {
            return Err(Error::OutsideTruncation(k, sys.truncation()));
        }
    }
    let steps = step_count(t_end, dt)?;
    let noise = NoiseStream::new(seed, dt)?;
    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut observations = Vec::new();
    let mut bsum = 0.0;
    let mut failure = None;

    let final_state = integrate(x0, sys, &noise, steps, mode, |n, u, b| {
        let bn = b.map(|b| bnorm_sq(b, opts.r));
        if n < steps {
            if let Some(v) = bn {
                bsum += v;
            }
        }
        if n % opts.stride != 0 && n != steps {
            return;
        }
        let bnorm_msq = match bn {
            Some(v) => v,
            None => match nonlinear_term(sys.table(), u) {
                Ok(b) => bnorm_sq(&b, opts.r),
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
        };
        let besov = opts.besov.map(|(s, p, q)| match besov_norm(u, -s, p, q) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        });
        let t = n as f64 * dt;
        times.push(t);
        observations.push(Observation {
            t,
            enstrophy: enstrophy(u),
            h_norm_msq: sobolev_norm(u, -opts.s).powi(2),
            bnorm_msq,
            modes: opts.modes.iter().map(|&k| (k, u.get(k).map(|c| c.norm_sqr()).unwrap_or(f64::NAN))).collect(),
            besov,
        });
        if opts.keep_states {
            states.push(u.clone());
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Trajectory {
        nu: sys.nu(),
        truncation: sys.truncation(),
        times,
        states,
        observations,
        bnorm_time_average: (mode == Mode::Full && steps > 0).then(|| bsum / steps as f64),
        final_state,
    })
}
