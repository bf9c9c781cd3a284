//! Exponential Euler stepping of the truncated SDE
//! `du_k + [ν|k|² u_k + B_k(u)] dt = dβ_k`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::nonlinear::nonlinear_term;
use crate::spectral::{enstrophy, Lattice, SpectralField};
use crate::system::GalerkinSystem;

use super::noise::NoiseStream;

/// Which drift terms are integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Full,
    /// Ornstein-Uhlenbeck reference, `B ≡ 0`.
    LinearOnly,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Mode::Full),
            "linear-only" | "linear" => Ok(Mode::LinearOnly),
            other => Err(Error::InvalidParameter(format!("unknown dynamics mode '{other}'"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Full => "full",
            Mode::LinearOnly => "linear-only",
        })
    }
}

/// `φ(z) = (1 - e^{-z}) / z`, with `φ(0) = 1`.
pub fn phi(z: f64) -> f64 {
    if z.abs() < 1e-8 {
        1.0 - 0.5 * z
    } else {
        -(-z).exp_m1() / z
    }
}

/// Per-mode factors of one exponential Euler step.
#[derive(Debug, Clone)]
pub struct StepFactors {
    dt: f64,
    decay: Vec<f64>,
    drift: Vec<f64>,
    noise: Vec<f64>,
}

impl StepFactors {
    pub fn new(lattice: &Lattice, nu: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("time step must be > 0, got {dt}")));
        }
        let n = lattice.len();
        let (mut decay, mut drift, mut noise) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for &k in lattice.modes() {
            let lam = nu * k.norm_sq() as f64;
            let z = lam * dt;
            decay.push((-z).exp());
            drift.push(phi(z) * dt);
            // η = sqrt((1 - e^{-2λdt}) / (2λ)) · Δβ / sqrt(dt)
            noise.push((-(-2.0 * z).exp_m1() / (2.0 * lam * dt)).sqrt());
        }
        Ok(Self { dt, decay, drift, noise })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Applies the update in place given `B(u)` (or `None` for `B ≡ 0`) and
    /// the Wiener increments of this step.
    pub fn apply(&self, u: &mut SpectralField, b: Option<&SpectralField>, increments: &[Complex64]) {
        let c = u.coeffs_mut();
        match b {
            Some(b) => {
                for (i, x) in c.iter_mut().enumerate() {
                    *x = *x * self.decay[i] - b.coeffs()[i] * self.drift[i] + increments[i] * self.noise[i];
                }
            }
            None => {
                for (i, x) in c.iter_mut().enumerate() {
                    *x = *x * self.decay[i] + increments[i] * self.noise[i];
                }
            }
        }
    }
}

/// One exponential Euler step with the given Wiener increments (one per
/// stored mode, `E|Δβ_k|² = dt`).
pub fn step(u: &SpectralField, sys: &GalerkinSystem, dt: f64, noise: &[Complex64]) -> Result<SpectralField> {
    step_mode(u, sys, dt, noise, Mode::Full)
}

pub fn step_mode(u: &SpectralField, sys: &GalerkinSystem, dt: f64, noise: &[Complex64], mode: Mode) -> Result<SpectralField> {
    if noise.len() != u.coeffs().len() {
        return Err(Error::InvalidParameter(format!(
            "expected {} increments, got {}",
            u.coeffs().len(),
            noise.len()
        )));
    }
    let factors = StepFactors::new(u.lattice(), sys.nu(), dt)?;
    let mut next = u.clone();
    match mode {
        Mode::Full => {
            let b = nonlinear_term(sys.table(), u)?;
            factors.apply(&mut next, Some(&b), noise);
        }
        Mode::LinearOnly => factors.apply(&mut next, None, noise),
    }
    if !next.is_finite() {
        return Err(Error::NonFinite("state after step"));
    }
    Ok(next)
}

/// Explicit Euler-Maruyama step `u - (ν|k|² u + B(u)) dt + Δβ`.
pub fn euler_maruyama_step(u: &SpectralField, sys: &GalerkinSystem, dt: f64, noise: &[Complex64]) -> Result<SpectralField> {
    let b = nonlinear_term(sys.table(), u)?;
    let nu = sys.nu();
    let coeffs = u
        .iter()
        .zip(b.coeffs())
        .zip(noise)
        .map(|(((k, x), bk), dw)| x - (x * (nu * k.norm_sq() as f64) + bk) * dt + dw)
        .collect();
    SpectralField::from_coeffs(u.lattice().clone(), coeffs)
}

/// Enstrophy ceiling for the blow-up guard: `10⁶` times the initial
/// enstrophy, or times the stationary mean `#Z²₊/ν` when starting from rest.
pub fn blowup_limit(x0: &SpectralField, nu: f64) -> f64 {
    let s0 = enstrophy(x0);
    let reference = if s0 > 0.0 { s0 } else { x0.coeffs().len() as f64 / nu };
    1e6 * reference
}

/// Integrates `steps` steps, calling `observe(step, u, B(u))` before every
/// step and once at the end (where `B(u)` is also evaluated). `B` is passed
/// only in full mode.
pub fn integrate(
    x0: &SpectralField,
    sys: &GalerkinSystem,
    noise: &NoiseStream,
    steps: u64,
    mode: Mode,
    mut observe: impl FnMut(u64, &SpectralField, Option<&SpectralField>),
) -> Result<SpectralField> {
    if x0.truncation() != sys.truncation() {
        return Err(Error::TruncationMismatch(x0.truncation(), sys.truncation()));
    }
    let factors = StepFactors::new(sys.lattice(), sys.nu(), noise.dt())?;
    let limit = blowup_limit(x0, sys.nu());
    let mut u = x0.clone();
    for n in 0..=steps {
        let b = match mode {
            Mode::Full => Some(nonlinear_term(sys.table(), &u)?),
            Mode::LinearOnly => None,
        };
        observe(n, &u, b.as_ref());
        if n == steps {
            break;
        }
        let inc = noise.increments(n, sys.lattice());
        factors.apply(&mut u, b.as_ref(), &inc);
        let s = enstrophy(&u);
        if !s.is_finite() || s > limit {
            return Err(Error::BlowUp { t: (n + 1) as f64 * noise.dt(), enstrophy: s, limit });
        }
    }
    Ok(u)
}

/// Number of steps of length `dt` covering `[0, T]`; `dt` must divide `T`
/// up to rounding.
pub fn step_count(t_end: f64, dt: f64) -> Result<u64> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("time step must be > 0, got {dt}")));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!("horizon must be >= 0, got {t_end}")));
    }
    let ratio = t_end / dt;
    let steps = ratio.round();
    if (ratio - steps).abs() > 1e-6 * ratio.max(1.0) {
        return Err(Error::InvalidParameter(format!("time step {dt} does not divide horizon {t_end}")));
    }
    Ok(steps as u64)
}

/// Default step: `1e-3` for `N <= 8`, halved per doubling of `N`.
pub fn default_dt(n: usize) -> f64 {
    let mut dt = 1e-3;
    let mut m = 8;
    while n > m {
        dt *= 0.5;
        m *= 2;
    }
    dt
}
