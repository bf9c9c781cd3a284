//! Fields sampled on a uniform time grid and their mixed space-time norms.

use crate::error::{Error, Result};
use crate::spectral::{besov_norm, SpectralField};

use super::params::BesovParams;

/// `fields[n]` is the value at `t = n·dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldPath {
    pub dt: f64,
    pub fields: Vec<SpectralField>,
}

impl FieldPath {
    pub fn new(dt: f64, fields: Vec<SpectralField>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("time step must be > 0, got {dt}")));
        }
        if fields.len() < 2 {
            return Err(Error::GridMismatch("a path needs at least two time points".into()));
        }
        let n = fields[0].truncation();
        if let Some(f) = fields.iter().find(|f| f.truncation() != n) {
            return Err(Error::TruncationMismatch(n, f.truncation()));
        }
        Ok(Self { dt, fields })
    }

    /// Constant path over `[0, T]` with `steps` intervals.
    pub fn frozen(field: &SpectralField, t_end: f64, steps: usize) -> Result<Self> {
        Self::new(t_end / steps as f64, vec![field.clone(); steps + 1])
    }

    pub fn steps(&self) -> usize {
        self.fields.len() - 1
    }

    pub fn horizon(&self) -> f64 {
        self.dt * self.steps() as f64
    }

    pub fn truncation(&self) -> usize {
        self.fields[0].truncation()
    }

    /// The path on `[0, steps·dt]`.
    pub fn prefix(&self, steps: usize) -> Result<Self> {
        if steps == 0 || steps > self.steps() {
            return Err(Error::GridMismatch(format!("prefix of {steps} steps from a path of {}", self.steps())));
        }
        Self::new(self.dt, self.fields[..=steps].to_vec())
    }

    pub fn scale(&self, a: f64) -> Self {
        Self { dt: self.dt, fields: self.fields.iter().map(|f| f.scale(a)).collect() }
    }

    /// `a·self + b·other` on a shared grid.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.check_grid(other)?;
        let fields = self.fields.iter().zip(&other.fields).map(|(x, y)| &x.scale(a) + &y.scale(b)).collect();
        Ok(Self { dt: self.dt, fields })
    }

    pub fn is_zero(&self) -> bool {
        self.fields.iter().all(|f| f.is_zero())
    }

    pub fn check_grid(&self, other: &Self) -> Result<()> {
        if self.fields.len() != other.fields.len() || (self.dt - other.dt).abs() > 1e-12 * self.dt {
            return Err(Error::GridMismatch(format!(
                "{} points at dt={} vs {} points at dt={}",
                self.fields.len(),
                self.dt,
                other.fields.len(),
                other.dt
            )));
        }
        if self.truncation() != other.truncation() {
            return Err(Error::TruncationMismatch(self.truncation(), other.truncation()));
        }
        Ok(())
    }

    /// `max_n ‖v(t_n)‖_{B^{-s}_{p,q}}`.
    pub fn sup_norm(&self, bp: &BesovParams) -> Result<f64> {
        self.fields.iter().try_fold(0.0f64, |m, f| Ok(m.max(besov_norm(f, -bp.s, bp.p, bp.q)?)))
    }

    /// Trapezoidal `(∫₀ᵀ ‖v(t)‖^α_{B^a_{p,q}} dt)^{1/α}`.
    pub fn lalpha_norm(&self, bp: &BesovParams) -> Result<f64> {
        let last = self.steps();
        let mut sum = 0.0;
        for (n, f) in self.fields.iter().enumerate() {
            let w = if n == 0 || n == last { 0.5 } else { 1.0 };
            sum += w * besov_norm(f, bp.a, bp.p, bp.q)?.powf(bp.alpha);
        }
        Ok((self.dt * sum).powf(1.0 / bp.alpha))
    }

    /// `‖v‖_{V_T} = ‖v‖_{C(B^{-s})} + ‖v‖_{L^α(B^a)}`.
    pub fn vt_norm(&self, bp: &BesovParams) -> Result<f64> {
        Ok(self.sup_norm(bp)? + self.lalpha_norm(bp)?)
    }
}
