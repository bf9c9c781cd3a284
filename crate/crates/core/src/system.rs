use std::sync::Arc;

use crate::error::{Error, Result};
use crate::nonlinear::CoefficientTable;
use crate::spectral::{Lattice, SpectralField};

/// Viscosity, truncation and the shared interaction table of one Galerkin
/// system. Cloning shares the table.
#[derive(Debug, Clone)]
pub struct GalerkinSystem {
    nu: f64,
    table: Arc<CoefficientTable>,
}

impl GalerkinSystem {
    pub fn new(nu: f64, n: usize) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::InvalidParameter(format!("viscosity must be > 0, got {nu}")));
        }
        if n < 1 {
            return Err(Error::InvalidParameter("truncation must be >= 1".into()));
        }
        Ok(Self { nu, table: Arc::new(CoefficientTable::for_truncation(n)) })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn truncation(&self) -> usize {
        self.table.truncation()
    }

    pub fn table(&self) -> &CoefficientTable {
        &self.table
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        self.table.lattice()
    }

    pub fn zero_field(&self) -> SpectralField {
        SpectralField::on(self.lattice().clone())
    }

    /// Same table, different viscosity.
    pub fn with_nu(&self, nu: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::InvalidParameter(format!("viscosity must be > 0, got {nu}")));
        }
        Ok(Self { nu, table: self.table.clone() })
    }
}
