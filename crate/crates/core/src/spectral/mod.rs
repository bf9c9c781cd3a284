//! Wave-index lattice, spectral fields, grid synthesis and norms.

mod field;
mod lattice;
mod norms;
mod snapshot;

pub use field::{basis_eval, evaluate_at, min_grid, synthesize, GridField, ScalarSpectral, SpectralField};
pub use lattice::{Lattice, WaveIndex};
pub use norms::{
    besov_norm, dyadic_block, dyadic_blocks, enstrophy, field_lp_norm, heat_semigroup, lp_norm,
    quadrature_grid, scalar_l2_sq, sobolev_norm, stokes_apply, vorticity_and_stream,
};
pub use snapshot::{fmt_f64, read_snapshot, write_snapshot};
