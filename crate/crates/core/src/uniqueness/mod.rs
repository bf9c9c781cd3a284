//! The contraction argument behind pathwise uniqueness: admissible
//! parameters, the mild map of the difference equation, its measured
//! operator norm and horizon, and shared-noise truncation comparisons.

mod contraction;
mod divergence;
mod mild;
mod params;
mod path;

pub use contraction::{
    bilinear_constant, contraction_experiment, ContractionExperiment, contraction_factor, fixed_point_iteration, probe_path, ContractionReport,
};
pub use divergence::{divergence_sequence, initial_gap, shared_noise_divergence, DivergenceCurve};
pub use mild::{bilinear_estimate_probe, mild_map};
pub use params::{require_valid, t_star, validate_params, BesovParams, Clause};
pub use path::FieldPath;
