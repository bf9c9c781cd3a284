//! Brownian forcing, time integration of the truncated SDE and the
//! invariance check for `μ_ν`.

mod integrator;
mod invariance;
mod noise;
mod trajectory;

pub use integrator::{
    blowup_limit, default_dt, euler_maruyama_step, integrate, phi, step, step_count, step_mode, Mode, StepFactors,
};
pub use invariance::{invariance_test, invariance_test_with, InvarianceOptions};
pub use noise::NoiseStream;
pub use trajectory::{simulate, simulate_with, Observation, RecordOptions, Trajectory};
