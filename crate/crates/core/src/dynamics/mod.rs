//! The (regularized) system, its time integrators and solvers.

pub mod initial;
mod integrator;
mod model;
mod picard;
mod run;
mod state;

pub use initial::{regularized_initial_data, DataSpec, InitialData, ModeTerm};
pub use integrator::{step, IntegratorConfig, Scheme, Stepper, BLOW_UP_THRESHOLD, RK4_STABILITY};
pub use model::{rhs, Interaction, Model};
pub use picard::{cumulative_integral, picard_solve, PicardConfig, PicardSolution, DIVERGENT_SWEEPS};
pub use run::{evolve, run, run_with, RunConfig, RunFailure, Sample, Trajectory};
pub use state::{State, Tangent};

