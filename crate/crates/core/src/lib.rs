pub mod cli;
pub mod convergence;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod grid;
pub mod io;
pub mod observables;
pub mod reg;
pub mod spectral;
pub mod suites;

pub use dynamics::{IntegratorConfig, Model, Scheme, State, Stepper};
pub use error::{Error, Result};
pub use field::{Field, Kind};
pub use grid::{Grid, GridSpec};
pub use observables::ObsRecord;
pub use reg::{Mode, RegLevel};
