use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::ObsRecord;

use super::integrator::Stepper;
use super::state::State;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Final time.
    pub horizon: f64,
    /// Steps between recorded samples; the final step is always recorded.
    pub sample_every: usize,
    /// Keep full states alongside the records.
    #[serde(default)]
    pub keep_states: bool,
}

impl RunConfig {
    pub fn new(horizon: f64, sample_every: usize) -> RunConfig {
        RunConfig {
            horizon,
            sample_every,
            keep_states: false,
        }
    }

    pub fn keeping_states(mut self) -> RunConfig {
        self.keep_states = true;
        self
    }

    /// Number of steps from `t0` to the horizon; the gap must be a whole
    /// number of steps.
    pub fn steps_from(&self, t0: f64, dt: f64) -> Result<usize> {
        let span = self.horizon - t0;
        if !(span >= -1e-12 * self.horizon.abs().max(1.0)) || !self.horizon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "horizon {} lies before the start time {t0}",
                self.horizon
            )));
        }
        if self.sample_every == 0 {
            return Err(Error::InvalidParameter("sample_every must be >= 1".into()));
        }
        let steps = (span / dt).round().max(0.0);
        if (steps * dt - span).abs() > 1e-9 * self.horizon.abs().max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "horizon span {span} is not a whole number of steps of {dt}"
            )));
        }
        Ok(steps as usize)
    }
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub step: usize,
    pub record: ObsRecord,
    pub state: Option<State>,
}

#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn records(&self) -> Vec<ObsRecord> {
        self.samples.iter().map(|s| s.record).collect()
    }

    /// Kept states in sample order (empty unless `keep_states`).
    pub fn states(&self) -> Vec<&State> {
        self.samples.iter().filter_map(|s| s.state.as_ref()).collect()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }
}

/// A failed run together with everything recorded before the failure.
#[derive(Debug)]
pub struct RunFailure {
    pub error: Error,
    pub partial: Trajectory,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} after {} samples", self.error, self.partial.samples.len())
    }
}

impl std::error::Error for RunFailure {}

impl From<RunFailure> for Error {
    fn from(f: RunFailure) -> Error {
        f.error
    }
}

/// Advances `initial` to the horizon, recording observables every
/// `sample_every` steps. `hook` sees each sample with its full state.
pub fn run_with(
    stepper: &Stepper,
    initial: State,
    cfg: &RunConfig,
    mut hook: impl FnMut(&Sample, &State) -> Result<()>,
) -> std::result::Result<Trajectory, RunFailure> {
    let mut traj = Trajectory::default();
    let fail = |error, traj| RunFailure { error, partial: traj };
    let steps = match cfg.steps_from(initial.t, stepper.config().dt) {
        Ok(s) => s,
        Err(e) => return Err(fail(e, traj)),
    };
    let t0 = initial.t;
    let dt = stepper.config().dt;
    let mut state = initial;
    let mut record = |step: usize, state: &State, traj: &mut Trajectory| -> Result<()> {
        let sample = Sample {
            step,
            record: ObsRecord::compute(state, stepper.model()),
            state: cfg.keep_states.then(|| state.clone()),
        };
        hook(&sample, state)?;
        traj.samples.push(sample);
        Ok(())
    };
    if let Err(e) = record(0, &state, &mut traj) {
        return Err(fail(e, traj));
    }
    for k in 1..=steps {
        state = match stepper.step(&state) {
            Ok(s) => s,
            Err(e) => return Err(fail(e, traj)),
        };
        // Pin sample times to the grid `t0 + k dt` to avoid drift from summation.
        state.t = t0 + k as f64 * dt;
        if k % cfg.sample_every == 0 || k == steps {
            if let Err(e) = record(k, &state, &mut traj) {
                return Err(fail(e, traj));
            }
        }
    }
    Ok(traj)
}

pub fn run(stepper: &Stepper, initial: State, cfg: &RunConfig) -> std::result::Result<Trajectory, RunFailure> {
    run_with(stepper, initial, cfg, |_, _| Ok(()))
}

/// Final state after advancing to `horizon`, without observables.
pub fn evolve(stepper: &Stepper, initial: State, horizon: f64) -> Result<State> {
    let dt = stepper.config().dt;
    let steps = RunConfig::new(horizon, 1).steps_from(initial.t, dt)?;
    let t0 = initial.t;
    let mut s = initial;
    for k in 1..=steps {
        s = stepper.step(&s)?;
        s.t = t0 + k as f64 * dt;
    }
    Ok(s)
}
