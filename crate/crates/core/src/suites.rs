//! Verification drivers shared by the command line and the test suites.

use serde::Serialize;

use crate::dynamics::{picard_solve, run, PicardConfig, RunConfig, State, Stepper};
use crate::error::{Error, Result};
use crate::observables::{
    coercivity_check, envelope_check, envelope_fit, second_energy_rate_check, Coercivity, EnvelopeModel, GnConstants,
    ObsRecord, RateCheck,
};
use crate::spectral::norms::l2_norm_sq;

/// Largest relative deviation of `f(record)` from its initial value.
pub fn relative_drift(records: &[ObsRecord], f: impl Fn(&ObsRecord) -> f64) -> f64 {
    let Some(first) = records.first() else { return 0.0 };
    let f0 = f(first);
    let scale = f0.abs().max(f64::MIN_POSITIVE);
    records.iter().map(|r| (f(r) - f0).abs() / scale).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Drift {
    pub dt: f64,
    pub q: f64,
    pub en: f64,
}

impl Drift {
    pub fn of(dt: f64, records: &[ObsRecord]) -> Drift {
        Drift {
            dt,
            q: relative_drift(records, |r| r.q),
            en: relative_drift(records, |r| r.en),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConservationReport {
    pub drift: Drift,
    pub q_limit: f64,
    pub en_limit: f64,
    pub passed: bool,
}

pub fn conservation(records: &[ObsRecord], dt: f64, q_limit: f64, en_limit: f64) -> ConservationReport {
    let drift = Drift::of(dt, records);
    ConservationReport {
        drift,
        q_limit,
        en_limit,
        passed: drift.q <= q_limit && drift.en <= en_limit,
    }
}

/// Drifts of one initial state on a ladder of step sizes.
pub fn drift_ladder(stepper: &Stepper, initial: &State, horizon: f64, dts: &[f64]) -> Result<Vec<Drift>> {
    dts.iter()
        .map(|&dt| {
            let mut cfg = *stepper.config();
            cfg.dt = dt;
            let s = Stepper::new(stepper.model().clone(), cfg)?;
            let traj = run(&s, initial.clone(), &RunConfig::new(horizon, 1))?;
            Ok(Drift::of(dt, &traj.records()))
        })
        .collect()
}

/// `log2` of consecutive ratios, `None` where a ratio is not positive.
pub fn halving_orders(values: &[f64]) -> Vec<Option<f64>> {
    values
        .windows(2)
        .map(|w| {
            let r = w[0] / w[1];
            (r > 0.0 && r.is_finite()).then(|| r.log2())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondEnergyLadder {
    pub checks: Vec<RateCheck>,
    /// Least-squares slope of `log mismatch` against `log dt`.
    pub order: f64,
    pub target: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Centered-difference `F_n'` checks with samples at every step, for each
/// step size in `dts`.
pub fn second_energy_ladder(
    stepper: &Stepper,
    initial: &State,
    horizon: f64,
    dts: &[f64],
    target: f64,
    tolerance: f64,
) -> Result<SecondEnergyLadder> {
    if dts.len() < 2 {
        return Err(Error::InvalidParameter("step ladder needs at least 2 sizes".into()));
    }
    let checks = dts
        .iter()
        .map(|&dt| {
            let mut cfg = *stepper.config();
            cfg.dt = dt;
            let s = Stepper::new(stepper.model().clone(), cfg)?;
            let traj = run(&s, initial.clone(), &RunConfig::new(horizon, 1).keeping_states())?;
            let states: Vec<State> = traj.samples.into_iter().filter_map(|s| s.state).collect();
            second_energy_rate_check(&states, stepper.model())
        })
        .collect::<Result<Vec<_>>>()?;
    let xy: Vec<(f64, f64)> = checks
        .iter()
        .map(|c| (c.spacing.ln(), c.max_mismatch.max(f64::MIN_POSITIVE).ln()))
        .collect();
    let order = slope(&xy);
    Ok(SecondEnergyLadder {
        passed: (order - target).abs() <= tolerance,
        checks,
        order,
        target,
        tolerance,
    })
}

fn slope(xy: &[(f64, f64)]) -> f64 {
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeReport {
    pub model: EnvelopeModel,
    pub slack: f64,
    pub passed: bool,
}

pub fn envelope(records: &[ObsRecord], dim: usize, slack: f64) -> Result<EnvelopeReport> {
    let series: Vec<(f64, f64)> = records.iter().map(|r| (r.t, r.h2_triple())).collect();
    let model = envelope_fit(&series, dim)?;
    Ok(EnvelopeReport {
        passed: envelope_check(&model, slack),
        model,
        slack,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoercivityReport {
    pub gn: GnConstants,
    pub phi_l2: f64,
    /// Sample with the smallest slack.
    pub worst: Coercivity,
    pub samples: usize,
    pub passed: bool,
}

pub fn coercivity(records: &[ObsRecord], phi_l2: f64, gn: &GnConstants) -> Result<CoercivityReport> {
    let worst = records
        .iter()
        .map(|r| coercivity_check(r, phi_l2, gn))
        .min_by(|a, b| a.slack.total_cmp(&b.slack))
        .ok_or_else(|| Error::InvalidParameter("coercivity check needs at least one sample".into()))?;
    Ok(CoercivityReport {
        gn: *gn,
        phi_l2,
        samples: records.len(),
        passed: worst.slack >= 0.0,
        worst,
    })
}

/// `(|du|^2 + |dv|^2 + |dvt|^2)^(1/2)`.
pub fn l2_distance(a: &State, b: &State) -> f64 {
    (l2_norm_sq(&a.u.sub(&b.u)) + l2_norm_sq(&a.v.sub(&b.v)) + l2_norm_sq(&a.vt.sub(&b.vt))).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    /// Sup over the Picard nodes of the `L2` triple distance.
    pub sup_l2: f64,
    pub sweeps: usize,
    pub increment: f64,
    pub nodes: usize,
    pub limit: f64,
    pub passed: bool,
}

/// Compares the Picard fixed point with the stepper at every Picard node.
/// The node spacing must be a whole number of steps.
pub fn oracle_compare(stepper: &Stepper, initial: &State, picard: &PicardConfig, limit: f64) -> Result<OracleReport> {
    let dt = stepper.config().dt;
    let ratio = picard.dt() / dt;
    let every = ratio.round();
    if every < 1.0 || (ratio - every).abs() > 1e-9 * ratio {
        return Err(Error::InvalidParameter(format!(
            "Picard spacing {} is not a whole multiple of the step {dt}",
            picard.dt()
        )));
    }
    let sol = picard_solve(initial, stepper.model(), picard)?;
    let traj = run(
        stepper,
        initial.clone(),
        &RunConfig::new(picard.horizon, every as usize).keeping_states(),
    )?;
    let states = traj.states();
    if states.len() != sol.states.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} stepper samples against {} Picard nodes",
            states.len(),
            sol.states.len()
        )));
    }
    let sup_l2 = states
        .iter()
        .zip(&sol.states)
        .map(|(a, b)| l2_distance(a, b))
        .fold(0.0, f64::max);
    Ok(OracleReport {
        passed: sup_l2 <= limit,
        sup_l2,
        sweeps: sol.sweeps,
        increment: sol.increment,
        nodes: sol.states.len(),
        limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drift_is_relative() {
        let mut a = ObsRecord::from_values(&[0.0; 13]);
        a.q = 2.0;
        let mut b = a;
        b.q = 2.002;
        assert!((relative_drift(&[a, b, a], |r| r.q) - 1e-3).abs() < 1e-12);
        assert_eq!(relative_drift(&[], |r| r.q), 0.0);
    }

    #[test]
    fn halving_orders_of_powers() {
        let o = halving_orders(&[16.0, 1.0, 0.0625, 0.0]);
        assert_eq!(o[0], Some(4.0));
        assert_eq!(o[1], Some(4.0));
        assert_eq!(o[2], None);
    }

    #[test]
    fn slope_of_a_line() {
        assert!((slope(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]) - 2.0).abs() < 1e-15);
    }
}
