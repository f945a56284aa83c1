//! Families of regularized solutions over `n` and their Cauchy rates.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::dynamics::{InitialData, IntegratorConfig, Model, RunConfig, State, Stepper};
use crate::error::{Error, Result};
use crate::reg::{Mode, RegLevel};
use crate::spectral::norms::lp_norm;
use crate::spectral::sobolev_norm;

#[derive(Debug, Clone)]
pub struct FamilyPlan {
    /// Strictly increasing finite levels, at least 3.
    pub levels: Vec<u64>,
    pub data: InitialData,
    pub horizon: f64,
    pub sample_every: usize,
    pub integrator: IntegratorConfig,
    pub mode: Mode,
    /// Also run the unregularized problem as the limit reference.
    pub reference: bool,
}

impl FamilyPlan {
    pub fn validate(&self) -> Result<()> {
        if self.levels.len() < 3 {
            return Err(Error::InvalidParameter(format!(
                "a family needs at least 3 levels, got {}",
                self.levels.len()
            )));
        }
        if self.levels[0] == 0 || self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("family levels must be positive and strictly increasing".into()));
        }
        self.integrator.validate(self.data.grid())?;
        RunConfig::new(self.horizon, self.sample_every).steps_from(0.0, self.integrator.dt)?;
        Ok(())
    }
}

/// One family member sampled on the common cadence.
#[derive(Debug, Clone)]
pub struct Member {
    pub n: RegLevel,
    pub states: Vec<State>,
}

/// `(|du|_{H1}^2 + |dv|_{H1}^2 + |dvt|_2^2)^(1/2)`.
pub fn strong_distance(a: &State, b: &State) -> f64 {
    (sobolev_norm(&a.u.sub(&b.u), 1.0).powi(2)
        + sobolev_norm(&a.v.sub(&b.v), 1.0).powi(2)
        + sobolev_norm(&a.vt.sub(&b.vt), 0.0).powi(2))
    .sqrt()
}

/// `(|du|_2^2 + |dv|_2^2 + |dvt|_{H^-1}^2)^(1/2)`.
pub fn weak_distance(a: &State, b: &State) -> f64 {
    (sobolev_norm(&a.u.sub(&b.u), 0.0).powi(2)
        + sobolev_norm(&a.v.sub(&b.v), 0.0).powi(2)
        + sobolev_norm(&a.vt.sub(&b.vt), -1.0).powi(2))
    .sqrt()
}

/// Maximum of `dist` over common sample times.
pub fn sup_distance(a: &[State], b: &[State], dist: fn(&State, &State) -> f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| dist(x, y)).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairDiff {
    pub n: u64,
    pub m: u64,
    pub strong: f64,
    pub weak: f64,
    pub strong_t0: f64,
    pub weak_t0: f64,
}

/// Least-squares fit `log diff = c - rate log n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFit {
    pub rate: f64,
    pub points: usize,
    pub stderr: Option<f64>,
    /// 95% Student-t interval, absent with fewer than 3 points.
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
}

/// Fits the decay rate of `values` against `levels`; `None` if a value is
/// not positive.
pub fn fit_rate(levels: &[f64], values: &[f64]) -> Option<RateFit> {
    if levels.len() != values.len() || levels.len() < 2 || values.iter().any(|v| !(*v > 0.0)) {
        return None;
    }
    let k = levels.len();
    let x: Vec<f64> = levels.iter().map(|n| n.ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let mx = x.iter().sum::<f64>() / k as f64;
    let my = y.iter().sum::<f64>() / k as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let (stderr, ci_low, ci_high) = if k >= 3 {
        let ssr: f64 = x.iter().zip(&y).map(|(a, b)| (b - my - slope * (a - mx)).powi(2)).sum();
        let se = (ssr / (k - 2) as f64 / sxx).sqrt();
        let tq = StudentsT::new(0.0, 1.0, (k - 2) as f64)
            .expect("positive degrees of freedom")
            .inverse_cdf(0.975);
        (Some(se), Some(-slope - tq * se), Some(-slope + tq * se))
    } else {
        (None, None, None)
    };
    Some(RateFit {
        rate: -slope,
        points: k,
        stderr,
        ci_low,
        ci_high,
    })
}

/// Deviations of each member from the `n = inf` reference run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub levels: Vec<u64>,
    pub strong: Vec<f64>,
    pub weak: Vec<f64>,
    /// `max_n sqrt(n) * strong deviation`.
    pub constant: f64,
    /// Deviation never rises by more than 10% from one level to the next.
    pub monotone: bool,
    pub strong_rate: Option<RateFit>,
}

/// Non-strict decrease with a 10% tolerance.
pub const MONOTONE_TOLERANCE: f64 = 0.1;

pub fn limit_extract(members: &[Member], reference: &Member) -> LimitReport {
    let levels: Vec<u64> = members
        .iter()
        .map(|m| match m.n {
            RegLevel::Finite(n) => n,
            RegLevel::Infinite => 0,
        })
        .collect();
    let strong: Vec<f64> = members
        .iter()
        .map(|m| sup_distance(&m.states, &reference.states, strong_distance))
        .collect();
    let weak: Vec<f64> = members
        .iter()
        .map(|m| sup_distance(&m.states, &reference.states, weak_distance))
        .collect();
    let constant = levels
        .iter()
        .zip(&strong)
        .map(|(&n, d)| (n as f64).sqrt() * d)
        .fold(0.0, f64::max);
    let monotone = strong.windows(2).all(|w| w[1] <= (1.0 + MONOTONE_TOLERANCE) * w[0]);
    let lv: Vec<f64> = levels.iter().map(|&n| n as f64).collect();
    LimitReport {
        strong_rate: fit_rate(&lv, &strong),
        levels,
        strong,
        weak,
        constant,
        monotone,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffReport {
    pub mode: Mode,
    pub levels: Vec<u64>,
    pub horizon: f64,
    pub pairs: Vec<PairDiff>,
    pub strong_rate: Option<RateFit>,
    pub weak_rate: Option<RateFit>,
    pub limit: Option<LimitReport>,
}

impl DiffReport {
    pub fn from_members(plan: &FamilyPlan, members: &[Member], reference: Option<&Member>) -> DiffReport {
        let pairs: Vec<PairDiff> = members
            .windows(2)
            .map(|w| PairDiff {
                n: w[0].n.to_wire(),
                m: w[1].n.to_wire(),
                strong: sup_distance(&w[0].states, &w[1].states, strong_distance),
                weak: sup_distance(&w[0].states, &w[1].states, weak_distance),
                strong_t0: strong_distance(&w[0].states[0], &w[1].states[0]),
                weak_t0: weak_distance(&w[0].states[0], &w[1].states[0]),
            })
            .collect();
        let lv: Vec<f64> = pairs.iter().map(|p| p.n as f64).collect();
        let strong: Vec<f64> = pairs.iter().map(|p| p.strong).collect();
        let weak: Vec<f64> = pairs.iter().map(|p| p.weak).collect();
        DiffReport {
            mode: plan.mode,
            levels: members.iter().map(|m| m.n.to_wire()).collect(),
            horizon: plan.horizon,
            strong_rate: fit_rate(&lv, &strong),
            weak_rate: fit_rate(&lv, &weak),
            pairs,
            limit: reference.map(|r| limit_extract(members, r)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FamilyResult {
    pub members: Vec<Member>,
    pub reference: Option<Member>,
    pub report: DiffReport,
}

/// A member failed; `partial` covers the members that completed.
#[derive(Debug)]
pub struct FamilyFailure {
    pub level: RegLevel,
    pub error: Error,
    pub partial: Option<DiffReport>,
}

impl fmt::Display for FamilyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "family member n = {} failed: {}", self.level, self.error)
    }
}

impl std::error::Error for FamilyFailure {}

impl From<FamilyFailure> for Error {
    fn from(f: FamilyFailure) -> Error {
        f.error
    }
}

/// Runs one member and keeps its states on the sampling cadence.
pub fn run_member(plan: &FamilyPlan, n: RegLevel) -> Result<Member> {
    let grid = plan.data.grid();
    let model = Model::new(grid, plan.mode.coupling_level(n), plan.integrator.rule());
    let stepper = Stepper::new(model, plan.integrator)?;
    let s0 = plan.data.regularize(n, plan.mode);
    let cfg = RunConfig::new(plan.horizon, plan.sample_every).keeping_states();
    let traj = crate::dynamics::run(&stepper, s0, &cfg)?;
    Ok(Member {
        n,
        states: traj.samples.into_iter().filter_map(|s| s.state).collect(),
    })
}

/// Runs every level (and the reference) independently, then compares
/// consecutive levels in both norm triples.
pub fn family_run(plan: &FamilyPlan) -> std::result::Result<FamilyResult, FamilyFailure> {
    plan.validate().map_err(|error| FamilyFailure {
        level: RegLevel::Infinite,
        error,
        partial: None,
    })?;
    let mut levels: Vec<RegLevel> = plan.levels.iter().map(|&n| RegLevel::Finite(n)).collect();
    if plan.reference {
        levels.push(RegLevel::Infinite);
    }
    let results: Vec<(RegLevel, Result<Member>)> = levels.par_iter().map(|&n| (n, run_member(plan, n))).collect();

    let mut members = Vec::new();
    let mut reference = None;
    let mut failure = None;
    for (n, r) in results {
        match r {
            Ok(m) if n.is_infinite() => reference = Some(m),
            Ok(m) => members.push(m),
            Err(e) => {
                if failure.is_none() {
                    failure = Some((n, e));
                }
            }
        }
    }
    if let Some((level, error)) = failure {
        let partial = (members.len() >= 2).then(|| DiffReport::from_members(plan, &members, reference.as_ref()));
        return Err(FamilyFailure { level, error, partial });
    }
    let report = DiffReport::from_members(plan, &members, reference.as_ref());
    Ok(FamilyResult {
        members,
        reference,
        report,
    })
}

/// `|u|_p / (sqrt(p) |u|_{H1})` for each `p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PRatioReport {
    pub ratios: Vec<(f64, f64)>,
    /// Log-log slope of the ratio over `p >= 4`.
    pub slope: f64,
    pub passed: bool,
}

pub const P_LIST: [f64; 5] = [2.0, 4.0, 8.0, 16.0, 32.0];

/// Largest admissible log-log growth of the `p` ratio.
pub const P_SLOPE_LIMIT: f64 = 0.1;

/// Worst ratio over `states` for each `p` in [`P_LIST`]; passes iff the `p = 2`
/// ratio is at most 1 and the ratios do not grow with `p` faster than
/// `p^P_SLOPE_LIMIT`.
pub fn p_ratio_check(states: &[State]) -> Result<PRatioReport> {
    let mut ratios = Vec::new();
    for &p in &P_LIST {
        let mut worst = 0.0f64;
        for s in states {
            let h1 = sobolev_norm(&s.u, 1.0);
            if h1 > 0.0 {
                worst = worst.max(lp_norm(&s.u, p)? / (p.sqrt() * h1));
            }
        }
        ratios.push((p, worst));
    }
    let tail: Vec<(f64, f64)> = ratios.iter().filter(|r| r.0 >= 4.0).copied().collect();
    let slope = fit_rate(
        &tail.iter().map(|r| r.0).collect::<Vec<_>>(),
        &tail.iter().map(|r| r.1).collect::<Vec<_>>(),
    )
    .map(|f| -f.rate)
    .unwrap_or(0.0);
    let passed = ratios[0].1 <= 1.0 && slope <= P_SLOPE_LIMIT;
    Ok(PRatioReport { ratios, slope, passed })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteEnergyReport {
    pub diff: DiffReport,
    pub p_ratio: PRatioReport,
}

/// Family run with `J_n` data and unsmoothed nonlinearities, plus the
/// `L^p` growth check on the finest member.
pub fn finite_energy_mode(plan: &FamilyPlan) -> std::result::Result<FiniteEnergyReport, FamilyFailure> {
    let mut plan = plan.clone();
    plan.mode = Mode::FiniteEnergy;
    let res = family_run(&plan)?;
    let finest = res.members.last().expect("at least 3 members");
    let p_ratio = p_ratio_check(&finest.states).map_err(|error| FamilyFailure {
        level: finest.n,
        error,
        partial: Some(res.report.clone()),
    })?;
    Ok(FiniteEnergyReport {
        diff: res.report,
        p_ratio,
    })
}
