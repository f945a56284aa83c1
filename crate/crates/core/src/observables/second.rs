//! The second-order energy `F_n` and its time derivative.
//!
//! With `a = J_n^2 u`, `w = J_n^2 v`:
//!
//! ```text
//! F_n = |Delta u|^2 + (|grad vt|^2 + |Delta v|^2 + |grad v|^2)/2
//!     + |J_n^2(w a)|^2 - (grad w | grad |a|^2) - 2 (w | |grad a|^2)
//! ```
//!
//! which equals `|d_t u|^2 + (|grad vt|^2 + |Delta v|^2 + |grad v|^2)/2`
//! along solutions. The gradient terms are evaluated through
//! `|grad a|^2 = Delta|a|^2 / 2 - Re(conj(a) Delta a)`.

use serde::Serialize;

use crate::dynamics::{Model, State};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::spectral::multiplier::Multiplier;
use crate::spectral::norms::{grad_norm_sq, inner_re, l2_norm_sq, lap_norm_sq};
use crate::spectral::product::Samples;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondEnergy {
    /// `|Delta u|^2`
    pub lap_u: f64,
    /// `|grad vt|^2 / 2`
    pub grad_vt: f64,
    /// `|Delta v|^2 / 2`
    pub lap_v: f64,
    /// `|grad v|^2 / 2`
    pub grad_v: f64,
    /// `|J_n^2(w a)|^2`
    pub coupling_sq: f64,
    /// `-(grad w | grad |a|^2)`
    pub grad_cross: f64,
    /// `-2 (w | |grad a|^2)`
    pub weighted: f64,
}

impl SecondEnergy {
    pub fn total(&self) -> f64 {
        self.lap_u + self.grad_vt + self.lap_v + self.grad_v + self.coupling_sq + self.grad_cross + self.weighted
    }
}

/// `-Delta` as a multiplier.
fn neg_lap(model: &Model) -> Multiplier {
    Multiplier::from_eigen(model.grid(), |l| l)
}

/// `(f | |grad a|^2)` for a real `f`, given `P(|a|^2)`.
fn against_grad_sq(model: &Model, f: &Field, a: &Field, dens: &Field) -> f64 {
    let rule = model.rule();
    let lap_a = neg_lap(model).apply(a).expect("model grid").scale(-1.0);
    let f_lap_a = Samples::of(f, rule).mul(&Samples::of(&lap_a, rule)).project(model.grid(), rule);
    let neg_lap_f = neg_lap(model).apply(f).expect("model grid");
    -0.5 * inner_re(&neg_lap_f, dens) - inner_re(&f_lap_a, a)
}

pub fn second_energy(state: &State, model: &Model) -> SecondEnergy {
    let rule = model.rule();
    let grid = model.grid();
    let a = model.smooth(&state.u);
    let w = model.smooth(&state.v);
    let sa = Samples::of(&a, rule);
    let sw = Samples::of(&w, rule);
    let dens = sa.abs_sq().project(grid, rule);
    let wa = model.smooth(&sw.mul(&sa).project(grid, rule));
    let cross = inner_re(&neg_lap(model).apply(&w).expect("model grid"), &dens);
    SecondEnergy {
        lap_u: lap_norm_sq(&state.u),
        grad_vt: 0.5 * grad_norm_sq(&state.vt),
        lap_v: 0.5 * lap_norm_sq(&state.v),
        grad_v: 0.5 * grad_norm_sq(&state.v),
        coupling_sq: l2_norm_sq(&wa),
        grad_cross: -cross,
        weighted: -2.0 * against_grad_sq(model, &w, &a, &dens),
    }
}

/// Analytic `F_n'`:
/// `-2 (z | |grad a|^2) + 2 Re(J_n^2(z a) | J_n^2(w a))` with `z = J_n^2 vt`.
pub fn second_energy_rhs(state: &State, model: &Model) -> f64 {
    let rule = model.rule();
    let grid = model.grid();
    let a = model.smooth(&state.u);
    let w = model.smooth(&state.v);
    let z = model.smooth(&state.vt);
    let sa = Samples::of(&a, rule);
    let dens = sa.abs_sq().project(grid, rule);
    let wa = model.smooth(&Samples::of(&w, rule).mul(&sa).project(grid, rule));
    let za = model.smooth(&Samples::of(&z, rule).mul(&sa).project(grid, rule));
    -2.0 * against_grad_sq(model, &z, &a, &dens) + 2.0 * inner_re(&za, &wa)
}

/// Centered-difference `F_n'` against [`second_energy_rhs`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateCheck {
    /// Largest `|(F(t+h) - F(t-h))/2h - rhs(t)|` over interior samples.
    pub max_mismatch: f64,
    /// Largest `|F_n|` along the samples.
    pub scale: f64,
    pub spacing: f64,
    pub points: usize,
}

pub fn second_energy_rate_check(states: &[State], model: &Model) -> Result<RateCheck> {
    if states.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "rate check needs at least 3 samples, got {}",
            states.len()
        )));
    }
    let h = states[1].t - states[0].t;
    let uniform = states
        .windows(2)
        .all(|p| ((p[1].t - p[0].t) - h).abs() <= 1e-9 * h.abs().max(1e-300));
    if !(h > 0.0) || !uniform {
        return Err(Error::InvalidParameter("rate check needs uniformly spaced increasing samples".into()));
    }
    let f: Vec<f64> = states.iter().map(|s| second_energy(s, model).total()).collect();
    let mut max_mismatch = 0.0f64;
    for j in 1..states.len() - 1 {
        let fd = (f[j + 1] - f[j - 1]) / (2.0 * h);
        max_mismatch = max_mismatch.max((fd - second_energy_rhs(&states[j], model)).abs());
    }
    Ok(RateCheck {
        max_mismatch,
        scale: f.iter().fold(0.0f64, |m, x| m.max(x.abs())),
        spacing: h,
        points: states.len() - 2,
    })
}
