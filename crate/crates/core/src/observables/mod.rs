//! Scalar diagnostics of a state.
//!
//! All coupling integrals use the model's product rule, so with
//! [`ProductRule::Dealiased`](crate::spectral::ProductRule) they are exact
//! integrals of the truncated fields and the semi-discrete system conserves
//! `Q` and `E_n` exactly.

mod envelope;
mod gn;
mod second;

use serde::{Deserialize, Serialize};

use crate::dynamics::{Model, State};
use crate::field::Field;
use crate::reg::RegLevel;
use crate::spectral::norms::{grad_norm_sq, l2_norm_sq, sobolev_norm, inner_re};
use crate::spectral::product::{ProductRule, Samples};

pub use envelope::{envelope_check, envelope_fit, theorem_exponent, EnvelopeModel, ENVELOPE_SLACK};
pub use gn::{coercivity_check, coercivity_constant, gn_delta, gn_estimate, gn_estimate_on, gn_ratio, Coercivity, GnConstants, GN_SAFETY};
pub use second::{second_energy, second_energy_rate_check, second_energy_rhs, RateCheck, SecondEnergy};

/// Column order of the CSV time series.
pub const CSV_COLUMNS: [&str; 13] = [
    "t", "Q", "E", "En", "Fn", "l2_u", "h1_u", "h2_u", "l2_v", "h1_v", "h2_v", "l2_vt", "h1_vt",
];

/// Diagnostics of one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObsRecord {
    pub t: f64,
    pub q: f64,
    pub e: f64,
    pub en: f64,
    pub fn_: f64,
    pub l2_u: f64,
    pub h1_u: f64,
    pub h2_u: f64,
    pub l2_v: f64,
    pub h1_v: f64,
    pub h2_v: f64,
    pub l2_vt: f64,
    pub h1_vt: f64,
}

impl ObsRecord {
    pub fn compute(state: &State, model: &Model) -> ObsRecord {
        let unreg = Model::new(model.grid(), RegLevel::Infinite, model.rule());
        ObsRecord {
            t: state.t,
            q: charge(state),
            e: energy_with(state, &unreg),
            en: energy_with(state, model),
            fn_: second_energy(state, model).total(),
            l2_u: sobolev_norm(&state.u, 0.0),
            h1_u: sobolev_norm(&state.u, 1.0),
            h2_u: sobolev_norm(&state.u, 2.0),
            l2_v: sobolev_norm(&state.v, 0.0),
            h1_v: sobolev_norm(&state.v, 1.0),
            h2_v: sobolev_norm(&state.v, 2.0),
            l2_vt: sobolev_norm(&state.vt, 0.0),
            h1_vt: sobolev_norm(&state.vt, 1.0),
        }
    }

    /// `|u|_{H1}^2 + |v|_{H1}^2 + |vt|_2^2`.
    pub fn h1_triple(&self) -> f64 {
        self.h1_u.powi(2) + self.h1_v.powi(2) + self.l2_vt.powi(2)
    }

    /// `|u|_{H2}^2 + |v|_{H2}^2 + |vt|_{H1}^2`.
    pub fn h2_triple(&self) -> f64 {
        self.h2_u.powi(2) + self.h2_v.powi(2) + self.h1_vt.powi(2)
    }

    /// Values in [`CSV_COLUMNS`] order.
    pub fn values(&self) -> [f64; 13] {
        [
            self.t, self.q, self.e, self.en, self.fn_, self.l2_u, self.h1_u, self.h2_u, self.l2_v, self.h1_v,
            self.h2_v, self.l2_vt, self.h1_vt,
        ]
    }

    pub fn from_values(v: &[f64; 13]) -> ObsRecord {
        ObsRecord {
            t: v[0],
            q: v[1],
            e: v[2],
            en: v[3],
            fn_: v[4],
            l2_u: v[5],
            h1_u: v[6],
            h2_u: v[7],
            l2_v: v[8],
            h1_v: v[9],
            h2_v: v[10],
            l2_vt: v[11],
            h1_vt: v[12],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values().iter().all(|x| x.is_finite())
    }
}

/// `Q = |u|_2^2`.
pub fn charge(state: &State) -> f64 {
    l2_norm_sq(&state.u)
}

/// `(f | P(|g|^2))` under `rule`.
pub(crate) fn coupling(w: &Field, a: &Field, rule: ProductRule) -> f64 {
    let dens = Samples::of(a, rule).abs_sq().project(a.grid(), rule);
    inner_re(w, &dens)
}

fn energy_with(state: &State, model: &Model) -> f64 {
    let a = model.smooth(&state.u);
    let w = model.smooth(&state.v);
    grad_norm_sq(&state.u) + 0.5 * (l2_norm_sq(&state.vt) + state.v.weighted_norm_sq(|l| 1.0 + l))
        - coupling(&w, &a, model.rule())
}

/// `E = |grad u|^2 + (|grad v|^2 + |v|^2 + |vt|^2)/2 - (v | |u|^2)`.
pub fn energy(state: &State, rule: ProductRule) -> f64 {
    energy_with(state, &Model::new(state.grid(), RegLevel::Infinite, rule))
}

/// `E_n`, the energy with coupling `(J_n^2 v | |J_n^2 u|^2)`.
pub fn energy_regularized(state: &State, model: &Model) -> f64 {
    energy_with(state, model)
}
