//! Time stepping: Lawson RK4 (exact linear flow, RK4 on the interaction
//! picture) and classical RK4.

use std::sync::Arc;

use ndarray::{ArrayD, Zip};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::reg::RegLevel;
use crate::spectral::product::ProductRule;

use super::model::Model;
use super::state::{State, Tangent};

/// Any L2 norm above this counts as blow-up.
pub const BLOW_UP_THRESHOLD: f64 = 1e12;

/// Largest `dt * lambda_max` for which classical RK4 is stable on the
/// imaginary axis (the exact bound is `2 sqrt 2`).
pub const RK4_STABILITY: f64 = 2.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    #[default]
    LawsonRk4,
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    #[serde(default)]
    pub scheme: Scheme,
    pub dt: f64,
    #[serde(default = "default_dealias")]
    pub dealias: bool,
}

fn default_dealias() -> bool {
    true
}

impl IntegratorConfig {
    pub fn lawson(dt: f64) -> Self {
        IntegratorConfig {
            scheme: Scheme::LawsonRk4,
            dt,
            dealias: true,
        }
    }

    pub fn rk4(dt: f64) -> Self {
        IntegratorConfig {
            scheme: Scheme::Rk4,
            dt,
            dealias: true,
        }
    }

    pub fn rule(&self) -> ProductRule {
        ProductRule::from_dealias(self.dealias)
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "time step must be positive, got {}",
                self.dt
            )));
        }
        if self.scheme == Scheme::Rk4 && self.dt * grid.max_eigenvalue() > RK4_STABILITY {
            return Err(Error::InvalidParameter(format!(
                "rk4 needs dt <= {:.3e} on this grid (dt * lambda_max <= {RK4_STABILITY})",
                RK4_STABILITY / grid.max_eigenvalue()
            )));
        }
        Ok(())
    }
}

/// Exact flow of the linear part over a fixed time `h`.
#[derive(Debug, Clone)]
struct LinearFlow {
    phase: ArrayD<Complex64>,
    cos: ArrayD<f64>,
    sin_over_w: ArrayD<f64>,
    w_sin: ArrayD<f64>,
}

impl LinearFlow {
    fn new(grid: &Grid, h: f64) -> Self {
        let lam = grid.eigenvalues();
        LinearFlow {
            phase: lam.mapv(|l| Complex64::from_polar(1.0, -l * h)),
            cos: lam.mapv(|l| (h * (1.0 + l).sqrt()).cos()),
            sin_over_w: lam.mapv(|l| {
                let w = (1.0 + l).sqrt();
                (h * w).sin() / w
            }),
            w_sin: lam.mapv(|l| {
                let w = (1.0 + l).sqrt();
                w * (h * w).sin()
            }),
        }
    }

    fn apply(&self, u: &Field, v: &Field, vt: &Field) -> (Field, Field, Field) {
        let grid = u.grid();
        let u_out = Zip::from(&self.phase)
            .and(u.coeffs())
            .map_collect(|&p, &c| p * c);
        let v_out = Zip::from(&self.cos)
            .and(&self.sin_over_w)
            .and(v.coeffs())
            .and(vt.coeffs())
            .map_collect(|&c, &s, &a, &b| c * a.re + s * b.re);
        let vt_out = Zip::from(&self.cos)
            .and(&self.w_sin)
            .and(v.coeffs())
            .and(vt.coeffs())
            .map_collect(|&c, &ws, &a, &b| -ws * a.re + c * b.re);
        (
            Field::from_complex(grid, u_out).expect("grid"),
            Field::from_real(grid, v_out).expect("grid"),
            Field::from_real(grid, vt_out).expect("grid"),
        )
    }

    fn state(&self, s: &State, h: f64) -> State {
        let (u, v, vt) = self.apply(&s.u, &s.v, &s.vt);
        State { u, v, vt, t: s.t + h }
    }

    fn tangent(&self, k: &Tangent) -> Tangent {
        let (du, dv, dvt) = self.apply(&k.du, &k.dv, &k.dvt);
        Tangent { du, dv, dvt }
    }
}

/// A reusable one-step map for a fixed model and step size.
#[derive(Debug, Clone)]
pub struct Stepper {
    model: Model,
    cfg: IntegratorConfig,
    full: LinearFlow,
    half: LinearFlow,
}

impl Stepper {
    pub fn new(model: Model, cfg: IntegratorConfig) -> Result<Stepper> {
        cfg.validate(model.grid())?;
        let full = LinearFlow::new(model.grid(), cfg.dt);
        let half = LinearFlow::new(model.grid(), 0.5 * cfg.dt);
        Ok(Stepper {
            model,
            cfg,
            full,
            half,
        })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn config(&self) -> &IntegratorConfig {
        &self.cfg
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.model.grid()
    }

    /// Advances by one step; fails with [`Error::BlowUp`] on a non-finite or
    /// oversized result.
    pub fn step(&self, s: &State) -> Result<State> {
        let next = match self.cfg.scheme {
            Scheme::LawsonRk4 => self.lawson(s),
            Scheme::Rk4 => self.rk4(s),
        };
        if !next.is_finite() || next.max_l2() > BLOW_UP_THRESHOLD {
            return Err(Error::BlowUp { t: next.t });
        }
        Ok(next)
    }

    fn lawson(&self, y: &State) -> State {
        let h = self.cfg.dt;
        let m = &self.model;
        let k1 = m.nonlinear(y);
        let y2 = self.half.state(&y.plus(0.5 * h, &k1), 0.5 * h);
        let k2 = m.nonlinear(&y2);
        let y_half = self.half.state(y, 0.5 * h);
        let y3 = y_half.plus(0.5 * h, &k2);
        let k3 = m.nonlinear(&y3);
        let y_full = self.full.state(y, h);
        let y4 = y_full.plus(h, &self.half.tangent(&k3));
        let k4 = m.nonlinear(&y4);

        let k1f = self.full.tangent(&k1);
        let k23 = self
            .half
            .tangent(&Tangent::scaled_sum(&[(1.0, &k2), (1.0, &k3)]));
        let incr = Tangent::scaled_sum(&[(1.0, &k1f), (2.0, &k23), (1.0, &k4)]);
        y_full.plus(h / 6.0, &incr)
    }

    fn rk4(&self, y: &State) -> State {
        let h = self.cfg.dt;
        let m = &self.model;
        let k1 = m.rhs(y);
        let k2 = m.rhs(&y.plus(0.5 * h, &k1));
        let k3 = m.rhs(&y.plus(0.5 * h, &k2));
        let k4 = m.rhs(&y.plus(h, &k3));
        let mut out = y.plus(
            h / 6.0,
            &Tangent::scaled_sum(&[(1.0, &k1), (2.0, &k2), (2.0, &k3), (1.0, &k4)]),
        );
        out.t = y.t + h;
        out
    }
}

/// One step of `cfg.scheme` for the level-`n` system.
pub fn step(state: &State, n: RegLevel, cfg: &IntegratorConfig) -> Result<State> {
    let model = Model::new(state.grid(), n, cfg.rule());
    Stepper::new(model, *cfg)?.step(state)
}
