use std::sync::Arc;

use crate::field::Field;
use crate::grid::Grid;
use crate::reg::RegLevel;
use crate::spectral::multiplier::{laplacian, yosida, Multiplier};
use crate::spectral::product::{ProductRule, Samples};

use super::state::{times_i, State, Tangent};

/// The (regularized) Yukawa system
///
/// ```text
/// i u_t + Delta u = -J^2 (J^2 v . J^2 u)
/// v_tt - Delta v + v = J^2 |J^2 u|^2
/// ```
///
/// with `J = J_n`, written first order in `(u, v, v_t)`.
#[derive(Debug, Clone)]
pub struct Model {
    grid: Arc<Grid>,
    level: RegLevel,
    rule: ProductRule,
    coupled: bool,
    smoothing: Option<Multiplier>,
}

/// The two nonlinear terms `J^2(J^2 v . J^2 u)` and `J^2 |J^2 u|^2`.
#[derive(Debug, Clone)]
pub struct Interaction {
    pub schrodinger: Field,
    pub meson: Field,
}

impl Model {
    pub fn new(grid: &Arc<Grid>, level: RegLevel, rule: ProductRule) -> Model {
        let smoothing = match level {
            RegLevel::Infinite => None,
            RegLevel::Finite(_) => {
                let j = yosida(grid, level);
                Some(j.compose(&j))
            }
        };
        Model {
            grid: grid.clone(),
            level,
            rule,
            coupled: true,
            smoothing,
        }
    }

    /// Switches the nonlinear terms off, leaving the free linear flow.
    pub fn decoupled(mut self) -> Model {
        self.coupled = false;
        self
    }

    /// Scales the `J_n^2` multiplier by `1 + eps` (verification fault hook).
    pub fn with_smoothing_fault(mut self, eps: f64) -> Model {
        let base = self
            .smoothing
            .take()
            .unwrap_or_else(|| Multiplier::identity(&self.grid));
        self.smoothing = Some(base.perturbed(eps));
        self
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn level(&self) -> RegLevel {
        self.level
    }

    pub fn rule(&self) -> ProductRule {
        self.rule
    }

    pub fn is_coupled(&self) -> bool {
        self.coupled
    }

    /// `J_n^2 f`.
    pub fn smooth(&self, f: &Field) -> Field {
        match &self.smoothing {
            None => f.clone(),
            Some(m) => m.apply(f).expect("model grid"),
        }
    }

    pub fn interaction(&self, state: &State) -> Interaction {
        let a = Samples::of(&self.smooth(&state.u), self.rule);
        let w = Samples::of(&self.smooth(&state.v), self.rule);
        let schrodinger = self.smooth(&w.mul(&a).project(&self.grid, self.rule));
        let meson = self.smooth(&a.abs_sq().project(&self.grid, self.rule));
        Interaction { schrodinger, meson }
    }

    /// Nonlinear part of the tangent: `(i J^2(J^2 v J^2 u), 0, J^2|J^2 u|^2)`.
    pub fn nonlinear(&self, state: &State) -> Tangent {
        if !self.coupled {
            return Tangent::zeros(&self.grid);
        }
        let Interaction { schrodinger, meson } = self.interaction(state);
        Tangent {
            du: times_i(&schrodinger),
            dv: Field::zeros(&self.grid, crate::field::Kind::Real),
            dvt: meson,
        }
    }

    /// Full tangent `(i(Delta u + N_u), v_t, Delta v - v + N_v)`.
    pub fn rhs(&self, state: &State) -> Tangent {
        let lap = laplacian(&self.grid);
        let mut out = self.nonlinear(state);
        out.du.axpy(1.0, &times_i(&lap.apply(&state.u).expect("model grid")));
        out.dv = state.vt.clone();
        let lap_v = lap.apply(&state.v).expect("model grid");
        out.dvt.axpy(1.0, &lap_v);
        out.dvt.axpy(-1.0, &state.v);
        out
    }
}

/// Tangent of the system at level `n`.
pub fn rhs(state: &State, n: RegLevel, dealias: bool) -> Tangent {
    Model::new(state.grid(), n, ProductRule::from_dealias(dealias)).rhs(state)
}
