use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Field, Kind};
use crate::grid::Grid;
use crate::spectral::norms::l2_norm_sq;

/// `(u, v, d_t v)` at time `t`. `u` is complex, `v` and `vt` are real.
#[derive(Debug, Clone)]
pub struct State {
    pub u: Field,
    pub v: Field,
    pub vt: Field,
    pub t: f64,
}

/// Time derivative of a [`State`].
#[derive(Debug, Clone)]
pub struct Tangent {
    pub du: Field,
    pub dv: Field,
    pub dvt: Field,
}

impl State {
    pub fn new(u: Field, v: Field, vt: Field, t: f64) -> Result<State> {
        u.check_same_grid(&v)?;
        u.check_same_grid(&vt)?;
        if v.kind() != Kind::Real || vt.kind() != Kind::Real {
            return Err(Error::InvalidParameter(
                "the meson field and its time derivative must be real".into(),
            ));
        }
        Ok(State {
            u: u.into_complex(),
            v,
            vt,
            t,
        })
    }

    pub fn zeros(grid: &Arc<Grid>) -> State {
        State {
            u: Field::zeros(grid, Kind::Complex),
            v: Field::zeros(grid, Kind::Real),
            vt: Field::zeros(grid, Kind::Real),
            t: 0.0,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.u.grid()
    }

    /// `self + h * k`, time unchanged.
    pub fn plus(&self, h: f64, k: &Tangent) -> State {
        let mut out = self.clone();
        out.u.axpy(h, &k.du);
        out.v.axpy(h, &k.dv);
        out.vt.axpy(h, &k.dvt);
        out
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite() && self.vt.is_finite()
    }

    /// Largest of the three L2 norms.
    pub fn max_l2(&self) -> f64 {
        [&self.u, &self.v, &self.vt]
            .iter()
            .map(|f| l2_norm_sq(f).sqrt())
            .fold(0.0, f64::max)
    }

    /// The time-reversed state `(conj u, v, -vt)`. Evolving it forward by `T`
    /// and reversing again is the same as evolving the original backward.
    pub fn time_reversed(&self) -> State {
        State {
            u: self.u.conj(),
            v: self.v.clone(),
            vt: self.vt.scale(-1.0),
            t: self.t,
        }
    }
}

impl Tangent {
    pub fn zeros(grid: &Arc<Grid>) -> Tangent {
        Tangent {
            du: Field::zeros(grid, Kind::Complex),
            dv: Field::zeros(grid, Kind::Real),
            dvt: Field::zeros(grid, Kind::Real),
        }
    }

    pub fn scaled_sum(parts: &[(f64, &Tangent)]) -> Tangent {
        let grid = parts[0].1.du.grid().clone();
        let mut out = Tangent::zeros(&grid);
        for (a, k) in parts {
            out.du.axpy(*a, &k.du);
            out.dv.axpy(*a, &k.dv);
            out.dvt.axpy(*a, &k.dvt);
        }
        out
    }
}

/// Multiplies a complex field by `i`.
pub(crate) fn times_i(f: &Field) -> Field {
    f.scale_complex(Complex64::new(0.0, 1.0))
}
