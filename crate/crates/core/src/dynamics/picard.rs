//! Fixed-point iteration on the Duhamel form of the system
//!
//! ```text
//! u(t)   = U(t) [u_0 + i int_0^t U(-s) N_u(s) ds]
//! v(t)   = cos(t w) v_0 + sin(t w)/w v_t0 + int_0^t sin((t-s) w)/w N_v(s) ds
//! ```
//!
//! with `U(t) = exp(-i lambda t)` and `w = sqrt(1 + lambda)` per mode. The
//! time integrals are evaluated cumulatively with fourth-order Newton-Cotes
//! rules on a uniform grid, independently of the stepper.

use ndarray::{ArrayD, Zip};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::spectral::norms::l2_norm_sq;

use super::model::Model;
use super::state::State;

fn slice<T>(a: &ArrayD<T>) -> &[T] {
    a.as_slice().expect("standard layout")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PicardConfig {
    pub horizon: f64,
    /// Number of time intervals, at least 4.
    pub intervals: usize,
    pub tol: f64,
    #[serde(default = "default_max_sweeps")]
    pub max_sweeps: usize,
}

fn default_max_sweeps() -> usize {
    200
}

/// Consecutive growing sweeps that count as non-contraction.
pub const DIVERGENT_SWEEPS: usize = 3;

impl PicardConfig {
    pub fn new(horizon: f64, intervals: usize, tol: f64) -> PicardConfig {
        PicardConfig {
            horizon,
            intervals,
            tol,
            max_sweeps: default_max_sweeps(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Picard horizon must be positive, got {}",
                self.horizon
            )));
        }
        if self.intervals < 4 {
            return Err(Error::InvalidParameter(format!(
                "Picard needs at least 4 time intervals, got {}",
                self.intervals
            )));
        }
        if !(self.tol > 0.0) || self.max_sweeps == 0 {
            return Err(Error::InvalidParameter("Picard tolerance and sweep cap must be positive".into()));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.intervals as f64
    }
}

#[derive(Debug, Clone)]
pub struct PicardSolution {
    /// States at `t_j = j T / J`, `j = 0..=J`.
    pub states: Vec<State>,
    pub sweeps: usize,
    /// Last sup-in-time increment.
    pub increment: f64,
}

impl PicardSolution {
    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }
}

/// Cumulative `I_j = int_0^{t_j} f` for uniformly sampled `f`, fourth order:
/// Simpson for even `j`, Simpson then 3/8 for odd `j >= 3`, and a four-point
/// rule on the first interval.
pub fn cumulative_integral(f: &[ArrayD<Complex64>], h: f64) -> Vec<ArrayD<Complex64>> {
    let n = f.len();
    assert!(n >= 4, "cumulative quadrature needs at least 4 intervals");
    let zero = ArrayD::from_elem(f[0].raw_dim(), Complex64::new(0.0, 0.0));
    let mut out = vec![zero; n];
    let comb = |base: &ArrayD<Complex64>, w: &[(f64, usize)]| {
        let mut r = base.clone();
        for &(c, i) in w {
            r.scaled_add(Complex64::new(c * h, 0.0), &f[i]);
        }
        r
    };
    out[1] = comb(&out[0], &[(9.0 / 24.0, 0), (19.0 / 24.0, 1), (-5.0 / 24.0, 2), (1.0 / 24.0, 3)]);
    for j in 2..n {
        out[j] = if j % 2 == 0 {
            comb(&out[j - 2], &[(1.0 / 3.0, j - 2), (4.0 / 3.0, j - 1), (1.0 / 3.0, j)])
        } else {
            comb(
                &out[j - 3],
                &[(3.0 / 8.0, j - 3), (9.0 / 8.0, j - 2), (9.0 / 8.0, j - 1), (3.0 / 8.0, j)],
            )
        };
    }
    out
}

/// Solves the Duhamel equations of `model` from `initial` (already
/// regularized) on `[initial.t, initial.t + T]`.
pub fn picard_solve(initial: &State, model: &Model, cfg: &PicardConfig) -> Result<PicardSolution> {
    cfg.validate()?;
    let grid = model.grid().clone();
    let h = cfg.dt();
    let times: Vec<f64> = (0..=cfg.intervals).map(|j| j as f64 * h).collect();
    let lam = grid.eigenvalues();
    let omega = lam.mapv(|l| (1.0 + l).sqrt());

    let u0 = initial.u.coeffs().clone();
    let v0 = initial.v.re();
    let vt0 = initial.vt.re();

    // Per-time tables of the linear flow.
    let phase: Vec<ArrayD<Complex64>> = times
        .iter()
        .map(|&t| lam.mapv(|l| Complex64::from_polar(1.0, -l * t)))
        .collect();
    let cos: Vec<ArrayD<f64>> = times.iter().map(|&t| omega.mapv(|w| (t * w).cos())).collect();
    let sin: Vec<ArrayD<f64>> = times.iter().map(|&t| omega.mapv(|w| (t * w).sin())).collect();

    let build = |iu: Option<&[ArrayD<Complex64>]>, icv: Option<(&[ArrayD<Complex64>], &[ArrayD<Complex64>])>| -> Vec<State> {
        (0..times.len())
            .map(|j| {
                let mut u = u0.clone();
                if let Some(iu) = iu {
                    Zip::from(&mut u)
                        .and(&iu[j])
                        .for_each(|a, &b| *a += Complex64::new(0.0, 1.0) * b);
                }
                Zip::from(&mut u).and(&phase[j]).for_each(|a, &p| *a *= p);
                let (c, sn, w) = (slice(&cos[j]), slice(&sin[j]), slice(&omega));
                let (a, b) = (slice(&v0), slice(&vt0));
                let mut v: Vec<f64> = (0..w.len()).map(|k| c[k] * a[k] + sn[k] / w[k] * b[k]).collect();
                let mut vt: Vec<f64> = (0..w.len()).map(|k| -w[k] * sn[k] * a[k] + c[k] * b[k]).collect();
                if let Some((ic, is)) = icv {
                    let (ic, is) = (slice(&ic[j]), slice(&is[j]));
                    for k in 0..w.len() {
                        v[k] += (sn[k] * ic[k].re - c[k] * is[k].re) / w[k];
                        vt[k] += c[k] * ic[k].re + sn[k] * is[k].re;
                    }
                }
                let shape = omega.raw_dim();
                let v = ArrayD::from_shape_vec(shape.clone(), v).expect("shape");
                let vt = ArrayD::from_shape_vec(shape, vt).expect("shape");
                State {
                    u: Field::from_complex(&grid, u).expect("grid"),
                    v: Field::from_real(&grid, v).expect("grid"),
                    vt: Field::from_real(&grid, vt).expect("grid"),
                    t: initial.t + times[j],
                }
            })
            .collect()
    };

    let mut traj = build(None, None);
    let mut prev_inc = f64::INFINITY;
    let mut growing = 0;
    for sweep in 1..=cfg.max_sweeps {
        let (mut gu, mut gc, mut gs) = (Vec::new(), Vec::new(), Vec::new());
        if model.is_coupled() {
            for (j, s) in traj.iter().enumerate() {
                let it = model.interaction(s);
                let mut g = it.schrodinger.coeffs().clone();
                Zip::from(&mut g).and(&phase[j]).for_each(|a, &p| *a *= p.conj());
                gu.push(g);
                let nv = it.meson.re();
                gc.push(Zip::from(&nv).and(&cos[j]).map_collect(|&a, &c| Complex64::new(a * c, 0.0)));
                gs.push(Zip::from(&nv).and(&sin[j]).map_collect(|&a, &s| Complex64::new(a * s, 0.0)));
            }
        }
        let next = if model.is_coupled() {
            let iu = cumulative_integral(&gu, h);
            let ic = cumulative_integral(&gc, h);
            let is = cumulative_integral(&gs, h);
            build(Some(&iu), Some((&ic, &is)))
        } else {
            build(None, None)
        };
        let inc = traj
            .iter()
            .zip(&next)
            .map(|(a, b)| {
                (l2_norm_sq(&a.u.sub(&b.u)) + l2_norm_sq(&a.v.sub(&b.v)) + l2_norm_sq(&a.vt.sub(&b.vt))).sqrt()
            })
            .fold(0.0, f64::max);
        traj = next;
        if !inc.is_finite() {
            return Err(Error::HorizonTooLarge { sweeps: sweep, increment: inc });
        }
        if inc < cfg.tol {
            return Ok(PicardSolution {
                states: traj,
                sweeps: sweep,
                increment: inc,
            });
        }
        growing = if inc > prev_inc { growing + 1 } else { 0 };
        if growing >= DIVERGENT_SWEEPS {
            return Err(Error::HorizonTooLarge { sweeps: growing, increment: inc });
        }
        prev_inc = inc;
    }
    Err(Error::HorizonTooLarge {
        sweeps: cfg.max_sweeps,
        increment: prev_inc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Kind;
    use crate::grid::{Grid, GridSpec};
    use crate::reg::RegLevel;
    use crate::spectral::product::ProductRule;
    use std::f64::consts::PI;

    #[test]
    fn quadrature_is_fourth_order_exact_on_cubics() {
        let h = 0.1;
        let f: Vec<ArrayD<Complex64>> = (0..9)
            .map(|j| {
                let t = j as f64 * h;
                ArrayD::from_elem(ndarray::IxDyn(&[1]), Complex64::new(t * t * t - 2.0 * t, t))
            })
            .collect();
        let i = cumulative_integral(&f, h);
        for (j, ij) in i.iter().enumerate() {
            let t = j as f64 * h;
            let want = Complex64::new(t.powi(4) / 4.0 - t * t, t * t / 2.0);
            assert!((ij[[0]] - want).norm() < 1e-14, "j={j}");
        }
    }

    #[test]
    fn zero_data_converges_in_one_sweep() {
        let g = Grid::new(GridSpec::cube(1, 8, PI).unwrap()).unwrap();
        let m = Model::new(&g, RegLevel::Finite(4), ProductRule::Dealiased);
        let sol = picard_solve(&State::zeros(&g), &m, &PicardConfig::new(0.1, 8, 1e-12)).unwrap();
        assert_eq!(sol.sweeps, 1);
        assert_eq!(sol.states.len(), 9);
    }

    #[test]
    fn decoupled_is_linear_flow() {
        let g = Grid::new(GridSpec::cube(1, 8, PI).unwrap()).unwrap();
        let m = Model::new(&g, RegLevel::Infinite, ProductRule::Dealiased).decoupled();
        let e = Field::eigenmode(&g, &[2], Kind::Real).unwrap();
        let s0 = State::new(e.clone(), e.clone(), e.scale(0.5), 0.0).unwrap();
        let sol = picard_solve(&s0, &m, &PicardConfig::new(0.4, 8, 1e-12)).unwrap();
        assert_eq!(sol.sweeps, 1);
        let t = 0.4;
        let w = 5.0f64.sqrt();
        let last = sol.states.last().unwrap();
        assert!((last.u.coeffs()[[1]] - Complex64::from_polar(1.0, -4.0 * t)).norm() < 1e-14);
        assert!((last.v.coeffs()[[1]].re - ((t * w).cos() + 0.5 * (t * w).sin() / w)).abs() < 1e-14);
    }

    #[test]
    fn rejects_short_grids() {
        assert!(PicardConfig::new(0.1, 3, 1e-9).validate().is_err());
    }
}
