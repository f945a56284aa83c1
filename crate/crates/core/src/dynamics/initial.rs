//! Initial-data library and the regularized data maps.
//!
//! Every generator returns coefficients in the retained sine basis, so all
//! data lies in `D(Delta)` of the truncated problem.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use ndarray::{ArrayD, IxDyn};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Kind};
use crate::grid::Grid;
use crate::reg::{Mode, RegLevel};
use crate::spectral::multiplier::yosida;
use crate::spectral::transform::to_spectral;

use super::state::State;

/// Unregularized data `(phi, psi_0, psi_1)`.
#[derive(Debug, Clone)]
pub struct InitialData {
    pub phi: Field,
    pub psi0: Field,
    pub psi1: Field,
}

impl InitialData {
    pub fn new(phi: Field, psi0: Field, psi1: Field) -> Result<InitialData> {
        State::new(phi.clone(), psi0.clone(), psi1.clone(), 0.0)?;
        Ok(InitialData {
            phi: phi.into_complex(),
            psi0,
            psi1,
        })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.phi.grid()
    }

    /// The unsmoothed data as a state at `t = 0`.
    pub fn state(&self) -> State {
        State {
            u: self.phi.clone(),
            v: self.psi0.clone(),
            vt: self.psi1.clone(),
            t: 0.0,
        }
    }

    /// Data for the level-`n` problem of `mode`.
    pub fn regularize(&self, n: RegLevel, mode: Mode) -> State {
        let mut s = self.state();
        if n.is_infinite() {
            return s;
        }
        let j = yosida(self.grid(), n);
        let op = match mode.data_power() {
            1 => j,
            _ => j.compose(&j),
        };
        s.u = op.apply(&s.u).expect("data grid");
        s.v = op.apply(&s.v).expect("data grid");
        s.vt = op.apply(&s.vt).expect("data grid");
        s
    }
}

/// `(J_n^2 phi, J_n^2 psi_0, J_n^2 psi_1)`.
pub fn regularized_initial_data(phi: &Field, psi0: &Field, psi1: &Field, n: RegLevel) -> Result<State> {
    let data = InitialData::new(phi.clone(), psi0.clone(), psi1.clone())?;
    Ok(data.regularize(n, Mode::Strong))
}

/// Boundary-compatible Gaussian bump
/// `exp(-|x - c|^2 / (2 w^2)) prod_d sin(pi x_d / L_d)`, times `exp(i p x_1)`
/// for a complex field with momentum `p`.
pub fn gaussian_bump(grid: &Arc<Grid>, center: &[f64], width: f64, momentum: f64, kind: Kind) -> Result<Field> {
    if center.len() != grid.dim() {
        return Err(Error::ShapeMismatch(format!(
            "bump center has {} coordinates on a {}-dimensional grid",
            center.len(),
            grid.dim()
        )));
    }
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::InvalidParameter(format!("bump width must be positive, got {width}")));
    }
    let nodes: Vec<Vec<f64>> = grid.axes().iter().map(|a| a.nodes()).collect();
    let lengths = &grid.spec().lengths;
    let samples = ArrayD::from_shape_fn(IxDyn(grid.shape()), |idx| {
        let mut r2 = 0.0;
        let mut env = 1.0;
        for d in 0..grid.dim() {
            let x = nodes[d][idx[d]];
            r2 += (x - center[d]).powi(2);
            env *= (PI * x / lengths[d]).sin();
        }
        let amp = (-r2 / (2.0 * width * width)).exp() * env;
        match kind {
            Kind::Real => Complex64::new(amp, 0.0),
            Kind::Complex => Complex64::from_polar(amp, momentum * nodes[0][idx[0]]),
        }
    });
    to_spectral(grid, &samples, kind)
}

/// One term `amplitude * e_k` of a finite sine combination (`k` 1-based).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeTerm {
    pub k: Vec<usize>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

pub fn sine_combination(grid: &Arc<Grid>, terms: &[ModeTerm], kind: Kind) -> Result<Field> {
    let mut out = Field::zeros(grid, Kind::Complex);
    for t in terms {
        let e = Field::eigenmode(grid, &t.k, Kind::Complex)?;
        out.axpy(1.0, &e.scale_complex(Complex64::new(t.re, t.im)));
    }
    match kind {
        Kind::Complex => Ok(out),
        Kind::Real => {
            if terms.iter().any(|t| t.im != 0.0) {
                return Err(Error::InvalidParameter("a real field cannot have imaginary mode amplitudes".into()));
            }
            Ok(out.real_part())
        }
    }
}

/// Seeded field with `|c_k| = amplitude * (1 + lambda_k)^(-decay)` and
/// uniformly random phases (real fields: random signs via `cos`).
pub fn random_field(grid: &Arc<Grid>, decay: f64, amplitude: f64, kind: Kind, rng: &mut impl Rng) -> Field {
    let coeffs = grid.eigenvalues().mapv(|l| {
        let mag = amplitude * (1.0 + l).powf(-decay);
        let theta = rng.random::<f64>() * TAU;
        match kind {
            Kind::Complex => Complex64::from_polar(mag, theta),
            Kind::Real => Complex64::new(mag * theta.cos(), 0.0),
        }
    });
    match kind {
        Kind::Complex => Field::from_complex(grid, coeffs).expect("grid shape"),
        Kind::Real => Field::from_real(grid, coeffs.mapv(|c| c.re)).expect("grid shape"),
    }
}

/// Decay exponent putting [`random_field`] in `H^1_0` but not `H^2`:
/// `N/4 + 1/2 + eps`.
pub fn rough_decay(dim: usize, eps: f64) -> f64 {
    dim as f64 / 4.0 + 0.5 + eps
}

fn default_one() -> f64 {
    1.0
}
fn default_meson() -> f64 {
    0.5
}
fn default_width() -> f64 {
    0.7
}
fn default_eps() -> f64 {
    0.15
}

/// Named data families accepted by configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DataSpec {
    /// Gaussian bumps for all three fields; `center` defaults to the box centre.
    Bump {
        #[serde(default = "default_one")]
        u_amplitude: f64,
        #[serde(default = "default_meson")]
        v_amplitude: f64,
        #[serde(default)]
        vt_amplitude: f64,
        #[serde(default = "default_width")]
        width: f64,
        #[serde(default)]
        momentum: f64,
        #[serde(default)]
        center: Option<Vec<f64>>,
    },
    /// Finite sine combinations.
    Modes {
        #[serde(default)]
        u: Vec<ModeTerm>,
        #[serde(default)]
        v: Vec<ModeTerm>,
        #[serde(default)]
        vt: Vec<ModeTerm>,
    },
    /// Seeded `H^1_0` data with algebraic decay `rough_decay(N, epsilon)`.
    Rough {
        #[serde(default = "default_eps")]
        epsilon: f64,
        #[serde(default = "default_one")]
        amplitude: f64,
    },
}

impl Default for DataSpec {
    fn default() -> Self {
        DataSpec::Bump {
            u_amplitude: 1.0,
            v_amplitude: 0.5,
            vt_amplitude: 0.0,
            width: 0.7,
            momentum: 0.0,
            center: None,
        }
    }
}

impl DataSpec {
    pub fn build(&self, grid: &Arc<Grid>, seed: u64) -> Result<InitialData> {
        match self {
            DataSpec::Bump {
                u_amplitude,
                v_amplitude,
                vt_amplitude,
                width,
                momentum,
                center,
            } => {
                let c = center
                    .clone()
                    .unwrap_or_else(|| grid.spec().lengths.iter().map(|l| 0.5 * l).collect());
                let u = gaussian_bump(grid, &c, *width, *momentum, Kind::Complex)?;
                let b = gaussian_bump(grid, &c, *width, 0.0, Kind::Real)?;
                InitialData::new(u.scale(*u_amplitude), b.scale(*v_amplitude), b.scale(*vt_amplitude))
            }
            DataSpec::Modes { u, v, vt } => InitialData::new(
                sine_combination(grid, u, Kind::Complex)?,
                sine_combination(grid, v, Kind::Real)?,
                sine_combination(grid, vt, Kind::Real)?,
            ),
            DataSpec::Rough { epsilon, amplitude } => {
                if !(*epsilon > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "rough data needs epsilon > 0, got {epsilon}"
                    )));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let s = rough_decay(grid.dim(), *epsilon);
                let u = random_field(grid, s, *amplitude, Kind::Complex, &mut rng);
                let v = random_field(grid, s, 0.5 * amplitude, Kind::Real, &mut rng);
                // vt only needs L2: one extra half power of decay is not required.
                let vt = random_field(grid, s - 0.5, 0.5 * amplitude, Kind::Real, &mut rng);
                InitialData::new(u, v, vt)
            }
        }
    }
}
