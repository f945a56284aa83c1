//! Diagonal operators `(m f)_k = m_k f_k`.

use std::sync::Arc;

use ndarray::{ArrayD, Zip};
use num_complex::Complex64;

use crate::error::Result;
use crate::field::{Field, Kind};
use crate::grid::Grid;
use crate::reg::RegLevel;

#[derive(Debug, Clone)]
pub struct Multiplier {
    grid: Arc<Grid>,
    values: ArrayD<Complex64>,
    real: bool,
}

impl Multiplier {
    /// Real multiplier `m_k = g(lambda_k)`.
    pub fn from_eigen(grid: &Arc<Grid>, g: impl Fn(f64) -> f64) -> Multiplier {
        Multiplier {
            grid: grid.clone(),
            values: grid.eigenvalues().mapv(|l| Complex64::new(g(l), 0.0)),
            real: true,
        }
    }

    pub fn from_eigen_complex(grid: &Arc<Grid>, g: impl Fn(f64) -> Complex64) -> Multiplier {
        Multiplier {
            grid: grid.clone(),
            values: grid.eigenvalues().mapv(g),
            real: false,
        }
    }

    pub fn identity(grid: &Arc<Grid>) -> Multiplier {
        Self::from_eigen(grid, |_| 1.0)
    }

    pub fn values(&self) -> &ArrayD<Complex64> {
        &self.values
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn apply(&self, f: &Field) -> Result<Field> {
        let out = self.apply_raw(f)?;
        let kind = if self.real { f.kind() } else { Kind::Complex };
        if kind == Kind::Real {
            Field::from_real(&self.grid, out.mapv(|c| c.re))
        } else {
            Field::from_complex(&self.grid, out)
        }
    }

    fn apply_raw(&self, f: &Field) -> Result<ArrayD<Complex64>> {
        if !self.grid.same_as(f.grid()) {
            return Err(crate::error::Error::ShapeMismatch(
                "multiplier and field live on different grids".into(),
            ));
        }
        Ok(Zip::from(&self.values)
            .and(f.coeffs())
            .map_collect(|&m, &c| m * c))
    }

    /// Pointwise product of the value arrays.
    pub fn compose(&self, other: &Multiplier) -> Multiplier {
        Multiplier {
            grid: self.grid.clone(),
            values: Zip::from(&self.values)
                .and(&other.values)
                .map_collect(|&a, &b| a * b),
            real: self.real && other.real,
        }
    }

    /// Multiplies every value by `(1 + eps)`. Used to inject faults into
    /// verification runs.
    pub fn perturbed(&self, eps: f64) -> Multiplier {
        Multiplier {
            grid: self.grid.clone(),
            values: self.values.mapv(|v| v * (1.0 + eps)),
            real: self.real,
        }
    }
}

/// `Delta`, multiplier `-lambda_k`.
pub fn laplacian(grid: &Arc<Grid>) -> Multiplier {
    Multiplier::from_eigen(grid, |l| -l)
}

/// `J_n = (I - Delta/n)^{-1}`.
pub fn yosida(grid: &Arc<Grid>, n: RegLevel) -> Multiplier {
    Multiplier::from_eigen(grid, |l| n.resolvent(l))
}

pub fn yosida_apply(f: &Field, n: RegLevel) -> Field {
    if n.is_infinite() {
        return f.clone();
    }
    yosida(f.grid(), n).apply(f).expect("same grid")
}

/// `omega^s = (I - Delta)^{s/2}`.
pub fn omega_power(grid: &Arc<Grid>, s: f64) -> Multiplier {
    Multiplier::from_eigen(grid, |l| (1.0 + l).powf(0.5 * s))
}

pub fn omega_apply(f: &Field, s: f64) -> Field {
    omega_power(f.grid(), s).apply(f).expect("same grid")
}

/// `U(t) = exp(i t Delta)`, multiplier `exp(-i lambda_k t)`.
pub fn schrodinger_propagator(grid: &Arc<Grid>, t: f64) -> Multiplier {
    Multiplier::from_eigen_complex(grid, |l| Complex64::from_polar(1.0, -l * t))
}

/// `(K(t), K'(t)) = (omega^{-1} sin(t omega), cos(t omega))`.
pub fn kg_propagator(grid: &Arc<Grid>, t: f64) -> (Multiplier, Multiplier) {
    let k = Multiplier::from_eigen(grid, |l| {
        let w = (1.0 + l).sqrt();
        (t * w).sin() / w
    });
    let kdot = Multiplier::from_eigen(grid, |l| (t * (1.0 + l).sqrt()).cos());
    (k, kdot)
}
