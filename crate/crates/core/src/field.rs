//! Spectral coefficient arrays on a [`Grid`].

use std::sync::Arc;

use ndarray::{ArrayD, IxDyn, Zip};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Whether a field is complex-valued or real-valued in physical space.
///
/// The sine basis is real, so a real field has real coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Real,
    Complex,
}

impl Kind {
    pub fn join(self, other: Kind) -> Kind {
        if self == Kind::Real && other == Kind::Real {
            Kind::Real
        } else {
            Kind::Complex
        }
    }
}

/// Coefficients `f_k` of `f = sum_k f_k e_k` in the orthonormal sine basis.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<Grid>,
    kind: Kind,
    coeffs: ArrayD<Complex64>,
}

impl Field {
    pub fn zeros(grid: &Arc<Grid>, kind: Kind) -> Field {
        Field {
            grid: grid.clone(),
            kind,
            coeffs: ArrayD::zeros(IxDyn(grid.shape())),
        }
    }

    pub fn from_complex(grid: &Arc<Grid>, coeffs: ArrayD<Complex64>) -> Result<Field> {
        check_shape(grid, coeffs.shape())?;
        Ok(Field {
            grid: grid.clone(),
            kind: Kind::Complex,
            coeffs,
        })
    }

    pub fn from_real(grid: &Arc<Grid>, coeffs: ArrayD<f64>) -> Result<Field> {
        check_shape(grid, coeffs.shape())?;
        Ok(Field {
            grid: grid.clone(),
            kind: Kind::Real,
            coeffs: coeffs.mapv(|c| Complex64::new(c, 0.0)),
        })
    }

    /// Unit-norm eigenmode `e_k`; `k` is 1-based per axis.
    pub fn eigenmode(grid: &Arc<Grid>, k: &[usize], kind: Kind) -> Result<Field> {
        if k.len() != grid.dim() || k.iter().zip(grid.shape()).any(|(&ki, &m)| ki == 0 || ki > m) {
            return Err(Error::InvalidParameter(format!(
                "mode {k:?} outside grid {:?}",
                grid.shape()
            )));
        }
        let mut f = Field::zeros(grid, kind);
        let idx: Vec<usize> = k.iter().map(|ki| ki - 1).collect();
        f.coeffs[IxDyn(&idx)] = Complex64::new(1.0, 0.0);
        Ok(f)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn coeffs(&self) -> &ArrayD<Complex64> {
        &self.coeffs
    }

    /// Real parts of the coefficients.
    pub fn re(&self) -> ArrayD<f64> {
        self.coeffs.mapv(|c| c.re)
    }

    pub fn im(&self) -> ArrayD<f64> {
        self.coeffs.mapv(|c| c.im)
    }

    pub fn check_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "fields live on different grids {:?} and {:?}",
                self.grid.spec(),
                other.grid.spec()
            )))
        }
    }

    /// Reinterprets a field as complex.
    pub fn into_complex(mut self) -> Field {
        self.kind = Kind::Complex;
        self
    }

    /// Keeps only the real part and marks the field real.
    pub fn real_part(&self) -> Field {
        Field {
            grid: self.grid.clone(),
            kind: Kind::Real,
            coeffs: self.coeffs.mapv(|c| Complex64::new(c.re, 0.0)),
        }
    }

    pub fn conj(&self) -> Field {
        Field {
            grid: self.grid.clone(),
            kind: self.kind,
            coeffs: self.coeffs.mapv(|c| c.conj()),
        }
    }

    pub fn scale(&self, a: f64) -> Field {
        Field {
            grid: self.grid.clone(),
            kind: self.kind,
            coeffs: self.coeffs.mapv(|c| c * a),
        }
    }

    /// Multiplication by a complex scalar; the result is complex.
    pub fn scale_complex(&self, a: Complex64) -> Field {
        Field {
            grid: self.grid.clone(),
            kind: Kind::Complex,
            coeffs: self.coeffs.mapv(|c| c * a),
        }
    }

    /// `self += a * x`.
    pub fn axpy(&mut self, a: f64, x: &Field) {
        debug_assert!(self.grid.same_as(&x.grid));
        self.kind = self.kind.join(x.kind);
        Zip::from(&mut self.coeffs)
            .and(&x.coeffs)
            .for_each(|s, &xv| *s += xv * a);
    }

    pub fn add(&self, other: &Field) -> Field {
        let mut out = self.clone();
        out.axpy(1.0, other);
        out
    }

    pub fn sub(&self, other: &Field) -> Field {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    /// `sum_k w(lambda_k) |f_k|^2`.
    pub fn weighted_norm_sq(&self, weight: impl Fn(f64) -> f64) -> f64 {
        Zip::from(&self.coeffs)
            .and(self.grid.eigenvalues())
            .fold(0.0, |acc, c, &lam| acc + weight(lam) * c.norm_sqr())
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        Zip::from(&self.coeffs)
            .and(&other.coeffs)
            .fold(0.0f64, |acc, a, b| acc.max((a - b).norm()))
    }
}

fn check_shape(grid: &Grid, shape: &[usize]) -> Result<()> {
    if shape == grid.shape() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch(format!(
            "coefficient array {shape:?} does not match grid {:?}",
            grid.shape()
        )))
    }
}
