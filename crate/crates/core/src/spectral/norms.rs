//! Sobolev norms from coefficient sums, L^p norms from node quadrature.

use num_complex::Complex64;
use ndarray::Zip;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::spectral::transform::to_physical;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Norms {
    pub l2: f64,
    pub h1: f64,
    pub h2: f64,
    pub h_minus1: f64,
    /// `(p, ||f||_p)` for each requested `p`.
    pub lp: Vec<(f64, f64)>,
}

/// `(sum_k (1+lambda_k)^s |f_k|^2)^{1/2}`.
pub fn sobolev_norm(f: &Field, s: f64) -> f64 {
    if s == 0.0 {
        return f.weighted_norm_sq(|_| 1.0).sqrt();
    }
    f.weighted_norm_sq(|l| (1.0 + l).powf(s)).sqrt()
}

/// `||grad f||_2^2 = sum lambda |f_k|^2`.
pub fn grad_norm_sq(f: &Field) -> f64 {
    f.weighted_norm_sq(|l| l)
}

/// `||Delta f||_2^2 = sum lambda^2 |f_k|^2`.
pub fn lap_norm_sq(f: &Field) -> f64 {
    f.weighted_norm_sq(|l| l * l)
}

pub fn l2_norm_sq(f: &Field) -> f64 {
    f.weighted_norm_sq(|_| 1.0)
}

/// `(f | g) = sum_k f_k conj(g_k)`, the L2 scalar product.
pub fn inner(f: &Field, g: &Field) -> Complex64 {
    Zip::from(f.coeffs())
        .and(g.coeffs())
        .fold(Complex64::new(0.0, 0.0), |acc, a, b| acc + a * b.conj())
}

/// Real part of `(f | g)`.
pub fn inner_re(f: &Field, g: &Field) -> f64 {
    Zip::from(f.coeffs())
        .and(g.coeffs())
        .fold(0.0, |acc, a, b| acc + a.re * b.re + a.im * b.im)
}

/// L^p norm by quadrature on the collocation nodes, `p in [2, inf]`.
/// `p = inf` is the maximum over the nodes (grid sup).
pub fn lp_norm(f: &Field, p: f64) -> Result<f64> {
    if !(p >= 2.0) {
        return Err(Error::InvalidParameter(format!("L^p norms need p >= 2, got {p}")));
    }
    let vals = to_physical(f);
    if p.is_infinite() {
        return Ok(vals.iter().fold(0.0f64, |m, c| m.max(c.norm())));
    }
    let w = f.grid().node_weight();
    let sum: f64 = vals.iter().map(|c| c.norm_sqr().powf(0.5 * p)).sum();
    Ok((w * sum).powf(1.0 / p))
}

pub fn norms(f: &Field, ps: &[f64]) -> Result<Norms> {
    let lp = ps
        .iter()
        .map(|&p| lp_norm(f, p).map(|v| (p, v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Norms {
        l2: sobolev_norm(f, 0.0),
        h1: sobolev_norm(f, 1.0),
        h2: sobolev_norm(f, 2.0),
        h_minus1: sobolev_norm(f, -1.0),
        lp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Kind;
    use crate::grid::{Grid, GridSpec};
    use crate::spectral::multiplier::omega_apply;

    #[test]
    fn eigenmode_sobolev_norms() {
        let grid = Grid::new(GridSpec::new(vec![6, 5], vec![1.0, 2.0]).unwrap()).unwrap();
        let e = Field::eigenmode(&grid, &[2, 3], Kind::Real).unwrap();
        let lam = grid.eigenvalues()[[1, 2]];
        let n = norms(&e, &[]).unwrap();
        assert!((n.l2 - 1.0).abs() < 1e-15);
        assert!((n.h1 - (1.0 + lam).sqrt()).abs() < 1e-13);
        assert!((n.h2 - (1.0 + lam)).abs() < 1e-12);
        assert!((n.h_minus1 - (1.0 + lam).powf(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn h2_equals_shifted_laplacian_norm() {
        let grid = Grid::new(GridSpec::cube(1, 32, 3.0).unwrap()).unwrap();
        let coeffs = ndarray::ArrayD::from_shape_fn(ndarray::IxDyn(&[32]), |i| {
            1.0 / (1.0 + i[0] as f64).powi(3)
        });
        let f = Field::from_real(&grid, coeffs).unwrap();
        let shifted = omega_apply(&f, 2.0);
        assert!((sobolev_norm(&f, 2.0) - sobolev_norm(&shifted, 0.0)).abs() < 1e-14);
    }

    #[test]
    fn rejects_small_p() {
        let grid = Grid::new(GridSpec::cube(1, 8, 1.0).unwrap()).unwrap();
        let f = Field::zeros(&grid, Kind::Real);
        assert!(lp_norm(&f, 1.5).is_err());
        assert!(lp_norm(&f, f64::NAN).is_err());
        assert!(lp_norm(&f, f64::INFINITY).is_ok());
    }

    #[test]
    fn quadrature_l2_matches_spectral() {
        let grid = Grid::new(GridSpec::cube(2, 9, 1.5).unwrap()).unwrap();
        let coeffs = ndarray::ArrayD::from_shape_fn(ndarray::IxDyn(&[9, 9]), |i| {
            ((i[0] * 7 + i[1] * 3) % 5) as f64 - 2.0
        });
        let f = Field::from_real(&grid, coeffs).unwrap();
        let spectral = sobolev_norm(&f, 0.0);
        let quad = lp_norm(&f, 2.0).unwrap();
        assert!((quad - spectral).abs() / spectral < 1e-13);
    }
}
