//! Coefficients <-> values at the interior collocation nodes.

use std::sync::Arc;

use ndarray::{ArrayD, Zip};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Field, Kind};
use crate::grid::{apply_per_axis, Grid};

/// Values of `f` at the nodes `x_j = j L_d/(M_d+1)`.
pub fn to_physical(f: &Field) -> ArrayD<Complex64> {
    let grid = f.grid();
    let re = apply_per_axis(&f.re(), |d| &grid.axis(d).synth);
    match f.kind() {
        Kind::Real => re.mapv(|r| Complex64::new(r, 0.0)),
        Kind::Complex => {
            let im = apply_per_axis(&f.im(), |d| &grid.axis(d).synth);
            merge(&re, &im)
        }
    }
}

/// Inverse of [`to_physical`]. With `Kind::Real` the imaginary part of the
/// samples is discarded.
pub fn to_spectral(grid: &Arc<Grid>, samples: &ArrayD<Complex64>, kind: Kind) -> Result<Field> {
    if samples.shape() != grid.shape() {
        return Err(Error::ShapeMismatch(format!(
            "sample array {:?} does not match grid {:?}",
            samples.shape(),
            grid.shape()
        )));
    }
    let re = apply_per_axis(&samples.mapv(|c| c.re), |d| &grid.axis(d).analysis);
    match kind {
        Kind::Real => Field::from_real(grid, re),
        Kind::Complex => {
            let im = apply_per_axis(&samples.mapv(|c| c.im), |d| &grid.axis(d).analysis);
            Field::from_complex(grid, merge(&re, &im))
        }
    }
}

/// Real samples at the collocation nodes.
pub fn to_spectral_real(grid: &Arc<Grid>, samples: &ArrayD<f64>) -> Result<Field> {
    if samples.shape() != grid.shape() {
        return Err(Error::ShapeMismatch(format!(
            "sample array {:?} does not match grid {:?}",
            samples.shape(),
            grid.shape()
        )));
    }
    Field::from_real(grid, apply_per_axis(samples, |d| &grid.axis(d).analysis))
}

pub(crate) fn merge(re: &ArrayD<f64>, im: &ArrayD<f64>) -> ArrayD<Complex64> {
    Zip::from(re).and(im).map_collect(|&r, &i| Complex64::new(r, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use std::f64::consts::PI;

    #[test]
    fn eigenmode_samples_are_sines() {
        let l = 2.5;
        let grid = Grid::new(GridSpec::cube(1, 12, l).unwrap()).unwrap();
        let f = Field::eigenmode(&grid, &[3], Kind::Real).unwrap();
        let vals = to_physical(&f);
        for (j, x) in grid.axis(0).nodes().iter().enumerate() {
            let expect = (2.0 / l).sqrt() * (3.0 * PI * x / l).sin();
            assert!((vals[[j]].re - expect).abs() < 1e-14);
        }
        let back = to_spectral(&grid, &vals, Kind::Real).unwrap();
        assert!(back.max_abs_diff(&f) < 1e-14);
    }

    #[test]
    fn zero_round_trip() {
        let grid = Grid::new(GridSpec::cube(2, 5, 1.0).unwrap()).unwrap();
        let z = Field::zeros(&grid, Kind::Complex);
        let vals = to_physical(&z);
        assert!(vals.iter().all(|c| c.norm() == 0.0));
        let back = to_spectral(&grid, &vals, Kind::Complex).unwrap();
        assert!(back.coeffs().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn shape_mismatch() {
        let grid = Grid::new(GridSpec::cube(1, 8, 1.0).unwrap()).unwrap();
        let bad = ArrayD::zeros(ndarray::IxDyn(&[7]));
        assert!(matches!(
            to_spectral(&grid, &bad, Kind::Complex),
            Err(Error::ShapeMismatch(_))
        ));
    }
}
