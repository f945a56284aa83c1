//! Pointwise products of sine series.
//!
//! The product of two sine series with modes `<= M` is, per axis, a cosine
//! polynomial of degree `<= 2M`. [`ProductRule::Dealiased`] samples it on a
//! refined grid of `2M` interior nodes, which determines the cosine
//! coefficients exactly, and then applies the analytic cosine-to-sine
//! integrals. The result is the exact L2 projection of the product onto the
//! retained modes. [`ProductRule::Collocation`] multiplies on the native
//! collocation grid and transforms back (aliased).

use std::sync::Arc;

use ndarray::{ArrayD, Zip};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::{Field, Kind};
use crate::grid::{apply_per_axis, Grid};
use crate::spectral::transform::merge;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductRule {
    Dealiased,
    Collocation,
}

impl ProductRule {
    pub fn from_dealias(dealias: bool) -> ProductRule {
        if dealias {
            ProductRule::Dealiased
        } else {
            ProductRule::Collocation
        }
    }
}

/// Physical values of a field on the grid a [`ProductRule`] multiplies on.
#[derive(Debug, Clone)]
pub struct Samples {
    re: ArrayD<f64>,
    im: Option<ArrayD<f64>>,
}

impl Samples {
    pub fn of(f: &Field, rule: ProductRule) -> Samples {
        let grid = f.grid();
        let synth = |d: usize| match rule {
            ProductRule::Dealiased => &grid.axis(d).fine_synth,
            ProductRule::Collocation => &grid.axis(d).synth,
        };
        let re = apply_per_axis(&f.re(), synth);
        let im = match f.kind() {
            Kind::Real => None,
            Kind::Complex => Some(apply_per_axis(&f.im(), synth)),
        };
        Samples { re, im }
    }

    pub fn mul(&self, other: &Samples) -> Samples {
        match (&self.im, &other.im) {
            (None, None) => Samples {
                re: &self.re * &other.re,
                im: None,
            },
            (None, Some(oi)) => Samples {
                re: &self.re * &other.re,
                im: Some(&self.re * oi),
            },
            (Some(si), None) => Samples {
                re: &self.re * &other.re,
                im: Some(si * &other.re),
            },
            (Some(si), Some(oi)) => {
                let re = Zip::from(&self.re)
                    .and(si)
                    .and(&other.re)
                    .and(oi)
                    .map_collect(|&a, &b, &c, &d| a * c - b * d);
                let im = Zip::from(&self.re)
                    .and(si)
                    .and(&other.re)
                    .and(oi)
                    .map_collect(|&a, &b, &c, &d| a * d + b * c);
                Samples { re, im: Some(im) }
            }
        }
    }

    /// `|f|^2`, a real function.
    pub fn abs_sq(&self) -> Samples {
        let re = match &self.im {
            None => self.re.mapv(|r| r * r),
            Some(im) => Zip::from(&self.re)
                .and(im)
                .map_collect(|&r, &i| r * r + i * i),
        };
        Samples { re, im: None }
    }

    /// Projects back onto the retained sine modes.
    pub fn project(&self, grid: &Arc<Grid>, rule: ProductRule) -> Field {
        let proj = |d: usize| match rule {
            ProductRule::Dealiased => &grid.axis(d).fine_project,
            ProductRule::Collocation => &grid.axis(d).analysis,
        };
        let re = apply_per_axis(&self.re, proj);
        match &self.im {
            None => Field::from_real(grid, re).expect("projection keeps grid shape"),
            Some(im) => {
                let im = apply_per_axis(im, proj);
                Field::from_complex(grid, merge(&re, &im)).expect("projection keeps grid shape")
            }
        }
    }
}

/// Projection of `f g` onto the retained modes. Real x real is real.
pub fn pointwise_product(f: &Field, g: &Field, dealias: bool) -> Result<Field> {
    f.check_same_grid(g)?;
    let rule = ProductRule::from_dealias(dealias);
    Ok(Samples::of(f, rule)
        .mul(&Samples::of(g, rule))
        .project(f.grid(), rule))
}

/// Projection of `|f|^2` onto the retained modes.
pub fn abs_sq(f: &Field, dealias: bool) -> Field {
    let rule = ProductRule::from_dealias(dealias);
    Samples::of(f, rule).abs_sq().project(f.grid(), rule)
}
