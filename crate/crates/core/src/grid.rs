//! Dirichlet boxes and their sine eigenbasis.
//!
//! A box `(0,L_1) x ... x (0,L_N)` with `M_d` retained sine modes per axis.
//! The orthonormal basis function for the multi-index `k` is
//! `e_k(x) = prod_d sqrt(2/L_d) sin(pi k_d x_d / L_d)`, an eigenfunction of
//! the Dirichlet Laplacian with eigenvalue `-lambda_k`,
//! `lambda_k = sum_d (pi k_d / L_d)^2`.
//!
//! Coefficient arrays are stored row-major with array index `i` on axis `d`
//! holding mode `k_d = i + 1`.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::{Array2, ArrayD, IxDyn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimension, per-axis mode counts and lengths of a Dirichlet box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub modes: Vec<usize>,
    pub lengths: Vec<f64>,
}

impl GridSpec {
    pub fn new(modes: Vec<usize>, lengths: Vec<f64>) -> Result<Self> {
        let spec = GridSpec {
            dim: modes.len(),
            modes,
            lengths,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Same mode count and length on every axis.
    pub fn cube(dim: usize, modes: usize, length: f64) -> Result<Self> {
        Self::new(vec![modes; dim], vec![length; dim])
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(Error::InvalidParameter(format!(
                "dimension must be 1, 2 or 3, got {}",
                self.dim
            )));
        }
        if self.modes.len() != self.dim || self.lengths.len() != self.dim {
            return Err(Error::InvalidParameter(format!(
                "expected {} mode counts and lengths, got {} and {}",
                self.dim,
                self.modes.len(),
                self.lengths.len()
            )));
        }
        if let Some(m) = self.modes.iter().find(|&&m| m < 4) {
            return Err(Error::InvalidParameter(format!(
                "mode count per axis must be >= 4, got {m}"
            )));
        }
        if let Some(l) = self.lengths.iter().find(|&&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "axis length must be positive and finite, got {l}"
            )));
        }
        Ok(())
    }

    pub fn num_modes(&self) -> usize {
        self.modes.iter().product()
    }
}

/// Per-axis dense operators.
#[derive(Debug)]
pub struct AxisOps {
    pub modes: usize,
    pub length: f64,
    /// `pi k / L` for `k = 1..=M`.
    pub wavenumbers: Vec<f64>,
    /// Node spacing of the collocation grid, `L/(M+1)`.
    pub spacing: f64,
    /// `M x M`: coefficients -> values at the interior nodes `x_j = j L/(M+1)`.
    pub synth: Array2<f64>,
    /// `M x M`: node values -> coefficients (discrete orthogonal inverse of `synth`).
    pub analysis: Array2<f64>,
    /// `2M x M`: coefficients -> values on the refined product grid
    /// `x_j = j L/(2M+1)`, `j = 1..=2M`.
    pub fine_synth: Array2<f64>,
    /// `M x 2M`: exact L2 projection onto the retained sine modes of any
    /// function whose even extension is a cosine polynomial of degree
    /// `<= 2M+1` and which vanishes at both ends, given its refined-grid values.
    pub fine_project: Array2<f64>,
}

impl AxisOps {
    fn new(modes: usize, length: f64) -> Self {
        let m = modes;
        let norm = (2.0 / length).sqrt();
        let wavenumbers: Vec<f64> = (1..=m).map(|k| PI * k as f64 / length).collect();

        let spacing = length / (m + 1) as f64;
        let synth = Array2::from_shape_fn((m, m), |(j, k)| {
            norm * (PI * ((j + 1) * (k + 1)) as f64 / (m + 1) as f64).sin()
        });
        let analysis = synth.t().mapv(|s| s * spacing);

        let big_k = 2 * m + 1;
        let fine_synth = Array2::from_shape_fn((2 * m, m), |(j, k)| {
            norm * (PI * ((j + 1) * (k + 1)) as f64 / big_k as f64).sin()
        });

        // DCT-I analysis restricted to interior nodes (boundary values vanish).
        let dct = Array2::from_shape_fn((big_k + 1, 2 * m), |(mm, j)| {
            let half = if mm == 0 || mm == big_k { 0.5 } else { 1.0 };
            half * 2.0 / big_k as f64 * (PI * (mm * (j + 1)) as f64 / big_k as f64).cos()
        });
        // <e_k, cos(pi m x / L)> over (0, L).
        let cos_to_sine = Array2::from_shape_fn((m, big_k + 1), |(k, mm)| {
            let k = (k + 1) as i64;
            let mm = mm as i64;
            if (k + mm) % 2 == 0 {
                0.0
            } else {
                norm * length / PI * 2.0 * k as f64 / (k * k - mm * mm) as f64
            }
        });
        let fine_project = cos_to_sine.dot(&dct);

        AxisOps {
            modes,
            length,
            wavenumbers,
            spacing,
            synth,
            analysis,
            fine_synth,
            fine_project,
        }
    }

    /// Collocation node coordinates `j L/(M+1)`, `j = 1..=M`.
    pub fn nodes(&self) -> Vec<f64> {
        (1..=self.modes).map(|j| j as f64 * self.spacing).collect()
    }
}

/// A validated box with cached operators and the Laplacian spectrum.
#[derive(Debug)]
pub struct Grid {
    spec: GridSpec,
    axes: Vec<AxisOps>,
    eigenvalues: ArrayD<f64>,
}

impl Grid {
    pub fn new(spec: GridSpec) -> Result<Arc<Grid>> {
        spec.validate()?;
        let axes: Vec<AxisOps> = spec
            .modes
            .iter()
            .zip(&spec.lengths)
            .map(|(&m, &l)| AxisOps::new(m, l))
            .collect();
        let eigenvalues = ArrayD::from_shape_fn(IxDyn(&spec.modes), |idx| {
            (0..spec.dim)
                .map(|d| axes[d].wavenumbers[idx[d]].powi(2))
                .sum::<f64>()
        });
        Ok(Arc::new(Grid {
            spec,
            axes,
            eigenvalues,
        }))
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    pub fn shape(&self) -> &[usize] {
        &self.spec.modes
    }

    pub fn axis(&self, d: usize) -> &AxisOps {
        &self.axes[d]
    }

    pub fn axes(&self) -> &[AxisOps] {
        &self.axes
    }

    /// `lambda_k` for every retained multi-index.
    pub fn eigenvalues(&self) -> &ArrayD<f64> {
        &self.eigenvalues
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.axes
            .iter()
            .map(|a| a.wavenumbers.last().copied().unwrap_or(0.0).powi(2))
            .sum()
    }

    /// Quadrature weight of one collocation node, `prod_d L_d/(M_d+1)`.
    pub fn node_weight(&self) -> f64 {
        self.axes.iter().map(|a| a.spacing).product()
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        std::ptr::eq(self, other) || self.spec == other.spec
    }
}

/// Applies `mats[d]` along axis `d` for every axis of `data`.
pub(crate) fn apply_per_axis<'a>(
    data: &ArrayD<f64>,
    mats: impl Fn(usize) -> &'a Array2<f64>,
) -> ArrayD<f64> {
    let mut out = data.clone();
    for d in 0..data.ndim() {
        out = apply_along(mats(d), out, d);
    }
    out
}

fn apply_along(mat: &Array2<f64>, data: ArrayD<f64>, axis: usize) -> ArrayD<f64> {
    let ndim = data.ndim();
    let mut perm: Vec<usize> = (0..ndim).collect();
    perm.swap(0, axis);
    let moved = data.permuted_axes(IxDyn(&perm));
    let mut shape = moved.shape().to_vec();
    let rest: usize = shape[1..].iter().product();
    let flat = moved
        .as_standard_layout()
        .into_owned()
        .into_shape_with_order((shape[0], rest))
        .expect("standard layout reshape");
    let prod = mat.dot(&flat);
    shape[0] = mat.nrows();
    let out = prod
        .into_shape_with_order(IxDyn(&shape))
        .expect("standard layout reshape");
    out.permuted_axes(IxDyn(&perm))
        .as_standard_layout()
        .into_owned()
}
