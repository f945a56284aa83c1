//! Gagliardo-Nirenberg ratio estimates and the energy coercivity bound.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::initial::{gaussian_bump, random_field};
use crate::error::{Error, Result};
use crate::field::{Field, Kind};
use crate::grid::{Grid, GridSpec};
use crate::spectral::norms::{lp_norm, sobolev_norm};

use super::ObsRecord;

/// Factor applied to ensemble maxima before they are used as constants.
pub const GN_SAFETY: f64 = 2.0;

/// `delta = N/2 - N/p`; errors unless it lies in `[0, 1]`.
pub fn gn_delta(dim: usize, p: f64) -> Result<f64> {
    if !(p >= 2.0) {
        return Err(Error::InvalidParameter(format!("GN exponent p must be >= 2, got {p}")));
    }
    let n = dim as f64;
    let d = if p.is_infinite() { n / 2.0 } else { n / 2.0 - n / p };
    if d > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "p = {p} is not admissible in dimension {dim} (delta = {d} > 1)"
        )));
    }
    Ok(d)
}

/// `|f|_p / (|f|_{H1}^delta |f|_2^(1-delta))`, zero for the zero field.
pub fn gn_ratio(f: &Field, p: f64) -> Result<f64> {
    let delta = gn_delta(f.grid().dim(), p)?;
    let l2 = sobolev_norm(f, 0.0);
    if l2 == 0.0 {
        return Ok(0.0);
    }
    let h1 = sobolev_norm(f, 1.0);
    Ok(lp_norm(f, p)? / (h1.powf(delta) * l2.powf(1.0 - delta)))
}

/// Default estimation box: `(0, pi)^N`.
fn default_grid(dim: usize) -> Result<Arc<Grid>> {
    let m = match dim {
        1 => 128,
        2 => 48,
        _ => 16,
    };
    Grid::new(GridSpec::cube(dim, m, PI)?)
}

/// Ensemble maximum of [`gn_ratio`] on `(0, pi)^N`.
pub fn gn_estimate(dim: usize, p: f64, ensemble_size: usize, seed: u64) -> Result<f64> {
    gn_estimate_on(&default_grid(dim)?, p, ensemble_size, seed)
}

/// Ensemble maximum of [`gn_ratio`] over seeded fields on `grid`: half
/// random-phase fields with random algebraic decay, half boundary-compatible
/// Gaussian bumps with random centre and width.
pub fn gn_estimate_on(grid: &Arc<Grid>, p: f64, ensemble_size: usize, seed: u64) -> Result<f64> {
    gn_delta(grid.dim(), p)?;
    if ensemble_size == 0 {
        return Err(Error::InvalidParameter("GN ensemble must be non-empty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.dim() as f64;
    let spec = grid.spec();
    let min_width = (0..grid.dim())
        .map(|d| 3.0 * spec.lengths[d] / (spec.modes[d] + 1) as f64)
        .fold(0.0, f64::max);
    let max_width = 0.5 * spec.lengths.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut best = 0.0f64;
    for i in 0..ensemble_size {
        let f = if i % 2 == 0 {
            let decay = n / 4.0 + 0.75 + 1.75 * rng.random::<f64>();
            random_field(grid, decay, 1.0, Kind::Real, &mut rng)
        } else {
            let center: Vec<f64> = spec.lengths.iter().map(|l| l * (0.1 + 0.8 * rng.random::<f64>())).collect();
            let width = min_width + (max_width - min_width).max(0.0) * rng.random::<f64>();
            gaussian_bump(grid, &center, width, 0.0, Kind::Real)?
        };
        best = best.max(gn_ratio(&f, p)?);
    }
    Ok(best)
}

/// Safety-scaled GN constants entering the coercivity bound of one
/// dimension: `C_{1,inf}` for `N = 1`, `(C_{N,p}, C_{N,q})` with
/// `(p, q) = (8/3, 4)` for `N = 2` and `(12/5, 6)` for `N = 3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GnConstants {
    pub dim: usize,
    pub p: f64,
    pub c_p: f64,
    pub q: f64,
    pub c_q: f64,
}

impl GnConstants {
    pub fn exponents(dim: usize) -> (f64, f64) {
        match dim {
            1 => (f64::INFINITY, f64::INFINITY),
            2 => (8.0 / 3.0, 4.0),
            _ => (12.0 / 5.0, 6.0),
        }
    }

    pub fn estimate(grid: &Arc<Grid>, ensemble_size: usize, seed: u64) -> Result<GnConstants> {
        let (p, q) = Self::exponents(grid.dim());
        let c_p = GN_SAFETY * gn_estimate_on(grid, p, ensemble_size, seed)?;
        let c_q = if q == p {
            c_p
        } else {
            GN_SAFETY * gn_estimate_on(grid, q, ensemble_size, seed ^ 0x9e37_79b9_7f4a_7c15)?
        };
        Ok(GnConstants {
            dim: grid.dim(),
            p,
            c_p,
            q,
            c_q,
        })
    }
}

/// The data-dependent constant subtracted in the coercivity bound:
/// `C^2 |phi|^4` for `N = 1`, `|phi|^2/2 + (C_p^2 C_q)^4 |phi|^6 / 2` otherwise.
pub fn coercivity_constant(phi_l2: f64, gn: &GnConstants) -> f64 {
    if gn.dim == 1 {
        gn.c_p.powi(2) * phi_l2.powi(4)
    } else {
        0.5 * phi_l2.powi(2) + 0.5 * (gn.c_p.powi(2) * gn.c_q).powi(4) * phi_l2.powi(6)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coercivity {
    pub t: f64,
    pub en: f64,
    pub lower_bound: f64,
    pub slack: f64,
}

/// `E_n - [|grad u|^2/2 + (|vt|^2 + |grad v|^2 + |v|^2)/4 - const]`.
pub fn coercivity_check(record: &ObsRecord, phi_l2: f64, gn: &GnConstants) -> Coercivity {
    let grad_u = (record.h1_u.powi(2) - record.l2_u.powi(2)).max(0.0);
    let lower_bound = 0.5 * grad_u + 0.25 * (record.l2_vt.powi(2) + record.h1_v.powi(2)) - coercivity_constant(phi_l2, gn);
    Coercivity {
        t: record.t,
        en: record.en,
        lower_bound,
        slack: record.en - lower_bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p2_ratio_is_one() {
        let g = default_grid(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_field(&g, 1.5, 1.0, Kind::Complex, &mut rng);
        assert!((gn_ratio(&f, 2.0).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn ratio_is_amplitude_invariant() {
        let g = default_grid(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_field(&g, 1.5, 1.0, Kind::Real, &mut rng);
        let r1 = gn_ratio(&f, 4.0).unwrap();
        let r2 = gn_ratio(&f.scale(37.5), 4.0).unwrap();
        assert!((r1 - r2).abs() <= 1e-13 * r1);
    }

    #[test]
    fn inadmissible_exponents() {
        assert!(gn_delta(3, f64::INFINITY).is_err());
        assert!(gn_delta(3, 6.0).is_ok());
        assert!(gn_delta(2, 1.0).is_err());
        assert_eq!(gn_delta(1, f64::INFINITY).unwrap(), 0.5);
    }

    #[test]
    fn zero_field_has_positive_slack() {
        let g = default_grid(1).unwrap();
        let gn = GnConstants {
            dim: 1,
            p: f64::INFINITY,
            c_p: 1.0,
            q: f64::INFINITY,
            c_q: 1.0,
        };
        let s = crate::dynamics::State::zeros(&g);
        let m = crate::dynamics::Model::new(&g, crate::reg::RegLevel::Infinite, crate::spectral::ProductRule::Dealiased);
        let c = coercivity_check(&ObsRecord::compute(&s, &m), 0.0, &gn);
        assert_eq!(c.slack, 0.0);
    }
}
