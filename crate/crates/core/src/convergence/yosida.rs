//! Exact operator inequalities of the Yosida family on random fields.
//!
//! For `u` in the retained modes, with `r_n(lambda) = 1/(1 + lambda/n)`:
//!
//! ```text
//! contraction  |J_n u|_2          <= |u|_2
//! gradient     |grad J_n u|_2     <= n^(1/2) |u|_2
//! laplacian    |Delta J_n u|_2    <= n |u|_2
//! difference   |(J_m - J_n) u|_2  <= n^(-1/2) |grad u|_2      (m > n)
//! ```
//!
//! Per mode the ratios are `r_n`, `x/(1+x^2)` with `x = (lambda/n)^(1/2)`,
//! `(lambda/n) r_n` and `x (1 - n/m) r_m r_n`; the suprema are 1, 1/2, 1
//! and 1/2, the two halves attained at `lambda = n`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::initial::random_field;
use crate::error::{Error, Result};
use crate::field::Kind;
use crate::grid::Grid;

pub const INEQUALITIES: [&str; 4] = ["contraction", "gradient", "laplacian", "difference"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorstCase {
    pub field: usize,
    pub n: u64,
    /// Second level for the difference estimate.
    pub m: Option<u64>,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityStats {
    pub name: String,
    pub checks: usize,
    pub violations: usize,
    /// Largest `lhs / rhs` over all fields (0 when every `rhs` vanishes).
    pub worst: Option<WorstCase>,
    /// Largest per-mode ratio over the grid spectrum and all levels.
    pub mode_sup: f64,
    /// Eigenvalue and (smaller) level attaining `mode_sup`.
    pub mode_sup_lambda: f64,
    pub mode_sup_n: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YosidaReport {
    pub dim: usize,
    pub modes: Vec<usize>,
    pub fields: usize,
    /// Single-eigenmode fields appended to the random ensemble.
    pub probes: usize,
    pub levels: usize,
    pub pairs: usize,
    pub seed: u64,
    pub fault: f64,
    pub inequalities: Vec<InequalityStats>,
    pub passed: bool,
}

impl YosidaReport {
    pub fn violations(&self) -> usize {
        self.inequalities.iter().map(|s| s.violations).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YosidaSuiteConfig {
    pub fields: usize,
    pub seed: u64,
    /// Multiplies every `J_n` value by `1 + fault` (sensitivity hook).
    pub fault: f64,
}

impl YosidaSuiteConfig {
    pub fn new(fields: usize, seed: u64) -> Self {
        YosidaSuiteConfig { fields, seed, fault: 0.0 }
    }
}

/// Level pairs `(n, m)`, `m > n`, checked for the difference bound: consecutive levels and
/// every level against the largest.
pub fn level_pairs(n_list: &[u64]) -> Vec<(u64, u64)> {
    let mut pairs: Vec<(u64, u64)> = n_list.windows(2).map(|w| (w[0], w[1])).collect();
    if let Some(&top) = n_list.last() {
        for &n in &n_list[..n_list.len().saturating_sub(2)] {
            pairs.push((n, top));
        }
    }
    pairs
}

struct Tables {
    lam: Vec<f64>,
    /// `r_n` per level, per mode, fault included.
    r: Vec<Vec<f64>>,
}

#[derive(Clone, Copy)]
struct Acc {
    checks: usize,
    violations: usize,
    worst: Option<WorstCase>,
}

impl Acc {
    fn new() -> Self {
        Acc {
            checks: 0,
            violations: 0,
            worst: None,
        }
    }

    fn push(&mut self, lhs_sq: f64, rhs_sq: f64, case: WorstCase) {
        self.checks += 1;
        if lhs_sq > rhs_sq {
            self.violations += 1;
        }
        if rhs_sq > 0.0 {
            let ratio = (lhs_sq / rhs_sq).sqrt();
            if self.worst.is_none_or(|w| ratio > w.ratio) {
                self.worst = Some(WorstCase { ratio, ..case });
            }
        }
    }

    fn merge(mut self, o: Acc) -> Acc {
        self.checks += o.checks;
        self.violations += o.violations;
        if let Some(w) = o.worst {
            if self.worst.is_none_or(|s| w.ratio > s.ratio) {
                self.worst = Some(w);
            }
        }
        self
    }
}

fn check_field(t: &Tables, n_list: &[u64], pairs: &[(u64, u64)], field: usize, c2: &[f64]) -> [Acc; 4] {
    let mut acc = [Acc::new(); 4];
    let l2: f64 = c2.iter().sum();
    let grad: f64 = c2.iter().zip(&t.lam).map(|(c, l)| c * l).sum();
    let case = |n, m| WorstCase { field, n, m, ratio: 0.0 };
    for (i, &n) in n_list.iter().enumerate() {
        let r = &t.r[i];
        let nf = n as f64;
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for k in 0..c2.len() {
            let a = r[k] * r[k] * c2[k];
            s0 += a;
            s1 += t.lam[k] * a;
            s2 += t.lam[k] * t.lam[k] * a;
        }
        acc[0].push(s0, l2, case(n, None));
        acc[1].push(s1, nf * l2, case(n, None));
        acc[2].push(s2, nf * nf * l2, case(n, None));
    }
    for &(n, m) in pairs {
        let (rn, rm) = (&t.r[level_index(n_list, n)], &t.r[level_index(n_list, m)]);
        let s: f64 = (0..c2.len()).map(|k| (rm[k] - rn[k]).powi(2) * c2[k]).sum();
        acc[3].push(s, grad / n as f64, case(n, Some(m)));
    }
    acc
}

fn extremal_modes(lam: &[f64]) -> [usize; 2] {
    let by = |a: &usize, b: &usize| lam[*a].total_cmp(&lam[*b]);
    let lo = (0..lam.len()).min_by(by).expect("non-empty spectrum");
    let hi = (0..lam.len()).max_by(by).expect("non-empty spectrum");
    [lo, hi]
}

fn level_index(n_list: &[u64], n: u64) -> usize {
    n_list.binary_search(&n).expect("level in list")
}

/// Largest per-mode ratio of each inequality over the grid spectrum.
fn mode_scan(t: &Tables, n_list: &[u64], pairs: &[(u64, u64)]) -> [(f64, f64, u64); 4] {
    let mut best = [(0.0f64, 0.0f64, 0u64); 4];
    let mut upd = |i: usize, ratio: f64, lam: f64, n: u64| {
        if ratio > best[i].0 {
            best[i] = (ratio, lam, n);
        }
    };
    for (i, &n) in n_list.iter().enumerate() {
        let nf = n as f64;
        for (k, &lam) in t.lam.iter().enumerate() {
            let r = t.r[i][k];
            upd(0, r, lam, n);
            upd(1, lam.sqrt() * r / nf.sqrt(), lam, n);
            upd(2, lam * r / nf, lam, n);
        }
    }
    for &(n, m) in pairs {
        let (rn, rm) = (&t.r[level_index(n_list, n)], &t.r[level_index(n_list, m)]);
        for (k, &lam) in t.lam.iter().enumerate() {
            upd(3, (rm[k] - rn[k]).abs() * (n as f64 / lam).sqrt(), lam, n);
        }
    }
    best
}

/// Checks the four bounds on `cfg.fields` seeded random `H^1` fields for every
/// level in `n_list` (strictly increasing, finite).
pub fn yosida_property_suite(grid: &Arc<Grid>, n_list: &[u64], cfg: &YosidaSuiteConfig) -> Result<YosidaReport> {
    if n_list.is_empty() || n_list[0] == 0 || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "Yosida suite needs a non-empty, strictly increasing list of positive levels".into(),
        ));
    }
    let lam: Vec<f64> = grid.eigenvalues().iter().copied().collect();
    let r = n_list
        .iter()
        .map(|&n| lam.iter().map(|l| (1.0 + cfg.fault) / (1.0 + l / n as f64)).collect())
        .collect();
    let tables = Tables { lam, r };
    let pairs = level_pairs(n_list);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let dim = grid.dim() as f64;
    let mut fields: Vec<Vec<f64>> = (0..cfg.fields)
        .map(|_| {
            let decay = dim / 4.0 + 0.6 + 1.4 * rng.random::<f64>();
            let f = random_field(grid, decay, 1.0, Kind::Complex, &mut rng);
            f.coeffs().iter().map(|c| c.norm_sqr()).collect()
        })
        .collect();
    // Lowest and highest eigenmodes, where contraction and laplacian are tight.
    for k in extremal_modes(&tables.lam) {
        let mut c2 = vec![0.0; tables.lam.len()];
        c2[k] = 1.0;
        fields.push(c2);
    }

    let per_field: Vec<[Acc; 4]> = fields
        .par_iter()
        .enumerate()
        .map(|(i, c2)| check_field(&tables, n_list, &pairs, i, c2))
        .collect();
    let totals = per_field.into_iter().fold([Acc::new(); 4], |a, b| {
        [a[0].merge(b[0]), a[1].merge(b[1]), a[2].merge(b[2]), a[3].merge(b[3])]
    });
    let scan = mode_scan(&tables, n_list, &pairs);
    let inequalities: Vec<InequalityStats> = (0..4)
        .map(|i| InequalityStats {
            name: INEQUALITIES[i].to_string(),
            checks: totals[i].checks,
            violations: totals[i].violations,
            worst: totals[i].worst,
            mode_sup: scan[i].0,
            mode_sup_lambda: scan[i].1,
            mode_sup_n: scan[i].2,
        })
        .collect();
    let passed = inequalities.iter().all(|s| s.violations == 0);
    Ok(YosidaReport {
        dim: grid.dim(),
        modes: grid.shape().to_vec(),
        fields: cfg.fields,
        probes: 2,
        levels: n_list.len(),
        pairs: pairs.len(),
        seed: cfg.seed,
        fault: cfg.fault,
        inequalities,
        passed,
    })
}
