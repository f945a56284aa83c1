//! Independent oracles: direct sine sums, composite Gauss-Legendre
//! quadrature, dense linear algebra and a classical RK4 on mode ODEs.
//! Nothing here goes through the library's transforms or products.

#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use kgs::{Field, Grid, GridSpec, Kind, State};
use ndarray::{ArrayD, IxDyn};
use num_complex::Complex64;

pub type C = Complex64;

pub fn grid1(m: usize, l: f64) -> Arc<Grid> {
    Grid::new(GridSpec::cube(1, m, l).unwrap()).unwrap()
}

pub fn grid(dim: usize, m: usize) -> Arc<Grid> {
    Grid::new(GridSpec::cube(dim, m, PI).unwrap()).unwrap()
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Composite Gauss-Legendre rule on `[0, l]`.
pub fn composite_rule(l: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (gx, gw) = gauss_legendre(order);
    let h = l / panels as f64;
    let mut xs = Vec::with_capacity(panels * order);
    let mut ws = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let a = p as f64 * h;
        for (x, w) in gx.iter().zip(&gw) {
            xs.push(a + 0.5 * h * (x + 1.0));
            ws.push(0.5 * h * w);
        }
    }
    (xs, ws)
}

/// Orthonormal sine basis on `(0, l)`: value and derivative tables at
/// quadrature nodes, mode `k` in column `k - 1`.
pub struct Basis1 {
    pub l: f64,
    pub m: usize,
    pub x: Vec<f64>,
    pub w: Vec<f64>,
    pub e: Vec<Vec<f64>>,
    pub de: Vec<Vec<f64>>,
}

impl Basis1 {
    /// The rule integrates trigonometric polynomials of degree `<= 4m`
    /// to roundoff.
    pub fn new(m: usize, l: f64) -> Basis1 {
        let (x, w) = composite_rule(l, 4 * m, 10);
        let s = (2.0 / l).sqrt();
        let e = x
            .iter()
            .map(|&xq| (1..=m).map(|k| s * (PI * k as f64 * xq / l).sin()).collect())
            .collect();
        let de = x
            .iter()
            .map(|&xq| {
                (1..=m)
                    .map(|k| {
                        let kk = PI * k as f64 / l;
                        s * kk * (kk * xq).cos()
                    })
                    .collect()
            })
            .collect();
        Basis1 { l, m, x, w, e, de }
    }

    pub fn lambda(&self, k: usize) -> f64 {
        (PI * k as f64 / self.l).powi(2)
    }

    pub fn eval(&self, c: &[C]) -> Vec<C> {
        self.e.iter().map(|row| row.iter().zip(c).map(|(e, c)| c * e).sum()).collect()
    }

    pub fn eval_d(&self, c: &[C]) -> Vec<C> {
        self.de.iter().map(|row| row.iter().zip(c).map(|(e, c)| c * e).sum()).collect()
    }

    /// `P(f)_k = int f e_k`.
    pub fn project(&self, f: &[C]) -> Vec<C> {
        (0..self.m)
            .map(|k| self.x.iter().enumerate().map(|(q, _)| f[q] * self.e[q][k] * self.w[q]).sum())
            .collect()
    }

    pub fn integrate(&self, f: &[f64]) -> f64 {
        f.iter().zip(&self.w).map(|(f, w)| f * w).sum()
    }
}

/// Value of a sine series at an arbitrary point by direct summation.
pub fn sine_sum(grid: &Grid, coeffs: &ArrayD<C>, x: &[f64]) -> C {
    let spec = grid.spec();
    let mut total = C::new(0.0, 0.0);
    for (idx, c) in coeffs.indexed_iter() {
        let mut b = 1.0;
        for d in 0..spec.dim {
            let l = spec.lengths[d];
            let k = (idx[d] + 1) as f64;
            b *= (2.0 / l).sqrt() * (PI * k * x[d] / l).sin();
        }
        total += c * b;
    }
    total
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// `(I - Delta/n)^{-1} b` assembled from quadrature mass and stiffness
/// matrices of the sine basis.
pub fn dense_resolvent(basis: &Basis1, n: f64, b: &[f64]) -> Vec<f64> {
    let m = basis.m;
    let mut a = vec![vec![0.0; m]; m];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let mass: f64 = (0..basis.x.len()).map(|q| basis.e[q][i] * basis.e[q][j] * basis.w[q]).sum();
            let stiff: f64 = (0..basis.x.len()).map(|q| basis.de[q][i] * basis.de[q][j] * basis.w[q]).sum();
            *v = mass + stiff / n;
        }
    }
    // The mass matrix is the identity up to quadrature error; keep it so the
    // oracle does not assume orthonormality.
    let rhs: Vec<f64> = (0..m)
        .map(|i| (0..m).map(|j| {
            let mass: f64 = (0..basis.x.len()).map(|q| basis.e[q][i] * basis.e[q][j] * basis.w[q]).sum();
            mass * b[j]
        }).sum())
        .collect();
    solve_dense(a, rhs)
}

/// One-dimensional regularized system on mode vectors, with every product
/// evaluated by quadrature in physical space.
pub struct ModeSystem {
    pub basis: Basis1,
    /// `None` for the unsmoothed level.
    pub n: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Modes {
    pub u: Vec<C>,
    pub v: Vec<f64>,
    pub vt: Vec<f64>,
}

impl ModeSystem {
    pub fn j2(&self, c: &[C]) -> Vec<C> {
        c.iter()
            .enumerate()
            .map(|(i, c)| match self.n {
                Some(n) => c / (1.0 + self.basis.lambda(i + 1) / n).powi(2),
                None => *c,
            })
            .collect()
    }

    fn real(v: &[f64]) -> Vec<C> {
        v.iter().map(|&x| C::new(x, 0.0)).collect()
    }

    pub fn rhs(&self, s: &Modes) -> Modes {
        let b = &self.basis;
        let a = self.j2(&s.u);
        let w = self.j2(&Self::real(&s.v));
        let av = b.eval(&a);
        let wv = b.eval(&w);
        let wa: Vec<C> = av.iter().zip(&wv).map(|(a, w)| a * w.re).collect();
        let dens: Vec<C> = av.iter().map(|a| C::new(a.norm_sqr(), 0.0)).collect();
        let pwa = self.j2(&b.project(&wa));
        let pdens = self.j2(&b.project(&dens));
        let m = b.m;
        let mut out = Modes {
            u: vec![C::new(0.0, 0.0); m],
            v: s.vt.clone(),
            vt: vec![0.0; m],
        };
        for k in 0..m {
            let lam = b.lambda(k + 1);
            out.u[k] = C::i() * (-lam * s.u[k] + pwa[k]);
            out.vt[k] = -lam * s.v[k] - s.v[k] + pdens[k].re;
        }
        out
    }

    pub fn rk4(&self, s0: &Modes, dt: f64, steps: usize) -> Modes {
        let axpy = |s: &Modes, h: f64, k: &Modes| Modes {
            u: s.u.iter().zip(&k.u).map(|(a, b)| a + b * h).collect(),
            v: s.v.iter().zip(&k.v).map(|(a, b)| a + b * h).collect(),
            vt: s.vt.iter().zip(&k.vt).map(|(a, b)| a + b * h).collect(),
        };
        let mut s = s0.clone();
        for _ in 0..steps {
            let k1 = self.rhs(&s);
            let k2 = self.rhs(&axpy(&s, dt / 2.0, &k1));
            let k3 = self.rhs(&axpy(&s, dt / 2.0, &k2));
            let k4 = self.rhs(&axpy(&s, dt, &k3));
            let mut next = s.clone();
            for k in 0..s.u.len() {
                next.u[k] += (k1.u[k] + k2.u[k] * 2.0 + k3.u[k] * 2.0 + k4.u[k]) * (dt / 6.0);
                next.v[k] += (k1.v[k] + 2.0 * k2.v[k] + 2.0 * k3.v[k] + k4.v[k]) * (dt / 6.0);
                next.vt[k] += (k1.vt[k] + 2.0 * k2.vt[k] + 2.0 * k3.vt[k] + k4.vt[k]) * (dt / 6.0);
            }
            s = next;
        }
        s
    }

    /// `E_n` by quadrature.
    pub fn energy(&self, s: &Modes) -> f64 {
        let b = &self.basis;
        let du = b.eval_d(&s.u);
        let v = b.eval(&Self::real(&s.v));
        let dv = b.eval_d(&Self::real(&s.v));
        let vt = b.eval(&Self::real(&s.vt));
        let a = b.eval(&self.j2(&s.u));
        let w = b.eval(&self.j2(&Self::real(&s.v)));
        let f: Vec<f64> = (0..b.x.len())
            .map(|q| {
                du[q].norm_sqr() + 0.5 * (vt[q].re.powi(2) + dv[q].re.powi(2) + v[q].re.powi(2))
                    - w[q].re * a[q].norm_sqr()
            })
            .collect();
        b.integrate(&f)
    }

    /// `F_n` by quadrature of the physical-space integrands.
    pub fn second_energy(&self, s: &Modes) -> f64 {
        let b = &self.basis;
        let lam = |c: &[C]| -> Vec<C> { c.iter().enumerate().map(|(i, c)| c * b.lambda(i + 1)).collect() };
        let rv = Self::real(&s.v);
        let rvt = Self::real(&s.vt);
        let lap_u = b.eval(&lam(&s.u));
        let dvt = b.eval_d(&rvt);
        let lap_v = b.eval(&lam(&rv));
        let dv = b.eval_d(&rv);
        let ac = self.j2(&s.u);
        let wc = self.j2(&rv);
        let a = b.eval(&ac);
        let da = b.eval_d(&ac);
        let w = b.eval(&wc);
        let lap_w = b.eval(&lam(&wc));
        let wa: Vec<C> = a.iter().zip(&w).map(|(a, w)| a * w.re).collect();
        let jwa = b.eval(&self.j2(&b.project(&wa)));
        let f: Vec<f64> = (0..b.x.len())
            .map(|q| {
                lap_u[q].norm_sqr()
                    + 0.5 * dvt[q].re.powi(2)
                    + 0.5 * lap_v[q].re.powi(2)
                    + 0.5 * dv[q].re.powi(2)
                    + jwa[q].norm_sqr()
                    - lap_w[q].re * a[q].norm_sqr()
                    - 2.0 * w[q].re * da[q].norm_sqr()
            })
            .collect();
        b.integrate(&f)
    }
}

pub fn modes_of(state: &State) -> Modes {
    Modes {
        u: state.u.coeffs().iter().copied().collect(),
        v: state.v.coeffs().iter().map(|c| c.re).collect(),
        vt: state.vt.coeffs().iter().map(|c| c.re).collect(),
    }
}

pub fn state_of(grid: &Arc<Grid>, m: &Modes) -> State {
    let sh = IxDyn(grid.shape());
    let u = ArrayD::from_shape_vec(sh.clone(), m.u.clone()).unwrap();
    let v = ArrayD::from_shape_vec(sh.clone(), m.v.clone()).unwrap();
    let vt = ArrayD::from_shape_vec(sh, m.vt.clone()).unwrap();
    State::new(
        Field::from_complex(grid, u).unwrap(),
        Field::from_real(grid, v).unwrap(),
        Field::from_real(grid, vt).unwrap(),
        0.0,
    )
    .unwrap()
}

/// Deterministic smooth state with decaying random-looking coefficients.
pub fn smooth_state(grid: &Arc<Grid>, seed: u64, amp: f64) -> State {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let lam = grid.eigenvalues();
    let mut draw = |scale: f64, complex: bool| -> ArrayD<C> {
        lam.mapv(|l| {
            let mag = scale * amp * (1.0 + l).powf(-2.0);
            let re = rng.random_range(-1.0..1.0);
            let im = if complex { rng.random_range(-1.0..1.0) } else { 0.0 };
            C::new(re, im) * mag
        })
    };
    let u = draw(1.0, true);
    let v = draw(0.5, false).mapv(|c| c.re);
    let vt = draw(0.5, false).mapv(|c| c.re);
    State::new(
        Field::from_complex(grid, u).unwrap(),
        Field::from_real(grid, v).unwrap(),
        Field::from_real(grid, vt).unwrap(),
        0.0,
    )
    .unwrap()
}

pub fn kind_field(grid: &Arc<Grid>, coeffs: ArrayD<C>, kind: Kind) -> Field {
    match kind {
        Kind::Complex => Field::from_complex(grid, coeffs).unwrap(),
        Kind::Real => Field::from_real(grid, coeffs.mapv(|c| c.re)).unwrap(),
    }
}
