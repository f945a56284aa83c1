mod common;

use std::f64::consts::PI;

use common::*;
use kgs::spectral::norms::{grad_norm_sq, l2_norm_sq, lp_norm};
use kgs::spectral::{pointwise_product, sobolev_norm, to_physical, to_spectral, yosida};
use kgs::{Field, Kind, RegLevel};
use ndarray::ArrayD;
use proptest::prelude::*;

fn coeffs(grid: &kgs::Grid, seed: u64) -> ArrayD<C> {
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    grid.eigenvalues().mapv(|l| C::new(next(), next()) / (1.0 + l))
}

#[test]
fn nodes_match_direct_sine_sums() {
    for (dim, m) in [(1, 17), (2, 9), (3, 5)] {
        let g = grid(dim, m);
        let c = coeffs(&g, dim as u64);
        let f = Field::from_complex(&g, c.clone()).unwrap();
        let vals = to_physical(&f);
        let h = PI / (m + 1) as f64;
        for (idx, v) in vals.indexed_iter() {
            let x: Vec<f64> = (0..dim).map(|d| (idx[d] + 1) as f64 * h).collect();
            let want = sine_sum(&g, &c, &x);
            assert!((v - want).norm() < 1e-12, "dim {dim} at {x:?}");
        }
    }
}

#[test]
fn dealiased_product_is_the_l2_projection() {
    let m = 12;
    let g = grid1(m, 2.0);
    let b = Basis1::new(m, 2.0);
    let f = Field::from_complex(&g, coeffs(&g, 5)).unwrap();
    let h = Field::from_complex(&g, coeffs(&g, 6)).unwrap();
    let got = pointwise_product(&f, &h, true).unwrap();
    let fv = b.eval(&f.coeffs().iter().copied().collect::<Vec<_>>());
    let hv = b.eval(&h.coeffs().iter().copied().collect::<Vec<_>>());
    let prod: Vec<C> = fv.iter().zip(&hv).map(|(a, b)| a * b).collect();
    let want = b.project(&prod);
    for (k, w) in want.iter().enumerate() {
        assert!((got.coeffs()[[k]] - w).norm() < 1e-13, "mode {}", k + 1);
    }
}

#[test]
fn dealiased_product_in_two_dimensions() {
    // Tensor Gauss-Legendre on the square.
    let m = 6;
    let g = grid(2, m);
    let b = Basis1::new(m, PI);
    let f = Field::from_complex(&g, coeffs(&g, 8)).unwrap();
    let h = Field::from_real(&g, coeffs(&g, 9).mapv(|c| c.re)).unwrap();
    let got = pointwise_product(&f, &h, true).unwrap();
    let nq = b.x.len();
    let val = |c: &ArrayD<C>, qx: usize, qy: usize| -> C {
        let mut s = C::new(0.0, 0.0);
        for i in 0..m {
            for j in 0..m {
                s += c[[i, j]] * b.e[qx][i] * b.e[qy][j];
            }
        }
        s
    };
    let mut prod = vec![vec![C::new(0.0, 0.0); nq]; nq];
    for (qx, row) in prod.iter_mut().enumerate() {
        for (qy, p) in row.iter_mut().enumerate() {
            *p = val(f.coeffs(), qx, qy) * val(h.coeffs(), qx, qy);
        }
    }
    for i in 0..m {
        for j in 0..m {
            let mut s = C::new(0.0, 0.0);
            for qx in 0..nq {
                for qy in 0..nq {
                    s += prod[qx][qy] * b.e[qx][i] * b.e[qy][j] * b.w[qx] * b.w[qy];
                }
            }
            assert!((got.coeffs()[[i, j]] - s).norm() < 1e-12, "mode ({i},{j})");
        }
    }
}

#[test]
fn yosida_matches_dense_resolvent() {
    let m = 10;
    let l = 1.7;
    let g = grid1(m, l);
    let b = Basis1::new(m, l);
    let f = Field::from_real(&g, coeffs(&g, 2).mapv(|c| c.re)).unwrap();
    let rhs: Vec<f64> = f.coeffs().iter().map(|c| c.re).collect();
    for n in [1u64, 3, 40, 1000] {
        let got = yosida(&g, RegLevel::Finite(n)).apply(&f).unwrap();
        let want = dense_resolvent(&b, n as f64, &rhs);
        for k in 0..m {
            assert!((got.coeffs()[[k]].re - want[k]).abs() < 1e-12, "n {n} mode {}", k + 1);
        }
    }
}

#[test]
fn norms_against_quadrature() {
    let m = 16;
    let g = grid1(m, PI);
    let b = Basis1::new(m, PI);
    let c = coeffs(&g, 11);
    let f = Field::from_complex(&g, c.clone()).unwrap();
    let cv: Vec<C> = c.iter().copied().collect();
    let v = b.eval(&cv);
    let dv = b.eval_d(&cv);
    let l2 = b.integrate(&v.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>());
    let g2 = b.integrate(&dv.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>());
    let l4 = b.integrate(&v.iter().map(|z| z.norm_sqr().powi(2)).collect::<Vec<_>>()).powf(0.25);
    assert!((l2_norm_sq(&f) - l2).abs() < 1e-13);
    assert!((grad_norm_sq(&f) - g2).abs() < 1e-12);
    assert!((sobolev_norm(&f, 1.0).powi(2) - l2 - g2).abs() < 1e-12);
    // The library's L^p norm is a quadrature of its own; agree to a few digits.
    assert!((lp_norm(&f, 4.0).unwrap() - l4).abs() < 1e-3 * l4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transform_round_trip(seed in any::<u64>(), dim in 1usize..=3) {
        let g = grid(dim, [24, 8, 5][dim - 1]);
        let f = Field::from_complex(&g, coeffs(&g, seed)).unwrap();
        let back = to_spectral(&g, &to_physical(&f), Kind::Complex).unwrap();
        prop_assert!(back.max_abs_diff(&f) < 1e-12);
    }

    #[test]
    fn yosida_contracts_every_sobolev_norm(seed in any::<u64>(), n in 1u64..5000, s in 0.0f64..3.0) {
        let g = grid(2, 12);
        let f = Field::from_complex(&g, coeffs(&g, seed)).unwrap();
        let jf = yosida(&g, RegLevel::Finite(n)).apply(&f).unwrap();
        prop_assert!(sobolev_norm(&jf, s) <= sobolev_norm(&f, s) * (1.0 + 1e-15));
    }

    #[test]
    fn real_times_real_stays_real(seed in any::<u64>()) {
        let g = grid(1, 20);
        let f = Field::from_real(&g, coeffs(&g, seed).mapv(|c| c.re)).unwrap();
        let p = pointwise_product(&f, &f, true).unwrap();
        prop_assert_eq!(p.kind(), Kind::Real);
        prop_assert!(p.coeffs().iter().all(|c| c.im == 0.0));
    }

    #[test]
    fn product_commutes(a in any::<u64>(), b in any::<u64>()) {
        let g = grid(1, 16);
        let f = Field::from_complex(&g, coeffs(&g, a)).unwrap();
        let h = Field::from_complex(&g, coeffs(&g, b)).unwrap();
        let fh = pointwise_product(&f, &h, true).unwrap();
        let hf = pointwise_product(&h, &f, true).unwrap();
        prop_assert!(fh.max_abs_diff(&hf) < 1e-14);
    }
}
