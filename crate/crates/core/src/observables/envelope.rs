//! Growth-envelope fits `h2(t) <= C' + C t^e`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Allowed excess of the fitted exponent over the theorem exponent.
pub const ENVELOPE_SLACK: f64 = 0.2;

/// Growth exponent bounding the `H2 + H2 + H1` triple in dimension `N`.
pub fn theorem_exponent(dim: usize) -> f64 {
    match dim {
        1 => 4.0 / 3.0,
        2 => 2.0,
        _ => 4.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeModel {
    pub dim: usize,
    /// Least-squares slope of `log max_{s<=t} |h2(s) - h2(0)|` against
    /// `log t` over `[T/10, T]`; 0 for a series without growth.
    pub fitted_exponent: f64,
    pub theorem_exponent: f64,
    /// `C' = h2(0)`.
    pub c_prime: f64,
    /// Smallest `C` with `h2 <= C' + C t^e` at every sample (`e` the theorem exponent).
    pub c: f64,
}

/// Fits the envelope of `(t, h2)` samples starting at `t = 0`.
pub fn envelope_fit(series: &[(f64, f64)], dim: usize) -> Result<EnvelopeModel> {
    let Some(&(t0, h0)) = series.first() else {
        return Err(Error::InvalidParameter("empty envelope series".into()));
    };
    if t0 != 0.0 {
        return Err(Error::InvalidParameter("envelope series must start at t = 0".into()));
    }
    let horizon = series.last().map(|s| s.0).unwrap_or(0.0);
    let e = theorem_exponent(dim);
    let c = series
        .iter()
        .filter(|s| s.0 > 0.0)
        .map(|&(t, h)| ((h - h0) / t.powf(e)).max(0.0))
        .fold(0.0, f64::max);

    let mut running = 0.0f64;
    let mut pts = Vec::new();
    for &(t, h) in series {
        running = running.max((h - h0).abs());
        if t >= horizon / 10.0 && t > 0.0 {
            pts.push((t.ln(), running));
        }
    }
    let degenerate = running <= 1e-12 * h0.abs().max(1e-300);
    let fitted_exponent = if degenerate {
        0.0
    } else {
        if pts.len() < 3 {
            return Err(Error::InvalidParameter(
                "envelope fit needs at least 3 samples in the last decade".into(),
            ));
        }
        let xy: Vec<(f64, f64)> = pts.iter().map(|&(x, r)| (x, r.ln())).collect();
        least_squares_slope(&xy)
    };
    Ok(EnvelopeModel {
        dim,
        fitted_exponent,
        theorem_exponent: e,
        c_prime: h0,
        c,
    })
}

fn least_squares_slope(xy: &[(f64, f64)]) -> f64 {
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Pass iff the fitted exponent does not exceed the theorem exponent plus `slack`.
pub fn envelope_check(model: &EnvelopeModel, slack: f64) -> bool {
    model.fitted_exponent <= model.theorem_exponent + slack
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        (0..=200).map(|i| {
            let t = i as f64 * 0.05;
            (t, f(t))
        }).collect()
    }

    #[test]
    fn constant_series_passes_with_zero_exponent() {
        let m = envelope_fit(&series(|_| 3.0), 1).unwrap();
        assert_eq!(m.fitted_exponent, 0.0);
        assert!(envelope_check(&m, ENVELOPE_SLACK));
    }

    #[test]
    fn quadratic_growth() {
        let s = series(|t| 1.0 + t * t);
        let m2 = envelope_fit(&s, 2).unwrap();
        assert!((m2.fitted_exponent - 2.0).abs() < 1e-12);
        assert!(envelope_check(&m2, ENVELOPE_SLACK));
        assert!((m2.c - 1.0).abs() < 1e-12 && m2.c_prime == 1.0);
        let m1 = envelope_fit(&s, 1).unwrap();
        assert!(!envelope_check(&m1, ENVELOPE_SLACK));
    }

    #[test]
    fn must_start_at_zero() {
        assert!(envelope_fit(&[(1.0, 1.0), (2.0, 2.0)], 1).is_err());
    }
}
