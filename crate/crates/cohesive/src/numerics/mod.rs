//! Shared numerical substrate: adaptive quadrature with endpoint
//! square-root singularity removal, semi-infinite tails with declared decay
//! envelopes, Brent root finding, shape-preserving tabulation/inversion and
//! lower convex envelopes.
//!
//! Everything here is pure and deterministic: identical inputs give
//! bit-identical outputs, and nothing holds shared mutable state.

pub mod envelope;
pub mod interp;
pub mod quad;
pub mod roots;

pub use envelope::lower_convex_envelope;
pub use interp::{Monotonicity, SampledFunction};
pub use quad::{
    integrate_adaptive, integrate_left_sqrt_singular, integrate_right_sqrt_singular,
    integrate_tail, Decay, Estimate,
};
pub use roots::brent_root;

use crate::error::{Error, Result};

/// Integration interval; `hi` may be `f64::INFINITY` for tail integrals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() {
            return Err(Error::Domain(format!(
                "invalid interval [{lo}, {hi}]: need finite lo < hi"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Error-control knobs for the adaptive quadrature routines.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 1 << 14,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

/// `n` nodes on `[lo, hi]` clustered toward both endpoints (Chebyshev
/// spacing). Endpoint derivative blow-ups are the norm for the tabulated
/// functions in this crate, hence the clustering default.
pub fn cosine_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && hi > lo);
    let half = 0.5 * (hi - lo);
    (0..n)
        .map(|i| {
            let theta = std::f64::consts::PI * i as f64 / (n - 1) as f64;
            lo + half * (1.0 - theta.cos())
        })
        .collect()
}

/// `n` logarithmically spaced nodes on `[lo, hi]`, `lo > 0`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let llo = lo.ln();
    let lhi = hi.ln();
    (0..n)
        .map(|i| (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Central difference with the step policy used throughout the crate:
/// `h = 1e-6 * scale`, one-sided at the ends of `[dom_lo, dom_hi]`.
pub fn numeric_derivative<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    x: f64,
    dom_lo: f64,
    dom_hi: f64,
) -> f64 {
    let h = 1e-6 * (dom_hi - dom_lo).max(f64::MIN_POSITIVE);
    if x - h < dom_lo {
        (f(x + h) - f(x)) / h
    } else if x + h > dom_hi {
        (f(x) - f(x - h)) / h
    } else {
        (f(x + h) - f(x - h)) / (2.0 * h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_grid_is_strictly_increasing_and_clustered() {
        let g = cosine_grid(0.0, 1.0, 65);
        assert_eq!(g.len(), 65);
        assert_eq!(g[0], 0.0);
        assert!((g[64] - 1.0).abs() < 1e-15);
        for w in g.windows(2) {
            assert!(w[1] > w[0]);
        }
        // first cell much finer than the central one
        assert!(g[1] - g[0] < 0.2 * (g[33] - g[32]));
    }

    #[test]
    fn interval_rejects_bad_bounds() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 2.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_ok());
    }

    #[test]
    fn numeric_derivative_matches_analytic() {
        let f = |x: f64| x * x * x;
        let d = numeric_derivative(&f, 0.5, 0.0, 1.0);
        assert!((d - 0.75).abs() < 1e-6);
        // one-sided at the boundary
        let d0 = numeric_derivative(&f, 0.0, 0.0, 1.0);
        assert!(d0.abs() < 1e-5);
    }
}
