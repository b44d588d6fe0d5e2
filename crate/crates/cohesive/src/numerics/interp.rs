//! Monotone-safe tabulation of scalar functions.
//!
//! [`SampledFunction`] interpolates with the Fritsch–Carlson shape-preserving
//! cubic: interpolated values never overshoot the node-value envelope, and
//! strictly monotone data produce a strictly monotone interpolant, which is
//! what makes tabulated inverses trustworthy.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InterpKind {
    /// Fritsch–Carlson shape-preserving cubic (the default).
    MonotoneCubic,
    /// Piecewise linear; used for convex envelopes, where straight
    /// segments between hull vertices are part of the contract.
    Linear,
}

#[derive(Clone, Debug)]
pub struct SampledFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    monotone: Monotonicity,
    kind: InterpKind,
}

impl SampledFunction {
    /// Build a shape-preserving tabulation. The grid must be strictly
    /// increasing with at least 4 nodes, and all data finite.
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::with_kind(grid, values, InterpKind::MonotoneCubic)
    }

    pub fn with_kind(grid: Vec<f64>, values: Vec<f64>, kind: InterpKind) -> Result<Self> {
        let n = grid.len();
        if n < 4 || values.len() != n {
            return Err(Error::Domain(format!(
                "tabulation needs matching grid/value lengths >= 4, got {} / {}",
                n,
                values.len()
            )));
        }
        if grid.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Domain("tabulation data must be finite".into()));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("tabulation grid must be strictly increasing".into()));
        }

        let monotone = if values.windows(2).all(|w| w[1] > w[0]) {
            Monotonicity::Increasing
        } else if values.windows(2).all(|w| w[1] < w[0]) {
            Monotonicity::Decreasing
        } else {
            Monotonicity::None
        };

        let slopes = match kind {
            InterpKind::MonotoneCubic => fritsch_carlson_slopes(&grid, &values),
            InterpKind::Linear => Vec::new(),
        };

        Ok(Self { grid, values, slopes, monotone, kind })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn monotonicity(&self) -> Monotonicity {
        self.monotone
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.grid[0], *self.grid.last().unwrap())
    }

    /// Interpolated value; clamps to the end cells outside the domain.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.grid.len();
        let k = if x <= self.grid[0] {
            0
        } else if x >= self.grid[n - 1] {
            n - 2
        } else {
            self.grid.partition_point(|&g| g <= x).saturating_sub(1)
        };
        let h = self.grid[k + 1] - self.grid[k];
        let t = ((x - self.grid[k]) / h).clamp(0.0, 1.0);
        match self.kind {
            InterpKind::Linear => self.values[k] + t * (self.values[k + 1] - self.values[k]),
            InterpKind::MonotoneCubic => {
                let t2 = t * t;
                let t3 = t2 * t;
                let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
                let h10 = t3 - 2.0 * t2 + t;
                let h01 = -2.0 * t3 + 3.0 * t2;
                let h11 = t3 - t2;
                h00 * self.values[k]
                    + h10 * h * self.slopes[k]
                    + h01 * self.values[k + 1]
                    + h11 * h * self.slopes[k + 1]
            }
        }
    }

    /// Swap grid and values. Requires strictly monotone values; the inverse
    /// of an increasing tabulation is increasing, of a decreasing one
    /// decreasing (re-sorted so the new grid increases).
    pub fn invert(&self) -> Result<SampledFunction> {
        match self.monotone {
            Monotonicity::None => Err(Error::NotMonotone),
            Monotonicity::Increasing => {
                SampledFunction::with_kind(self.values.clone(), self.grid.clone(), self.kind)
            }
            Monotonicity::Decreasing => {
                let mut g: Vec<f64> = self.values.clone();
                let mut v: Vec<f64> = self.grid.clone();
                g.reverse();
                v.reverse();
                SampledFunction::with_kind(g, v, self.kind)
            }
        }
    }
}

fn fritsch_carlson_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = y
        .windows(2)
        .zip(&h)
        .map(|(w, &hi)| (w[1] - w[0]) / hi)
        .collect();

    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        let s1 = delta[k - 1];
        let s2 = delta[k];
        if s1 == 0.0 || s2 == 0.0 || s1.signum() != s2.signum() {
            d[k] = 0.0;
        } else {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / s1 + w2 / s2);
        }
    }

    d[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn endpoint_slope(h0: f64, h1: f64, s0: f64, s1: f64) -> f64 {
    let mut d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if d.signum() != s0.signum() {
        d = 0.0;
    } else if s0.signum() != s1.signum() && d.abs() > 3.0 * s0.abs() {
        d = 3.0 * s0;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tab(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> SampledFunction {
        let grid = super::super::cosine_grid(lo, hi, n);
        let values = grid.iter().map(|&x| f(x)).collect();
        SampledFunction::new(grid, values).unwrap()
    }

    #[test]
    fn identity_round_trip() {
        let sf = tab(|x| x, 0.0, 1.0, 17);
        let inv = sf.invert().unwrap();
        for &x in &[0.1, 0.35, 0.8] {
            assert!((inv.eval(sf.eval(x)) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn square_inverts_to_sqrt() {
        let sf = tab(|x| x * x, 0.0, 1.0, 257);
        let inv = sf.invert().unwrap();
        assert!((inv.eval(0.25) - 0.5).abs() < 1e-8);
        assert_eq!(inv.monotonicity(), Monotonicity::Increasing);
    }

    #[test]
    fn decreasing_linear_inverse() {
        // tabulation of (1-m)/k with k = 1: inverse at s = 0.3 is 0.7
        let sf = tab(|m| 1.0 - m, 0.0, 1.0, 33);
        assert_eq!(sf.monotonicity(), Monotonicity::Decreasing);
        let inv = sf.invert().unwrap();
        assert!((inv.eval(0.3) - 0.7).abs() < 1e-12);
        assert_eq!(inv.monotonicity(), Monotonicity::Decreasing);
    }

    #[test]
    fn rejects_short_or_unsorted() {
        assert!(SampledFunction::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 2.0]).is_err());
        assert!(
            SampledFunction::new(vec![0.0, 1.0, 1.0, 2.0], vec![0.0, 1.0, 2.0, 3.0]).is_err()
        );
    }

    #[test]
    fn invert_requires_monotone() {
        let sf = SampledFunction::new(
            vec![0.0, 1.0, 2.0, 3.0],
            vec![0.0, 1.0, 0.5, 2.0],
        )
        .unwrap();
        assert!(matches!(sf.invert().unwrap_err(), Error::NotMonotone));
    }

    #[test]
    fn no_overshoot_between_nodes() {
        // steep monotone data: interpolant must stay inside node envelopes
        let grid = vec![0.0, 0.1, 0.2, 1.0, 2.0];
        let values = vec![0.0, 0.9, 0.95, 0.99, 1.0];
        let sf = SampledFunction::new(grid.clone(), values.clone()).unwrap();
        for k in 0..grid.len() - 1 {
            for j in 1..50 {
                let x = grid[k] + (grid[k + 1] - grid[k]) * j as f64 / 50.0;
                let v = sf.eval(x);
                assert!(v >= values[k] - 1e-14 && v <= values[k + 1] + 1e-14);
            }
        }
    }

    proptest! {
        // inverse composed with the original is the identity at interior
        // grid nodes for strictly monotone tabulations
        #[test]
        fn prop_invert_round_trip(shift in 0.01f64..2.0, scale in 0.1f64..3.0) {
            let f = move |x: f64| scale * (x + shift).ln();
            let sf = tab(f, 0.0, 1.0, 65);
            let inv = sf.invert().unwrap();
            for &x in sf.grid().iter().skip(1).take(sf.grid().len() - 2) {
                let back = inv.eval(sf.eval(x));
                prop_assert!((back - x).abs() < 1e-8);
            }
        }

        // interpolation never leaves the node-value envelope
        #[test]
        fn prop_envelope_bound(seed in 0u64..1000) {
            let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64
            };
            let grid: Vec<f64> = (0..8).map(|i| i as f64).collect();
            let values: Vec<f64> = (0..8).map(|_| next()).collect();
            let sf = SampledFunction::new(grid.clone(), values.clone()).unwrap();
            for k in 0..7 {
                let lo = values[k].min(values[k + 1]);
                let hi = values[k].max(values[k + 1]);
                for j in 1..20 {
                    let x = grid[k] + (j as f64) / 20.0;
                    let v = sf.eval(x);
                    prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
                }
            }
        }
    }
}
