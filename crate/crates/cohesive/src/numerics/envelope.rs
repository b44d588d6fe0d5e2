//! Lower convex envelopes of sampled graphs.

use super::interp::{InterpKind, SampledFunction};
use crate::error::{Error, Result};

/// Lower convex hull of the graph points `(grid[i], values[i])`, returned as
/// a piecewise-linear tabulation on the *full* input grid (hull values at
/// every node). The result lies at or below the input pointwise.
pub fn lower_convex_envelope(grid: &[f64], values: &[f64]) -> Result<SampledFunction> {
    let n = grid.len();
    if n < 4 || values.len() != n {
        return Err(Error::Domain("envelope needs matching lengths >= 4".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("envelope grid must be strictly increasing".into()));
    }

    // Andrew-style monotone chain, lower hull only (grid already sorted).
    let mut hull: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (grid[b] - grid[a]) * (values[i] - values[a])
                - (grid[i] - grid[a]) * (values[b] - values[a]);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }

    // hull indices are increasing and include 0 and n-1, so every node
    // falls inside exactly one hull segment
    let mut env = vec![0.0; n];
    let mut seg = 0usize;
    for i in 0..n {
        while seg + 1 < hull.len() && hull[seg + 1] < i {
            seg += 1;
        }
        let a = hull[seg];
        let b = hull[(seg + 1).min(hull.len() - 1)];
        if i == a || a == b {
            env[i] = values[a];
        } else if i == b {
            env[i] = values[b];
        } else {
            let t = (grid[i] - grid[a]) / (grid[b] - grid[a]);
            env[i] = values[a] + t * (values[b] - values[a]);
        }
    }

    SampledFunction::with_kind(grid.to_vec(), env, InterpKind::Linear)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn convex_input_unchanged() {
        let grid: Vec<f64> = (0..9).map(|i| i as f64 / 8.0).collect();
        let values: Vec<f64> = grid.iter().map(|&x| (x - 0.4) * (x - 0.4)).collect();
        let env = lower_convex_envelope(&grid, &values).unwrap();
        for (e, v) in env.values().iter().zip(&values) {
            assert!((e - v).abs() < 1e-14);
        }
    }

    #[test]
    fn tent_collapses_to_chord() {
        let grid: Vec<f64> = (0..11).map(|i| i as f64 / 10.0).collect();
        let values: Vec<f64> = grid.iter().map(|&x| -(x - 0.5).abs()).collect();
        let env = lower_convex_envelope(&grid, &values).unwrap();
        // straight line through the endpoints (0, -0.5) .. (0.5, ...) hmm:
        // endpoints are (0, -0.5) and (1, -0.5); the hull dips to (0.5, 0? no)
        // values: -|x-0.5| has minimum -0 at x=0?? No: -|0-0.5| = -0.5 at both
        // ends and 0 at the center, so the hull is the chord at -0.5.
        // interior minimum equals the endpoints, so the chord is flat:
        for (&x, e) in grid.iter().zip(env.values()) {
            let chord = -0.5 + 0.0 * x;
            assert!((e - chord).abs() < 1e-14, "x={x} e={e}");
        }
    }

    #[test]
    fn four_point_hull() {
        let grid = vec![0.0, 1.0, 2.0, 3.0];
        let values = vec![0.0, 1.0, 0.1, 1.5];
        // brute-force hull of the 4 points goes through (0,0), (2,0.1), (3,1.5)
        let env = lower_convex_envelope(&grid, &values).unwrap();
        assert!((env.eval(0.0) - 0.0).abs() < 1e-14);
        assert!((env.eval(1.0) - 0.05).abs() < 1e-14);
        assert!((env.eval(2.0) - 0.1).abs() < 1e-14);
        assert!((env.eval(3.0) - 1.5).abs() < 1e-14);
    }

    #[test]
    fn envelope_below_values() {
        let grid: Vec<f64> = (0..33).map(|i| i as f64 / 32.0).collect();
        let values: Vec<f64> = grid.iter().map(|&x| (7.0 * x).sin()).collect();
        let env = lower_convex_envelope(&grid, &values).unwrap();
        for (e, v) in env.values().iter().zip(&values) {
            assert!(*e <= v + 1e-12);
        }
    }

    proptest! {
        // second differences of the envelope stay nonnegative on every
        // refinement of the sampling grid
        #[test]
        fn prop_second_differences_nonnegative(seed in 0u64..500, refine in 1usize..4) {
            let n = 16 * (1 << refine) + 1;
            let mut state = seed.wrapping_add(99).wrapping_mul(6364136223846793005);
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64
            };
            let grid: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
            let values: Vec<f64> = (0..n).map(|_| next()).collect();
            let env = lower_convex_envelope(&grid, &values).unwrap();
            let ev = env.values();
            for i in 1..n - 1 {
                let h1 = grid[i] - grid[i - 1];
                let h2 = grid[i + 1] - grid[i];
                let second = (ev[i + 1] - ev[i]) / h2 - (ev[i] - ev[i - 1]) / h1;
                prop_assert!(second >= -1e-9, "i={} second={}", i, second);
            }
            for (e, v) in ev.iter().zip(&values) {
                prop_assert!(*e <= v + 1e-12);
            }
        }
    }
}
