//! Diffuse bulk energy densities `h_ς` and their convex envelopes.

use crate::error::Result;
use crate::model::ScalarMap;
use crate::numerics::{self, lower_convex_envelope, SampledFunction};

/// `h_ς(t) = inf_{τ > 0} { φ(1/τ) t² + ς² τ / 4 }`, with the conventions
/// `h_0 ≡ 0` and `h_∞(t) = φ(∞) t²`.
pub fn diffuse_density(phi_deg: &ScalarMap, varsigma: f64, t: f64) -> f64 {
    if varsigma == 0.0 || t == 0.0 {
        return 0.0;
    }
    if varsigma.is_infinite() {
        return phi_deg(1e15) * t * t;
    }
    let obj = |tau: f64| phi_deg(1.0 / tau) * t * t + 0.25 * varsigma * varsigma * tau;
    // the infimum may sit at the τ -> 0 boundary, where the objective tends
    // to φ(∞) t²; keep that limit as a candidate
    let boundary = phi_deg(1e15) * t * t;

    // coarse scan on a log grid, then golden-section refinement
    let grid = numerics::geometric_grid(1e-8, 1e8, 512);
    let (mut best_i, mut best) = (0usize, f64::INFINITY);
    for (i, &tau) in grid.iter().enumerate() {
        let v = obj(tau);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let mut a = grid[best_i.saturating_sub(1)];
    let mut b = grid[(best_i + 1).min(grid.len() - 1)];
    let gr = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut x1 = b - gr * (b - a);
    let mut x2 = a + gr * (b - a);
    let (mut f1, mut f2) = (obj(x1), obj(x2));
    for _ in 0..100 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = obj(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = obj(x2);
        }
    }
    best.min(f1).min(f2).min(boundary)
}

/// Lower convex envelope of `t -> h_ς(t)` tabulated on `t_grid`.
pub fn diffuse_density_envelope(
    phi_deg: &ScalarMap,
    varsigma: f64,
    t_grid: &[f64],
) -> Result<SampledFunction> {
    let values: Vec<f64> = t_grid
        .iter()
        .map(|&t| diffuse_density(phi_deg, varsigma, t))
        .collect();
    lower_convex_envelope(t_grid, &values)
}
