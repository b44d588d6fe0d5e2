//! Independent brute-force verification of the cohesive law: minimize the
//! discretized profile functional over piecewise-linear profiles directly
//! (cyclic coordinate descent, no Euler–Lagrange shortcuts), with an outer
//! scan over the phase-field minimum `m`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{PhaseFieldModel, ScalarMap};
use crate::numerics;

/// Configuration of the brute-force solver.
#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    /// Node count for the profile (≥ 64).
    pub n_w: usize,
    /// Outer m-grid size (≥ 16).
    pub n_m: usize,
    /// Sweep cap per grid level.
    pub max_sweeps: usize,
    /// Relative per-sweep energy decrease below which a level stops.
    pub conv_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { n_w: 2000, n_m: 200, max_sweeps: 400, conv_tol: 1e-9 }
    }
}

impl OracleConfig {
    fn validate(&self) -> Result<()> {
        if self.n_w < 64 || self.n_m < 16 {
            return Err(Error::BadParameters(format!(
                "oracle needs n_w >= 64 and n_m >= 16, got {} / {}",
                self.n_w, self.n_m
            )));
        }
        Ok(())
    }
}

/// Symmetric node grid on `[2m-1, 1]` with geometric clustering (ratio
/// 1.05, growth capped at ~50x) toward the near-singular point `t = m`.
/// The center node sits exactly at `m`; `n_half` is forced to a power-of-two
/// multiple of a small base so every coarsening level keeps the center.
fn profile_grid(m: f64, n_half: usize) -> Vec<f64> {
    let ratio: f64 = 1.05;
    let cap = ratio.powi(80);
    let weights: Vec<f64> = (0..n_half)
        .map(|i| ratio.powi(i as i32).min(cap))
        .collect();
    let total: f64 = weights.iter().sum();
    let mut nodes = Vec::with_capacity(2 * n_half + 1);
    // left half, mirrored
    let mut acc = 0.0;
    let mut right = Vec::with_capacity(n_half + 1);
    right.push(m);
    for w in &weights {
        acc += w / total * (1.0 - m);
        right.push(m + acc);
    }
    *right.last_mut().unwrap() = 1.0;
    for i in (1..=n_half).rev() {
        nodes.push(2.0 * m - right[i]);
    }
    nodes.extend_from_slice(&right);
    nodes
}

struct Cells {
    /// Cell widths.
    h: Vec<f64>,
    /// `khat_m` at cell midpoints.
    a: Vec<f64>,
    /// `omega_m(1 - ·)` at cell midpoints.
    b: Vec<f64>,
}

fn build_cells(model: &PhaseFieldModel, m: f64, nodes: &[f64]) -> Cells {
    let reflect = |t: f64| if t < m { 2.0 * m - t } else { t };
    let n = nodes.len() - 1;
    let mut h = Vec::with_capacity(n);
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for j in 0..n {
        let width = nodes[j + 1] - nodes[j];
        let mid = reflect(0.5 * (nodes[j] + nodes[j + 1]));
        h.push(width);
        a.push((model.khat)(mid).max(1e-300));
        b.push((model.omega)(1.0 - mid).max(0.0));
    }
    Cells { h, a, b }
}

fn energy(cells: &Cells, w: &[f64]) -> f64 {
    let mut e = 0.0;
    for j in 0..cells.h.len() {
        let z = (w[j + 1] - w[j]) / cells.h[j];
        e += cells.h[j] * (cells.a[j] * z * z + cells.b[j]).sqrt();
    }
    e
}

/// Exact 1-D line solve for one interior node: the objective restricted to
/// `w_i` is smooth and strictly convex, so a safeguarded Newton on the
/// monotone derivative converges fast; the minimizer stays between the
/// neighbors.
#[allow(clippy::too_many_arguments)]
fn solve_node(
    h_l: f64,
    a_l: f64,
    b_l: f64,
    h_r: f64,
    a_r: f64,
    b_r: f64,
    w_l: f64,
    w_r: f64,
    w_init: f64,
) -> f64 {
    let lo = w_l.min(w_r);
    let hi = w_l.max(w_r);
    if hi - lo < 1e-300 {
        return lo;
    }
    let dphi = |w: f64| -> f64 {
        let zl = (w - w_l) / h_l;
        let zr = (w_r - w) / h_r;
        a_l * zl / (a_l * zl * zl + b_l).sqrt() - a_r * zr / (a_r * zr * zr + b_r).sqrt()
    };
    let span = hi - lo;
    let mut lo = lo;
    let mut hi = hi;
    let mut w = w_init.clamp(lo, hi);
    for _ in 0..12 {
        let d = dphi(w);
        if d > 0.0 {
            hi = w;
        } else {
            lo = w;
        }
        if hi - lo <= 1e-14 * span {
            break;
        }
        let zl = (w - w_l) / h_l;
        let zr = (w_r - w) / h_r;
        let ql = a_l * zl * zl + b_l;
        let qr = a_r * zr * zr + b_r;
        let d2 = a_l * b_l / (h_l * ql * ql.sqrt()) + a_r * b_r / (h_r * qr * qr.sqrt());
        let step = if d2 > 0.0 { d / d2 } else { 0.0 };
        let mut next = w - step;
        if !(next > lo && next < hi) || step == 0.0 {
            next = 0.5 * (lo + hi);
        }
        let moved = (next - w).abs();
        w = next;
        if moved <= 1e-13 * span {
            break;
        }
    }
    w
}

fn sweep(cells: &Cells, w: &mut [f64]) {
    let n = w.len();
    for i in 1..n - 1 {
        w[i] = solve_node(
            cells.h[i - 1],
            cells.a[i - 1],
            cells.b[i - 1],
            cells.h[i],
            cells.a[i],
            cells.b[i],
            w[i - 1],
            w[i + 1],
            w[i],
        );
    }
}

/// Minimize the discretized profile functional for fixed `(m, s)` over
/// piecewise-linear profiles pinned to `0` and `s` at the ends.
///
/// A coarse-to-fine schedule of the cyclic descent keeps the runtime
/// practical; by convexity the minimizer (and its energy) is independent of
/// the schedule up to the convergence tolerance. Returns the energy.
pub fn discrete_profile_minimum(
    model: &PhaseFieldModel,
    m: f64,
    s: f64,
    n_w: usize,
) -> Result<f64> {
    Ok(discrete_profile(model, m, s, n_w, &OracleConfig { n_w, ..Default::default() })?.2)
}

/// As [`discrete_profile_minimum`], returning `(nodes, w, energy)`.
pub fn discrete_profile(
    model: &PhaseFieldModel,
    m: f64,
    s: f64,
    n_w: usize,
    cfg: &OracleConfig,
) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    if !(0.0 < m && m < 1.0) || s < 0.0 {
        return Err(Error::Domain(format!("need m in (0,1), s >= 0; got m={m}, s={s}")));
    }
    // force n_half = base * 2^k so every coarsening keeps the center node
    let requested_half = (n_w.max(64) - 1) / 2;
    let mut levels = 0usize;
    let mut base = requested_half;
    while base > 16 {
        base = base.div_ceil(2);
        levels += 1;
    }
    let n_half = base << levels;
    let fine = profile_grid(m, n_half);

    // coarse-to-fine: stride 2^levels down to 1
    let mut w: Vec<f64> = Vec::new();
    let mut prev_nodes: Vec<f64> = Vec::new();
    let mut result_energy = 0.0;
    for lvl in (0..=levels).rev() {
        let stride = 1usize << lvl;
        let nodes: Vec<f64> = fine.iter().copied().step_by(stride).collect();
        let cells = build_cells(model, m, &nodes);
        let mut wl = if w.is_empty() {
            // affine interpolant between the pinned boundary values
            let t0 = nodes[0];
            let t1 = *nodes.last().unwrap();
            nodes.iter().map(|&t| s * (t - t0) / (t1 - t0)).collect()
        } else {
            prolong(&prev_nodes, &w, &nodes)
        };
        *wl.first_mut().unwrap() = 0.0;
        *wl.last_mut().unwrap() = s;

        let mut e_prev = energy(&cells, &wl);
        let cap = if nodes.len() <= 129 { 4 * cfg.max_sweeps } else { cfg.max_sweeps };
        for _ in 0..cap {
            sweep(&cells, &mut wl);
            let e = energy(&cells, &wl);
            let drop = e_prev - e;
            e_prev = e;
            if drop <= cfg.conv_tol * e.abs().max(1e-300) {
                break;
            }
        }
        result_energy = e_prev;
        prev_nodes = nodes;
        w = wl;
    }
    Ok((prev_nodes, w, result_energy))
}

fn prolong(coarse_t: &[f64], coarse_w: &[f64], fine_t: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(fine_t.len());
    let mut k = 0usize;
    for &t in fine_t {
        while k + 2 < coarse_t.len() && coarse_t[k + 1] <= t {
            k += 1;
        }
        let (t0, t1) = (coarse_t[k], coarse_t[k + 1]);
        let lam = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        out.push(coarse_w[k] + lam * (coarse_w[k + 1] - coarse_w[k]));
    }
    out
}

/// Result of the outer minimization over `m`.
#[derive(Clone, Copy, Debug)]
pub struct BruteForceG {
    pub value: f64,
    pub argmin_m: f64,
}

/// `g(s)` by scanning the m-grid and taking the smallest discrete profile
/// energy, with one local refinement pass around the arg-min.
pub fn brute_force_g(model: &PhaseFieldModel, s: f64, cfg: &OracleConfig) -> Result<BruteForceG> {
    cfg.validate()?;
    let ms: Vec<f64> = (0..cfg.n_m)
        .map(|i| (i as f64 + 0.5) / cfg.n_m as f64)
        .collect();
    let energies: Vec<f64> = ms
        .par_iter()
        .map(|&m| discrete_profile(model, m, s, cfg.n_w, cfg).map(|r| r.2))
        .collect::<Result<Vec<_>>>()?;
    let (mut best_i, mut best) = (0usize, f64::INFINITY);
    for (i, &e) in energies.iter().enumerate() {
        if e < best {
            best = e;
            best_i = i;
        }
    }
    // one refinement pass between the neighbors of the arg-min
    let lo = if best_i == 0 { ms[0] * 0.5 } else { ms[best_i - 1] };
    let hi = if best_i + 1 == ms.len() {
        0.5 * (ms[best_i] + 1.0)
    } else {
        ms[best_i + 1]
    };
    let refine: Vec<f64> = (1..=7).map(|i| lo + (hi - lo) * i as f64 / 8.0).collect();
    let refined: Vec<f64> = refine
        .par_iter()
        .map(|&m| discrete_profile(model, m, s, cfg.n_w, cfg).map(|r| r.2))
        .collect::<Result<Vec<_>>>()?;
    let mut argmin = ms[best_i];
    for (i, &e) in refined.iter().enumerate() {
        if e < best {
            best = e;
            argmin = refine[i];
        }
    }
    Ok(BruteForceG { value: best, argmin_m: argmin })
}

/// Brute-force diffuse density: plain minimum over a log-spaced grid
/// spanning `[1e-8, 1e8]` (no refinement), used as the independent check of
/// the forward evaluation.
pub fn brute_force_diffuse_density(
    phi_deg: &ScalarMap,
    varsigma: f64,
    t: f64,
    n_tau: usize,
) -> f64 {
    if varsigma == 0.0 || t == 0.0 {
        return 0.0;
    }
    if varsigma.is_infinite() {
        return phi_deg(1e15) * t * t;
    }
    let n = n_tau.max(10_000);
    let grid = numerics::geometric_grid(1e-8, 1e8, n);
    let mut best = f64::INFINITY;
    for tau in grid {
        let v = phi_deg(1.0 / tau) * t * t + 0.25 * varsigma * varsigma * tau;
        if v < best {
            best = v;
        }
    }
    best
}
