//! Everything a phase-field model determines: the energy split integrals,
//! the jump threshold `Φ`, Euler–Lagrange stress of the reduced profile
//! problem, optimal profiles, the cohesive law `g` with derivative, the
//! superlinear upper bound, and the diffuse bulk densities.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{PhaseFieldModel, Sigma};
use crate::numerics::{self, brent_root, quad, Estimate, QuadratureSpec, SampledFunction};

mod diffuse;
mod profile;

pub use diffuse::{diffuse_density, diffuse_density_envelope};
pub use profile::{optimal_profile, OptimalProfile, Regularity};

/// Smallest `m` the solvers resolve; outside `[M_MIN, 1 - M_MIN]` the
/// limiting formulas take over.
pub const M_MIN: f64 = 1e-6;

/// Adaptive quadrature that tolerates a budget-exhausted estimate whose
/// remaining error sits below the tabulation noise floor; everything the
/// energy integrals feed has tolerances orders of magnitude above it.
fn adaptive_tolerant<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let (est, converged) = quad::adaptive_with_flag(f, a, b, spec)?;
    if !converged && est.error > 1e-6 * (1.0 + est.value.abs()) {
        return Err(Error::NonConvergent {
            subdivisions: spec.max_subdivisions,
            estimate: est.error,
        });
    }
    Ok(est)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum EnergyKind {
    /// `B(m, λ) = 2 ∫_m^1 [λ² ω(1-t) / (k̂(t) (k̂(t) - λ²))]^{1/2} dt`:
    /// total opening carried by the smooth part of the profile.
    Opening,
    /// `A(m, λ) = 2 ∫_m^1 [(k̂(t) - λ²) ω(1-t) / k̂(t)]^{1/2} dt`:
    /// the complementary part of the energy split `𝒢 = A + λ B`.
    Complementary,
    /// `2 ∫_m^1 [k̂(t) ω(1-t) / (k̂(t) - λ²)]^{1/2} dt`: the unsplit reduced
    /// energy, kept as an independent cross-check route.
    Direct,
}

/// Shared engine for the three energy integrals over `[m, 1]`.
///
/// The `(t - m)^{-1/2}` endpoint singularity at `λ = k̂^{1/2}(m)` is removed
/// by `t = m + u²`; the difference `k̂(m + u²) - k̂(m)` switches to
/// `k̂'(m) u²` for tiny `u` where direct evaluation would cancel
/// catastrophically. For `σ = ∞` models the far end is handled under
/// `x = -log(1-t)` up to `t = 1 - 1e-9`; the remainder is bounded by the
/// vanishing of `ω` at the origin and is negligible at the tolerances used.
fn energy_integral(
    model: &PhaseFieldModel,
    m: f64,
    lam: f64,
    kind: EnergyKind,
) -> Result<f64> {
    if !(0.0 < m && m < 1.0) {
        return Err(Error::Domain(format!("m = {m} outside (0, 1)")));
    }
    let khat_m = (model.khat)(m);
    if lam < 0.0 || lam * lam > khat_m * (1.0 + 1e-10) + 1e-300 {
        return Err(Error::Domain(format!(
            "lambda² = {} exceeds khat(m) = {khat_m}",
            lam * lam
        )));
    }
    if kind == EnergyKind::Opening && lam == 0.0 {
        return Ok(0.0);
    }
    let gap = (khat_m - lam * lam).max(0.0);
    let kp_m = (model.khat_prime)(m).max(1e-300);
    // the tangent model khat'(m) u² replaces the direct difference wherever
    // cancellation (or tabulation noise, relative scale ~1e-9) would
    // dominate the true difference
    let u_switch2 = (1e-7 * m.max(1e-3))
        .max(1e-6 * khat_m / kp_m)
        .min(0.01 * (1.0 - m));

    // floor against cancellation noise when khat flattens toward t = 1;
    // only unresolvable configurations ever see it
    let q_floor = 1e-13 * khat_m.max(1e-300);
    let stabilized = |u: f64| -> f64 {
        let u2 = u * u;
        let diff = if u2 < u_switch2 {
            kp_m * u2
        } else {
            ((model.khat)(m + u2) - khat_m).max(kp_m * u2 * 1e-8)
        };
        (diff + gap).max(q_floor)
    };

    let f_u = |u: f64| -> f64 {
        let t = m + u * u;
        let om = (model.omega)(1.0 - t).max(0.0);
        let kt = (model.khat)(t);
        let q = stabilized(u);
        let val = match kind {
            EnergyKind::Opening => lam * (om / (kt * q)).sqrt(),
            EnergyKind::Complementary => (q * om / kt).sqrt(),
            EnergyKind::Direct => (kt * om / q).sqrt(),
        };
        2.0 * 2.0 * u * val
    };

    let spec = QuadratureSpec::default();
    let t_end = match model.sigma {
        Sigma::Finite(_) => 1.0,
        Sigma::Infinite => {
            if m < 0.98 {
                0.99
            } else {
                m + 0.5 * (1.0 - m)
            }
        }
    };

    // split the u-range at omega kinks so adaptive refinement stays local
    let mut u_cuts: Vec<f64> = model
        .omega_breakpoints
        .iter()
        .filter_map(|&x| {
            let t = 1.0 - x;
            if t > m && t < t_end {
                Some((t - m).sqrt())
            } else {
                None
            }
        })
        .collect();
    u_cuts.sort_by(f64::total_cmp);

    let u_max = (t_end - m).sqrt();
    let mut total = 0.0;
    let mut left = 0.0;
    for u in u_cuts.into_iter().chain(std::iter::once(u_max)) {
        if u > left {
            total += adaptive_tolerant(&f_u, left, u, &spec)?.value;
            left = u;
        }
    }

    if model.sigma.is_infinite() {
        // x = -log(1-t) on [t_end, 1 - 1e-9]
        let f_t = |t: f64| -> f64 {
            let om = (model.omega)(1.0 - t).max(0.0);
            let kt = (model.khat)(t);
            let q = (kt - lam * lam).max(1e-300);
            let val = match kind {
                EnergyKind::Opening => lam * (om / (kt * q)).sqrt(),
                EnergyKind::Complementary => (q * om / kt).sqrt(),
                EnergyKind::Direct => (kt * om / q).sqrt(),
            };
            2.0 * val
        };
        let x_lo = -(1.0 - t_end).ln();
        let x_hi = -(1e-9f64).ln();
        let f_x = |x: f64| {
            let e = (-x).exp();
            e * f_t(1.0 - e)
        };
        total += adaptive_tolerant(&f_x, x_lo, x_hi, &spec)?.value;
    }

    Ok(total)
}

/// `B(m, λ)`: the crack opening carried by the smooth profile part for
/// stress multiplier `λ ∈ (0, k̂^{1/2}(m)]`. May be large near degenerate
/// configurations; the caller interprets divergence.
pub fn profile_opening(model: &PhaseFieldModel, m: f64, lam: f64) -> Result<f64> {
    energy_integral(model, m, lam, EnergyKind::Opening)
}

/// `A(m, λ)`: complementary part of the energy split `𝒢(m, λ) = A + λ B`.
pub fn complementary_energy(model: &PhaseFieldModel, m: f64, lam: f64) -> Result<f64> {
    energy_integral(model, m, lam, EnergyKind::Complementary)
}

/// The unsplit reduced energy `2 ∫ [k̂ ω / (k̂ - λ²)]^{1/2}`; equals
/// `A(m, λ) + λ B(m, λ)` and is kept as an independent route for tests.
pub fn reduced_energy_direct(model: &PhaseFieldModel, m: f64, lam: f64) -> Result<f64> {
    energy_integral(model, m, lam, EnergyKind::Direct)
}

/// Jump threshold `Φ(m) = B(m, k̂^{1/2}(m))`: profiles jump at `t = m`
/// exactly when the prescribed opening exceeds it.
pub fn jump_threshold(model: &PhaseFieldModel, m: f64) -> Result<f64> {
    let lam = model.khat_sqrt(m);
    profile_opening(model, m, lam)
}

/// Classification of the sampled jump threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiClass {
    StrictlyDecreasing,
    NonDecreasing,
    NonMonotone,
}

/// Tabulated jump threshold with endpoint limits and classification.
#[derive(Clone, Debug)]
pub struct PhiTable {
    pub table: SampledFunction,
    /// `Φ(0⁺)`; may be `+∞`.
    pub phi0plus: f64,
    /// `Φ(1⁻)`.
    pub phi1minus: f64,
    pub classification: PhiClass,
    /// The small-`m` closed-form limit `π ω^{1/2}(1) / (2 (k̂^{1/2})'(0⁺))`,
    /// reported as a diagnostic only: on known examples it disagrees with
    /// direct evaluation by a factor 2, so direct evaluation is treated as
    /// ground truth.
    pub closed_form_phi0: Option<f64>,
    /// Advisory: sampled convexity of `(k̂ ∘ Ψ^{-1})^{1/2}`, a sufficient
    /// criterion for a strictly decreasing threshold.
    pub decreasing_criterion: Option<bool>,
}

/// `khat` differences near `t = 1` must stay above the floating-point
/// noise floor for the threshold integrand to be computable; models whose
/// ratio flattens rapidly (quartic and worse) lose a small neighbourhood
/// of 1.
fn threshold_resolvable(model: &PhaseFieldModel, m: f64) -> bool {
    let k_m = (model.khat)(m);
    let k_mid = (model.khat)(m + 0.5 * (1.0 - m));
    k_mid - k_m >= 1e-5 * k_m.max(1e-300)
}

/// Build the threshold table on `n` boundary-clustered nodes and classify
/// its monotonicity; endpoint limits by dyadic evaluation with Aitken
/// acceleration.
pub fn jump_threshold_table(model: &PhaseFieldModel, n: usize) -> Result<PhiTable> {
    let n = n.max(16);
    let mut m_hi = 1.0 - M_MIN;
    while !threshold_resolvable(model, m_hi) && m_hi > 0.9 {
        m_hi = 1.0 - 2.0 * (1.0 - m_hi);
    }
    let grid = numerics::cosine_grid(M_MIN, m_hi, n);
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&m| jump_threshold(model, m))
        .collect::<Result<Vec<_>>>()?;

    let tol = 1e-9;
    let mut inc_violation = 0.0f64;
    let mut dec_violation = 0.0f64;
    for w in values.windows(2) {
        let d = w[1] - w[0];
        if d < 0.0 {
            inc_violation = inc_violation.max(-d);
        }
        if d > 0.0 {
            dec_violation = dec_violation.max(d);
        }
    }
    let classification = if dec_violation <= tol {
        PhiClass::StrictlyDecreasing
    } else if inc_violation <= tol {
        PhiClass::NonDecreasing
    } else {
        PhiClass::NonMonotone
    };

    let phi0plus = endpoint_limit(model, true, M_MIN)?;
    let phi1minus = endpoint_limit(model, false, m_hi)?;

    let closed_form_phi0 = {
        let h = 1e-7;
        let d = (model.khat_sqrt(h) - model.khat_sqrt(0.0)) / h;
        let om1 = (model.omega)(1.0);
        if d.is_finite() && d > 1e-12 && om1.is_finite() {
            Some(std::f64::consts::PI * om1.max(0.0).sqrt() / (2.0 * d))
        } else {
            None
        }
    };

    let decreasing_criterion = sampled_khat_psi_convexity(model);

    let table = SampledFunction::new(grid, values)?;
    Ok(PhiTable {
        table,
        phi0plus,
        phi1minus,
        classification,
        closed_form_phi0,
        decreasing_criterion,
    })
}

fn endpoint_limit(model: &PhaseFieldModel, at_zero: bool, fallback_m: f64) -> Result<f64> {
    let mut vals = Vec::new();
    // shallow start: rapidly flattening ratios may only be resolvable a few
    // dyadic steps in, and the acceleration below does the rest
    for j in 2..=17 {
        let m = if at_zero {
            0.5f64.powi(j)
        } else {
            1.0 - 0.5f64.powi(j)
        };
        if !at_zero && !threshold_resolvable(model, m) {
            break;
        }
        vals.push(jump_threshold(model, m)?);
    }
    if vals.len() < 3 {
        return match vals.last() {
            Some(&v) => Ok(v),
            None => jump_threshold(model, fallback_m),
        };
    }
    let n = vals.len();
    let growing = vals.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    if vals[n - 1] > 1e8 && growing {
        return Ok(f64::INFINITY);
    }
    let (a, b, c) = (vals[n - 3], vals[n - 2], vals[n - 1]);
    let denom = c - 2.0 * b + a;
    if denom.abs() > 1e-12 * c.abs().max(1.0) {
        let accel = c - (c - b) * (c - b) / denom;
        if accel.is_finite() {
            return Ok(accel.max(0.0));
        }
    }
    Ok(c.max(0.0))
}

fn sampled_khat_psi_convexity(model: &PhaseFieldModel) -> Option<bool> {
    // z -> k̂^{1/2}(Ψ^{-1}(z)) convex (sampled second differences)
    let n = 64;
    let psi1 = model.psi(1.0).ok()?;
    let mut vals = Vec::with_capacity(n);
    for i in 1..n {
        let z = psi1 * i as f64 / n as f64;
        let y = brent_root(|t| model.psi(t).unwrap_or(f64::NAN) - z, 0.0, 1.0, 1e-10).ok()?;
        vals.push(model.khat_sqrt(y));
    }
    let mut convex = true;
    for w in vals.windows(3) {
        if w[2] - 2.0 * w[1] + w[0] < -1e-6 * (w[1].abs() + 1.0) {
            convex = false;
            break;
        }
    }
    Some(convex)
}

/// The Euler–Lagrange stress `λ` of the reduced profile problem: the unique
/// `λ ∈ (0, k̂^{1/2}(m)]` with `B(m, λ) = s`, for `0 < s ≤ Φ(m)`.
pub fn equilibrium_stress(model: &PhaseFieldModel, m: f64, s: f64) -> Result<f64> {
    let lam_max = model.khat_sqrt(m);
    let phi_m = jump_threshold(model, m)?;
    if s > phi_m * (1.0 + 1e-12) {
        return Err(Error::OutOfRange(format!(
            "opening s = {s} exceeds the jump threshold {phi_m}; the profile jumps"
        )));
    }
    if s <= 0.0 {
        return Ok(0.0);
    }
    if s >= phi_m {
        return Ok(lam_max);
    }
    let f = |lam: f64| profile_opening(model, m, lam).unwrap_or(f64::NAN) - s;
    brent_root(f, 0.0, lam_max, 1e-12 * lam_max)
}

/// Minimal relaxed profile energy `𝔊_s(m)`: the smooth branch
/// `A(m, λ_{m,s}) + λ_{m,s} s` when the threshold allows it, else the
/// jumping branch `A(m, k̂^{1/2}(m)) + k̂^{1/2}(m) s`.
pub fn reduced_energy(model: &PhaseFieldModel, m: f64, s: f64) -> Result<f64> {
    let phi_m = jump_threshold(model, m)?;
    let lam = if phi_m >= s {
        equilibrium_stress(model, m, s)?
    } else {
        model.khat_sqrt(m)
    };
    Ok(complementary_energy(model, m, lam)? + lam * s)
}

// ---------------------------------------------------------------------------
// the cohesive law

/// Point data of a swept cohesive curve.
#[derive(Clone, Debug)]
pub struct CohesiveCurve {
    pub s_grid: Vec<f64>,
    pub g_values: Vec<f64>,
    pub g_prime_values: Vec<f64>,
    /// Minimizing `m` per sample; `NaN` where the interior formula does not
    /// apply.
    pub m_star_values: Vec<f64>,
    pub s_frac: f64,
    pub two_psi1: f64,
    /// Set when the threshold was non-monotone and the global-scan fallback
    /// produced the values.
    pub best_effort: bool,
}

/// Cohesive law evaluator; builds the threshold table once.
pub struct CohesiveSolver<'a> {
    model: &'a PhaseFieldModel,
    pub phi: PhiTable,
}

impl<'a> CohesiveSolver<'a> {
    pub fn new(model: &'a PhaseFieldModel) -> Result<Self> {
        let phi = jump_threshold_table(model, 512)?;
        Ok(Self { model, phi })
    }

    pub fn with_table(model: &'a PhaseFieldModel, phi: PhiTable) -> Self {
        Self { model, phi }
    }

    pub fn two_psi1(&self) -> f64 {
        2.0 * self.model.psi1
    }

    /// Smallest opening with `g(s) = 2Ψ(1)`.
    pub fn s_frac(&self) -> f64 {
        match self.phi.classification {
            PhiClass::StrictlyDecreasing => self.phi.phi0plus,
            PhiClass::NonDecreasing => match self.model.sigma {
                Sigma::Finite(sig) => 2.0 * self.model.psi1 / sig,
                Sigma::Infinite => f64::NAN,
            },
            PhiClass::NonMonotone => f64::NAN,
        }
    }

    /// Invert the threshold: the unique `m` with `Φ(m) = s`, seeded from the
    /// table and polished against direct evaluations so interpolation error
    /// never leaks into `g`.
    pub fn m_star(&self, s: f64) -> Result<f64> {
        let grid = self.phi.table.grid();
        let vals = self.phi.table.values();
        let n = grid.len();
        // threshold decreases: find the bracket cell by scanning the
        // monotone values (binary search on reversed order)
        let mut lo = 0usize;
        let mut hi = n - 1;
        if s >= vals[0] {
            hi = 1;
        } else if s <= vals[n - 1] {
            lo = n - 2;
        } else {
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if vals[mid] >= s {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        let (m_lo, m_hi) = self.phi.table.domain();
        let (mut a, mut b) = (grid[lo], grid[hi]);
        // widen until the direct evaluations bracket, staying inside the
        // resolvable domain of the table
        let mut fa = jump_threshold(self.model, a)? - s;
        let mut fb = jump_threshold(self.model, b)? - s;
        let mut tries = 0;
        while fa * fb > 0.0 && tries < 60 {
            if fa < 0.0 {
                a = (a - (b - a).max(1e-6)).max(m_lo);
                fa = jump_threshold(self.model, a)? - s;
            } else {
                b = (b + (b - a).max(1e-6)).min(m_hi);
                fb = jump_threshold(self.model, b)? - s;
            }
            tries += 1;
            if a <= m_lo && b >= m_hi && fa * fb > 0.0 {
                break;
            }
        }
        if fa * fb > 0.0 {
            // clamp to the nearer boundary
            return Ok(if fa.abs() < fb.abs() { a } else { b });
        }
        let m = brent_root(
            |m| jump_threshold(self.model, m).unwrap_or(f64::NAN) - s,
            a,
            b,
            1e-12,
        )?;
        Ok(m.clamp(M_MIN, 1.0 - M_MIN))
    }

    /// `g(s)`.
    pub fn value(&self, s: f64) -> Result<f64> {
        if s <= 0.0 {
            return Ok(0.0);
        }
        let two_psi1 = self.two_psi1();
        match self.phi.classification {
            PhiClass::StrictlyDecreasing => {
                if self.model.sigma.is_infinite() {
                    // threshold spans (0, Φ(0⁺)); no linear segment
                } else if s <= self.phi.phi1minus {
                    return Ok(self.model.sigma.value() * s);
                }
                if s >= self.phi.phi0plus {
                    return Ok(two_psi1);
                }
                let m = self.m_star(s)?;
                let lam = self.model.khat_sqrt(m);
                Ok(complementary_energy(self.model, m, lam)? + lam * s)
            }
            PhiClass::NonDecreasing => match self.model.sigma {
                Sigma::Finite(sig) => Ok((sig * s).min(two_psi1)),
                Sigma::Infinite => Err(Error::Unsupported(
                    "non-decreasing threshold with infinite critical stress".into(),
                )),
            },
            PhiClass::NonMonotone => {
                if self.model.sigma.is_infinite() {
                    return Err(Error::Unsupported(
                        "non-monotone threshold with infinite critical stress".into(),
                    ));
                }
                self.scan_value(s)
            }
        }
    }

    /// Best-effort global scan for non-monotone thresholds: minimize the
    /// reduced energy over the threshold's level set and the endpoint
    /// limits.
    fn scan_value(&self, s: f64) -> Result<f64> {
        let n = 1024;
        let grid = numerics::cosine_grid(M_MIN, 1.0 - M_MIN, n);
        let energies: Vec<f64> = grid
            .par_iter()
            .map(|&m| reduced_energy(self.model, m, s).unwrap_or(f64::INFINITY))
            .collect();
        let (mut best_i, mut best) = (0usize, f64::INFINITY);
        for (i, &e) in energies.iter().enumerate() {
            if e < best {
                best = e;
                best_i = i;
            }
        }
        // one golden-section refinement pass around the sampled minimum
        let lo = grid[best_i.saturating_sub(1)];
        let hi = grid[(best_i + 1).min(n - 1)];
        let gr = 0.5 * (5.0f64.sqrt() - 1.0);
        let (mut a, mut b) = (lo, hi);
        let mut x1 = b - gr * (b - a);
        let mut x2 = a + gr * (b - a);
        let mut f1 = reduced_energy(self.model, x1, s)?;
        let mut f2 = reduced_energy(self.model, x2, s)?;
        for _ in 0..60 {
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = reduced_energy(self.model, x1, s)?;
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = reduced_energy(self.model, x2, s)?;
            }
        }
        best = best.min(f1).min(f2);
        // endpoint limits
        let sig_s = self.model.sigma.value() * s;
        Ok(best.min(sig_s).min(self.two_psi1()))
    }

    /// `g'(s)`; requires a strictly decreasing threshold.
    pub fn derivative(&self, s: f64) -> Result<f64> {
        match self.phi.classification {
            PhiClass::StrictlyDecreasing => {
                if !self.model.sigma.is_infinite() && s <= self.phi.phi1minus {
                    return Ok(self.model.sigma.value());
                }
                if s >= self.phi.phi0plus {
                    return Ok(0.0);
                }
                if s <= 0.0 {
                    return Ok(self.model.sigma.value());
                }
                let m = self.m_star(s)?;
                Ok(self.model.khat_sqrt(m))
            }
            _ => Err(Error::Unsupported(
                "derivative formula needs a strictly decreasing threshold".into(),
            )),
        }
    }

    /// Sweep the law over a grid of openings.
    pub fn curve(&self, s_grid: &[f64]) -> Result<CohesiveCurve> {
        let rows: Vec<(f64, f64, f64)> = s_grid
            .par_iter()
            .map(|&s| -> Result<(f64, f64, f64)> {
                let g = self.value(s)?;
                let (gp, ms) = match self.phi.classification {
                    PhiClass::StrictlyDecreasing => {
                        let in_interior = s > self.phi.phi1minus.max(0.0)
                            && s < self.phi.phi0plus
                            && s > 0.0;
                        let gp = self.derivative(s)?;
                        let ms = if in_interior { self.m_star(s)? } else { f64::NAN };
                        (gp, ms)
                    }
                    PhiClass::NonDecreasing => {
                        let sig = self.model.sigma.value();
                        let sf = self.s_frac();
                        let gp = if s < sf { sig } else { 0.0 };
                        (gp, f64::NAN)
                    }
                    PhiClass::NonMonotone => (f64::NAN, f64::NAN),
                };
                Ok((g, gp, ms))
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(CohesiveCurve {
            s_grid: s_grid.to_vec(),
            g_values: rows.iter().map(|r| r.0).collect(),
            g_prime_values: rows.iter().map(|r| r.1).collect(),
            m_star_values: rows.iter().map(|r| r.2).collect(),
            s_frac: self.s_frac(),
            two_psi1: self.two_psi1(),
            best_effort: self.phi.classification == PhiClass::NonMonotone,
        })
    }
}

/// Superlinear upper bound
/// `ĝ(s) = inf_x { 2(Ψ(1) - Ψ(1-x)) + k̂^{1/2}(1-x) s }` (valid for
/// `σ = ∞` models only).
pub fn superlinear_bound(model: &PhaseFieldModel, s: f64) -> Result<f64> {
    if !model.sigma.is_infinite() {
        return Err(Error::WrongRegime { expected: "superlinear" });
    }
    if s <= 0.0 {
        return Ok(0.0);
    }
    let psi1 = model.psi1;
    let obj = |x: f64| -> f64 {
        let psi_part = 2.0 * (psi1 - model.psi(1.0 - x).unwrap_or(f64::NAN));
        psi_part + model.khat_sqrt(1.0 - x) * s
    };
    // log-clustered scan then golden refinement
    let grid = numerics::geometric_grid(1e-8, 1.0, 256);
    let (mut best_i, mut best) = (0usize, f64::INFINITY);
    for (i, &x) in grid.iter().enumerate() {
        let v = obj(x);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let a0 = grid[best_i.saturating_sub(1)];
    let b0 = grid[(best_i + 1).min(grid.len() - 1)];
    let gr = 0.5 * (5.0f64.sqrt() - 1.0);
    let (mut a, mut b) = (a0, b0);
    let mut x1 = b - gr * (b - a);
    let mut x2 = a + gr * (b - a);
    let (mut f1, mut f2) = (obj(x1), obj(x2));
    for _ in 0..80 {
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
    Ok(best.min(f1).min(f2))
}

/// Convenience: one-shot `g(s)` (builds the threshold table; use
/// [`CohesiveSolver`] for sweeps).
pub fn g_value(model: &PhaseFieldModel, s: f64) -> Result<f64> {
    CohesiveSolver::new(model)?.value(s)
}

/// One-shot `g'(s)`.
pub fn g_derivative(model: &PhaseFieldModel, s: f64) -> Result<f64> {
    CohesiveSolver::new(model)?.derivative(s)
}

/// Cross-check helper: `∂B/∂λ` by central differences.
pub fn opening_dlam(model: &PhaseFieldModel, m: f64, lam: f64) -> Result<f64> {
    let lam_max = model.khat_sqrt(m);
    let h = 1e-6 * lam_max;
    let lo = profile_opening(model, m, (lam - h).max(1e-12))?;
    let hi = profile_opening(model, m, (lam + h).min(lam_max))?;
    Ok((hi - lo) / ((lam + h).min(lam_max) - (lam - h).max(1e-12)))
}

/// `∫_m^1 ω^{1/2}(1-t) dt = Ψ(1) - Ψ(m)`, the zero-stress energy gap.
pub fn psi_interval(model: &PhaseFieldModel, m: f64) -> Result<f64> {
    Ok(model.psi1 - model.psi(m)?)
}

#[cfg(test)]
pub(crate) mod tests;
