//! Inverse design: given a target cohesive law, build the Abel datum `R`,
//! invert the Abel integral equation for the density `φ`, and produce the
//! missing model ingredient (damage potential, or degradation/stiffness
//! ratio), with critical-stress rescaling and the exponential-law
//! regularization.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forward::CohesiveSolver;
use crate::model::{
    self, default_phi_deg, make_model, map, HypothesisReport, ModelOptions, PhaseFieldModel,
    Regime, ScalarMap, Sigma, TargetCohesiveLaw,
};
use crate::numerics::{
    self, brent_root, quad, Decay, Interval, QuadratureSpec, SampledFunction,
};

// ---------------------------------------------------------------------------
// the Abel datum R

/// The datum of the Abel equation built from a target law: composition of
/// the law with the inverse of its derivative, strictly monotone on its
/// domain (`[0, σ²]` linear, `[0, ∞)` superlinear).
pub struct AbelDatum {
    pub regime: Regime,
    /// `σ²` (linear) or `+∞` (superlinear).
    pub sigma2: f64,
    /// `R(σ²) = g₀((s⋆)₀)` in the linear regime.
    pub r_at_end: f64,
    /// Kink locations of `R'` in the `t` variable.
    pub breakpoints_t: Vec<f64>,
    eval: ScalarMap,
    deriv: ScalarMap,
    /// Tail envelope of `|R'|` (superlinear).
    pub envelope: Option<Decay>,
}

impl AbelDatum {
    pub fn value(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn derivative(&self, t: f64) -> f64 {
        (self.deriv)(t)
    }
}

/// Invert `g0'`: analytically when the target carries an inverse, else by
/// bracketed root finding (it is strictly monotone on the range needed).
fn invert_g_prime(target: &TargetCohesiveLaw, y: f64) -> Result<f64> {
    if let Some(inv) = &target.g0_prime_inv {
        return Ok(inv(y));
    }
    let gp = &target.g0_prime;
    let mut hi = if target.s_frac0.is_finite() {
        target.s_frac0
    } else {
        let mut s = 1.0;
        while gp(s) > y && s < 1e12 {
            s *= 2.0;
        }
        s
    };
    let mut lo = 0.0f64;
    match target.regime {
        Regime::Linear { sigma } => {
            if y >= sigma {
                return Ok(0.0);
            }
            if y <= gp(hi) {
                return Ok(hi);
            }
        }
        Regime::Superlinear => {
            // g' blows up at 0+: bring lo off the origin
            lo = 1e-300;
            let mut probe = hi.min(1.0) * 0.5;
            while gp(probe) < y && probe > 1e-280 {
                probe *= 0.5;
            }
            lo = probe.min(lo.max(1e-280));
            if gp(hi) > y {
                return Err(Error::NotInvertible(format!(
                    "g0' stays above {y} on the search range"
                )));
            }
            hi = hi.max(lo * 2.0);
        }
    }
    brent_root(|s| gp(s) - y, lo, hi, 1e-14 * hi.max(1.0))
}

fn calibrate_envelope(deriv: &ScalarMap) -> Decay {
    // fit |R'(t)| ~ C exp(-c sqrt(t)) over a decade ladder
    let samples: Vec<(f64, f64)> = (0..=8)
        .map(|i| {
            let t = 1.0 * 2f64.powi(i); // 1 .. 256
            (t.sqrt(), deriv(t).abs().max(1e-300).ln())
        })
        .collect();
    let n = samples.len() as f64;
    let sx: f64 = samples.iter().map(|p| p.0).sum();
    let sy: f64 = samples.iter().map(|p| p.1).sum();
    let sxx: f64 = samples.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = samples.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let rate = (-slope).clamp(0.05, 50.0);
    let mut coeff = 0.0f64;
    for &(u, ln_v) in &samples {
        coeff = coeff.max((ln_v + rate * u).exp());
    }
    Decay::ExpSqrt { coeff: 2.0 * coeff.max(1e-12), rate }
}

/// Build the Abel datum `R` from a target law.
///
/// Linear: `R(t) = g0((g0')^{-1}((σ² - t)^{1/2}))` on `[0, σ²]` with
/// `R' = -1 / (2 g0''((g0')^{-1}((σ² - t)^{1/2})))`; superlinear:
/// `R(t) = g0((g0')^{-1}(t^{1/2}))` on `[0, ∞)` with the sign flipped.
pub fn build_abel_datum(target: &TargetCohesiveLaw) -> Result<AbelDatum> {
    let t2 = Arc::new(target.clone());
    match target.regime {
        Regime::Linear { sigma } => {
            if !(sigma.is_finite() && sigma > 0.0) {
                return Err(Error::WrongRegime { expected: "linear" });
            }
            let s2 = sigma * sigma;
            let r_at_end = if target.s_frac0.is_finite() {
                (target.g0)(target.s_frac0)
            } else {
                target.g_inf
            };
            let tt = t2.clone();
            let eval = map(move |t: f64| {
                let t = t.clamp(0.0, s2);
                if t >= s2 {
                    return r_at_end;
                }
                let y = (s2 - t).sqrt();
                match invert_g_prime(&tt, y) {
                    Ok(s) => (tt.g0)(s),
                    Err(_) => f64::NAN,
                }
            });
            let tt = t2.clone();
            let deriv = map(move |t: f64| {
                let t = t.clamp(0.0, s2 * (1.0 - 1e-15));
                let y = (s2 - t).sqrt();
                match invert_g_prime(&tt, y) {
                    Ok(s) => {
                        // g'' at the saturation point means its interior
                        // one-sided value
                        let s_in = if tt.s_frac0.is_finite() {
                            s.min(tt.s_frac0 * (1.0 - 1e-12))
                        } else {
                            s
                        };
                        let g2 = tt.second_derivative(s_in);
                        -1.0 / (2.0 * g2)
                    }
                    Err(_) => f64::NAN,
                }
            });
            let breakpoints_t: Vec<f64> = target
                .breakpoints
                .iter()
                .filter(|&&s| s > 0.0 && s < target.s_frac0)
                .map(|&s| s2 - (target.g0_prime)(s).powi(2))
                .filter(|&t| t > 0.0 && t < s2)
                .collect();
            Ok(AbelDatum {
                regime: target.regime,
                sigma2: s2,
                r_at_end,
                breakpoints_t,
                eval,
                deriv,
                envelope: None,
            })
        }
        Regime::Superlinear => {
            if target.g0_second.is_none() {
                return Err(Error::NotInvertible(
                    "superlinear reconstruction needs g0''".into(),
                ));
            }
            let tt = t2.clone();
            let eval = map(move |t: f64| {
                let y = t.max(0.0).sqrt();
                match invert_g_prime(&tt, y) {
                    Ok(s) => (tt.g0)(s),
                    Err(_) => f64::NAN,
                }
            });
            let tt = t2.clone();
            let deriv = map(move |t: f64| {
                let y = t.max(0.0).sqrt();
                match invert_g_prime(&tt, y) {
                    Ok(s) => {
                        let s_in = s.min(tt.s_frac0 * (1.0 - 1e-12));
                        let g2 = tt.second_derivative(s_in);
                        1.0 / (2.0 * g2)
                    }
                    Err(_) => f64::NAN,
                }
            });
            let envelope = target
                .decay_envelope
                .unwrap_or_else(|| calibrate_envelope(&deriv));
            Ok(AbelDatum {
                regime: target.regime,
                sigma2: f64::INFINITY,
                r_at_end: 0.0,
                breakpoints_t: Vec::new(),
                eval,
                deriv,
                envelope: Some(envelope),
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Abel inversion

/// `φ(τ) = (1/π) ∫_0^τ R'(t) (τ - t)^{-1/2} dt`, splitting at declared
/// kinks of `R'`; the kernel singularity is removed by substitution in the
/// last piece.
pub fn abel_invert_linear(datum: &AbelDatum, tau: f64) -> Result<f64> {
    if !matches!(datum.regime, Regime::Linear { .. }) {
        return Err(Error::WrongRegime { expected: "linear" });
    }
    if tau <= 0.0 {
        return Ok(0.0);
    }
    let spec = QuadratureSpec::default();
    let mut cuts: Vec<f64> = datum
        .breakpoints_t
        .iter()
        .copied()
        .filter(|&b| b > 0.0 && b < tau)
        .collect();
    cuts.sort_by(f64::total_cmp);
    let mut total = 0.0;
    let mut left = 0.0;
    for b in &cuts {
        total += quad::adaptive(
            &|t: f64| datum.derivative(t) / (tau - t).sqrt(),
            left,
            *b,
            &spec,
        )?
        .value;
        left = *b;
    }
    // last piece carries the kernel singularity at t = τ
    total += numerics::integrate_right_sqrt_singular(
        &|t: f64| datum.derivative(t),
        Interval::new(left, tau)?,
        &spec,
    )?;
    Ok(total / std::f64::consts::PI)
}

/// `φ(τ) = -(1/π) ∫_τ^∞ R'(t) (t - τ)^{-1/2} dt` for superlinear data;
/// the range is truncated where the declared envelope certifies the tail
/// is below a tenth of the absolute tolerance.
pub fn abel_invert_superlinear(datum: &AbelDatum, tau: f64) -> Result<f64> {
    if !matches!(datum.regime, Regime::Superlinear) {
        return Err(Error::WrongRegime { expected: "superlinear" });
    }
    let tau = tau.max(0.0);
    let spec = QuadratureSpec::default();
    let envelope = datum.envelope.expect("superlinear datum carries an envelope");
    let t_max = truncation_point(envelope, &spec)?;
    if tau >= t_max {
        return Ok(0.0);
    }
    // t = τ + u² removes the kernel singularity over the whole range
    let u_max = (t_max - tau).sqrt();
    let g = |u: f64| 2.0 * datum.derivative(tau + u * u);
    let v = quad::adaptive(&g, 0.0, u_max, &spec)?.value;
    Ok(-v / std::f64::consts::PI)
}

fn truncation_point(envelope: Decay, spec: &QuadratureSpec) -> Result<f64> {
    let target = 0.1 * spec.abs_tol;
    let mut t = 2.0;
    while envelope.tail_bound(t) > target {
        t *= 2.0;
        if t > 1e12 {
            return Err(Error::Domain("datum envelope decays too slowly".into()));
        }
    }
    Ok(t)
}

// ---------------------------------------------------------------------------
// tabulated density (the vectorized inversion)

/// The Abel inversion output `φ`, tabulated in `v = sqrt(τ)` so that the
/// generic `φ ~ c sqrt(τ)` behaviour at the origin interpolates exactly.
#[derive(Clone)]
pub struct AbelDensity {
    pub regime: Regime,
    table: SampledFunction,
    /// `σ²` (linear, where the grid stops at `σ²(1 - 1e-6)`) or the
    /// envelope-certified truncation point (superlinear).
    pub domain_end: f64,
    /// One-sided limit at `σ²` when finite; `None` means the density blows
    /// up there and evaluation clamps to the last grid cell.
    pub end_limit: Option<f64>,
    /// `φ(0)`.
    pub phi0: f64,
}

impl AbelDensity {
    pub fn eval(&self, tau: f64) -> f64 {
        if tau <= 0.0 {
            return self.phi0;
        }
        let v = tau.sqrt();
        let (_, v_max) = self.table.domain();
        if v >= v_max {
            return match self.regime {
                // blend from the grid edge to the one-sided limit at σ²
                // when it exists; otherwise clamp at the edge
                Regime::Linear { .. } => match self.end_limit {
                    Some(end) => {
                        let edge_tau = v_max * v_max;
                        let frac =
                            ((tau - edge_tau) / (self.domain_end - edge_tau)).clamp(0.0, 1.0);
                        let edge = self.table.eval(v_max);
                        edge + frac * (end - edge)
                    }
                    None => self.table.eval(v_max),
                },
                Regime::Superlinear => 0.0,
            };
        }
        self.table.eval(v)
    }

    pub fn table(&self) -> &SampledFunction {
        &self.table
    }
}

/// Tabulate the inversion on `n` clustered nodes.
pub fn abel_density_table(datum: &AbelDatum, n: usize) -> Result<AbelDensity> {
    let n = n.max(64);
    match datum.regime {
        Regime::Linear { .. } => {
            let s2 = datum.sigma2;
            let v_max = (s2 * (1.0 - 1e-6)).sqrt();
            let mut grid = numerics::cosine_grid(0.0, v_max, n);
            // pin derivative kinks to nodes and refine just past them,
            // where the density picks up square-root cusps
            for &b in &datum.breakpoints_t {
                let vb = b.max(0.0).sqrt();
                if vb > 0.0 && vb < v_max {
                    grid.push(vb);
                    let span = 0.05 * v_max;
                    for j in 1..=10 {
                        let v = vb + span * 0.5f64.powi(j);
                        if v < v_max {
                            grid.push(v);
                        }
                    }
                }
            }
            grid.sort_by(f64::total_cmp);
            grid.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
            let values: Vec<f64> = grid
                .par_iter()
                .map(|&v| abel_invert_linear(datum, v * v))
                .collect::<Result<Vec<_>>>()?;
            // decide whether φ has a finite one-sided limit at σ²
            let p1 = abel_invert_linear(datum, s2 * (1.0 - 1e-6))?;
            let p2 = abel_invert_linear(datum, s2 * (1.0 - 1e-7))?;
            let p3 = abel_invert_linear(datum, s2 * (1.0 - 1e-8))?;
            let end_limit = if (p3 - p2).abs() <= 0.2 * (p2 - p1).abs() + 1e-9 * p3.abs() {
                // converging: accelerate the dyadic tail to the limit at σ²
                let denom = p3 - 2.0 * p2 + p1;
                if denom.abs() > 1e-14 * p3.abs().max(1e-300) {
                    Some(p3 - (p3 - p2) * (p3 - p2) / denom)
                } else {
                    Some(p3)
                }
            } else {
                None
            };
            let phi0 = values[0];
            Ok(AbelDensity {
                regime: datum.regime,
                table: SampledFunction::new(grid, values)?,
                domain_end: s2,
                end_limit,
                phi0,
            })
        }
        Regime::Superlinear => {
            let spec = QuadratureSpec::default();
            let t_max = truncation_point(datum.envelope.unwrap(), &spec)?;
            let grid = numerics::cosine_grid(0.0, t_max.sqrt(), n);
            let values: Vec<f64> = grid
                .par_iter()
                .map(|&v| abel_invert_superlinear(datum, v * v))
                .collect::<Result<Vec<_>>>()?;
            let phi0 = values[0];
            Ok(AbelDensity {
                regime: datum.regime,
                table: SampledFunction::new(grid, values)?,
                domain_end: t_max,
                end_limit: Some(0.0),
                phi0,
            })
        }
    }
}

/// Apply the forward Abel kernel directly to the point inversion of a
/// datum (no tabulation anywhere in the loop): the strictest form of the
/// round-trip consistency check.
pub fn forward_abel_point(datum: &AbelDatum, t: f64) -> Result<f64> {
    let spec = QuadratureSpec::with_tol(1e-9, 1e-8);
    match datum.regime {
        Regime::Linear { .. } => {
            if t <= 0.0 {
                return Ok(0.0);
            }
            let g = |u: f64| {
                2.0 * abel_invert_linear(datum, t - u * u).unwrap_or(f64::NAN)
            };
            Ok(quad::adaptive(&g, 0.0, t.sqrt(), &spec)?.value)
        }
        Regime::Superlinear => {
            let t = t.max(0.0);
            let t_max = truncation_point(datum.envelope.unwrap(), &QuadratureSpec::default())?;
            if t >= t_max {
                return Ok(0.0);
            }
            let g = |u: f64| {
                2.0 * abel_invert_superlinear(datum, t + u * u).unwrap_or(f64::NAN)
            };
            Ok(quad::adaptive(&g, 0.0, (t_max - t).sqrt(), &spec)?.value)
        }
    }
}

/// Apply the forward Abel kernel to a tabulated density: linear
/// `∫_0^t φ(τ)(t-τ)^{-1/2} dτ`, superlinear `∫_t^∞ φ(τ)(τ-t)^{-1/2} dτ`.
pub fn forward_abel(density: &AbelDensity, t: f64) -> Result<f64> {
    let spec = QuadratureSpec::default();
    match density.regime {
        Regime::Linear { .. } => {
            if t <= 0.0 {
                return Ok(0.0);
            }
            let g = |u: f64| 2.0 * density.eval(t - u * u);
            Ok(quad::adaptive(&g, 0.0, t.sqrt(), &spec)?.value)
        }
        Regime::Superlinear => {
            let t = t.max(0.0);
            if t >= density.domain_end {
                return Ok(0.0);
            }
            let u_max = (density.domain_end - t).sqrt();
            let g = |u: f64| 2.0 * density.eval(t + u * u);
            Ok(quad::adaptive(&g, 0.0, u_max, &spec)?.value)
        }
    }
}

// ---------------------------------------------------------------------------
// reconstructions

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProducedKind {
    /// Damage potential tabulated as `ω(1-t)` over `t`.
    OmegaOfOneMinusT,
    /// Inverse degradation profile over its natural variable.
    FhatInverse,
    /// Inverse stiffness ratio over its natural variable.
    KhatInverse,
}

impl ProducedKind {
    pub fn file_stem(&self) -> &'static str {
        match self {
            ProducedKind::OmegaOfOneMinusT => "omega",
            ProducedKind::FhatInverse => "fhat_inv",
            ProducedKind::KhatInverse => "khat_inv",
        }
    }
}

/// Diagnostics attached to a reconstruction.
#[derive(Clone, Debug)]
pub struct Diagnostics {
    /// Sup deviation of the forward Abel kernel applied to the density
    /// against the datum, over the checked range.
    pub abel_roundtrip_sup: f64,
    /// Filled by [`round_trip`].
    pub forward_roundtrip_sup: Option<f64>,
    pub forward_roundtrip_mean: Option<f64>,
    pub hypothesis: HypothesisReport,
    /// Superlinear only: `(π φ(0), (s⋆)₀)`; the definition-with-prefactor
    /// is used throughout, this pair records the discrepancy against the
    /// prefactor-free variant seen in print.
    pub phi0_times_pi_vs_sfrac: Option<(f64, f64)>,
}

/// A reconstructed ingredient plus the assembled model realizing the
/// target law.
#[derive(Clone)]
pub struct Reconstruction {
    /// Human-readable descriptor of the ingredient held fixed.
    pub fixed_descriptor: String,
    pub produced_kind: ProducedKind,
    /// Tabulation of the produced ingredient (512 clustered nodes).
    pub table: SampledFunction,
    /// The produced ingredient as an evaluable map (natural variable).
    pub produced_map: ScalarMap,
    /// Critical stress the export was scaled to.
    pub sigma_scaling: f64,
    pub model: PhaseFieldModel,
    pub density: AbelDensity,
    pub diagnostics: Diagnostics,
}

impl std::fmt::Debug for Reconstruction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Reconstruction")
            .field("fixed_descriptor", &self.fixed_descriptor)
            .field("produced_kind", &self.produced_kind)
            .field("sigma_scaling", &self.sigma_scaling)
            .finish_non_exhaustive()
    }
}

fn normalized_target(target: &TargetCohesiveLaw) -> Result<(TargetCohesiveLaw, f64)> {
    match target.regime {
        Regime::Superlinear => Ok((target.clone(), 1.0)),
        Regime::Linear { sigma } => {
            if sigma <= 0.0 || !sigma.is_finite() {
                return Err(Error::BadParameters(format!("sigma = {sigma}")));
            }
            if (sigma - 1.0).abs() < 1e-14 {
                return Ok((target.clone(), 1.0));
            }
            let g = target.g0.clone();
            let gp = target.g0_prime.clone();
            let g2 = target.g0_second.clone();
            let gpi = target.g0_prime_inv.clone();
            let t = TargetCohesiveLaw {
                g0: map(move |s: f64| g(s) / sigma),
                g0_prime: map(move |s: f64| gp(s) / sigma),
                g0_second: g2.map(|g2| -> ScalarMap {
                    map(move |s: f64| g2(s) / sigma)
                }),
                g0_prime_inv: gpi.map(|inv| -> ScalarMap {
                    map(move |y: f64| inv(sigma * y))
                }),
                regime: Regime::Linear { sigma: 1.0 },
                g_inf: target.g_inf / sigma,
                s_frac0: target.s_frac0,
                breakpoints: target.breakpoints.clone(),
                decay_envelope: target.decay_envelope,
            };
            Ok((t, sigma))
        }
    }
}

fn abel_roundtrip_error(datum: &AbelDatum, density: &AbelDensity) -> Result<f64> {
    let pts: Vec<f64> = match datum.regime {
        Regime::Linear { .. } => {
            let s2 = datum.sigma2;
            (0..=48).map(|i| s2 * (1.0 - 1e-3) * i as f64 / 48.0).collect()
        }
        Regime::Superlinear => {
            let hi = 0.5 * density.domain_end;
            (0..=48).map(|i| hi * i as f64 / 48.0).collect()
        }
    };
    let sups: Vec<f64> = pts
        .par_iter()
        .map(|&t| -> Result<f64> {
            Ok((forward_abel_point(datum, t)? - datum.value(t)).abs())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(sups.into_iter().fold(0.0f64, f64::max))
}

/// The derivative of `sqrt(khat0)`, analytic when `khat0_prime` is given,
/// else by central differences of the square root itself (which stays
/// stable where `khat0` vanishes like a power).
fn sqrt_khat_prime(khat0: &ScalarMap, khat0_prime: &Option<ScalarMap>) -> ScalarMap {
    match khat0_prime {
        Some(kp) => {
            let k = khat0.clone();
            let kp = kp.clone();
            map(move |t: f64| {
                let kv = k(t);
                if kv <= 0.0 {
                    // one-sided limit at the origin
                    let h = 1e-8;
                    (k(t + h).max(0.0).sqrt() - kv.max(0.0).sqrt()) / h
                } else {
                    kp(t) / (2.0 * kv.sqrt())
                }
            })
        }
        None => {
            let k = khat0.clone();
            map(move |t: f64| {
                let f = |x: f64| k(x).max(0.0).sqrt();
                numerics::numeric_derivative(&f, t, 0.0, 1.0)
            })
        }
    }
}

/// Reconstruct the damage potential for a fixed stiffness ratio `khat0`
/// (linear: `khat0(1⁻) = σ²`; superlinear: `khat0(1⁻) = ∞`). Produces
/// `ω(1-t) = [(khat0^{1/2})'(t) φ(arg(t))]²` with the regime's argument,
/// assembled into a full model.
pub fn omega_from_khat(
    target: &TargetCohesiveLaw,
    khat0: ScalarMap,
    khat0_prime: Option<ScalarMap>,
    descriptor: &str,
) -> Result<Reconstruction> {
    match target.regime {
        Regime::Linear { .. } => omega_from_khat_linear(target, khat0, khat0_prime, descriptor),
        Regime::Superlinear => omega_from_khat_super(target, khat0, khat0_prime, descriptor),
    }
}

fn omega_from_khat_linear(
    target: &TargetCohesiveLaw,
    khat0: ScalarMap,
    khat0_prime: Option<ScalarMap>,
    descriptor: &str,
) -> Result<Reconstruction> {
    let (norm, sigma) = normalized_target(target)?;
    let s2 = sigma * sigma;

    // theorem preconditions on the fixed ingredient
    if khat0(0.0).abs() > 1e-7 {
        return Err(Error::Incompatible(format!(
            "khat0(0) = {}, expected 0",
            khat0(0.0)
        )));
    }
    let k_end = khat0(1.0 - 1e-9);
    if ((k_end - s2) / s2).abs() > 1e-3 {
        return Err(Error::Incompatible(format!(
            "khat0(1-) = {k_end}, expected sigma² = {s2}"
        )));
    }

    // normalized stiffness ratio and its sqrt-derivative
    let k0 = khat0.clone();
    let ktilde: ScalarMap = map(move |t: f64| k0(t) / s2);
    let ktilde_prime: Option<ScalarMap> = khat0_prime.as_ref().map(|kp| -> ScalarMap {
        let kp = kp.clone();
        map(move |t: f64| kp(t) / s2)
    });
    let skp = sqrt_khat_prime(&ktilde, &ktilde_prime);

    let datum = build_abel_datum(&norm)?;
    let density = Arc::new(abel_density_table(&datum, 1024)?);
    let abel_sup = abel_roundtrip_error(&datum, &density)?;

    // normalized damage potential as a map of its argument x = 1 - t
    let kt = ktilde.clone();
    let skp2 = skp.clone();
    let dens = density.clone();
    let omega_tilde: ScalarMap = map(move |x: f64| {
        let t = (1.0 - x).clamp(0.0, 1.0);
        let d = skp2(t);
        let phi = dens.eval((1.0 - kt(t)).clamp(0.0, 1.0));
        (d * phi).powi(2)
    });

    // ω kinks inherited from datum breakpoints through 1 - ktilde(t)
    let mut omega_breaks = Vec::new();
    for &b in &datum.breakpoints_t {
        if b > 0.0 && b < 1.0 {
            if let Ok(t_b) = brent_root(|t| 1.0 - ktilde(t) - b, 0.0, 1.0, 1e-12) {
                omega_breaks.push(1.0 - t_b);
            }
        }
    }

    // normalized model: fhat = ktilde, Q = ω̃, ω = ω̃
    let normalized = assemble_linear_model(
        ktilde.clone(),
        omega_tilde.clone(),
        omega_tilde.clone(),
        ktilde.clone(),
        ktilde_prime.clone(),
        1.0,
        omega_breaks.clone(),
    )?;

    let produced_grid = numerics::cosine_grid(0.0, 1.0, 512);
    let produced_values: Vec<f64> = produced_grid.iter().map(|&t| omega_tilde(1.0 - t)).collect();
    let table = SampledFunction::new(produced_grid, produced_values)?;

    let rec = Reconstruction {
        fixed_descriptor: format!("khat = {descriptor}"),
        produced_kind: ProducedKind::OmegaOfOneMinusT,
        table,
        produced_map: {
            let om = omega_tilde.clone();
            map(move |t: f64| om(1.0 - t))
        },
        sigma_scaling: 1.0,
        diagnostics: Diagnostics {
            abel_roundtrip_sup: abel_sup,
            forward_roundtrip_sup: None,
            forward_roundtrip_mean: None,
            hypothesis: model::model_report(&normalized),
            phi0_times_pi_vs_sfrac: None,
        },
        model: normalized,
        density: density.as_ref().clone(),
    };

    if (sigma - 1.0).abs() < 1e-14 {
        Ok(rec)
    } else {
        rescale_to_sigma(&rec, sigma)
    }
}

fn assemble_linear_model(
    fhat: ScalarMap,
    q: ScalarMap,
    omega: ScalarMap,
    khat: ScalarMap,
    khat_prime: Option<ScalarMap>,
    sigma: f64,
    omega_breakpoints: Vec<f64>,
) -> Result<PhaseFieldModel> {
    make_model(
        fhat,
        q,
        omega,
        default_phi_deg(),
        ModelOptions {
            khat: Some(khat),
            khat_prime,
            sigma: Some(Sigma::Finite(sigma)),
            omega_breakpoints,
            ..Default::default()
        },
    )
}

fn omega_from_khat_super(
    target: &TargetCohesiveLaw,
    khat0: ScalarMap,
    khat0_prime: Option<ScalarMap>,
    descriptor: &str,
) -> Result<Reconstruction> {
    let probe = khat0(1.0 - 1e-7);
    if probe < 1e4 {
        return Err(Error::Incompatible(format!(
            "khat0(1-) = {probe}; a superlinear reconstruction needs khat0(1-) = inf"
        )));
    }
    let datum = build_abel_datum(target)?;
    let density = Arc::new(abel_density_table(&datum, 1024)?);
    let abel_sup = abel_roundtrip_error(&datum, &density)?;
    let skp = sqrt_khat_prime(&khat0, &khat0_prime);

    let k0 = khat0.clone();
    let dens = density.clone();
    let skp2 = skp.clone();
    let omega0: ScalarMap = map(move |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let t = (1.0 - x).clamp(0.0, 1.0);
        let d = skp2(t);
        (d * dens.eval(k0(t))).powi(2)
    });

    // fhat = khat0 ∧ 1, Q(1-t) = ω(1-t) fhat(t) / khat0(t)
    let k0 = khat0.clone();
    let fhat: ScalarMap = map(move |t: f64| k0(t).min(1.0));
    let k0 = khat0.clone();
    let om = omega0.clone();
    let q: ScalarMap = map(move |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let t = 1.0 - x;
        let kv = k0(t);
        if kv <= 0.0 {
            return 0.0;
        }
        om(x) * kv.min(1.0) / kv
    });

    let model = make_model(
        fhat,
        q,
        omega0.clone(),
        default_phi_deg(),
        ModelOptions {
            khat: Some(khat0.clone()),
            khat_prime: khat0_prime,
            sigma: Some(Sigma::Infinite),
            ..Default::default()
        },
    )?;

    let produced_grid = numerics::cosine_grid(0.0, 1.0, 512);
    let produced_values: Vec<f64> = produced_grid.iter().map(|&t| omega0(1.0 - t)).collect();
    let table = SampledFunction::new(produced_grid, produced_values)?;
    let phi0 = density.phi0;

    Ok(Reconstruction {
        fixed_descriptor: format!("khat = {descriptor}"),
        produced_kind: ProducedKind::OmegaOfOneMinusT,
        table,
        produced_map: {
            let om = omega0.clone();
            map(move |t: f64| om(1.0 - t))
        },
        sigma_scaling: f64::INFINITY,
        diagnostics: Diagnostics {
            abel_roundtrip_sup: abel_sup,
            forward_roundtrip_sup: None,
            forward_roundtrip_mean: None,
            hypothesis: model::model_report(&model),
            phi0_times_pi_vs_sfrac: Some((std::f64::consts::PI * phi0, target.s_frac0)),
        },
        model,
        density: density.as_ref().clone(),
    })
}

/// Reconstruct the degradation side for a fixed damage potential `omega0`
/// (hard requirement: `2 Ψ₀(1) = g₀(∞)`). Linear targets produce the
/// inverse degradation profile; superlinear targets the inverse stiffness
/// ratio.
pub fn khat_from_omega(
    target: &TargetCohesiveLaw,
    omega0: ScalarMap,
    omega0_breakpoints: Vec<f64>,
    descriptor: &str,
) -> Result<Reconstruction> {
    match target.regime {
        Regime::Linear { .. } => {
            khat_from_omega_linear(target, omega0, omega0_breakpoints, descriptor)
        }
        Regime::Superlinear => {
            khat_from_omega_super(target, omega0, omega0_breakpoints, descriptor)
        }
    }
}

fn psi_table(omega: &ScalarMap, breakpoints: &[f64]) -> Result<SampledFunction> {
    // cumulative Ψ(y) = ∫_{sqrt(1-y)}^1 f(v) dv on a clustered y-grid,
    // accumulated cell by cell in the v variable (v decreases as y grows)
    let n = 1025;
    let grid = numerics::cosine_grid(0.0, 1.0, n);
    let spec = QuadratureSpec::with_tol(1e-12, 1e-10);
    let om = omega.clone();
    let f = move |v: f64| 2.0 * v * om(v * v).max(0.0).sqrt();
    let mut cuts: Vec<f64> = breakpoints.iter().map(|&x| x.max(0.0).sqrt()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut psi = vec![0.0f64; n];
    for i in 1..n {
        let v_hi = (1.0 - grid[i - 1]).max(0.0).sqrt();
        let v_lo = (1.0 - grid[i]).max(0.0).sqrt();
        let mut piece = 0.0;
        let mut left = v_lo;
        for &c in cuts.iter().filter(|&&c| c > v_lo && c < v_hi) {
            piece += quad::adaptive(&f, left, c, &spec)?.value;
            left = c;
        }
        piece += quad::adaptive(&f, left, v_hi, &spec)?.value;
        psi[i] = psi[i - 1] + piece;
    }
    SampledFunction::new(grid, psi)
}

fn khat_from_omega_linear(
    target: &TargetCohesiveLaw,
    omega0: ScalarMap,
    omega0_breakpoints: Vec<f64>,
    descriptor: &str,
) -> Result<Reconstruction> {
    let (norm, sigma) = normalized_target(target)?;
    let s2 = sigma * sigma;

    let om0 = omega0.clone();
    let omega_tilde: ScalarMap = map(move |x: f64| om0(x) / s2);

    // compatibility: 2 Ψ₀(1) = g₀(∞) (checked on the original scale)
    let psi = psi_table(&omega_tilde, &omega0_breakpoints)?;
    let psi1 = psi.eval(1.0);
    let g_inf_tilde = norm.g_inf;
    if (2.0 * psi1 - g_inf_tilde).abs() > 1e-8 * g_inf_tilde.abs().max(1.0) {
        return Err(Error::Incompatible(format!(
            "2 Psi0(1) = {} but g0(inf) = {} (scaled); the theorem requires equality",
            2.0 * psi1 * sigma,
            target.g_inf
        )));
    }
    let psi_inv = psi.invert()?;

    let datum = build_abel_datum(&norm)?;
    let density = Arc::new(abel_density_table(&datum, 1024)?);
    let abel_sup = abel_roundtrip_error(&datum, &density)?;

    // K(v) = ∫_0^{1-v²} φ(τ) (1-τ)^{-1/2} dτ = 2 ∫_v^1 φ(1 - w²) dw,
    // accumulated on a clustered v-grid
    let n = 1025;
    let vgrid = numerics::cosine_grid(0.0, 1.0, n);
    let spec = QuadratureSpec::with_tol(1e-12, 1e-10);
    let dens = density.clone();
    let f = move |w: f64| 2.0 * dens.eval((1.0 - w * w).clamp(0.0, 1.0));
    let mut k_acc = vec![0.0f64; n];
    for i in (0..n - 1).rev() {
        let piece = quad::adaptive(&f, vgrid[i], vgrid[i + 1], &spec)?.value;
        k_acc[i] = k_acc[i + 1] + piece;
    }
    let k_table = SampledFunction::new(vgrid, k_acc)?;

    // f̂^{-1}(x) = Ψ^{-1}(g∞/2 - K(sqrt(x))/2) on the normalized scale
    let fhat_inv: ScalarMap = {
        let k_table = k_table.clone();
        let psi_inv = psi_inv.clone();
        map(move |x: f64| {
            let x = x.clamp(0.0, 1.0);
            let z = 0.5 * g_inf_tilde - 0.5 * k_table.eval(x.sqrt());
            psi_inv.eval(z.clamp(0.0, f64::INFINITY)).clamp(0.0, 1.0)
        })
    };
    let fhat = model::invert_map_on(fhat_inv.clone(), 0.0, 1.0);

    let khat: ScalarMap = {
        let f = fhat.clone();
        map(move |t: f64| s2 * f(t))
    };
    let q: ScalarMap = {
        let om = omega_tilde.clone();
        map(move |x: f64| om(x))
    };

    let model = assemble_linear_model(
        fhat.clone(),
        q,
        omega0.clone(),
        khat,
        None,
        sigma,
        omega0_breakpoints.clone(),
    )?;

    let produced_grid = numerics::cosine_grid(0.0, 1.0, 512);
    let produced_values: Vec<f64> = produced_grid.iter().map(|&x| fhat_inv(x)).collect();
    let table = SampledFunction::new(produced_grid, produced_values)?;

    Ok(Reconstruction {
        fixed_descriptor: format!("omega = {descriptor}"),
        produced_kind: ProducedKind::FhatInverse,
        table,
        produced_map: fhat_inv,
        sigma_scaling: sigma,
        diagnostics: Diagnostics {
            abel_roundtrip_sup: abel_sup,
            forward_roundtrip_sup: None,
            forward_roundtrip_mean: None,
            hypothesis: model::model_report(&model),
            phi0_times_pi_vs_sfrac: None,
        },
        model,
        density: density.as_ref().clone(),
    })
}

fn khat_from_omega_super(
    target: &TargetCohesiveLaw,
    omega0: ScalarMap,
    omega0_breakpoints: Vec<f64>,
    descriptor: &str,
) -> Result<Reconstruction> {
    let psi = psi_table(&omega0, &omega0_breakpoints)?;
    let psi1 = psi.eval(1.0);
    if (2.0 * psi1 - target.g_inf).abs() > 1e-8 * target.g_inf.abs().max(1.0) {
        return Err(Error::Incompatible(format!(
            "2 Psi0(1) = {} but g0(inf) = {}; the theorem requires equality",
            2.0 * psi1,
            target.g_inf
        )));
    }
    let psi_inv = psi.invert()?;

    let datum = build_abel_datum(target)?;
    let density = Arc::new(abel_density_table(&datum, 1024)?);
    let abel_sup = abel_roundtrip_error(&datum, &density)?;

    // L(u) = ∫_{u²}^∞ φ(τ) τ^{-1/2} dτ = 2 ∫_u^{u_max} φ(w²) dw
    let u_max = density.domain_end.sqrt();
    let n = 1025;
    let ugrid = numerics::cosine_grid(0.0, u_max, n);
    let spec = QuadratureSpec::with_tol(1e-12, 1e-10);
    let dens = density.clone();
    let f = move |w: f64| 2.0 * dens.eval(w * w);
    let mut l_acc = vec![0.0f64; n];
    for i in (0..n - 1).rev() {
        let piece = quad::adaptive(&f, ugrid[i], ugrid[i + 1], &spec)?.value;
        l_acc[i] = l_acc[i + 1] + piece;
    }
    let l_table = SampledFunction::new(ugrid.clone(), l_acc)?;

    // k̂^{-1}(τ) = Ψ^{-1}(g∞/2 - L(sqrt(τ))/2)
    let g_inf = target.g_inf;
    let khat_inv: ScalarMap = {
        let l_table = l_table.clone();
        let psi_inv = psi_inv.clone();
        map(move |tau: f64| {
            let u = tau.max(0.0).sqrt();
            let z = 0.5 * g_inf - 0.5 * l_table.eval(u);
            psi_inv.eval(z.clamp(0.0, f64::INFINITY)).clamp(0.0, 1.0)
        })
    };

    // khat by monotone inversion of h(u) = k̂^{-1}(u²), with a logarithmic
    // asymptotic extension past the table edge; the tabulation saturates in
    // floating point near the far end, so invert only the strictly
    // increasing prefix
    let h_vals: Vec<f64> = ugrid.iter().map(|&u| khat_inv(u * u)).collect();
    let mut keep = 1usize;
    while keep < h_vals.len() && h_vals[keep] > h_vals[keep - 1] && h_vals[keep] < 1.0 {
        keep += 1;
    }
    if keep < 4 {
        return Err(Error::NonFinite { at: 0.0 });
    }
    let ugrid_kept: Vec<f64> = ugrid[..keep].to_vec();
    let h_kept: Vec<f64> = h_vals[..keep].to_vec();
    let t_edge = *h_kept.last().unwrap();
    let u_edge = *ugrid_kept.last().unwrap();
    let l_edge = -((1.0 - t_edge).max(1e-300).ln());
    let h_table = SampledFunction::new(ugrid_kept, h_kept)?;
    let h_inv = h_table.invert()?;
    let khat0: ScalarMap = map(move |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= t_edge {
            let l = -((1.0 - t).max(1e-300).ln());
            let u = u_edge + 1.5 * (l - l_edge);
            return u * u;
        }
        let u = h_inv.eval(t);
        u * u
    });

    let k0 = khat0.clone();
    let fhat: ScalarMap = map(move |t: f64| k0(t).min(1.0));
    let k0 = khat0.clone();
    let om = omega0.clone();
    let q: ScalarMap = map(move |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let kv = k0(1.0 - x);
        if kv <= 0.0 {
            return 0.0;
        }
        om(x) * kv.min(1.0) / kv
    });

    let model = make_model(
        fhat,
        q,
        omega0.clone(),
        default_phi_deg(),
        ModelOptions {
            khat: Some(khat0),
            khat_prime: None,
            sigma: Some(Sigma::Infinite),
            omega_breakpoints: omega0_breakpoints,
            ..Default::default()
        },
    )?;

    // produced: k̂^{-1} over τ on a clustered grid of the truncated domain
    let produced_grid = numerics::cosine_grid(0.0, density.domain_end, 512);
    let produced_values: Vec<f64> = produced_grid.iter().map(|&tau| khat_inv(tau)).collect();
    let table = SampledFunction::new(produced_grid, produced_values)?;
    let phi0 = density.phi0;

    Ok(Reconstruction {
        fixed_descriptor: format!("omega = {descriptor}"),
        produced_kind: ProducedKind::KhatInverse,
        table,
        produced_map: khat_inv,
        sigma_scaling: f64::INFINITY,
        diagnostics: Diagnostics {
            abel_roundtrip_sup: abel_sup,
            forward_roundtrip_sup: None,
            forward_roundtrip_mean: None,
            hypothesis: model::model_report(&model),
            phi0_times_pi_vs_sfrac: Some((std::f64::consts::PI * phi0, target.s_frac0)),
        },
        model,
        density: density.as_ref().clone(),
    })
}

/// Export a σ = 1 reconstruction at a different critical stress: the model
/// keeps its degradation profile and takes `ω := σ² ω̃`, `Q := ω̃`, so the
/// assembled stiffness ratio scales to `σ² k̃`.
pub fn rescale_to_sigma(rec: &Reconstruction, sigma: f64) -> Result<Reconstruction> {
    if rec.sigma_scaling.is_infinite() {
        return Err(Error::WrongRegime { expected: "linear" });
    }
    if (rec.sigma_scaling - 1.0).abs() > 1e-12 {
        return Err(Error::BadParameters(
            "rescale expects a sigma = 1 reconstruction".into(),
        ));
    }
    if (sigma - 1.0).abs() < 1e-14 {
        return Ok(rec.clone());
    }
    let s2 = sigma * sigma;
    let om_tilde = rec.model.omega.clone();
    let q_tilde = rec.model.q.clone();
    let omega: ScalarMap = {
        let om = om_tilde.clone();
        map(move |x: f64| s2 * om(x))
    };
    let khat: ScalarMap = {
        let k = rec.model.khat.clone();
        map(move |t: f64| s2 * k(t))
    };
    let khat_prime: ScalarMap = {
        let kp = rec.model.khat_prime.clone();
        map(move |t: f64| s2 * kp(t))
    };
    let model = make_model(
        rec.model.fhat.clone(),
        q_tilde,
        omega.clone(),
        rec.model.phi_deg.clone(),
        ModelOptions {
            khat: Some(khat),
            khat_prime: Some(khat_prime),
            sigma: Some(Sigma::Finite(sigma)),
            omega_breakpoints: rec.model.omega_breakpoints.clone(),
            ..Default::default()
        },
    )?;

    let (table, produced_map): (SampledFunction, ScalarMap) = match rec.produced_kind {
        ProducedKind::OmegaOfOneMinusT => {
            let scaled: Vec<f64> = rec.table.values().iter().map(|v| s2 * v).collect();
            let pm = rec.produced_map.clone();
            (
                SampledFunction::new(rec.table.grid().to_vec(), scaled)?,
                map(move |t: f64| s2 * pm(t)),
            )
        }
        _ => (rec.table.clone(), rec.produced_map.clone()),
    };

    Ok(Reconstruction {
        fixed_descriptor: rec.fixed_descriptor.clone(),
        produced_kind: rec.produced_kind,
        table,
        produced_map,
        sigma_scaling: sigma,
        diagnostics: Diagnostics {
            hypothesis: model::model_report(&model),
            ..rec.diagnostics.clone()
        },
        model,
        density: rec.density.clone(),
    })
}

/// The exponential softening law `g'(s) = e^{-ks}` tangent-linearized to
/// zero past `s_δ = log(1/δ)/(2k)`, which restores the integrability the
/// plain exponential law lacks. `g_δ -> g` uniformly and monotonically as
/// `δ -> 0`.
pub fn regularize_exponential(k: f64, delta: f64) -> Result<TargetCohesiveLaw> {
    if !(k > 0.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::BadParameters(format!("k = {k}, delta = {delta}")));
    }
    let e = delta.sqrt(); // e^{-k s_δ}
    let s_delta = (1.0 / delta).ln() / (2.0 * k);
    let s_frac = s_delta + 1.0 / k;
    let g_inf = (1.0 - 0.5 * e) / k;

    let g0: ScalarMap = map(move |s: f64| {
        if s <= s_delta {
            (1.0 - (-k * s).exp()) / k
        } else if s < s_frac {
            let d = s - s_delta;
            (1.0 - e) / k + e * d - 0.5 * k * e * d * d
        } else {
            g_inf
        }
    });
    let g0_prime: ScalarMap = map(move |s: f64| {
        if s <= s_delta {
            (-k * s).exp()
        } else {
            (e - k * e * (s - s_delta)).max(0.0)
        }
    });
    let g0_second: ScalarMap = map(move |s: f64| {
        if s < s_delta {
            -k * (-k * s).exp()
        } else if s < s_frac {
            -k * e
        } else {
            0.0
        }
    });
    let g0_prime_inv: ScalarMap = map(move |y: f64| {
        let y = y.clamp(0.0, 1.0);
        if y >= e {
            -(y.max(1e-300)).ln() / k
        } else {
            s_delta + (1.0 - y / e) / k
        }
    });

    Ok(TargetCohesiveLaw {
        g0,
        g0_prime,
        g0_second: Some(g0_second),
        g0_prime_inv: Some(g0_prime_inv),
        regime: Regime::Linear { sigma: 1.0 },
        g_inf,
        s_frac0: s_frac,
        breakpoints: vec![s_delta],
        decay_envelope: None,
    })
}

/// Forward verification of a reconstruction: sweep the assembled model's
/// cohesive law and report sup/mean relative deviation from the target
/// over `s_grid ∩ [0, (s⋆)₀]`.
#[derive(Clone, Copy, Debug)]
pub struct RoundTrip {
    pub sup_rel: f64,
    pub mean_rel: f64,
}

pub fn round_trip(
    target: &TargetCohesiveLaw,
    rec: &Reconstruction,
    s_grid: &[f64],
) -> Result<RoundTrip> {
    let solver = CohesiveSolver::new(&rec.model)?;
    let grid: Vec<f64> = s_grid
        .iter()
        .copied()
        .filter(|&s| s > 0.0 && s <= target.s_frac0)
        .collect();
    if grid.is_empty() {
        return Err(Error::Domain("round-trip grid is empty".into()));
    }
    let rel: Vec<f64> = grid
        .par_iter()
        .map(|&s| -> Result<f64> {
            let g = solver.value(s)?;
            let g0 = (target.g0)(s);
            Ok(((g - g0) / g0.abs().max(1e-300)).abs())
        })
        .collect::<Result<Vec<_>>>()?;
    let sup = rel.iter().copied().fold(0.0f64, f64::max);
    let mean = rel.iter().sum::<f64>() / rel.len() as f64;
    Ok(RoundTrip { sup_rel: sup, mean_rel: mean })
}

#[cfg(test)]
mod tests;
