//! Closed-form library of the example cohesive laws and, where available,
//! matching analytic model ingredients. These are the ground truth the
//! tests and the acceptance suite run against.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{
    default_phi_deg, invert_map_on, make_model, map, ModelOptions, PhaseFieldModel, Regime,
    ScalarMap, Sigma, TargetCohesiveLaw,
};
use crate::numerics::Decay;
use crate::reconstruct::{self, ProducedKind};

/// Parameters accepted by the catalog; unused fields are ignored per entry.
#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    /// Softening rate / toughness scale, used by every entry.
    pub k: f64,
    /// Regularization parameter of the exponential entry.
    pub delta: f64,
    /// Bilinear: first kink amplitude.
    pub a: f64,
    /// Bilinear: saturation amplitude.
    pub b: f64,
    /// Bilinear: initial slope drop rate.
    pub k1: f64,
    /// Bilinear: second slope drop rate.
    pub k2: f64,
}

impl Default for ParamSpec {
    fn default() -> Self {
        Self { k: 1.0, delta: 1e-3, a: 0.25, b: 0.75, k1: 2.0, k2: 1.0 }
    }
}

/// An analytic (model, produced-ingredient) pair attached to an entry.
pub struct AnalyticModel {
    pub label: String,
    pub model: PhaseFieldModel,
    /// Closed form of the non-fixed ingredient, when the entry supplies one
    /// (natural variable of the produced kind).
    pub closed_form: Option<(ProducedKind, ScalarMap)>,
    /// Expected jump threshold `Φ(x)` when known in closed form.
    pub expected_threshold: Option<ScalarMap>,
}

pub struct CatalogEntry {
    pub name: &'static str,
    pub params: ParamSpec,
    pub target: TargetCohesiveLaw,
    pub analytic_g: ScalarMap,
    pub analytic_g_prime: ScalarMap,
    pub models: Vec<AnalyticModel>,
}

pub const NAMES: [&str; 7] = [
    "dugdale",
    "linear",
    "bilinear",
    "hyperbolic",
    "quad_hyperbolic",
    "exponential",
    "logarithmic",
];

pub fn names() -> &'static [&'static str] {
    &NAMES
}

/// Fetch an entry by name with validated parameters.
pub fn get(name: &str, params: &ParamSpec) -> Result<CatalogEntry> {
    if !(params.k > 0.0) {
        return Err(Error::BadParameters(format!("k = {} must be positive", params.k)));
    }
    match name {
        "dugdale" => dugdale(params),
        "linear" => linear(params),
        "bilinear" => bilinear(params),
        "hyperbolic" => hyperbolic(params),
        "quad_hyperbolic" => quad_hyperbolic(params),
        "exponential" => exponential(params),
        "logarithmic" => logarithmic(params),
        other => Err(Error::UnknownEntry(other.to_string())),
    }
}

fn quadratic_model(omega: ScalarMap, omega_breakpoints: Vec<f64>) -> Result<PhaseFieldModel> {
    // fhat = t², Q = ω: the stiffness ratio is exactly t²
    make_model(
        map(|t: f64| t * t),
        omega.clone(),
        omega,
        default_phi_deg(),
        ModelOptions {
            khat: Some(map(|t: f64| t * t)),
            khat_prime: Some(map(|t: f64| 2.0 * t)),
            sigma: Some(Sigma::Finite(1.0)),
            omega_breakpoints,
            ..Default::default()
        },
    )
}

/// Model with `Q = ω` and the degradation profile given through its inverse
/// (the stiffness ratio then equals the profile itself).
fn profile_model(omega: ScalarMap, fhat_inv: ScalarMap) -> Result<PhaseFieldModel> {
    let fhat = invert_map_on(fhat_inv, 0.0, 1.0);
    make_model(
        fhat.clone(),
        omega.clone(),
        omega,
        default_phi_deg(),
        ModelOptions {
            khat: Some(fhat),
            khat_prime: None,
            sigma: Some(Sigma::Finite(1.0)),
            ..Default::default()
        },
    )
}

// ---------------------------------------------------------------------------

/// `g(s) = min(s, k)`: constant cohesive stress, abrupt release. The
/// derivative is discontinuous, so this entry routes through the
/// constant-stress (non-decreasing threshold) path rather than the Abel
/// reconstruction.
fn dugdale(p: &ParamSpec) -> Result<CatalogEntry> {
    let k = p.k;
    let g: ScalarMap = map(move |s: f64| s.min(k));
    let gp: ScalarMap = map(move |s: f64| if s < k { 1.0 } else { 0.0 });

    let target = TargetCohesiveLaw {
        g0: g.clone(),
        g0_prime: gp.clone(),
        g0_second: Some(map(|_| 0.0)),
        g0_prime_inv: None,
        regime: Regime::Linear { sigma: 1.0 },
        g_inf: k,
        s_frac0: k,
        breakpoints: vec![k],
        decay_envelope: None,
    };

    // both pairs share Ψ(f̂^{-1}(τ²)) = (k/π)(asin τ - τ sqrt(1-τ²)) and
    // have threshold Φ(x) = 2k f̂^{1/2}(x)
    let base = move |t: f64| -> f64 {
        let t = t.clamp(0.0, 1.0);
        1.0 - (2.0 / PI) * (t.sqrt().asin() - (t - t * t).max(0.0).sqrt())
    };

    let omega1: ScalarMap = map(move |x: f64| k * k * x * x);
    let fhat_inv1: ScalarMap = map(move |t: f64| 1.0 - base(t).max(0.0).sqrt());
    let m1 = profile_model(omega1, fhat_inv1.clone())?;

    let omega2: ScalarMap = map(move |x: f64| 9.0 * k * k / 16.0 * x);
    let fhat_inv2: ScalarMap = map(move |t: f64| 1.0 - base(t).max(0.0).powf(2.0 / 3.0));
    let m2 = profile_model(omega2, fhat_inv2.clone())?;

    let thr = |model: &PhaseFieldModel| -> ScalarMap {
        let f = model.fhat.clone();
        map(move |x: f64| 2.0 * k * f(x).max(0.0).sqrt())
    };

    Ok(CatalogEntry {
        name: "dugdale",
        params: *p,
        target,
        analytic_g: g,
        analytic_g_prime: gp,
        models: vec![
            AnalyticModel {
                label: "omega(1-t) = k^2 (1-t)^2".into(),
                expected_threshold: Some(thr(&m1)),
                closed_form: Some((ProducedKind::FhatInverse, fhat_inv1)),
                model: m1,
            },
            AnalyticModel {
                label: "omega(1-t) = (9 k^2 / 16)(1-t)".into(),
                expected_threshold: Some(thr(&m2)),
                closed_form: Some((ProducedKind::FhatInverse, fhat_inv2)),
                model: m2,
            },
        ],
    })
}

/// Linear softening `g'(s) = 1 - k s` on `[0, 1/k]`:
/// `g(s) = s - k s²/2`, `g(∞) = 1/(2k)`.
fn linear(p: &ParamSpec) -> Result<CatalogEntry> {
    let k = p.k;
    let sf = 1.0 / k;
    let g_inf = 0.5 / k;
    let g: ScalarMap = map(move |s: f64| {
        if s < sf {
            s - 0.5 * k * s * s
        } else {
            g_inf
        }
    });
    let gp: ScalarMap = map(move |s: f64| (1.0 - k * s).max(0.0));
    let g2: ScalarMap = map(move |s: f64| if s < sf { -k } else { 0.0 });

    let target = TargetCohesiveLaw {
        g0: g.clone(),
        g0_prime: gp.clone(),
        g0_second: Some(g2),
        g0_prime_inv: Some(map(move |y: f64| (1.0 - y.clamp(0.0, 1.0)) / k)),
        regime: Regime::Linear { sigma: 1.0 },
        g_inf,
        s_frac0: sf,
        breakpoints: Vec::new(),
        decay_envelope: None,
    };

    // pair 0: fhat = t² fixed, ω(1-t) = (1-t²)/(k²π²)
    let omega0: ScalarMap = map(move |x: f64| x * (2.0 - x) / (k * k * PI * PI));
    let m0 = quadratic_model(omega0.clone(), Vec::new())?;

    // pairs 1 and 2: ω fixed, profile given through its inverse
    let base = move |x: f64| -> f64 {
        let x = x.clamp(0.0, 1.0);
        1.0 - (2.0 / PI) * ((x - x * x).max(0.0).sqrt() + (1.0 - x).max(0.0).sqrt().acos())
    };
    let omega1: ScalarMap = map(move |x: f64| x * x / (4.0 * k * k));
    let fhat_inv1: ScalarMap = map(move |x: f64| 1.0 - base(x).max(0.0).sqrt());
    let m1 = profile_model(omega1, fhat_inv1.clone())?;

    let omega2: ScalarMap = map(move |x: f64| 9.0 * x / (64.0 * k * k));
    let fhat_inv2: ScalarMap = map(move |x: f64| 1.0 - base(x).max(0.0).powf(2.0 / 3.0));
    let m2 = profile_model(omega2, fhat_inv2.clone())?;

    Ok(CatalogEntry {
        name: "linear",
        params: *p,
        target,
        analytic_g: g,
        analytic_g_prime: gp,
        models: vec![
            AnalyticModel {
                label: "fhat = t^2, omega(1-t) = (1-t^2)/(k^2 pi^2)".into(),
                expected_threshold: Some(map(move |x: f64| (1.0 - x) / k)),
                closed_form: Some((ProducedKind::OmegaOfOneMinusT, {
                    let om = omega0.clone();
                    map(move |t: f64| om(1.0 - t))
                })),
                model: m0,
            },
            AnalyticModel {
                label: "omega(x) = x^2/(4 k^2)".into(),
                expected_threshold: None,
                closed_form: Some((ProducedKind::FhatInverse, fhat_inv1)),
                model: m1,
            },
            AnalyticModel {
                label: "omega(x) = 9 x / (64 k^2)".into(),
                expected_threshold: None,
                closed_form: Some((ProducedKind::FhatInverse, fhat_inv2)),
                model: m2,
            },
        ],
    })
}

/// Bilinear softening: two linear branches with slopes `-k1`, `-k2` meeting
/// at `s = a`, saturating at `s = b`. Continuity demands
/// `1 - k1 a = k2 (b - a)`.
fn bilinear(p: &ParamSpec) -> Result<CatalogEntry> {
    let (a, b, k1, k2) = (p.a, p.b, p.k1, p.k2);
    if !(a > 0.0 && a < b) {
        return Err(Error::BadParameters(format!("need 0 < a < b, got a={a}, b={b}")));
    }
    if !(k2 > 0.0 && k2 < k1) {
        return Err(Error::BadParameters(format!("need 0 < k2 < k1, got k1={k1}, k2={k2}")));
    }
    let residual = 1.0 - k1 * a - k2 * (b - a);
    if residual.abs() > 1e-9 {
        return Err(Error::BadParameters(format!(
            "bilinear continuity requires 1 - k1 a = k2 (b - a); residual {residual:.3e}"
        )));
    }
    let mid_slope_at = move |s: f64| (1.0 - k1 * a + k2 * a) - k2 * s;
    let g_at_a = a - 0.5 * k1 * a * a;
    let g_at = move |s: f64| -> f64 {
        if s <= a {
            s - 0.5 * k1 * s * s
        } else if s <= b {
            g_at_a + (1.0 - k1 * a + k2 * a) * (s - a) - 0.5 * k2 * (s * s - a * a)
        } else {
            g_at_a + (1.0 - k1 * a + k2 * a) * (b - a) - 0.5 * k2 * (b * b - a * a)
        }
    };
    let g_inf = g_at(b);
    let g: ScalarMap = map(g_at);
    let gp: ScalarMap = map(move |s: f64| {
        if s <= a {
            1.0 - k1 * s
        } else if s <= b {
            mid_slope_at(s).max(0.0)
        } else {
            0.0
        }
    });
    let g2: ScalarMap = map(move |s: f64| {
        if s < a {
            -k1
        } else if s < b {
            -k2
        } else {
            0.0
        }
    });

    let y_kink = 1.0 - k1 * a; // g' at the kink
    let target = TargetCohesiveLaw {
        g0: g.clone(),
        g0_prime: gp.clone(),
        g0_second: Some(g2),
        g0_prime_inv: Some(map(move |y: f64| {
            let y = y.clamp(0.0, 1.0);
            if y >= y_kink {
                (1.0 - y) / k1
            } else {
                ((1.0 - k1 * a + k2 * a) - y) / k2
            }
        })),
        regime: Regime::Linear { sigma: 1.0 },
        g_inf,
        s_frac0: b,
        breakpoints: vec![a],
        decay_envelope: None,
    };

    // the fhat = t² pair: ω(1-t) joins two branches at t = 1 - k1 a
    let t_br = 1.0 - k1 * a;
    let omega: ScalarMap = map(move |x: f64| {
        let t = (1.0 - x).clamp(0.0, 1.0);
        if t > t_br {
            (1.0 - t * t) / (k1 * k1 * PI * PI)
        } else {
            let lead = (1.0 - t * t).max(0.0).sqrt() / (k1 * PI);
            let second = (1.0 / (k2 * PI) - 1.0 / (k1 * PI)) * (t_br * t_br - t * t).max(0.0).sqrt();
            (lead + second).powi(2)
        }
    });
    let m0 = quadratic_model(omega.clone(), vec![1.0 - t_br])?;

    Ok(CatalogEntry {
        name: "bilinear",
        params: *p,
        target,
        analytic_g: g,
        analytic_g_prime: gp,
        models: vec![AnalyticModel {
            label: "fhat = t^2 (two-branch omega)".into(),
            expected_threshold: None,
            closed_form: Some((ProducedKind::OmegaOfOneMinusT, {
                let om = omega.clone();
                map(move |t: f64| om(1.0 - t))
            })),
            model: m0,
        }],
    })
}

/// Hyperbolic softening `g'(s) = 2/(1 + k s) - 1` on `[0, 1/k]`:
/// `g(s) = (2/k) log(1 + k s) - s`, `g(∞) = (2 log 2 - 1)/k`.
fn hyperbolic(p: &ParamSpec) -> Result<CatalogEntry> {
    let k = p.k;
    let sf = 1.0 / k;
    let g_inf = (2.0 * 2.0f64.ln() - 1.0) / k;
    let g: ScalarMap = map(move |s: f64| {
        if s < sf {
            2.0 / k * (1.0 + k * s).ln() - s
        } else {
            g_inf
        }
    });
    let gp: ScalarMap = map(move |s: f64| (2.0 / (1.0 + k * s) - 1.0).max(0.0));
    let g2: ScalarMap = map(move |s: f64| {
        if s < sf {
            -2.0 * k / ((1.0 + k * s) * (1.0 + k * s))
        } else {
            0.0
        }
    });

    let target = TargetCohesiveLaw {
        g0: g.clone(),
        g0_prime: gp.clone(),
        g0_second: Some(g2),
        g0_prime_inv: Some(map(move |y: f64| {
            let y = y.clamp(0.0, 1.0);
            (2.0 / (1.0 + y) - 1.0) / k
        })),
        regime: Regime::Linear { sigma: 1.0 },
        g_inf,
        s_frac0: sf,
        breakpoints: Vec::new(),
        decay_envelope: None,
    };

    // fhat = t² pair: ω(1-t) = (2 t² log t + 1 - t²)² / (k² π² (1-t²)³);
    // the numerator cancels catastrophically as t -> 1, where a series in
    // 1 - t takes over
    let omega: ScalarMap = map(move |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let t = (1.0 - x).clamp(0.0, 1.0);
        let num = if x < 1e-2 {
            let e = x;
            2.0 * e * e
                - (2.0 / 3.0) * e * e * e
                - e.powi(4) / 6.0
                - e.powi(5) / 15.0
                - e.powi(6) / 30.0
        } else if t == 0.0 {
            1.0
        } else {
            2.0 * t * t * t.ln() + 1.0 - t * t
        };
        let den = (1.0 - t * t).powi(3) * k * k * PI * PI;
        num * num / den
    });
    let m0 = quadratic_model(omega.clone(), Vec::new())?;

    Ok(CatalogEntry {
        name: "hyperbolic",
        params: *p,
        target,
        analytic_g: g,
        analytic_g_prime: gp,
        models: vec![AnalyticModel {
            label: "fhat = t^2".into(),
            expected_threshold: None,
            closed_form: Some((ProducedKind::OmegaOfOneMinusT, {
                let om = omega.clone();
                map(move |t: f64| om(1.0 - t))
            })),
            model: m0,
        }],
    })
}

/// Quadratic hyperbolic softening `g'(s) = 1/(1 + k s)²`:
/// `g(s) = s/(1 + k s)` saturates only at infinity; the closed form for the
/// paired ingredient involves a hypergeometric outside its principal
/// domain, so this entry carries the target only and is verified by round
/// trip.
fn quad_hyperbolic(p: &ParamSpec) -> Result<CatalogEntry> {
    let k = p.k;
    let g: ScalarMap = map(move |s: f64| s / (1.0 + k * s));
    let gp: ScalarMap = map(move |s: f64| (1.0 + k * s).powi(-2));
    let g2: ScalarMap = map(move |s: f64| -2.0 * k * (1.0 + k * s).powi(-3));

    let target = TargetCohesiveLaw {
        g0: g.clone(),
        g0_prime: gp.clone(),
        g0_second: Some(g2),
        g0_prime_inv: Some(map(move |y: f64| {
            let y = y.clamp(1e-300, 1.0);
            (1.0 / y.sqrt() - 1.0) / k
        })),
        regime: Regime::Linear { sigma: 1.0 },
        g_inf: 1.0 / k,
        s_frac0: f64::INFINITY,
        breakpoints: Vec::new(),
        decay_envelope: None,
    };

    Ok(CatalogEntry {
        name: "quad_hyperbolic",
        params: *p,
        target,
        analytic_g: g,
        analytic_g_prime: gp,
        models: Vec::new(),
    })
}

/// Exponential softening `g'(s) = e^{-k s}`, tangent-linearized past
/// `s_δ = log(1/δ)/(2k)`; `δ -> 0` recovers the plain exponential law.
fn exponential(p: &ParamSpec) -> Result<CatalogEntry> {
    let (k, delta) = (p.k, p.delta);
    let target = reconstruct::regularize_exponential(k, delta)?;
    let g = target.g0.clone();
    let gp = target.g0_prime.clone();

    // fhat = t² pair: ω_δ(1-t) is acosh² of 1/t past t = sqrt(δ) and the
    // three-term branch below; the two branches join continuously there
    let sd = delta.sqrt();
    let omega: ScalarMap = map(move |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let t = (1.0 - x).clamp(0.0, 1.0);
        let kpi = k * PI;
        if t >= sd {
            let c = (1.0 / t).acosh();
            c * c / (kpi * kpi)
        } else {
            let c = (1.0 / t.max(1e-300)).acosh() - (sd / t.max(1e-300)).acosh()
                + ((delta - t * t) / delta).max(0.0).sqrt();
            c * c / (kpi * kpi)
        }
    });
    let m0 = quadratic_model(omega.clone(), vec![1.0 - sd])?;

    Ok(CatalogEntry {
        name: "exponential",
        params: *p,
        target,
        analytic_g: g,
        analytic_g_prime: gp,
        models: vec![AnalyticModel {
            label: format!("fhat = t^2, delta = {delta}"),
            expected_threshold: None,
            closed_form: Some((ProducedKind::OmegaOfOneMinusT, {
                let om = omega.clone();
                map(move |t: f64| om(1.0 - t))
            })),
            model: m0,
        }],
    })
}

/// Logarithmic softening `g'(s) = -log(k s)` on `(0, 1/k]`:
/// `g(s) = s (1 - log(k s))`, superlinear at the origin. The paired model
/// fixes `ω(x) = 9x/(16 k²)` and derives the stiffness ratio through the
/// Abel construction (no independent closed form exists).
fn logarithmic(p: &ParamSpec) -> Result<CatalogEntry> {
    let k = p.k;
    let sf = 1.0 / k;
    let g: ScalarMap = map(move |s: f64| {
        if s <= 0.0 {
            0.0
        } else if s < sf {
            s * (1.0 - (k * s).ln())
        } else {
            1.0 / k
        }
    });
    let gp: ScalarMap = map(move |s: f64| {
        if s <= 0.0 {
            f64::INFINITY
        } else if s < sf {
            -(k * s).ln()
        } else {
            0.0
        }
    });
    let g2: ScalarMap = map(move |s: f64| {
        if s > 0.0 && s < sf {
            -1.0 / s
        } else {
            0.0
        }
    });

    let target = TargetCohesiveLaw {
        g0: g.clone(),
        g0_prime: gp.clone(),
        g0_second: Some(g2),
        g0_prime_inv: Some(map(move |y: f64| (-y.max(0.0)).exp() / k)),
        regime: Regime::Superlinear,
        g_inf: 1.0 / k,
        s_frac0: sf,
        breakpoints: Vec::new(),
        // |R'(t)| = e^{-sqrt(t)} / (2k) exactly
        decay_envelope: Some(Decay::ExpSqrt { coeff: 0.6 / k, rate: 1.0 }),
    };

    // ω(x) = 9x/(16 k²) satisfies the compatibility 2Ψ(1) = g(∞) = 1/k
    let omega: ScalarMap = map(move |x: f64| 9.0 * x / (16.0 * k * k));
    let rec = reconstruct::khat_from_omega(&target, omega, Vec::new(), "9 t / (16 k^2)")?;

    Ok(CatalogEntry {
        name: "logarithmic",
        params: *p,
        target,
        analytic_g: g,
        analytic_g_prime: gp,
        models: vec![AnalyticModel {
            label: "omega(x) = 9 x / (16 k^2) (stiffness ratio by construction)".into(),
            expected_threshold: None,
            closed_form: None,
            model: rec.model,
        }],
    })
}

#[cfg(test)]
mod tests;
