//! The acceptance suite: one runnable check per shipped guarantee, shared
//! by the `acceptance` integration test target and the CLI `validate`
//! subcommand. Every tolerance is pinned here.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{self, ParamSpec};
use crate::error::Result;
use crate::forward::{
    diffuse_density, diffuse_density_envelope, jump_threshold, CohesiveSolver, PhiClass,
};
use crate::model::{default_phi_deg, map, Sigma};
use crate::oracle::{self, OracleConfig};
use crate::reconstruct::{
    self, build_abel_datum, forward_abel_point, khat_from_omega, omega_from_khat, round_trip,
};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

pub const CRITERION_COUNT: usize = 10;

pub fn run_all() -> Vec<CriterionResult> {
    (1..=CRITERION_COUNT).map(run_criterion).collect()
}

pub fn run_criterion(id: usize) -> CriterionResult {
    let names = [
        "linear-softening damage-potential reconstruction",
        "forward law on the linear-softening model",
        "jump threshold closed check (linear softening)",
        "constant-stress law from both analytic pairs",
        "degradation-profile reconstruction (fixed omega)",
        "Abel round trips on the catalog",
        "brute-force oracle cross-check",
        "reconstruct-then-forward round trips",
        "qualitative property suite on every catalog model",
        "diffuse density against its brute-force oracle",
    ];
    let start = Instant::now();
    let outcome = match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        _ => Err(crate::Error::BadParameters(format!("no criterion {id}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (passed, detail) = match outcome {
        Ok((passed, detail)) => (passed, detail),
        Err(e) => (false, format!("errored: {e}")),
    };
    CriterionResult {
        id,
        name: names[id - 1].to_string(),
        passed,
        detail,
        seconds,
    }
}

type Outcome = Result<(bool, String)>;

/// Reconstruct ω for the linear-softening law (k = 1, fixed ratio t²) and
/// compare against (1 - t²)/π² on [0, 0.999]: sup error ≤ 1e-6 of the max
/// value, wall time ≤ 5 s.
fn criterion_1() -> Outcome {
    let t0 = Instant::now();
    let entry = catalog::get("linear", &ParamSpec::default())?;
    let rec = omega_from_khat(
        &entry.target,
        map(|t: f64| t * t),
        Some(map(|t: f64| 2.0 * t)),
        "t^2",
    )?;
    let mut sup = 0.0f64;
    for i in 0..=2000 {
        let t = 0.999 * i as f64 / 2000.0;
        let got = (rec.produced_map)(t);
        let expected = (1.0 - t * t) / (PI * PI);
        sup = sup.max((got - expected).abs());
    }
    // the exported tabulation agrees with the map at its own nodes
    let mut tab_sup = 0.0f64;
    for (t, v) in rec.table.grid().iter().zip(rec.table.values()) {
        if *t <= 0.999 {
            tab_sup = tab_sup.max((v - (1.0 - t * t) / (PI * PI)).abs());
        }
    }
    let elapsed = t0.elapsed().as_secs_f64();
    let tol = 1e-6 / (PI * PI);
    let passed = sup <= tol && tab_sup <= tol && elapsed <= 5.0;
    Ok((
        passed,
        format!(
            "sup |omega_rec - (1-t^2)/pi^2| = {sup:.3e} (tabulated {tab_sup:.3e}, tol {tol:.3e}), {elapsed:.2} s (cap 5 s)"
        ),
    ))
}

/// Forward law on the linear-softening model: `g(s) = s - s²/2` within
/// 1e-4 on {0.1..0.9}, saturation `g = 0.5 ± 1e-4` past `s = 1`, and
/// `g'(s) = 1 - s` within 1e-4.
fn criterion_2() -> Outcome {
    let entry = catalog::get("linear", &ParamSpec::default())?;
    let model = &entry.models[0].model;
    let solver = CohesiveSolver::new(model)?;
    let mut worst_g = 0.0f64;
    for i in 1..=9 {
        let s = i as f64 / 10.0;
        worst_g = worst_g.max((solver.value(s)? - (s - 0.5 * s * s)).abs());
    }
    let mut worst_sat = 0.0f64;
    for &s in &[1.0, 1.25, 1.5, 2.0] {
        worst_sat = worst_sat.max((solver.value(s)? - 0.5).abs());
    }
    let mut worst_gp = 0.0f64;
    for i in 0..=9 {
        let s = i as f64 / 10.0;
        worst_gp = worst_gp.max((solver.derivative(s)? - (1.0 - s)).abs());
    }
    let passed = worst_g <= 1e-4 && worst_sat <= 1e-4 && worst_gp <= 1e-4;
    Ok((
        passed,
        format!(
            "max |g - (s - s^2/2)| = {worst_g:.3e}, saturation dev {worst_sat:.3e}, max |g' - (1-s)| = {worst_gp:.3e} (tol 1e-4)"
        ),
    ))
}

/// `Φ(m) = 1 - m` on the linear-softening model within 1e-4 over
/// `m ∈ [0.01, 0.99]`.
fn criterion_3() -> Outcome {
    let entry = catalog::get("linear", &ParamSpec::default())?;
    let model = &entry.models[0].model;
    let mut worst = 0.0f64;
    for i in 1..=99 {
        let m = i as f64 / 100.0;
        worst = worst.max((jump_threshold(model, m)? - (1.0 - m)).abs());
    }
    Ok((worst <= 1e-4, format!("max |Phi(m) - (1-m)| = {worst:.3e} (tol 1e-4)")))
}

/// Both constant-stress pairs: `g(s) = min(s, 1)` within 1e-3 at 20 points,
/// sampled threshold non-decreasing, and `Φ(x) = 2 f̂^{1/2}(x)` within 1e-3.
fn criterion_4() -> Outcome {
    let entry = catalog::get("dugdale", &ParamSpec::default())?;
    let mut detail = String::new();
    let mut passed = true;
    for am in &entry.models {
        let solver = CohesiveSolver::new(&am.model)?;
        let mut worst_g = 0.0f64;
        for i in 1..=20 {
            let s = 0.1 * i as f64;
            worst_g = worst_g.max((solver.value(s)? - s.min(1.0)).abs());
        }
        let nondecreasing = solver.phi.classification == PhiClass::NonDecreasing
            && solver
                .phi
                .table
                .values()
                .windows(2)
                .all(|w| w[1] >= w[0] - 1e-9);
        let expected = am.expected_threshold.as_ref().expect("pairs carry thresholds");
        let mut worst_phi = 0.0f64;
        for i in 1..=19 {
            let x = 0.05 * i as f64;
            worst_phi = worst_phi.max((jump_threshold(&am.model, x)? - expected(x)).abs());
        }
        passed &= worst_g <= 1e-3 && nondecreasing && worst_phi <= 1e-3;
        detail.push_str(&format!(
            "[{}] |g - min(s,1)| = {:.3e}, threshold non-decreasing: {}, |Phi - 2 sqrt(fhat)| = {:.3e}; ",
            am.label, worst_g, nondecreasing, worst_phi
        ));
    }
    detail.push_str("(tol 1e-3)");
    Ok((passed, detail))
}

/// Degradation-profile reconstruction with fixed `ω(x) = x²/4` (k = 1):
/// sup error against the closed-form inverse ≤ 1e-6 on [0.001, 0.999].
fn criterion_5() -> Outcome {
    let entry = catalog::get("linear", &ParamSpec::default())?;
    let rec = khat_from_omega(&entry.target, map(|x: f64| x * x / 4.0), Vec::new(), "t^2/4")?;
    let closed = |x: f64| -> f64 {
        1.0 - (1.0
            - (2.0 / PI) * ((x - x * x).max(0.0).sqrt() + (1.0 - x).max(0.0).sqrt().acos()))
        .max(0.0)
        .sqrt()
    };
    let mut sup = 0.0f64;
    for i in 0..=2000 {
        let x = 0.001 + (0.999 - 0.001) * i as f64 / 2000.0;
        sup = sup.max(((rec.produced_map)(x) - closed(x)).abs());
    }
    Ok((sup <= 1e-6, format!("sup |fhat_inv - closed form| = {sup:.3e} (tol 1e-6)")))
}

/// Abel round trips: the forward kernel applied to the point inversion
/// reproduces the datum, sup ≤ 1e-6 on `[0, σ²(1-1e-3)]` for every
/// linear-regime law, and within 1e-5 of `(1+√t)e^{-√t}` on `[0, 4]` for
/// the superlinear logarithmic law.
fn criterion_6() -> Outcome {
    let mut detail = String::new();
    let mut passed = true;
    for name in ["linear", "bilinear", "hyperbolic", "quad_hyperbolic", "exponential"] {
        let entry = catalog::get(name, &ParamSpec::default())?;
        let datum = build_abel_datum(&entry.target)?;
        let mut sup = 0.0f64;
        for i in 0..=128 {
            let t = (1.0 - 1e-3) * i as f64 / 128.0;
            sup = sup.max((forward_abel_point(&datum, t)? - datum.value(t)).abs());
        }
        passed &= sup <= 1e-6;
        detail.push_str(&format!("{name}: {sup:.3e}; "));
    }
    let entry = catalog::get("logarithmic", &ParamSpec::default())?;
    let datum = build_abel_datum(&entry.target)?;
    let mut sup = 0.0f64;
    for i in 0..=64 {
        let t = 4.0 * i as f64 / 64.0;
        let expected = (1.0 + t.sqrt()) * (-t.sqrt()).exp();
        sup = sup.max((forward_abel_point(&datum, t)? - expected).abs());
    }
    passed &= sup <= 1e-5;
    detail.push_str(&format!(
        "logarithmic vs (1+sqrt t) e^(-sqrt t): {sup:.3e} (tol 1e-6 linear / 1e-5 superlinear)"
    ));
    Ok((passed, detail))
}

/// Brute-force oracle within 2% of the forward law on four laws, four
/// interior openings each, `n_w = 2000`, `n_m = 200`, ≤ 60 s per law.
fn criterion_7() -> Outcome {
    let cfg = OracleConfig { n_w: 2000, n_m: 200, ..Default::default() };
    let mut detail = String::new();
    let mut passed = true;
    for name in ["dugdale", "linear", "hyperbolic", "logarithmic"] {
        let t0 = Instant::now();
        let entry = catalog::get(name, &ParamSpec::default())?;
        let model = &entry.models[0].model;
        let solver = CohesiveSolver::new(model)?;
        let s_ref = entry.target.s_frac0;
        let mut worst = 0.0f64;
        for &frac in &[0.3, 0.5, 0.7, 0.9] {
            let s = frac * s_ref;
            let oracle_g = oracle::brute_force_g(model, s, &cfg)?;
            let fwd = solver.value(s)?;
            worst = worst.max(((oracle_g.value - fwd) / fwd).abs());
        }
        let secs = t0.elapsed().as_secs_f64();
        passed &= worst <= 0.02 && secs <= 60.0;
        detail.push_str(&format!("{name}: rel {worst:.2e} in {secs:.1} s; "));
    }
    detail.push_str("(tol 2%, 60 s/law)");
    Ok((passed, detail))
}

/// Reconstruct-then-forward round trips without closed forms: sup relative
/// deviation ≤ 5e-3 over the law's working range. The quadratic hyperbolic
/// law saturates only at infinity, so its range is capped at the amplitude
/// where it reaches 90% of its limit.
fn criterion_8() -> Outcome {
    let mut detail = String::new();
    let mut passed = true;
    for name in ["bilinear", "hyperbolic", "quad_hyperbolic", "exponential"] {
        let entry = catalog::get(name, &ParamSpec::default())?;
        let rec = omega_from_khat(
            &entry.target,
            map(|t: f64| t * t),
            Some(map(|t: f64| 2.0 * t)),
            "t^2",
        )?;
        let span = if entry.target.s_frac0.is_finite() {
            entry.target.s_frac0
        } else {
            // smallest amplitude reaching 90% of the limit load
            let mut s = 1e-3;
            while (entry.analytic_g)(s) < 0.9 * entry.target.g_inf {
                s *= 1.01;
            }
            s
        };
        let grid: Vec<f64> = (0..=24)
            .map(|i| span * (0.02 + (0.98 - 0.02) * i as f64 / 24.0))
            .collect();
        let rt = round_trip(&entry.target, &rec, &grid)?;
        passed &= rt.sup_rel <= 5e-3;
        detail.push_str(&format!("{name}: sup rel {:.2e}; ", rt.sup_rel));
    }
    detail.push_str("(tol 5e-3)");
    Ok((passed, detail))
}

/// Qualitative properties on every analytic catalog model: `g` concave,
/// non-decreasing, below `min(σs, 2Ψ(1)) + 1e-8`, saturated at
/// `s = 10 (s⋆)₀` within 1e-4; `|2Ψ(1) - g₀(∞)| ≤ 1e-8`; and the
/// regularized exponential family is monotone in δ (larger δ truncates
/// earlier, hence lies lower — the direction the tangent construction
/// forces).
fn criterion_9() -> Outcome {
    let mut detail = String::new();
    let mut passed = true;
    for name in ["dugdale", "linear", "bilinear", "hyperbolic", "exponential", "logarithmic"] {
        let entry = catalog::get(name, &ParamSpec::default())?;
        let s_frac = entry.target.s_frac0;
        for am in &entry.models {
            let solver = CohesiveSolver::new(&am.model)?;
            let two_psi1 = solver.two_psi1();
            let sigma = am.model.sigma;
            let grid: Vec<f64> = (1..=40).map(|i| s_frac * 1.05 * i as f64 / 40.0).collect();
            let curve = solver.curve(&grid)?;
            let mut mono_ok = true;
            let mut concave_ok = true;
            let mut bound_ok = true;
            for i in 0..grid.len() {
                let g = curve.g_values[i];
                if i > 0 && g < curve.g_values[i - 1] - 1e-8 {
                    mono_ok = false;
                }
                if i >= 2 {
                    let second = g - 2.0 * curve.g_values[i - 1] + curve.g_values[i - 2];
                    if second > 1e-8 {
                        concave_ok = false;
                    }
                }
                let cap = match sigma {
                    Sigma::Finite(sg) => (sg * grid[i]).min(two_psi1),
                    Sigma::Infinite => two_psi1,
                };
                if g > cap + 1e-8 {
                    bound_ok = false;
                }
            }
            let sat = (solver.value(10.0 * s_frac)? - two_psi1).abs();
            let toughness = (two_psi1 - entry.target.g_inf).abs() / entry.target.g_inf;
            let ok = mono_ok && concave_ok && bound_ok && sat <= 1e-4 && toughness <= 1e-8;
            passed &= ok;
            detail.push_str(&format!(
                "{name}[{}]: mono {mono_ok}, concave {concave_ok}, bound {bound_ok}, sat {sat:.1e}, |2Psi1-g_inf| rel {toughness:.1e}; ",
                am.label
            ));
        }
    }
    // regularized exponential family ordering at sampled amplitudes
    let t_small = reconstruct::regularize_exponential(1.0, 1e-4)?;
    let t_big = reconstruct::regularize_exponential(1.0, 1e-2)?;
    let mut order_ok = true;
    for i in 1..=24 {
        let s = 8.0 * i as f64 / 24.0;
        if (t_small.g0)(s) < (t_big.g0)(s) - 1e-12 {
            order_ok = false;
        }
    }
    passed &= order_ok;
    detail.push_str(&format!("exponential delta-ordering holds: {order_ok}"));
    Ok((passed, detail))
}

/// Forward diffuse density equals the brute-force log-grid minimum within
/// 1e-6 relative on 100 seeded pairs; its convex envelope stays below the
/// density and passes a second-difference test.
fn criterion_10() -> Outcome {
    let phi = default_phi_deg();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c0e51fe);
    // ranges keep the minimizer well inside the oracle's fixed τ-grid
    // (its 1e-8 floor binds for tiny t, where the grid answer itself is
    // off by more than the comparison tolerance)
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let vs = rng.gen_range(0.2..2.0);
        let t = rng.gen_range(0.25..3.0);
        let fwd = diffuse_density(&phi, vs, t);
        let brute = oracle::brute_force_diffuse_density(&phi, vs, t, 200_000);
        worst = worst.max(((fwd - brute) / brute).abs());
    }
    let grid: Vec<f64> = (0..=128).map(|i| 3.0 * i as f64 / 128.0).collect();
    let env = diffuse_density_envelope(&phi, 1.0, &grid)?;
    let mut below = true;
    let mut convex = true;
    let ev = env.values();
    for (i, &t) in grid.iter().enumerate() {
        if ev[i] > diffuse_density(&phi, 1.0, t) + 1e-9 {
            below = false;
        }
        if i >= 1 && i + 1 < grid.len() {
            let h1 = grid[i] - grid[i - 1];
            let h2 = grid[i + 1] - grid[i];
            if (ev[i + 1] - ev[i]) / h2 - (ev[i] - ev[i - 1]) / h1 < -1e-9 {
                convex = false;
            }
        }
    }
    let passed = worst <= 1e-6 && below && convex;
    Ok((
        passed,
        format!("worst rel dev {worst:.2e} (tol 1e-6), envelope below: {below}, convex: {convex}"),
    ))
}
