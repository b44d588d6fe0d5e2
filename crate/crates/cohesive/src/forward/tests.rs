use std::f64::consts::PI;

use super::*;
use crate::model::{default_phi_deg, make_model, map, ModelOptions, Sigma};

/// Linear-softening model (k = 1): fhat = t², Q = ω, ω(1-t) = (1-t²)/π².
/// Closed forms: Φ(m) = 1-m, g(s) = s - s²/2 on [0,1], 2Ψ(1) = 1/2.
pub(crate) fn linear_softening_model() -> PhaseFieldModel {
    let omega = map(|x: f64| x * (2.0 - x) / (PI * PI));
    make_model(
        map(|t: f64| t * t),
        omega.clone(),
        omega,
        default_phi_deg(),
        ModelOptions {
            khat: Some(map(|t: f64| t * t)),
            khat_prime: Some(map(|t: f64| 2.0 * t)),
            sigma: Some(Sigma::Finite(1.0)),
            ..Default::default()
        },
    )
    .unwrap()
}

#[test]
fn opening_vanishes_with_stress() {
    let m = linear_softening_model();
    let b = profile_opening(&m, 0.5, 0.0).unwrap();
    assert_eq!(b, 0.0);
    let b = profile_opening(&m, 0.5, 1e-8).unwrap();
    assert!(b < 1e-6);
}

#[test]
fn linear_model_threshold_is_one_minus_m() {
    let m = linear_softening_model();
    for &x in &[0.05, 0.2, 0.5, 0.8, 0.95] {
        let phi = jump_threshold(&m, x).unwrap();
        assert!((phi - (1.0 - x)).abs() < 2e-6, "Phi({x}) = {phi}");
    }
}

#[test]
fn complementary_at_zero_stress_is_twice_psi_gap() {
    let m = linear_softening_model();
    // A(m, 0) = 2 (Ψ(1) - Ψ(m)); at m -> 0 this tends to 2Ψ(1) = 1/2
    let a = complementary_energy(&m, 1e-6, 0.0).unwrap();
    assert!((a - 0.5).abs() < 1e-5, "A(0,0) = {a}");
    let a = complementary_energy(&m, 0.3, 0.0).unwrap();
    let psi_gap = 2.0 * psi_interval(&m, 0.3).unwrap();
    assert!((a - psi_gap).abs() < 1e-8);
    // m -> 1 kills the interval
    let a = complementary_energy(&m, 1.0 - 1e-9, 0.0).unwrap();
    assert!(a < 1e-4);
}

#[test]
fn complementary_cross_check_at_switch_point() {
    // at m = 0.5 with λ = k̂^{1/2}(m) = 0.5 the opening equals Φ(0.5) = 0.5
    // and A = g(0.5) - λ s = 0.375 - 0.25 = 0.125
    let m = linear_softening_model();
    let a = complementary_energy(&m, 0.5, 0.5).unwrap();
    assert!((a - 0.125).abs() < 1e-6, "A = {a}");
}

#[test]
fn equilibrium_stress_solves_opening() {
    let model = linear_softening_model();
    // s = Φ(m) gives the extreme stress
    let lam = equilibrium_stress(&model, 0.5, 0.5).unwrap();
    assert!((lam - 0.5).abs() < 1e-9);
    // residual check at an interior opening
    let lam = equilibrium_stress(&model, 0.5, 0.3).unwrap();
    let b = profile_opening(&model, 0.5, lam).unwrap();
    assert!((b - 0.3).abs() < 1e-10, "B = {b}");
    // s -> 0 gives λ -> 0
    let lam = equilibrium_stress(&model, 0.5, 1e-6).unwrap();
    assert!(lam < 1e-4);
    // beyond the threshold is out of range
    assert!(matches!(
        equilibrium_stress(&model, 0.5, 0.6),
        Err(Error::OutOfRange(_))
    ));
}

#[test]
fn opening_is_strictly_increasing_in_stress() {
    let model = linear_softening_model();
    for &m in &[0.3, 0.6, 0.9] {
        let lam_max = model.khat_sqrt(m);
        for &frac in &[0.2, 0.5, 0.8] {
            let d = opening_dlam(&model, m, frac * lam_max).unwrap();
            assert!(d > 0.0, "dB/dλ = {d} at m={m}, frac={frac}");
        }
    }
}

#[test]
fn reduced_energy_branches_agree_at_switch() {
    let model = linear_softening_model();
    let m = 0.5;
    let s = jump_threshold(&model, m).unwrap();
    // both branch formulas coincide when λ = k̂^{1/2}(m)
    let lam = model.khat_sqrt(m);
    let smooth = complementary_energy(&model, m, lam).unwrap() + lam * s;
    let e = reduced_energy(&model, m, s).unwrap();
    assert!((smooth - e).abs() < 1e-9);
}

#[test]
fn reduced_energy_direct_route_matches_split() {
    let model = linear_softening_model();
    for &(m, s) in &[(0.5, 0.3), (0.5, 0.5), (0.7, 0.2)] {
        let lam = equilibrium_stress(&model, m, s).unwrap();
        let split = complementary_energy(&model, m, lam).unwrap() + lam * s;
        let direct = reduced_energy_direct(&model, m, lam).unwrap();
        assert!(
            (split - direct).abs() < 1e-6,
            "m={m} s={s}: split={split} direct={direct}"
        );
    }
}

#[test]
fn reduced_energy_at_optimal_m_is_g() {
    let model = linear_softening_model();
    // m_s = Φ^{-1}(0.5) = 0.5, g(0.5) = 0.375
    let e = reduced_energy(&model, 0.5, 0.5).unwrap();
    assert!((e - 0.375).abs() < 1e-7, "G_s(m_s) = {e}");
}

#[test]
fn reduced_energy_monotone_on_both_sides() {
    let model = linear_softening_model();
    let s = 0.5; // m_s = 0.5
    // decreasing where Φ(m) > s (m < 0.5), increasing where Φ(m) < s
    let e1 = reduced_energy(&model, 0.30, s).unwrap();
    let e2 = reduced_energy(&model, 0.40, s).unwrap();
    let e3 = reduced_energy(&model, 0.60, s).unwrap();
    let e4 = reduced_energy(&model, 0.70, s).unwrap();
    assert!(e1 > e2, "{e1} vs {e2}");
    assert!(e3 < e4, "{e3} vs {e4}");
}

#[test]
fn reduced_energy_saturates_for_large_s_small_m() {
    let model = linear_softening_model();
    let s = 2.0; // beyond sup Φ = 1
    let m = 1e-6;
    let e = reduced_energy(&model, m, s).unwrap();
    let expected = 0.5 + model.khat_sqrt(m) * s;
    assert!((e - expected).abs() < 1e-5, "G_s = {e}, expected {expected}");
}

#[test]
fn threshold_table_classifies_linear_model() {
    let model = linear_softening_model();
    let phi = jump_threshold_table(&model, 128).unwrap();
    assert_eq!(phi.classification, PhiClass::StrictlyDecreasing);
    assert!((phi.phi0plus - 1.0).abs() < 1e-4, "phi0+ = {}", phi.phi0plus);
    assert!(phi.phi1minus.abs() < 1e-4, "phi1- = {}", phi.phi1minus);
    // the printed closed form disagrees by a factor 2 with direct
    // evaluation; direct wins, the closed form is a diagnostic
    let cf = phi.closed_form_phi0.unwrap();
    assert!((cf - 0.5).abs() < 1e-3, "closed form = {cf}");
    assert_eq!(phi.decreasing_criterion, Some(true));
}

#[test]
fn cohesive_values_linear_model() {
    let model = linear_softening_model();
    let solver = CohesiveSolver::new(&model).unwrap();
    // g(s) = s - s²/2 on [0,1]
    for &s in &[0.2, 0.5, 0.6, 0.9] {
        let g = solver.value(s).unwrap();
        let exact = s - 0.5 * s * s;
        assert!((g - exact).abs() < 1e-6, "g({s}) = {g}, exact {exact}");
    }
    assert!((solver.value(0.6).unwrap() - 0.42).abs() < 1e-6);
    // saturation
    for &s in &[1.0, 1.5, 3.0] {
        let g = solver.value(s).unwrap();
        assert!((g - 0.5).abs() < 1e-4, "g({s}) = {g}");
    }
    assert!((solver.s_frac() - 1.0).abs() < 1e-4);
}

#[test]
fn cohesive_derivative_linear_model() {
    let model = linear_softening_model();
    let solver = CohesiveSolver::new(&model).unwrap();
    for &s in &[0.1, 0.3, 0.7] {
        let gp = solver.derivative(s).unwrap();
        assert!((gp - (1.0 - s)).abs() < 1e-6, "g'({s}) = {gp}");
    }
    assert!((solver.derivative(0.0).unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(solver.derivative(1.5).unwrap(), 0.0);
}

#[test]
fn derivative_matches_finite_differences() {
    let model = linear_softening_model();
    let solver = CohesiveSolver::new(&model).unwrap();
    let h = 1e-5;
    for &s in &[0.25, 0.5, 0.75] {
        let fd = (solver.value(s + h).unwrap() - solver.value(s - h).unwrap()) / (2.0 * h);
        let gp = solver.derivative(s).unwrap();
        assert!((fd - gp).abs() < 1e-4, "s={s}: fd={fd}, gp={gp}");
    }
}

#[test]
fn curve_respects_global_bounds() {
    let model = linear_softening_model();
    let solver = CohesiveSolver::new(&model).unwrap();
    let grid: Vec<f64> = (1..=60).map(|i| i as f64 * 0.025).collect();
    let curve = solver.curve(&grid).unwrap();
    let two_psi1 = curve.two_psi1;
    let mut prev = 0.0;
    for (i, (&s, &g)) in grid.iter().zip(&curve.g_values).enumerate() {
        assert!(g >= prev - 1e-9, "monotonicity fails at i={i}");
        assert!(g <= s.min(two_psi1) + 1e-8, "bound fails at s={s}: g={g}");
        prev = g;
        // concavity by second differences
        if i >= 2 {
            let second = curve.g_values[i] - 2.0 * curve.g_values[i - 1] + curve.g_values[i - 2];
            assert!(second <= 1e-8, "concavity fails at i={i}: {second}");
        }
    }
    assert!((curve.g_values.last().unwrap() - two_psi1).abs() < 1e-4);
}

#[test]
fn profile_smooth_case() {
    let model = linear_softening_model();
    let m = 0.5;
    let s = jump_threshold(&model, m).unwrap(); // = Φ(m): boundary of smooth case
    let p = optimal_profile(&model, m, s, 200).unwrap();
    assert_eq!(p.regularity, Regularity::W11);
    assert_eq!(p.jump, 0.0);
    assert!((p.w_samples[0] - 0.5 * s).abs() < 1e-12, "w(m) = {}", p.w_samples[0]);
    assert!((p.w_samples.last().unwrap() - s).abs() < 1e-7);
    // strictly increasing samples
    for w in p.w_samples.windows(2) {
        assert!(w[1] > w[0] - 1e-12);
    }
    // odd symmetry of the full profile
    let (t, w) = p.full_profile();
    assert!((t[0] - (2.0 * m - 1.0)).abs() < 1e-12);
    assert!(w[0].abs() < 1e-7);
    let n = t.len();
    for i in 0..n {
        let j = n - 1 - i;
        assert!((w[i] + w[j] - s).abs() < 1e-7, "odd symmetry at i={i}");
    }
    assert!((p.total_variation() - s).abs() < 1e-6);
}

#[test]
fn profile_jump_case() {
    let model = linear_softening_model();
    let m = 0.5;
    let phi_m = jump_threshold(&model, m).unwrap();
    let s = phi_m + 0.2;
    let p = optimal_profile(&model, m, s, 100).unwrap();
    assert_eq!(p.regularity, Regularity::SbvJump);
    assert!((p.jump - 0.2).abs() < 1e-9, "jump = {}", p.jump);
    assert!((p.lambda - model.khat_sqrt(m)).abs() < 1e-12);
    assert!((p.total_variation() - s).abs() < 1e-6);
}

#[test]
fn superlinear_bound_requires_regime() {
    let model = linear_softening_model();
    assert!(matches!(
        superlinear_bound(&model, 1.0),
        Err(Error::WrongRegime { .. })
    ));
}

#[test]
fn diffuse_density_closed_form() {
    // φ(x) = x/(1+x): h_ς(t) = t² for t <= ς/2, else ς t - ς²/4
    let phi = default_phi_deg();
    let h = |vs: f64, t: f64| -> f64 {
        if t <= 0.5 * vs {
            t * t
        } else {
            vs * t - 0.25 * vs * vs
        }
    };
    for &(vs, t) in &[(1.0, 1.0), (1.0, 0.3), (0.5, 2.0), (2.0, 0.7)] {
        let v = diffuse_density(&phi, vs, t);
        assert!((v - h(vs, t)).abs() < 1e-9, "h_{vs}({t}) = {v}, exact {}", h(vs, t));
    }
    // conventions
    assert_eq!(diffuse_density(&phi, 0.0, 3.0), 0.0);
    assert_eq!(diffuse_density(&phi, 1.0, 0.0), 0.0);
    let v = diffuse_density(&phi, f64::INFINITY, 2.0);
    assert!((v - 4.0).abs() < 1e-6); // φ(∞) = 1
}

#[test]
fn diffuse_envelope_is_convex_and_below() {
    let phi = default_phi_deg();
    let grid: Vec<f64> = (0..=128).map(|i| 3.0 * i as f64 / 128.0).collect();
    let env = diffuse_density_envelope(&phi, 1.0, &grid).unwrap();
    for (&t, &e) in grid.iter().zip(env.values()) {
        let h = diffuse_density(&phi, 1.0, t);
        assert!(e <= h + 1e-9);
    }
    let ev = env.values();
    for i in 1..ev.len() - 1 {
        let h1 = grid[i] - grid[i - 1];
        let h2 = grid[i + 1] - grid[i];
        assert!((ev[i + 1] - ev[i]) / h2 - (ev[i] - ev[i - 1]) / h1 >= -1e-9);
    }
}

#[test]
fn non_monotone_threshold_falls_back_to_scan() {
    // fhat(t) = t, Q = ω: k̂ = t has Φ(0⁺) = Φ(1⁻) = 0 with a bump between
    let model = make_model(
        map(|t: f64| t),
        map(|t: f64| t),
        map(|t: f64| t),
        default_phi_deg(),
        ModelOptions {
            khat: Some(map(|t: f64| t)),
            khat_prime: Some(map(|_| 1.0)),
            sigma: Some(Sigma::Finite(1.0)),
            ..Default::default()
        },
    )
    .unwrap();
    let solver = CohesiveSolver::new(&model).unwrap();
    assert_eq!(solver.phi.classification, PhiClass::NonMonotone);
    let two_psi1 = solver.two_psi1();
    for &s in &[0.1, 0.3, 0.8] {
        let g = solver.value(s).unwrap();
        assert!(g <= s.min(two_psi1) + 1e-8);
        assert!(g > 0.0);
    }
    let c = solver.curve(&[0.2, 0.4]).unwrap();
    assert!(c.best_effort);
}
