//! Adaptive Gauss–Kronrod quadrature, square-root endpoint singularities by
//! quadratic substitution, and semi-infinite tails with declared decay
//! envelopes.

use std::collections::BinaryHeap;

use super::{Interval, QuadratureSpec};
use crate::error::{Error, Result};

/// 15-point Kronrod abscissae (positive half, descending), with the
/// embedded 7-point Gauss rule on the odd entries.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Value plus error estimate of a quadrature.
#[derive(Clone, Copy, Debug)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    if !fc.is_finite() {
        return Err(Error::NonFinite { at: center });
    }
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        if !f1.is_finite() {
            return Err(Error::NonFinite { at: center - dx });
        }
        if !f2.is_finite() {
            return Err(Error::NonFinite { at: center + dx });
        }
        let sum = f1 + f2;
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }

    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    // standard sharpening of the raw Gauss/Kronrod difference
    let scaled = if err > 0.0 {
        err.min(err * (200.0 * err / value.abs().max(f64::MIN_POSITIVE)).sqrt())
    } else {
        0.0
    };
    Ok((value, scaled.max(err * 1e-6)))
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    seq: usize,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error && self.seq == other.seq
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // worst error first; deterministic tie-break on insertion order
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Globally adaptive GK15 on a finite interval.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    let (est, converged) = adaptive_with_flag(f, a, b, spec)?;
    if !converged {
        return Err(Error::NonConvergent {
            subdivisions: spec.max_subdivisions,
            estimate: est.error,
        });
    }
    Ok(est)
}

/// As [`adaptive`], but budget exhaustion is reported through the flag
/// instead of an error, leaving the caller the best available estimate.
/// Integrands backed by tabulations carry an interpolation noise floor the
/// subdivision loop cannot push through; callers with tolerances far above
/// that floor accept the flagged estimate.
pub fn adaptive_with_flag<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<(Estimate, bool)> {
    let (v, e) = gk15(f, a, b)?;
    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    heap.push(Segment { a, b, value: v, error: e, seq });
    let mut total_value = v;
    let mut total_error = e;
    let mut converged = true;
    // stagnation watch: when refinement stops paying (noise-floor
    // integrands), stop early instead of burning the whole budget
    let mut last_check = total_error;
    let mut since_check = 0usize;

    while total_error > spec.abs_tol.max(spec.rel_tol * total_value.abs()) {
        if heap.len() >= spec.max_subdivisions {
            converged = false;
            break;
        }
        since_check += 1;
        if since_check >= 2048 {
            if total_error > 0.9 * last_check {
                converged = false;
                break;
            }
            last_check = total_error;
            since_check = 0;
        }
        let worst = heap.pop().expect("heap non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine precision; accept as is
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(f, worst.a, mid)?;
        let (v2, e2) = gk15(f, mid, worst.b)?;
        total_value += v1 + v2 - worst.value;
        total_error += e1 + e2 - worst.error;
        seq += 1;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1, seq });
        seq += 1;
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2, seq });
    }

    // re-sum in deterministic (left-to-right) order to kill accumulation drift
    let mut segs: Vec<Segment> = heap.into_vec();
    segs.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = segs.iter().map(|s| s.value).sum();
    let error = segs.iter().map(|s| s.error).sum();
    Ok((Estimate { value, error }, converged))
}

/// `∫ h(t) dt` over a finite interval with adaptive error control.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    h: &F,
    iv: Interval,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !iv.hi.is_finite() {
        return Err(Error::Domain(
            "integrate_adaptive needs a finite interval; use integrate_tail".into(),
        ));
    }
    Ok(adaptive(h, iv.lo, iv.hi, spec)?.value)
}

/// `∫_lo^hi h(t) (t - lo)^{-1/2} dt` by the substitution `t = lo + u²`,
/// which removes the singularity: the integral becomes `2 ∫ h(lo + u²) du`.
///
/// `h` itself must stay bounded at `lo`; pre-factor any singular behaviour.
pub fn integrate_left_sqrt_singular<F: Fn(f64) -> f64>(
    h: &F,
    iv: Interval,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !iv.hi.is_finite() {
        return Err(Error::Domain("singular quadrature needs a finite interval".into()));
    }
    let umax = iv.len().sqrt();
    let g = |u: f64| 2.0 * h(iv.lo + u * u);
    Ok(adaptive(&g, 0.0, umax, spec)?.value)
}

/// Mirror of [`integrate_left_sqrt_singular`] for a right-endpoint kernel
/// `(hi - t)^{-1/2}` via `t = hi - u²`.
pub fn integrate_right_sqrt_singular<F: Fn(f64) -> f64>(
    h: &F,
    iv: Interval,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !iv.hi.is_finite() {
        return Err(Error::Domain("singular quadrature needs a finite interval".into()));
    }
    let umax = iv.len().sqrt();
    let g = |u: f64| 2.0 * h(iv.hi - u * u);
    Ok(adaptive(&g, 0.0, umax, spec)?.value)
}

/// Decay envelope declared for a semi-infinite integrand.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Decay {
    /// `|h(t)| <= coeff * exp(-rate * sqrt(t))`
    ExpSqrt { coeff: f64, rate: f64 },
    /// `|h(t)| <= coeff * exp(-rate * t)`
    Exp { coeff: f64, rate: f64 },
    /// `|h(t)| <= coeff * t^{-exponent}`, `exponent > 3/2`
    Power { coeff: f64, exponent: f64 },
}

impl Decay {
    /// Analytic bound on `∫_T^∞ envelope dt`.
    pub fn tail_bound(&self, t: f64) -> f64 {
        match *self {
            Decay::ExpSqrt { coeff, rate } => {
                let u = t.max(0.0).sqrt();
                2.0 * coeff * (u / rate + 1.0 / (rate * rate)) * (-rate * u).exp()
            }
            Decay::Exp { coeff, rate } => coeff / rate * (-rate * t).exp(),
            Decay::Power { coeff, exponent } => coeff * t.powf(1.0 - exponent) / (exponent - 1.0),
        }
    }

    pub fn bound_at(&self, t: f64) -> f64 {
        match *self {
            Decay::ExpSqrt { coeff, rate } => coeff * (-rate * t.max(0.0).sqrt()).exp(),
            Decay::Exp { coeff, rate } => coeff * (-rate * t).exp(),
            Decay::Power { coeff, exponent } => coeff * t.powf(-exponent),
        }
    }
}

/// `∫_lo^∞ h(t) dt` for an integrand bounded by the declared envelope.
///
/// The integral is truncated at `T` with envelope tail bound below
/// `abs_tol / 10`; the analytic tail bound is folded into the error
/// estimate. Sampled values exceeding the envelope by more than 10x in the
/// tail region abort with [`Error::EnvelopeViolated`].
pub fn integrate_tail<F: Fn(f64) -> f64>(
    h: &F,
    lo: f64,
    envelope: Decay,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let target = 0.1 * spec.abs_tol;
    let mut t_cut = lo.max(1.0) + 1.0;
    while envelope.tail_bound(t_cut) > target {
        t_cut *= 2.0;
        if t_cut > 1e300 {
            return Err(Error::Domain("declared envelope decays too slowly to truncate".into()));
        }
    }

    // envelope sanity scan over the outer part of the truncated range
    let t0 = lo + 0.1 * (t_cut - lo);
    let n_scan = 64;
    for i in 0..=n_scan {
        let t = t0 + (t_cut - t0) * i as f64 / n_scan as f64;
        let v = h(t).abs();
        if !v.is_finite() {
            return Err(Error::NonFinite { at: t });
        }
        if v > 10.0 * envelope.bound_at(t) {
            return Err(Error::EnvelopeViolated { at: t });
        }
    }

    let est = match envelope {
        // square-root-exponential tails flatten out under u = sqrt(t),
        // which also absorbs any integrable t^{-1/2} behaviour at lo
        Decay::ExpSqrt { .. } => {
            let g = |u: f64| 2.0 * u * h(u * u);
            adaptive(&g, lo.max(0.0).sqrt(), t_cut.sqrt(), spec)?
        }
        _ => adaptive(h, lo, t_cut, spec)?,
    };
    let _total_err = est.error + envelope.tail_bound(t_cut);
    Ok(est.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn adaptive_constant() {
        let v = integrate_adaptive(&|_| 1.0, Interval::new(0.0, 1.0).unwrap(), &spec()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn adaptive_quarter_circle() {
        // closed-form antiderivative (t sqrt(1-t^2) + asin t)/2 gives pi/4
        let v = integrate_adaptive(
            &|t: f64| (1.0 - t * t).max(0.0).sqrt(),
            Interval::new(0.0, 1.0).unwrap(),
            &spec(),
        )
        .unwrap();
        assert!((v - PI / 4.0).abs() < 1e-8, "got {v}");
        // tighter request gives a tighter answer
        let v = integrate_adaptive(
            &|t: f64| (1.0 - t * t).max(0.0).sqrt(),
            Interval::new(0.0, 1.0).unwrap(),
            &QuadratureSpec::with_tol(1e-13, 1e-12),
        )
        .unwrap();
        assert!((v - PI / 4.0).abs() < 1e-11, "got {v}");
    }

    #[test]
    fn adaptive_polynomial() {
        let v = integrate_adaptive(&|t: f64| t * t, Interval::new(0.0, 2.0).unwrap(), &spec())
            .unwrap();
        assert!((v - 8.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn adaptive_rejects_nan() {
        let err = integrate_adaptive(
            &|t: f64| if t > 0.5 { f64::NAN } else { 1.0 },
            Interval::new(0.0, 1.0).unwrap(),
            &spec(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn left_singular_constant() {
        // ∫_0^1 t^{-1/2} dt = 2
        let v = integrate_left_sqrt_singular(&|_| 1.0, Interval::new(0.0, 1.0).unwrap(), &spec())
            .unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn left_singular_beta_identity() {
        // ∫_0^λ sqrt(t)/sqrt(λ-t) dt = λ π/2 for any λ > 0 (Beta(3/2,1/2));
        // here with the singular factor at the left end: h(t) = sqrt(λ - t)
        // reversed via symmetry. Test the stated form directly instead:
        // ∫_0^λ h(t) (t-0)^{-1/2} dt with h = sqrt(λ-t) ... equals λ π/2 too
        // by the same Beta identity.
        for lam in [0.5, 1.0, 2.5] {
            let v = integrate_left_sqrt_singular(
                &|t: f64| (lam - t).max(0.0).sqrt(),
                Interval::new(0.0, lam).unwrap(),
                &spec(),
            )
            .unwrap();
            assert!((v - lam * PI / 2.0).abs() < 1e-8, "lam={lam} got {v}");
        }
    }

    #[test]
    fn left_singular_linear_softening_value() {
        // h = 1/2 on [0, τ] with outer factor 1/π gives sqrt(τ)/π
        let tau = 0.7;
        let v = integrate_left_sqrt_singular(&|_| 0.5, Interval::new(0.0, tau).unwrap(), &spec())
            .unwrap()
            / PI;
        assert!((v - tau.sqrt() / PI).abs() < 1e-12);
    }

    #[test]
    fn right_singular_cases() {
        let v = integrate_right_sqrt_singular(&|_| 1.0, Interval::new(0.0, 1.0).unwrap(), &spec())
            .unwrap();
        assert!((v - 2.0).abs() < 1e-12);

        // ∫_0^λ (sqrt(τ)/π) (λ-τ)^{-1/2} dτ = λ/2
        let lam = 1.3;
        let v = integrate_right_sqrt_singular(
            &|t: f64| t.max(0.0).sqrt() / PI,
            Interval::new(0.0, lam).unwrap(),
            &spec(),
        )
        .unwrap();
        assert!((v - lam / 2.0).abs() < 1e-8);

        // ∫_0^1 τ (1-τ)^{-1/2} dτ = B(2, 1/2) = 4/3
        let v = integrate_right_sqrt_singular(&|t: f64| t, Interval::new(0.0, 1.0).unwrap(), &spec())
            .unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn singular_agrees_with_shifted_adaptive() {
        // compare against [lo+ε, hi] plus the analytic ε-correction for the
        // leading h(lo) t^{-1/2} part
        let h = |t: f64| (1.0 + t).cos();
        let eps = 1e-8;
        let direct = integrate_left_sqrt_singular(&h, Interval::new(0.0, 1.0).unwrap(), &spec())
            .unwrap();
        let shifted = integrate_adaptive(
            &|t: f64| h(t) / t.sqrt(),
            Interval::new(eps, 1.0).unwrap(),
            &spec(),
        )
        .unwrap();
        let correction = 2.0 * eps.sqrt() * h(0.0);
        assert!((direct - (shifted + correction)).abs() < 1e-6);
    }

    #[test]
    fn tail_exp_sqrt() {
        // ∫_0^∞ e^{-sqrt(t)} / (2 sqrt(t)) dt = 1 (substitute u = sqrt(t))
        let v = integrate_tail(
            &|t: f64| (-t.sqrt()).exp() / (2.0 * t.sqrt()),
            0.0,
            Decay::ExpSqrt { coeff: 10.0, rate: 1.0 },
            &spec(),
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn tail_plain_exponential_and_power() {
        let v = integrate_tail(
            &|t: f64| (-t).exp(),
            0.0,
            Decay::Exp { coeff: 1.0, rate: 1.0 },
            &spec(),
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-10);

        let v = integrate_tail(
            &|t: f64| t.powi(-2),
            1.0,
            Decay::Power { coeff: 1.0, exponent: 2.0 },
            &spec(),
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-8, "got {v}");
    }

    #[test]
    fn tail_envelope_violation_detected() {
        let err = integrate_tail(
            &|t: f64| 1.0 / (1.0 + t),
            0.0,
            Decay::Exp { coeff: 1.0, rate: 2.0 },
            &spec(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::EnvelopeViolated { .. }));
    }
}
