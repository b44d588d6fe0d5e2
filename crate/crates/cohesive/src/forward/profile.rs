//! Optimal transition profiles of the reduced problem.

use super::{equilibrium_stress, jump_threshold};
use crate::error::{Error, Result};
use crate::model::PhaseFieldModel;
use crate::numerics::{quad, QuadratureSpec};


#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regularity {
    /// Absolutely continuous profile, `w(m) = s/2`.
    W11,
    /// Profile with a jump concentrated at `t = m`.
    SbvJump,
}

/// The minimizer `w` of the relaxed profile functional on `[2m-1, 1]`:
/// strictly increasing, odd symmetric about `t = m`, with the absolutely
/// continuous part sampled on `[m, 1]` and any jump sitting at `t = m`.
#[derive(Clone, Debug)]
pub struct OptimalProfile {
    pub m: f64,
    pub s: f64,
    /// Euler–Lagrange stress of the profile.
    pub lambda: f64,
    pub regularity: Regularity,
    /// Sample locations on `[m, 1]`.
    pub t_samples: Vec<f64>,
    /// Profile values at `t_samples`; `w_samples[0] = w(m⁺)`.
    pub w_samples: Vec<f64>,
    /// Jump amplitude at `t = m` (`0` in the smooth case).
    pub jump: f64,
}

impl OptimalProfile {
    /// Reconstruct the full profile on `[2m-1, 1]` by odd symmetry:
    /// `w(m - r) = s - w(m + r)`.
    pub fn full_profile(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.t_samples.len();
        let mut t = Vec::with_capacity(2 * n - 1);
        let mut w = Vec::with_capacity(2 * n - 1);
        for i in (1..n).rev() {
            t.push(2.0 * self.m - self.t_samples[i]);
            w.push(self.s - self.w_samples[i]);
        }
        for i in 0..n {
            t.push(self.t_samples[i]);
            w.push(self.w_samples[i]);
        }
        (t, w)
    }

    /// Total variation over `[2m-1, 1]` including the jump.
    pub fn total_variation(&self) -> f64 {
        let smooth: f64 = 2.0 * (self.w_samples.last().unwrap() - self.w_samples[0]);
        smooth + self.jump
    }
}

/// Compute the optimal profile for minimum phase-field value `m` and
/// opening `s`, sampled at `n` points clustered toward the near-singular
/// end `t = m`.
pub fn optimal_profile(
    model: &PhaseFieldModel,
    m: f64,
    s: f64,
    n_samples: usize,
) -> Result<OptimalProfile> {
    if !(0.0 < m && m < 1.0) || s <= 0.0 {
        return Err(Error::Domain(format!("need m in (0,1) and s > 0, got m={m}, s={s}")));
    }
    let n = n_samples.max(8);
    let phi_m = jump_threshold(model, m)?;
    let (lambda, jump, w_at_m, regularity) = if s <= phi_m {
        (equilibrium_stress(model, m, s)?, 0.0, 0.5 * s, Regularity::W11)
    } else {
        (
            model.khat_sqrt(m),
            s - phi_m,
            s - 0.5 * phi_m,
            Regularity::SbvJump,
        )
    };

    // slope integrand in u-space (t = m + u²), stabilized near u = 0 the
    // same way the energy integrals are
    let khat_m = (model.khat)(m);
    let gap = (khat_m - lambda * lambda).max(0.0);
    let kp_m = (model.khat_prime)(m).max(1e-300);
    let u_switch2 = 1e-7 * m.max(1e-3);
    let slope_u = |u: f64| -> f64 {
        let u2 = u * u;
        let t = m + u2;
        let diff = if u2 < u_switch2 {
            kp_m * u2
        } else {
            ((model.khat)(t) - khat_m).max(kp_m * u2 * 1e-8)
        };
        let q = diff + gap;
        let om = (model.omega)(1.0 - t).max(0.0);
        let kt = (model.khat)(t);
        2.0 * u * lambda * (om / (kt * q)).sqrt()
    };

    // cumulative opening of the smooth part, cell by cell in u
    let spec = QuadratureSpec::with_tol(1e-12, 1e-10);
    let u_max = (1.0 - m).sqrt();
    let mut t_samples = Vec::with_capacity(n);
    let mut w_samples = Vec::with_capacity(n);
    t_samples.push(m);
    w_samples.push(w_at_m);
    let mut acc = w_at_m;
    for i in 1..n {
        let u_lo = u_max * (i - 1) as f64 / (n - 1) as f64;
        let u_hi = u_max * i as f64 / (n - 1) as f64;
        acc += quad::adaptive_with_flag(&slope_u, u_lo, u_hi, &spec)?.0.value;
        t_samples.push(m + u_hi * u_hi);
        w_samples.push(acc);
    }
    // pin the boundary value exactly; quadrature noise stays in the interior
    let theoretical_end = s;
    let drift = theoretical_end - acc;
    let len = w_samples.len();
    if drift.abs() < 1e-6 * s.max(1.0) {
        for (i, w) in w_samples.iter_mut().enumerate() {
            *w += drift * i as f64 / (len - 1) as f64;
        }
    }

    Ok(OptimalProfile {
        m,
        s,
        lambda,
        regularity,
        t_samples,
        w_samples,
        jump,
    })
}
