//! Structured configuration files for models and targets.
//!
//! A model or target file is TOML with a single `[model]` or `[target]`
//! table. Each map is either a catalog reference (`catalog = "linear"` plus
//! parameters) or symbolic-expression strings in the variable `t` (see
//! [`crate::model::expr`] for the grammar).

use serde::{Deserialize, Serialize};

use super::expr;
use super::{make_model, ModelOptions, PhaseFieldModel, Sigma, TargetCohesiveLaw};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub catalog: Option<String>,
    pub k: Option<f64>,
    pub delta: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    /// Index of the analytic ingredient pair for catalog entries carrying
    /// several (0-based; default 0).
    pub pair: Option<usize>,
    pub fhat: Option<String>,
    pub q: Option<String>,
    pub omega: Option<String>,
    pub phi_deg: Option<String>,
    pub khat: Option<String>,
    pub khat_prime: Option<String>,
    pub sigma: Option<f64>,
    pub omega_breakpoints: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSection {
    pub catalog: Option<String>,
    pub k: Option<f64>,
    pub delta: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub regime: Option<String>,
    pub g: Option<String>,
    pub g_prime: Option<String>,
    pub g_second: Option<String>,
    pub sigma: Option<f64>,
    pub g_inf: Option<f64>,
    pub s_frac: Option<f64>,
    pub breakpoints: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ModelFile {
    model: ModelSection,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TargetFile {
    target: TargetSection,
}

pub fn parse_model_section(text: &str) -> Result<ModelSection> {
    let f: ModelFile =
        toml::from_str(text).map_err(|e| Error::Parse(format!("model file: {e}")))?;
    Ok(f.model)
}

pub fn parse_target_section(text: &str) -> Result<TargetSection> {
    let f: TargetFile =
        toml::from_str(text).map_err(|e| Error::Parse(format!("target file: {e}")))?;
    Ok(f.target)
}

/// Build a model from an expression-based section (catalog references are
/// resolved by the caller, which owns the catalog).
pub fn model_from_section(sec: &ModelSection) -> Result<PhaseFieldModel> {
    let need = |field: &Option<String>, name: &str| -> Result<String> {
        field
            .clone()
            .ok_or_else(|| Error::Parse(format!("model file needs `{name}` (or a catalog reference)")))
    };
    let fhat = expr::compile(&need(&sec.fhat, "fhat")?)?;
    let q = expr::compile(&need(&sec.q, "q")?)?;
    let omega = expr::compile(&need(&sec.omega, "omega")?)?;
    let phi_deg = match &sec.phi_deg {
        Some(s) => expr::compile(s)?,
        None => super::default_phi_deg(),
    };
    let opts = ModelOptions {
        khat: sec.khat.as_deref().map(expr::compile).transpose()?,
        khat_prime: sec.khat_prime.as_deref().map(expr::compile).transpose()?,
        sigma: sec.sigma.map(|s| {
            if s.is_finite() {
                Sigma::Finite(s)
            } else {
                Sigma::Infinite
            }
        }),
        omega_breakpoints: sec.omega_breakpoints.clone().unwrap_or_default(),
        ..Default::default()
    };
    make_model(fhat, q, omega, phi_deg, opts)
}

/// Build a target law from an expression-based section.
pub fn target_from_section(sec: &TargetSection) -> Result<TargetCohesiveLaw> {
    let g = expr::compile(
        sec.g
            .as_deref()
            .ok_or_else(|| Error::Parse("target file needs `g`".into()))?,
    )?;
    let g_prime = expr::compile(
        sec.g_prime
            .as_deref()
            .ok_or_else(|| Error::Parse("target file needs `g_prime`".into()))?,
    )?;
    let g_second = sec.g_second.as_deref().map(expr::compile).transpose()?;
    let regime = match sec.regime.as_deref() {
        Some("linear") | None => {
            let sigma = sec.sigma.unwrap_or_else(|| g_prime(0.0));
            super::Regime::Linear { sigma }
        }
        Some("superlinear") => super::Regime::Superlinear,
        Some(other) => {
            return Err(Error::Parse(format!(
                "regime must be `linear` or `superlinear`, got `{other}`"
            )))
        }
    };
    let g_inf = match sec.g_inf {
        Some(v) => v,
        None => {
            // saturate numerically
            let mut s = 1.0;
            let mut prev = g(s);
            loop {
                s *= 2.0;
                let v = g(s);
                if (v - prev).abs() <= 1e-12 * v.abs().max(1.0) || s > 1e12 {
                    break v;
                }
                prev = v;
            }
        }
    };
    let s_frac = sec.s_frac.unwrap_or(f64::INFINITY);
    Ok(TargetCohesiveLaw {
        g0: g,
        g0_prime: g_prime,
        g0_second: g_second,
        g0_prime_inv: None,
        regime,
        g_inf,
        s_frac0: s_frac,
        breakpoints: sec.breakpoints.clone().unwrap_or_default(),
        decay_envelope: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_round_trip_through_expressions() {
        let text = r#"
[model]
fhat = "t^2"
q = "t^2"
omega = "t^2"
"#;
        let sec = parse_model_section(text).unwrap();
        let m = model_from_section(&sec).unwrap();
        assert!(((m.khat)(0.5) - 0.25).abs() < 1e-12);
        assert!((m.psi1 - 0.5).abs() < 1e-9);
    }

    #[test]
    fn target_parses_with_defaults() {
        let text = r#"
[target]
regime = "linear"
g = "t - t^2/2"
g_prime = "1 - t"
g_second = "-1"
g_inf = 0.5
s_frac = 1.0
"#;
        let sec = parse_target_section(text).unwrap();
        let t = target_from_section(&sec).unwrap();
        assert!(((t.g0)(0.6) - 0.42).abs() < 1e-12);
        match t.regime {
            super::super::Regime::Linear { sigma } => assert_eq!(sigma, 1.0),
            _ => panic!(),
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = "[model]\nbogus = 1.0\n";
        assert!(parse_model_section(text).is_err());
    }
}
