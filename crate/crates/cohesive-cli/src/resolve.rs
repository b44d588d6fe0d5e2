//! Resolution of `catalog:NAME` references and TOML files into models and
//! target laws, with content hashes for the run manifest.

use std::collections::BTreeMap;

use clap::Args;
use sha2::{Digest, Sha256};

use cohesive::catalog::{self, ParamSpec};
use cohesive::model::config;
use cohesive::model::{PhaseFieldModel, Regime, TargetCohesiveLaw};
use cohesive::Error;

/// Catalog parameters exposed as flags; unused ones are ignored by entries
/// that do not take them.
#[derive(Args, Clone, Debug)]
pub struct CatalogParams {
    /// Softening rate / toughness scale.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// Regularization parameter of the exponential law.
    #[arg(long, default_value_t = 1e-3)]
    pub delta: f64,
    /// Bilinear first kink amplitude.
    #[arg(long, default_value_t = 0.25)]
    pub a: f64,
    /// Bilinear saturation amplitude.
    #[arg(long, default_value_t = 0.75)]
    pub b: f64,
    /// Bilinear initial slope drop rate.
    #[arg(long, default_value_t = 2.0)]
    pub k1: f64,
    /// Bilinear second slope drop rate.
    #[arg(long, default_value_t = 1.0)]
    pub k2: f64,
    /// Analytic pair index for catalog models carrying several.
    #[arg(long, default_value_t = 0)]
    pub pair: usize,
}

impl CatalogParams {
    pub fn to_spec(&self) -> ParamSpec {
        ParamSpec {
            k: self.k,
            delta: self.delta,
            a: self.a,
            b: self.b,
            k1: self.k1,
            k2: self.k2,
        }
    }
}

fn sha256_hex(data: &str) -> String {
    let mut h = Sha256::new();
    h.update(data.as_bytes());
    hex::encode(h.finalize())
}

pub struct ModelSpec {
    pub model: PhaseFieldModel,
    pub resolved: serde_json::Value,
    pub hashes: BTreeMap<String, String>,
}

impl ModelSpec {
    pub fn resolve(arg: &str, params: &CatalogParams) -> Result<Self, Error> {
        let mut hashes = BTreeMap::new();
        if let Some(name) = arg.strip_prefix("catalog:") {
            let entry = catalog::get(name, &params.to_spec())?;
            if entry.models.is_empty() {
                return Err(Error::BadParameters(format!(
                    "catalog entry `{name}` carries a target only; no forward model"
                )));
            }
            if params.pair >= entry.models.len() {
                return Err(Error::BadParameters(format!(
                    "entry `{name}` has {} pairs; --pair {} is out of range",
                    entry.models.len(),
                    params.pair
                )));
            }
            let resolved = serde_json::json!({
                "catalog": name,
                "pair": params.pair,
                "pair_label": entry.models[params.pair].label,
                "k": params.k, "delta": params.delta,
                "a": params.a, "b": params.b, "k1": params.k1, "k2": params.k2,
            });
            hashes.insert("model".into(), sha256_hex(&resolved.to_string()));
            let model = entry.models.into_iter().nth(params.pair).unwrap().model;
            Ok(Self { model, resolved, hashes })
        } else {
            let text = std::fs::read_to_string(arg)
                .map_err(|e| Error::Parse(format!("read {arg}: {e}")))?;
            hashes.insert(arg.to_string(), sha256_hex(&text));
            let sec = config::parse_model_section(&text)?;
            if let Some(name) = &sec.catalog {
                let p = ParamSpec {
                    k: sec.k.unwrap_or(1.0),
                    delta: sec.delta.unwrap_or(1e-3),
                    a: sec.a.unwrap_or(0.25),
                    b: sec.b.unwrap_or(0.75),
                    k1: sec.k1.unwrap_or(2.0),
                    k2: sec.k2.unwrap_or(1.0),
                };
                let entry = catalog::get(name, &p)?;
                let pair = sec.pair.unwrap_or(0);
                if pair >= entry.models.len() {
                    return Err(Error::BadParameters(format!(
                        "entry `{name}` has {} pairs; pair {pair} is out of range",
                        entry.models.len()
                    )));
                }
                let resolved = serde_json::to_value(&sec).unwrap();
                let model = entry.models.into_iter().nth(pair).unwrap().model;
                Ok(Self { model, resolved, hashes })
            } else {
                let model = config::model_from_section(&sec)?;
                let resolved = serde_json::to_value(&sec).unwrap();
                Ok(Self { model, resolved, hashes })
            }
        }
    }
}

pub struct TargetSpec {
    pub target: TargetCohesiveLaw,
    pub resolved: serde_json::Value,
    pub hashes: BTreeMap<String, String>,
}

impl TargetSpec {
    pub fn resolve(arg: &str, params: &CatalogParams, regime: &str) -> Result<Self, Error> {
        let mut hashes = BTreeMap::new();
        let (target, resolved) = if let Some(name) = arg.strip_prefix("catalog:") {
            let entry = catalog::get(name, &params.to_spec())?;
            let resolved = serde_json::json!({
                "catalog": name,
                "k": params.k, "delta": params.delta,
                "a": params.a, "b": params.b, "k1": params.k1, "k2": params.k2,
            });
            hashes.insert("target".into(), sha256_hex(&resolved.to_string()));
            (entry.target, resolved)
        } else {
            let text = std::fs::read_to_string(arg)
                .map_err(|e| Error::Parse(format!("read {arg}: {e}")))?;
            hashes.insert(arg.to_string(), sha256_hex(&text));
            let sec = config::parse_target_section(&text)?;
            if let Some(name) = &sec.catalog {
                let p = ParamSpec {
                    k: sec.k.unwrap_or(1.0),
                    delta: sec.delta.unwrap_or(1e-3),
                    a: sec.a.unwrap_or(0.25),
                    b: sec.b.unwrap_or(0.75),
                    k1: sec.k1.unwrap_or(2.0),
                    k2: sec.k2.unwrap_or(1.0),
                };
                let entry = catalog::get(name, &p)?;
                (entry.target, serde_json::to_value(&sec).unwrap())
            } else {
                let target = config::target_from_section(&sec)?;
                (target, serde_json::to_value(&sec).unwrap())
            }
        };
        // the declared regime must agree with the target
        let declared_super = regime == "superlinear";
        let is_super = matches!(target.regime, Regime::Superlinear);
        if declared_super != is_super {
            return Err(Error::BadParameters(format!(
                "--regime {regime} disagrees with the target's {} regime",
                if is_super { "superlinear" } else { "linear" }
            )));
        }
        Ok(Self { target, resolved, hashes })
    }
}
