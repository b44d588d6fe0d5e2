//! CSV formatting and run manifests.
//!
//! CSV cells carry 17 significant digits in scientific notation, so files
//! round-trip exactly and identical invocations are byte-identical.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use cohesive::Error;

pub fn csv_cell(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub fn csv_line(cells: &[f64]) -> String {
    let mut line = cells.iter().map(|&x| csv_cell(x)).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

/// Reproducibility record written next to command outputs: the resolved
/// configuration, content hashes of the inputs, and every file produced.
#[derive(Serialize)]
pub struct Manifest {
    pub command: String,
    pub tool_version: String,
    pub resolved_config: serde_json::Value,
    pub input_hashes: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub timing_s: f64,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub diagnostics: serde_json::Value,
}

impl Manifest {
    pub fn new(
        command: &str,
        resolved_config: serde_json::Value,
        input_hashes: &BTreeMap<String, String>,
        outputs: Vec<String>,
        start: Instant,
    ) -> Self {
        Self {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            resolved_config,
            input_hashes: input_hashes.clone(),
            outputs,
            timing_s: start.elapsed().as_secs_f64(),
            diagnostics: serde_json::Value::Null,
        }
    }

    pub fn with_diagnostics(mut self, diagnostics: serde_json::Value) -> Self {
        self.diagnostics = diagnostics;
        self
    }

    pub fn write(&self, path: &Path) -> Result<(), Error> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, text)
            .map_err(|e| Error::Parse(format!("write {}: {e}", path.display())))
    }
}
