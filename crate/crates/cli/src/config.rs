//! Experiment configuration: one JSON document, with dotted-path command
//! line overrides (`--model.t 0.25` rewrites `config.model.t`).

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub t: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub p: usize,
    pub n: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            t: 0.25,
            x: vec![],
            y: vec![],
            p: 4,
            n: 4,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingConfig {
    pub n_samples: usize,
    pub seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            n_samples: 10_000,
            seed: 20080517,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    pub nodes_per_block: usize,
    pub truncation: f64,
    pub wedge_panels: usize,
    pub circle_nodes: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            nodes_per_block: 32,
            truncation: 14.0,
            wedge_panels: 24,
            circle_nodes: 256,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ThresholdConfig {
    /// Single-time threshold sweep.
    pub xi_grid: Option<Vec<f64>>,
    /// Multi-time problem: one time per threshold.
    pub times: Option<Vec<f64>>,
    pub xis: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub path: Option<String>,
    pub format: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            path: None,
            format: "csv".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    pub sampling: SamplingConfig,
    pub quadrature: QuadratureConfig,
    pub thresholds: ThresholdConfig,
    pub output: OutputConfig,
    /// Kernel selector for gap-prob: "limit" or "finite".
    pub kernel: Option<String>,
    /// Sizes for convergence sweeps (check-thm2, check-thm4).
    pub p_sweep: Option<Vec<usize>>,
}

impl ExperimentConfig {
    /// Loads from an optional JSON file, then applies dotted-path overrides.
    pub fn load(path: Option<&Path>, overrides: &[(String, String)]) -> Result<Self> {
        let mut value: serde_json::Value = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading config {}", p.display()))?;
                serde_json::from_str(&text).with_context(|| "parsing config JSON")?
            }
            None => serde_json::json!({}),
        };
        for (key, raw) in overrides {
            apply_override(&mut value, key, raw)?;
        }
        let config: ExperimentConfig =
            serde_json::from_value(value).with_context(|| "config schema validation")?;
        config.validate()?;
        Ok(config)
    }

    /// Re-checks the cross-field constraints the schema cannot express.
    pub fn validate(&self) -> Result<()> {
        if !(self.model.t > 0.0 && self.model.t < 1.0) {
            bail!("model.t = {} must lie in (0, 1)", self.model.t);
        }
        for &xi in &self.model.x {
            for &yj in &self.model.y {
                if xi <= yj {
                    bail!("model.x entries must exceed every model.y entry ({xi} <= {yj})");
                }
            }
        }
        if self.model.n < 1 || self.model.n > self.model.p {
            bail!(
                "model.n = {} must satisfy 1 <= n <= p = {}",
                self.model.n,
                self.model.p
            );
        }
        if let (Some(times), Some(xis)) = (&self.thresholds.times, &self.thresholds.xis) {
            if times.len() != xis.len() {
                bail!("thresholds.times and thresholds.xis must have equal length");
            }
        }
        Ok(())
    }
}

/// Sets `value[a][b]... = parsed(raw)` for the dotted path "a.b...". Values
/// parse as JSON first (numbers, arrays, booleans), falling back to string.
fn apply_override(value: &mut serde_json::Value, key: &str, raw: &str) -> Result<()> {
    let parsed: serde_json::Value = match serde_json::from_str(raw) {
        Ok(v) => v,
        Err(_) => serde_json::Value::String(raw.to_string()),
    };
    let mut cursor = value;
    let parts: Vec<&str> = key.split('.').collect();
    for part in &parts[..parts.len() - 1] {
        if !cursor.is_object() {
            bail!("override path {key}: {part} is not an object");
        }
        cursor = cursor
            .as_object_mut()
            .unwrap()
            .entry(part.to_string())
            .or_insert_with(|| serde_json::json!({}));
    }
    match cursor.as_object_mut() {
        Some(map) => {
            map.insert(parts[parts.len() - 1].to_string(), parsed);
            Ok(())
        }
        None => bail!("override path {key} does not terminate in an object"),
    }
}

/// Splits argv into (clap-visible args, dotted-path overrides). Any flag of
/// the form `--a.b <value>` is treated as an override.
pub fn extract_dotted_overrides(args: Vec<String>) -> (Vec<String>, Vec<(String, String)>) {
    let mut plain = Vec::new();
    let mut overrides = Vec::new();
    let mut iter = args.into_iter().peekable();
    while let Some(arg) = iter.next() {
        if let Some(stripped) = arg.strip_prefix("--") {
            if stripped.contains('.') && !stripped.starts_with('.') {
                if let Some((k, v)) = stripped.split_once('=') {
                    overrides.push((k.to_string(), v.to_string()));
                    continue;
                }
                if let Some(value) = iter.next() {
                    overrides.push((stripped.to_string(), value));
                    continue;
                }
            }
        }
        plain.push(arg);
    }
    (plain, overrides)
}
