//! Experiment orchestration for the numerical laboratory: reproduces every
//! checkable distributional and kernel-level claim at desk scale and emits
//! machine-readable CSV/JSON results.

pub mod commands;
pub mod config;

use anyhow::{Context, Result};
use std::path::{Path, PathBuf};

/// Output directory resolution: AIRYLAB_OUT_DIR env var wins, then
/// `output.path` from the config, then the working directory.
pub fn output_dir(cfg: &config::ExperimentConfig) -> PathBuf {
    if let Ok(dir) = std::env::var("AIRYLAB_OUT_DIR") {
        return PathBuf::from(dir);
    }
    cfg.output
        .path
        .as_ref()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating output dir {}", dir.display()))?;
    let path = dir.join(name);
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

pub fn csv_from_rows(header: &str, rows: impl Iterator<Item = String>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}
