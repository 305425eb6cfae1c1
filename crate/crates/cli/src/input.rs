//! Network and APD step files.
//!
//! Network files are TOML (`.toml`) or JSON (any other extension). Schema:
//! `schema/network.schema.json`.
//!
//! ```toml
//! input_signal = 100          # linear, or { db = 20.0 }
//! input_noise = 1
//!
//! [[stages]]
//! gain_db = 10                # exactly one of gain / gain_db
//! external_noise = 10         # default 0
//!
//! [[stages]]
//! gain = 10
//! internal_noise = 0          # default 0
//! external_noise = 10
//! ```

use std::fs;
use std::path::Path;

use cascade_noise::{db_to_linear, validate, Network, Stage};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A power given either linearly or in decibels relative to one unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Level {
    Linear(f64),
    Db { db: f64 },
}

impl Level {
    pub fn linear(self) -> f64 {
        match self {
            Level::Linear(v) => v,
            Level::Db { db } => db_to_linear(db),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gain: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gain_db: Option<f64>,
    #[serde(default)]
    pub internal_noise: f64,
    #[serde(default)]
    pub external_noise: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub input_signal: Level,
    pub input_noise: Level,
    #[serde(default)]
    pub stages: Option<Vec<StageEntry>>,
}

impl NetworkFile {
    /// Linear echo of an in-memory network.
    pub fn from_network(net: &Network) -> Self {
        Self {
            input_signal: Level::Linear(net.input_signal.0),
            input_noise: Level::Linear(net.input_noise.0),
            stages: Some(
                net.stages
                    .iter()
                    .map(|s| StageEntry {
                        gain: Some(s.power_gain),
                        gain_db: None,
                        internal_noise: s.internal_noise.0,
                        external_noise: s.external_noise.0,
                    })
                    .collect(),
            ),
        }
    }

    /// Converts dB fields and validates the result.
    pub fn into_network(self) -> Result<Network, CliError> {
        let entries = self
            .stages
            .ok_or_else(|| CliError::Input("stages: required, n ≥ 1".into()))?;
        let mut stages = Vec::with_capacity(entries.len());
        for (i, e) in entries.into_iter().enumerate() {
            let gain = match (e.gain, e.gain_db) {
                (Some(g), None) => g,
                (None, Some(db)) => db_to_linear(db),
                _ => {
                    return Err(CliError::Input(format!(
                        "stage {}: exactly one of gain/gain_db must be set",
                        i + 1
                    )))
                }
            };
            stages.push(Stage::new(gain, e.internal_noise, e.external_noise));
        }
        let net = Network::new_unchecked(self.input_signal.linear(), self.input_noise.linear(), stages);
        let violations = validate(&net);
        if !violations.is_empty() {
            let list: Vec<_> = violations.iter().map(ToString::to_string).collect();
            return Err(CliError::Input(format!("invalid network: {}", list.join("; "))));
        }
        Ok(net)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn is_toml(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml"))
}

/// Parses network file text. JSON documents produced by `analyze --format
/// json` are accepted too; their `network` object is used.
pub fn parse_network(text: &str, toml_syntax: bool) -> Result<Network, CliError> {
    let file: NetworkFile = if toml_syntax {
        toml::from_str(text).map_err(|e| CliError::Input(format!("parse error: {e}")))?
    } else {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("parse error: {e}")))?;
        let doc = match value.get("network") {
            Some(inner) if value.get("totals").is_some() => inner.clone(),
            _ => value,
        };
        serde_json::from_value(doc).map_err(|e| CliError::Input(format!("parse error: {e}")))?
    };
    file.into_network()
}

pub fn load_network(path: &Path) -> Result<Network, CliError> {
    parse_network(&read(path)?, is_toml(path))
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepsFile {
    steps: Vec<f64>,
}

/// Ionization probabilities from a file: `steps = [...]` in TOML or JSON,
/// otherwise numbers separated by whitespace or commas, `#` comments
/// allowed.
pub fn load_steps(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = read(path)?;
    let ctx = |msg: String| CliError::Input(format!("{}: {msg}", path.display()));
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("toml") => toml::from_str::<StepsFile>(&text)
            .map(|f| f.steps)
            .map_err(|e| ctx(format!("parse error: {e}"))),
        Some(e) if e.eq_ignore_ascii_case("json") => serde_json::from_str::<StepsFile>(&text)
            .map(|f| f.steps)
            .map_err(|e| ctx(format!("parse error: {e}"))),
        _ => {
            let mut steps = Vec::new();
            for (n, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("");
                for tok in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
                    let p = tok
                        .parse()
                        .map_err(|_| ctx(format!("line {}: not a number: {tok:?}", n + 1)))?;
                    steps.push(p);
                }
            }
            Ok(steps)
        }
    }
}
