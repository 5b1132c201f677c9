use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::bridging::BridgeConfig;
use crate::generation::GenerationConfig;
use crate::http::Endpoint;
use crate::quality::QualityConfig;
use crate::scoring::ScoringConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("cannot read config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("config constraint violation: {}", .0.join("; "))]
    ConstraintViolation(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AmrAcquisition {
    pub method: String,
    pub components: BTreeMap<String, String>,
}

impl Default for AmrAcquisition {
    fn default() -> Self {
        AmrAcquisition { method: "stepwise_sota".into(), components: BTreeMap::new() }
    }
}

/// Which AMR-to-text service backs the round-trip gate.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// No gate.
    #[default]
    None,
    Identity,
    Empty,
    Http(Endpoint),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QualityControl {
    #[serde(flatten)]
    pub gate: QualityConfig,
    /// Skip and count records whose AMR does not parse. When false a parse
    /// failure aborts the run.
    pub syntactic_validation: bool,
    /// Run the round-trip gate (needs a generator).
    pub semantic_consistency: bool,
    pub generator: GeneratorSpec,
}

impl Default for QualityControl {
    fn default() -> Self {
        QualityControl {
            gate: QualityConfig::default(),
            syntactic_validation: true,
            semantic_consistency: true,
            generator: GeneratorSpec::None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compression {
    #[default]
    Gzip,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Caching {
    pub enabled: bool,
    pub cache_dir: PathBuf,
    pub compression: Compression,
}

impl Default for Caching {
    fn default() -> Self {
        Caching { enabled: false, cache_dir: PathBuf::from("./amr_cache"), compression: Compression::Gzip }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct BridgingSection {
    #[serde(flatten)]
    pub config: BridgeConfig,
    /// Replaces the shipped predicate relation table.
    pub relation_table: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct GenerationSection {
    #[serde(flatten)]
    pub config: GenerationConfig,
    /// Replaces the shipped question templates.
    pub templates: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricsSection {
    /// Replaces the shipped semantic-depth rule table.
    pub rule_table: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub amr_acquisition: AmrAcquisition,
    pub quality_control: QualityControl,
    pub caching: Caching,
    pub bridging: BridgingSection,
    pub scoring: ScoringConfig,
    pub generation: GenerationSection,
    pub metrics: MetricsSection,
}

/// `quality_control` and `caching` may sit inside `amr_acquisition` or at
/// the top level, not both.
fn hoist(mut root: Value) -> Result<Value, ConfigError> {
    let Value::Object(map) = &mut root else {
        return Err(ConfigError::Parse("top level must be a JSON object".into()));
    };
    let nested = match map.get_mut("amr_acquisition") {
        Some(Value::Object(acq)) => ["quality_control", "caching"]
            .into_iter()
            .filter_map(|k| acq.remove(k).map(|v| (k, v)))
            .collect::<Vec<_>>(),
        _ => Vec::new(),
    };
    for (key, value) in nested {
        if map.contains_key(key) {
            return Err(ConfigError::Parse(format!("`{key}` given both inside amr_acquisition and at top level")));
        }
        map.insert(key.to_string(), value);
    }
    Ok(root)
}

impl PipelineConfig {
    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        if text.trim().is_empty() {
            return Err(ConfigError::Parse("empty config".into()));
        }
        let raw: Value = serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        let config: PipelineConfig = serde_json::from_value(hoist(raw)?).map_err(|e| ConfigError::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Every constraint violation, itemised.
    pub fn violations(&self) -> Vec<String> {
        let mut out: Vec<String> = self.scoring.weights.violations().iter().map(|v| format!("scoring.weights: {v}")).collect();
        if let Some(d) = self.scoring.max_depth {
            if d == 0 {
                out.push("scoring.max_depth must be at least 1".into());
            }
        }
        if let Err(e) = self.bridging.config.validate() {
            out.push(format!("bridging: {e}"));
        }
        if let Err(e) = self.quality_control.gate.validate() {
            out.push(format!("quality_control: {e}"));
        }
        if self.generation.config.max_path_frames < 2 {
            out.push("generation.max_path_frames must be at least 2".into());
        }
        out
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::ConstraintViolation(v))
        }
    }
}

pub fn load_config(path: &Path) -> Result<PipelineConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => ConfigError::FileNotFound(path.to_path_buf()),
        _ => ConfigError::Io { path: path.to_path_buf(), source: e },
    })?;
    PipelineConfig::from_json_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const NESTED: &str = r#"{
      "amr_acquisition": {
        "method": "stepwise_sota",
        "components": {"ner": "spacy_transformer", "amr": "spring_enhanced"},
        "quality_control": {"bleu_threshold": 0.72, "syntactic_validation": true, "semantic_consistency": true},
        "caching": {"enabled": true, "cache_dir": "./amr_cache", "compression": "gzip"}
      }
    }"#;

    #[test]
    fn nested_sections_hoisted() {
        let c = PipelineConfig::from_json_str(NESTED).unwrap();
        assert_eq!(c.quality_control.gate.bleu_threshold, 0.72);
        assert!(c.caching.enabled);
        assert_eq!(c.caching.compression, Compression::Gzip);
        assert_eq!(c.amr_acquisition.components["amr"], "spring_enhanced");
        assert_eq!(c.quality_control.generator, GeneratorSpec::None);
    }

    #[test]
    fn rejects_duplicate_sections() {
        let text = r#"{"amr_acquisition": {"caching": {"enabled": true}}, "caching": {"enabled": false}}"#;
        assert!(matches!(PipelineConfig::from_json_str(text), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn empty_and_malformed() {
        assert!(matches!(PipelineConfig::from_json_str(""), Err(ConfigError::Parse(_))));
        assert!(matches!(PipelineConfig::from_json_str("[1]"), Err(ConfigError::Parse(_))));
        assert!(matches!(PipelineConfig::from_json_str("{\"caching\": 3}"), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn weight_violation_is_itemised() {
        let text = r#"{"scoring": {"weights": {"alpha": 0.7, "beta": 0.7, "gamma": 0.5, "delta": 0.1}}}"#;
        let Err(ConfigError::ConstraintViolation(v)) = PipelineConfig::from_json_str(text) else { panic!() };
        assert!(v.iter().any(|m| m.contains("separation")), "{v:?}");
    }

    #[test]
    fn generator_spec_forms() {
        let c = PipelineConfig::from_json_str(r#"{"quality_control": {"generator": {"type": "http", "url": "http://x", "retries": 0}}}"#).unwrap();
        let GeneratorSpec::Http(e) = c.quality_control.generator else { panic!() };
        assert_eq!((e.url.as_str(), e.retries, e.timeout_secs), ("http://x", 0, 30.0));
    }

    #[test]
    fn sections_take_defaults() {
        let c = PipelineConfig::from_json_str(r#"{"bridging": {"theta_role": 0.6}, "generation": {"quotas": {"causal": 2}}}"#).unwrap();
        assert_eq!(c.bridging.config.theta_role, 0.6);
        assert_eq!(c.bridging.config.min_strength, 0.3);
        assert!(c.bridging.config.predicate_relation_table.is_some());
        assert_eq!(c.generation.config.quotas[&crate::bridging::BridgeKind::Causal], 2);
        assert!(!c.caching.enabled);
    }

    #[test]
    fn missing_file() {
        assert!(matches!(load_config(Path::new("/nonexistent/x.json")), Err(ConfigError::FileNotFound(_))));
    }
}
