//! Sentence BLEU and the round-trip (text -> AMR -> text) quality gate.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::amr::{serialize_penman, AmrGraph};
use crate::http::Endpoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QualityError {
    #[error("reference text is empty")]
    EmptyReference,
    #[error("invalid quality config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("generator unavailable: {0}")]
    Unavailable(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QualityConfig {
    /// Items are accepted when BLEU is strictly above this.
    pub bleu_threshold: f64,
    pub max_ngram: usize,
    /// Stand-in precision for n-gram orders with no match.
    pub smoothing_epsilon: f64,
    /// Leave generator failures out of the retention denominator.
    pub exclude_failed: bool,
    pub max_in_flight: usize,
}

impl Default for QualityConfig {
    fn default() -> Self {
        QualityConfig { bleu_threshold: 0.72, max_ngram: 4, smoothing_epsilon: 1e-9, exclude_failed: false, max_in_flight: 4 }
    }
}

impl QualityConfig {
    pub fn validate(&self) -> Result<(), QualityError> {
        if !(self.bleu_threshold > 0.0 && self.bleu_threshold < 1.0) {
            return Err(QualityError::InvalidConfig(format!("bleu_threshold {} outside (0, 1)", self.bleu_threshold)));
        }
        if self.max_ngram == 0 {
            return Err(QualityError::InvalidConfig("max_ngram must be at least 1".into()));
        }
        if !(self.smoothing_epsilon > 0.0) {
            return Err(QualityError::InvalidConfig("smoothing_epsilon must be positive".into()));
        }
        Ok(())
    }
}

/// Lowercases, then splits into alphanumeric runs and single punctuation
/// characters.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut word = String::new();
    for c in text.chars().flat_map(char::to_lowercase) {
        if c.is_alphanumeric() {
            word.push(c);
            continue;
        }
        if !word.is_empty() {
            out.push(std::mem::take(&mut word));
        }
        if !c.is_whitespace() {
            out.push(c.to_string());
        }
    }
    if !word.is_empty() {
        out.push(word);
    }
    out
}

fn ngram_counts<S: AsRef<str>>(tokens: &[S], n: usize) -> HashMap<Vec<&str>, usize> {
    let mut counts = HashMap::new();
    for w in tokens.windows(n) {
        *counts.entry(w.iter().map(AsRef::as_ref).collect()).or_insert(0) += 1;
    }
    counts
}

/// Clipped n-gram precisions for n = 1..=min(max_ngram, |candidate|),
/// combined by geometric mean and scaled by the brevity penalty.
pub fn bleu<S: AsRef<str>>(reference: &[S], candidate: &[S], config: &QualityConfig) -> Result<f64, QualityError> {
    if reference.is_empty() {
        return Err(QualityError::EmptyReference);
    }
    if candidate.is_empty() {
        return Ok(0.0);
    }
    let orders = config.max_ngram.min(candidate.len());
    let mut log_sum = 0.0;
    for n in 1..=orders {
        let cand = ngram_counts(candidate, n);
        let refc = ngram_counts(reference, n);
        let matched: usize = cand.iter().map(|(g, &c)| c.min(refc.get(g).copied().unwrap_or(0))).sum();
        let total = candidate.len() - n + 1;
        let p = if matched == 0 { config.smoothing_epsilon } else { matched as f64 / total as f64 };
        log_sum += p.ln();
    }
    let (c, r) = (candidate.len() as f64, reference.len() as f64);
    let bp = if c > r { 1.0 } else { (1.0 - r / c).exp() };
    Ok((bp * (log_sum / orders as f64).exp()).clamp(0.0, 1.0))
}

pub fn bleu_text(reference: &str, candidate: &str, config: &QualityConfig) -> Result<f64, QualityError> {
    bleu(&tokenize(reference), &tokenize(candidate), config)
}

/// AMR-to-text service.
pub trait TextGenerator: Send + Sync {
    fn generate(&self, graph: &AmrGraph) -> Result<String, GeneratorError>;

    fn name(&self) -> &str;
}

/// Returns the graph's own source text.
pub struct IdentityGenerator;

impl TextGenerator for IdentityGenerator {
    fn generate(&self, graph: &AmrGraph) -> Result<String, GeneratorError> {
        Ok(graph.source_text().to_string())
    }

    fn name(&self) -> &str {
        "identity"
    }
}

pub struct EmptyGenerator;

impl TextGenerator for EmptyGenerator {
    fn generate(&self, _: &AmrGraph) -> Result<String, GeneratorError> {
        Ok(String::new())
    }

    fn name(&self) -> &str {
        "empty"
    }
}

/// Wraps a closure; handy for stubs.
pub struct FnGenerator<F>(pub F);

impl<F> TextGenerator for FnGenerator<F>
where
    F: Fn(&AmrGraph) -> Result<String, GeneratorError> + Send + Sync,
{
    fn generate(&self, graph: &AmrGraph) -> Result<String, GeneratorError> {
        (self.0)(graph)
    }

    fn name(&self) -> &str {
        "fn"
    }
}

/// POSTs `{"graph": <penman>}` and reads `{"text": ...}`.
pub struct HttpGenerator {
    pub endpoint: Endpoint,
}

impl TextGenerator for HttpGenerator {
    fn generate(&self, graph: &AmrGraph) -> Result<String, GeneratorError> {
        self.endpoint
            .post_for_text(&json!({ "graph": serialize_penman(graph) }))
            .map_err(GeneratorError::Unavailable)
    }

    fn name(&self) -> &str {
        "http"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundTripItem {
    pub graph_id: String,
    pub original: String,
    pub regenerated: Option<String>,
    pub bleu: f64,
    pub accepted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundTripReport {
    pub generator: String,
    pub threshold: f64,
    pub tokenizer: String,
    pub items: Vec<RoundTripItem>,
    pub total: usize,
    pub accepted: usize,
    pub failed: usize,
    pub retention: f64,
}

impl RoundTripReport {
    pub fn accepted_ids(&self) -> impl Iterator<Item = &str> {
        self.items.iter().filter(|i| i.accepted).map(|i| i.graph_id.as_str())
    }
}

fn retention(accepted: usize, total: usize, failed: usize, exclude_failed: bool) -> f64 {
    let denom = if exclude_failed { total - failed } else { total };
    if denom == 0 {
        0.0
    } else {
        accepted as f64 / denom as f64
    }
}

fn score_item(text: &str, graph: &AmrGraph, generator: &dyn TextGenerator, config: &QualityConfig) -> RoundTripItem {
    let graph_id = graph.graph_id().to_string();
    match generator.generate(graph) {
        Ok(regen) => {
            let (score, error) = match bleu_text(text, &regen, config) {
                Ok(s) => (s, None),
                Err(e) => (0.0, Some(e.to_string())),
            };
            RoundTripItem {
                graph_id,
                original: text.to_string(),
                regenerated: Some(regen),
                bleu: score,
                accepted: error.is_none() && score > config.bleu_threshold,
                error,
            }
        }
        Err(e) => {
            log::warn!("generator failed on {graph_id}: {e}");
            RoundTripItem { graph_id, original: text.to_string(), regenerated: None, bleu: 0.0, accepted: false, error: Some(e.to_string()) }
        }
    }
}

/// Regenerates each item's text from its graph and keeps it when BLEU
/// against the original clears the threshold. Items are scored
/// concurrently with at most `max_in_flight` outstanding calls; the report
/// keeps input order.
pub fn round_trip_gate(
    items: &[(&str, &AmrGraph)],
    generator: &dyn TextGenerator,
    config: &QualityConfig,
) -> Result<RoundTripReport, QualityError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.max_in_flight.max(1))
        .build()
        .map_err(|e| QualityError::InvalidConfig(e.to_string()))?;
    let results: Vec<RoundTripItem> =
        pool.install(|| items.par_iter().map(|(text, g)| score_item(text, g, generator, config)).collect());
    Ok(rescore(results, generator.name(), config))
}

/// Re-applies a threshold to already scored items.
pub fn rescore(mut items: Vec<RoundTripItem>, generator: &str, config: &QualityConfig) -> RoundTripReport {
    for item in &mut items {
        item.accepted = item.error.is_none() && item.bleu > config.bleu_threshold;
    }
    let total = items.len();
    let accepted = items.iter().filter(|i| i.accepted).count();
    let failed = items.iter().filter(|i| i.regenerated.is_none()).count();
    RoundTripReport {
        generator: generator.to_string(),
        threshold: config.bleu_threshold,
        tokenizer: "lowercase; alphanumeric runs; punctuation split".into(),
        items,
        total,
        accepted,
        failed,
        retention: retention(accepted, total, failed, config.exclude_failed),
    }
}
