//! Bridge strength: a weighted combination of type, entity overlap,
//! structural complexity and document diversity, normalised by the weight
//! sum so the total always lies in [0, 1].

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amr::AmrGraph;
use crate::bridging::{role_distance, Bridge, BridgeKind};
use crate::corpus::SemanticCorpus;
use crate::frames::{EntityIndex, SemanticFrame};

/// Slack for comparisons of decimal weights (0.7 - 0.5 is not exactly 0.2).
const WEIGHT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScoringError {
    #[error("max_depth {max_depth} is below an observed frame depth of {observed}")]
    InvalidMaxDepth { max_depth: usize, observed: usize },
    #[error("weights violate constraints: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidWeights(Vec<WeightViolation>),
    #[error("unknown frame `{0}`")]
    UnknownFrame(String),
    #[error("grid search needs at least 3 rated items, got {0}")]
    InsufficientData(usize),
    #[error("grid search candidate list is empty")]
    EmptyGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrengthWeights {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl Default for StrengthWeights {
    fn default() -> Self {
        StrengthWeights { alpha: 0.9, beta: 0.6, gamma: 0.3, delta: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum WeightViolation {
    /// alpha >= beta >= gamma does not hold.
    Precedence { alpha: f64, beta: f64, gamma: f64 },
    /// A weight is below 0.1.
    MinimumContribution { weight: String, value: f64 },
    /// Adjacent weights are closer than 0.2.
    Separation { pair: String, gap: f64 },
}

impl fmt::Display for WeightViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightViolation::Precedence { alpha, beta, gamma } => {
                write!(f, "precedence: need alpha >= beta >= gamma, got {alpha} / {beta} / {gamma}")
            }
            WeightViolation::MinimumContribution { weight, value } => {
                write!(f, "minimum contribution: {weight} = {value} is below 0.1")
            }
            WeightViolation::Separation { pair, gap } => {
                write!(f, "separation: |{pair}| = {gap:.4} is below 0.2")
            }
        }
    }
}

impl StrengthWeights {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Self {
        StrengthWeights { alpha, beta, gamma, delta }
    }

    pub fn sum(&self) -> f64 {
        self.alpha + self.beta + self.gamma + self.delta
    }

    pub fn scaled(&self, c: f64) -> Self {
        StrengthWeights { alpha: self.alpha * c, beta: self.beta * c, gamma: self.gamma * c, delta: self.delta * c }
    }

    /// Every violated constraint; empty when the weights are admissible.
    /// delta only has to meet the minimum.
    pub fn violations(&self) -> Vec<WeightViolation> {
        let mut out = Vec::new();
        if self.alpha + WEIGHT_EPS < self.beta || self.beta + WEIGHT_EPS < self.gamma {
            out.push(WeightViolation::Precedence { alpha: self.alpha, beta: self.beta, gamma: self.gamma });
        }
        for (name, value) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma), ("delta", self.delta)] {
            if value + WEIGHT_EPS < 0.1 {
                out.push(WeightViolation::MinimumContribution { weight: name.into(), value });
            }
        }
        for (pair, gap) in [("alpha - beta", (self.alpha - self.beta).abs()), ("beta - gamma", (self.beta - self.gamma).abs())] {
            if gap + WEIGHT_EPS < 0.2 {
                out.push(WeightViolation::Separation { pair: pair.into(), gap });
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), ScoringError> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ScoringError::InvalidWeights(violations))
        }
    }
}

/// Reports every violated constraint of `weights`.
pub fn validate_weights(weights: &StrengthWeights) -> Result<(), Vec<WeightViolation>> {
    let v = weights.violations();
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoringVariant {
    /// Entity overlap ratio and depth-based complexity.
    #[default]
    Overlap,
    /// PMI x role-diversity entities and slot-count complexity.
    Pmi,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Components {
    pub s_type: f64,
    pub s_entities: f64,
    pub s_complexity: f64,
    pub s_diversity: f64,
}

impl Components {
    pub fn weighted_sum(&self, w: &StrengthWeights) -> f64 {
        w.alpha * self.s_type + w.beta * self.s_entities + w.gamma * self.s_complexity + w.delta * self.s_diversity
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrengthBreakdown {
    pub s_type: f64,
    pub s_entities: f64,
    pub s_complexity: f64,
    pub s_diversity: f64,
    pub total: f64,
    pub variant: ScoringVariant,
}

impl StrengthBreakdown {
    pub fn components(&self) -> Components {
        Components {
            s_type: self.s_type,
            s_entities: self.s_entities,
            s_complexity: self.s_complexity,
            s_diversity: self.s_diversity,
        }
    }
}

/// Normalised combination of the four component scores.
pub fn combine(components: Components, weights: &StrengthWeights, variant: ScoringVariant) -> StrengthBreakdown {
    let total = (components.weighted_sum(weights) / weights.sum()).clamp(0.0, 1.0);
    StrengthBreakdown {
        s_type: components.s_type,
        s_entities: components.s_entities,
        s_complexity: components.s_complexity,
        s_diversity: components.s_diversity,
        total,
        variant,
    }
}

pub fn score_type(kind: BridgeKind) -> f64 {
    match kind {
        BridgeKind::Causal => 0.9,
        BridgeKind::PredicateChain => 0.8,
        BridgeKind::Entity => 0.6,
    }
}

/// |shared| / max(|E(F1)|, |E(F2)|); zero when either frame holds no entity.
pub fn score_entities(f1: &SemanticFrame, f2: &SemanticFrame, index: &EntityIndex) -> f64 {
    let a = index.entities_of(&f1.frame_id);
    let b = index.entities_of(&f2.frame_id);
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    a.intersection(&b).count() as f64 / a.len().max(b.len()) as f64
}

/// (depth(F1) + depth(F2)) / (2 max_depth).
pub fn score_complexity(f1: &SemanticFrame, f2: &SemanticFrame, max_depth: usize) -> Result<f64, ScoringError> {
    let observed = f1.depth.max(f2.depth);
    if max_depth == 0 || max_depth < observed {
        return Err(ScoringError::InvalidMaxDepth { max_depth, observed });
    }
    Ok((f1.depth + f2.depth) as f64 / (2 * max_depth) as f64)
}

/// (K(F1) + K(F2)) / (2 K_max) with K = slot count plus depth.
pub fn score_complexity_slots(f1: &SemanticFrame, f2: &SemanticFrame, k_max: usize) -> Result<f64, ScoringError> {
    let observed = f1.complexity().max(f2.complexity());
    if k_max == 0 || k_max < observed {
        return Err(ScoringError::InvalidMaxDepth { max_depth: k_max, observed });
    }
    Ok((f1.complexity() + f2.complexity()) as f64 / (2 * k_max) as f64)
}

/// Relative frequency of node concepts in one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConceptDistribution {
    pub doc_id: String,
    pub probabilities: BTreeMap<String, f64>,
}

impl ConceptDistribution {
    pub fn from_counts(doc_id: impl Into<String>, counts: &BTreeMap<String, usize>) -> Self {
        let total: usize = counts.values().sum();
        let probabilities = counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| (k.clone(), c as f64 / total as f64))
            .collect();
        ConceptDistribution { doc_id: doc_id.into(), probabilities }
    }

    pub fn from_graphs<'a>(doc_id: impl Into<String>, graphs: impl IntoIterator<Item = &'a AmrGraph>) -> Self {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for g in graphs {
            for concept in g.nodes().values() {
                *counts.entry(concept.clone()).or_default() += 1;
            }
        }
        Self::from_counts(doc_id, &counts)
    }

    pub fn support_size(&self) -> usize {
        self.probabilities.len()
    }
}

/// Jensen-Shannon divergence in bits; symmetric and bounded by 1.
pub fn score_diversity(d1: &ConceptDistribution, d2: &ConceptDistribution) -> f64 {
    if d1.probabilities.is_empty() || d2.probabilities.is_empty() {
        return if d1.probabilities.is_empty() && d2.probabilities.is_empty() { 0.0 } else { 1.0 };
    }
    let mut keys: Vec<&String> = d1.probabilities.keys().chain(d2.probabilities.keys()).collect();
    keys.sort();
    keys.dedup();
    let half_kl = |p: f64, m: f64| if p > 0.0 { 0.5 * p * (p / m).log2() } else { 0.0 };
    let mut js = 0.0;
    for k in keys {
        let p = d1.probabilities.get(k).copied().unwrap_or(0.0);
        let q = d2.probabilities.get(k).copied().unwrap_or(0.0);
        let m = 0.5 * (p + q);
        js += half_kl(p, m) + half_kl(q, m);
    }
    js.clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScoringConfig {
    pub weights: StrengthWeights,
    /// Defaults to the corpus-wide maximum frame depth.
    pub max_depth: Option<usize>,
    pub variant: ScoringVariant,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        ScoringConfig { weights: StrengthWeights::default(), max_depth: None, variant: ScoringVariant::Overlap }
    }
}

/// Frame/entity co-occurrence counts for the PMI entity score.
#[derive(Debug, Clone, Default)]
struct PmiCounts {
    frames: usize,
    entity: BTreeMap<String, usize>,
    predicate: BTreeMap<String, usize>,
    joint: BTreeMap<(String, String), usize>,
}

impl PmiCounts {
    fn build(corpus: &SemanticCorpus) -> Self {
        let mut counts = PmiCounts::default();
        for frame in corpus.frames() {
            counts.frames += 1;
            *counts.predicate.entry(frame.predicate.clone()).or_default() += 1;
            for e in corpus.entities().entities_of(&frame.frame_id) {
                *counts.entity.entry(e.to_string()).or_default() += 1;
                *counts.joint.entry((e.to_string(), frame.predicate.clone())).or_default() += 1;
            }
        }
        counts
    }

    /// Add-one smoothed PMI, normalised by log2(N + 1) and clamped to [0, 1].
    fn npmi(&self, entity: &str, predicate: &str) -> f64 {
        let n = self.frames as f64 + 1.0;
        let ce = self.entity.get(entity).copied().unwrap_or(0) as f64 + 1.0;
        let cp = self.predicate.get(predicate).copied().unwrap_or(0) as f64 + 1.0;
        let cj = self.joint.get(&(entity.to_string(), predicate.to_string())).copied().unwrap_or(0) as f64 + 1.0;
        let pmi = (cj * n / (ce * cp)).log2();
        if n <= 1.0 {
            return 0.0;
        }
        (pmi / n.log2()).clamp(0.0, 1.0)
    }
}

/// Scores bridges against a fixed corpus.
pub struct Scorer<'a> {
    corpus: &'a SemanticCorpus,
    config: ScoringConfig,
    max_depth: usize,
    k_max: usize,
    distributions: BTreeMap<String, ConceptDistribution>,
    pmi: PmiCounts,
}

impl<'a> Scorer<'a> {
    pub fn new(corpus: &'a SemanticCorpus, config: ScoringConfig) -> Result<Self, ScoringError> {
        config.weights.validate()?;
        let observed = corpus.max_frame_depth();
        let max_depth = config.max_depth.unwrap_or(observed.max(1));
        if max_depth == 0 || max_depth < observed {
            return Err(ScoringError::InvalidMaxDepth { max_depth, observed });
        }
        let distributions = corpus
            .documents()
            .map(|d| (d.to_string(), ConceptDistribution::from_graphs(d, corpus.graphs_of_doc(d))))
            .collect();
        let pmi = match config.variant {
            ScoringVariant::Pmi => PmiCounts::build(corpus),
            ScoringVariant::Overlap => PmiCounts::default(),
        };
        Ok(Scorer {
            corpus,
            config,
            max_depth,
            k_max: corpus.max_frame_complexity().max(1),
            distributions,
            pmi,
        })
    }

    pub fn config(&self) -> &ScoringConfig {
        &self.config
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn distribution(&self, doc_id: &str) -> Option<&ConceptDistribution> {
        self.distributions.get(doc_id)
    }

    fn entity_score_pmi(&self, f1: &SemanticFrame, f2: &SemanticFrame) -> f64 {
        let index = self.corpus.entities();
        let shared = index.shared_entities(&f1.frame_id, &f2.frame_id);
        if shared.is_empty() {
            return 0.0;
        }
        let sum: f64 = shared
            .iter()
            .map(|e| {
                let pmi = 0.5 * (self.pmi.npmi(e, &f1.predicate) + self.pmi.npmi(e, &f2.predicate));
                let diversity = match (index.roles_in(e, &f1.frame_id).first(), index.roles_in(e, &f2.frame_id).first()) {
                    (Some(r1), Some(r2)) => role_distance(r1, r2),
                    _ => 0.0,
                };
                pmi * diversity
            })
            .sum();
        (sum / shared.len() as f64).clamp(0.0, 1.0)
    }

    pub fn components(&self, kind: BridgeKind, f1: &SemanticFrame, f2: &SemanticFrame) -> Result<Components, ScoringError> {
        let (s_entities, s_complexity) = match self.config.variant {
            ScoringVariant::Overlap => (
                score_entities(f1, f2, self.corpus.entities()),
                score_complexity(f1, f2, self.max_depth)?,
            ),
            ScoringVariant::Pmi => (self.entity_score_pmi(f1, f2), score_complexity_slots(f1, f2, self.k_max)?),
        };
        let s_diversity = match (self.distributions.get(&f1.doc_id), self.distributions.get(&f2.doc_id)) {
            (Some(d1), Some(d2)) => score_diversity(d1, d2),
            _ => 0.0,
        };
        Ok(Components { s_type: score_type(kind), s_entities, s_complexity, s_diversity })
    }

    pub fn strength(&self, bridge: &Bridge) -> Result<StrengthBreakdown, ScoringError> {
        let f1 = self.corpus.frame(&bridge.frame_a).ok_or_else(|| ScoringError::UnknownFrame(bridge.frame_a.clone()))?;
        let f2 = self.corpus.frame(&bridge.frame_b).ok_or_else(|| ScoringError::UnknownFrame(bridge.frame_b.clone()))?;
        let components = self.components(bridge.kind, f1, f2)?;
        Ok(combine(components, &self.config.weights, self.config.variant))
    }
}

// ---------------------------------------------------------------------------
// Grid search
// ---------------------------------------------------------------------------

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman correlation with average ranks for ties. `None` when either
/// side has zero variance.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    if n < 2 {
        return None;
    }
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let mean = (n as f64 + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let dx = rx[i] - mean;
        let dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatedComponents {
    #[serde(flatten)]
    pub components: Components,
    pub rating: f64,
}

/// Axis-aligned grid over alpha, beta, gamma with delta held fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub step: f64,
    pub delta: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { min: 0.1, max: 1.0, step: 0.1, delta: 0.1 }
    }
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        let lo = (self.min / self.step).round() as i64;
        let hi = (self.max / self.step).round() as i64;
        (lo..=hi).map(|i| ((i as f64 * self.step) * 1e10).round() / 1e10).collect()
    }

    /// Every (alpha, beta, gamma) combination on the grid.
    pub fn candidates(&self) -> Vec<StrengthWeights> {
        let values = self.values();
        let mut out = Vec::with_capacity(values.len().pow(3));
        for &a in &values {
            for &b in &values {
                for &g in &values {
                    out.push(StrengthWeights::new(a, b, g, self.delta));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedConfig {
    pub weights: StrengthWeights,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedConfig {
    pub weights: StrengthWeights,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchOutcome {
    /// Admissible configurations, best correlation first.
    pub ranked: Vec<RankedConfig>,
    /// Admissible configurations whose correlation is undefined.
    pub skipped: Vec<SkippedConfig>,
    /// Candidates that failed the weight constraints.
    pub rejected: usize,
}

impl GridSearchOutcome {
    pub fn best(&self) -> Option<&RankedConfig> {
        self.ranked.first()
    }
}

fn weight_key(w: &StrengthWeights) -> [f64; 4] {
    [w.alpha, w.beta, w.gamma, w.delta]
}

/// Ranks constraint-satisfying candidates by Spearman correlation between
/// their strengths and the ratings. Ties on rho break toward the
/// lexicographically larger weight vector.
pub fn grid_search(candidates: &[StrengthWeights], items: &[RatedComponents]) -> Result<GridSearchOutcome, ScoringError> {
    if candidates.is_empty() {
        return Err(ScoringError::EmptyGrid);
    }
    if items.len() < 3 {
        return Err(ScoringError::InsufficientData(items.len()));
    }
    let ratings: Vec<f64> = items.iter().map(|i| i.rating).collect();
    let admissible: Vec<&StrengthWeights> = candidates.iter().filter(|w| w.violations().is_empty()).collect();
    let rejected = candidates.len() - admissible.len();

    let results: Vec<(StrengthWeights, Option<f64>)> = admissible
        .par_iter()
        .map(|w| {
            let strengths: Vec<f64> = items.iter().map(|i| combine(i.components, w, ScoringVariant::Overlap).total).collect();
            (**w, spearman(&strengths, &ratings))
        })
        .collect();

    let mut ranked = Vec::new();
    let mut skipped = Vec::new();
    for (weights, rho) in results {
        match rho {
            Some(rho) => ranked.push(RankedConfig { weights, rho }),
            None => {
                log::debug!("skipping {weights:?}: correlation undefined");
                skipped.push(SkippedConfig { weights, reason: "correlation undefined (zero variance)".into() })
            }
        }
    }
    ranked.sort_by(|a, b| {
        b.rho.total_cmp(&a.rho).then_with(|| {
            let (ka, kb) = (weight_key(&a.weights), weight_key(&b.weights));
            kb.iter().zip(ka.iter()).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    Ok(GridSearchOutcome { ranked, skipped, rejected })
}

/// Reads rated components from CSV with header
/// `s_type,s_entities,s_complexity,s_diversity,rating`.
pub fn read_rated_components<R: std::io::Read>(reader: R) -> Result<Vec<RatedComponents>, csv::Error> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(reader);
    rdr.deserialize().collect()
}
