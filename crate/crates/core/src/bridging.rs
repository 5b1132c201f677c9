//! Cross-document bridges between frames and multi-hop path weaving.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amr::{AmrGraph, Role, RoleCategory, Target};
use crate::corpus::SemanticCorpus;
use crate::frames::{entity_id, is_predicate, name_of, EntityId, EntityIndex, FrameId, SemanticFrame};
use crate::scoring::{Scorer, ScoringConfig, ScoringError, StrengthBreakdown};

const SHIPPED_RELATIONS: &str = include_str!("../data/predicate_relations.txt");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BridgeError {
    #[error("predicate relation table is not loaded")]
    MissingRelationTable,
    #[error("relation table line {line}: {message}")]
    RelationTable { line: usize, message: String },
    #[error("invalid bridge config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BridgeKind {
    Entity,
    PredicateChain,
    Causal,
}

impl BridgeKind {
    pub const ALL: [BridgeKind; 3] = [BridgeKind::Entity, BridgeKind::PredicateChain, BridgeKind::Causal];

    pub fn as_str(&self) -> &'static str {
        match self {
            BridgeKind::Entity => "entity",
            BridgeKind::PredicateChain => "predicate_chain",
            BridgeKind::Causal => "causal",
        }
    }
}

impl fmt::Display for BridgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BridgeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "entity" => Ok(BridgeKind::Entity),
            "predicate_chain" | "predicate" => Ok(BridgeKind::PredicateChain),
            "causal" => Ok(BridgeKind::Causal),
            other => Err(format!("unknown bridge kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationClass {
    Causation,
    Temporal,
    Logical,
}

impl fmt::Display for RelationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationClass::Causation => "causation",
            RelationClass::Temporal => "temporal",
            RelationClass::Logical => "logical",
        })
    }
}

impl FromStr for RelationClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "causation" => Ok(RelationClass::Causation),
            "temporal" => Ok(RelationClass::Temporal),
            "logical" => Ok(RelationClass::Logical),
            other => Err(format!("unknown relation class `{other}`")),
        }
    }
}

/// Directional predicate pairs. A lookup matches either orientation and
/// reports which one was declared.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationTable {
    pairs: BTreeMap<(String, String), RelationClass>,
}

impl RelationTable {
    pub fn parse(text: &str) -> Result<Self, BridgeError> {
        let mut table = RelationTable::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [a, b, class] = fields[..] else {
                return Err(BridgeError::RelationTable { line: i + 1, message: format!("expected 3 fields, got {}", fields.len()) });
            };
            let class = class.parse().map_err(|message| BridgeError::RelationTable { line: i + 1, message })?;
            table.insert(a, b, class);
        }
        Ok(table)
    }

    /// The table that ships with the crate.
    pub fn shipped() -> Self {
        Self::parse(SHIPPED_RELATIONS).expect("shipped relation table parses")
    }

    pub fn insert(&mut self, a: &str, b: &str, class: RelationClass) {
        self.pairs.insert((a.to_string(), b.to_string()), class);
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `(class, forward)`, where `forward` is false when the pair was
    /// declared as `(b, a)`.
    pub fn lookup(&self, a: &str, b: &str) -> Option<(RelationClass, bool)> {
        if let Some(c) = self.pairs.get(&(a.to_string(), b.to_string())) {
            return Some((*c, true));
        }
        self.pairs.get(&(b.to_string(), a.to_string())).map(|c| (*c, false))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, RelationClass)> {
        self.pairs.iter().map(|((a, b), c)| (a.as_str(), b.as_str(), *c))
    }
}

fn shipped_table() -> Option<RelationTable> {
    Some(RelationTable::shipped())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BridgeConfig {
    pub theta_role: f64,
    /// Entity bridges require a role change; otherwise a predicate change
    /// also qualifies.
    pub strict_role_variation: bool,
    pub cross_document_only: bool,
    pub min_strength: f64,
    /// Only pair documents whose positions (in sorted doc-id order) differ
    /// by at most this much.
    pub document_window: Option<usize>,
    /// Drop entity bridges on frame pairs already linked by a predicate
    /// chain or causal bridge.
    pub subsume_entity_bridges: bool,
    #[serde(skip, default = "shipped_table")]
    pub predicate_relation_table: Option<RelationTable>,
}

impl Default for BridgeConfig {
    fn default() -> Self {
        BridgeConfig {
            theta_role: 0.4,
            strict_role_variation: false,
            cross_document_only: true,
            min_strength: 0.3,
            document_window: None,
            subsume_entity_bridges: true,
            predicate_relation_table: shipped_table(),
        }
    }
}

impl BridgeConfig {
    pub fn validate(&self) -> Result<(), BridgeError> {
        if !(0.0..=1.0).contains(&self.theta_role) {
            return Err(BridgeError::InvalidConfig(format!("theta_role {} outside [0, 1]", self.theta_role)));
        }
        if !(0.0..=1.0).contains(&self.min_strength) {
            return Err(BridgeError::InvalidConfig(format!("min_strength {} outside [0, 1]", self.min_strength)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BridgeEvidence {
    Entity { entity_id: EntityId, role_a: Role, role_b: Role },
    PredicateChain { predicate_a: String, predicate_b: String, relation: RelationClass },
    /// `marker` is the non-core role on frame_a; `target` is the node it points to.
    Causal { marker: Role, target: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bridge {
    pub bridge_id: String,
    pub kind: BridgeKind,
    pub frame_a: FrameId,
    pub frame_b: FrameId,
    pub doc_a: String,
    pub doc_b: String,
    pub shared_entities: Vec<EntityId>,
    pub evidence: BridgeEvidence,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strength: Option<StrengthBreakdown>,
}

impl Bridge {
    pub fn total_strength(&self) -> f64 {
        self.strength.map(|s| s.total).unwrap_or(0.0)
    }

    pub fn touches(&self, frame: &str) -> bool {
        self.frame_a == frame || self.frame_b == frame
    }

    pub fn other_end(&self, frame: &str) -> Option<&str> {
        if self.frame_a == frame {
            Some(&self.frame_b)
        } else if self.frame_b == frame {
            Some(&self.frame_a)
        } else {
            None
        }
    }
}

/// 0 for identical roles, 0.5 between core arguments, 0.75 between core and
/// non-core, 1.0 otherwise.
pub fn role_distance(r1: &Role, r2: &Role) -> f64 {
    use RoleCategory::*;
    match (&r1.category, &r2.category) {
        (CoreArg(a), CoreArg(b)) => {
            if a == b {
                0.0
            } else {
                0.5
            }
        }
        (CoreArg(_), NonCore(_)) | (NonCore(_), CoreArg(_)) => 0.75,
        (NonCore(a), NonCore(b)) if a == b => 0.0,
        (Modifier(a), Modifier(b)) if a == b => 0.0,
        (Attribute, Attribute) if r1.raw_label == r2.raw_label => 0.0,
        _ => 1.0,
    }
}

fn pair_allowed(f1: &SemanticFrame, f2: &SemanticFrame, config: &BridgeConfig) -> bool {
    f1.frame_id != f2.frame_id && !(config.cross_document_only && f1.doc_id == f2.doc_id)
}

/// Most distant role pair of `e` across the two frames, if any qualifies.
fn qualifying_roles<'a>(
    f1: &SemanticFrame,
    f2: &SemanticFrame,
    r1: &'a [Role],
    r2: &'a [Role],
    config: &BridgeConfig,
) -> Option<(&'a Role, &'a Role)> {
    let mut best: Option<(&Role, &Role, f64)> = None;
    for a in r1 {
        for b in r2 {
            let d = role_distance(a, b);
            if best.map_or(true, |(_, _, bd)| d > bd) {
                best = Some((a, b, d));
            }
        }
    }
    let (a, b, d) = best?;
    let role_change = d > config.theta_role;
    let predicate_change = f1.predicate != f2.predicate;
    if role_change || (!config.strict_role_variation && predicate_change) {
        Some((a, b))
    } else {
        None
    }
}

fn entity_bridge(f1: &SemanticFrame, f2: &SemanticFrame, e: &str, role_a: &Role, role_b: &Role, shared: Vec<EntityId>) -> Bridge {
    Bridge {
        bridge_id: format!("entity:{}|{}|{}", f1.frame_id, f2.frame_id, e),
        kind: BridgeKind::Entity,
        frame_a: f1.frame_id.clone(),
        frame_b: f2.frame_id.clone(),
        doc_a: f1.doc_id.clone(),
        doc_b: f2.doc_id.clone(),
        shared_entities: shared,
        evidence: BridgeEvidence::Entity { entity_id: e.to_string(), role_a: role_a.clone(), role_b: role_b.clone() },
        strength: None,
    }
}

/// One bridge per (F1, F2, e) where e fills a core argument of both frames
/// and the role or predicate changes. Within one document only pairs with
/// F1 < F2 are considered.
pub fn build_entity_bridges(
    frames_a: &[&SemanticFrame],
    frames_b: &[&SemanticFrame],
    index: &EntityIndex,
    config: &BridgeConfig,
) -> Vec<Bridge> {
    let mut out = Vec::new();
    for f1 in frames_a {
        for f2 in frames_b {
            if !pair_allowed(f1, f2, config) || (f1.doc_id == f2.doc_id && f1.frame_id >= f2.frame_id) {
                continue;
            }
            let shared = index.shared_entities(&f1.frame_id, &f2.frame_id);
            for e in &shared {
                let (r1, r2) = (index.roles_in(e, &f1.frame_id), index.roles_in(e, &f2.frame_id));
                if let Some((a, b)) = qualifying_roles(f1, f2, r1, r2, config) {
                    out.push(entity_bridge(f1, f2, e, a, b, shared.clone()));
                }
            }
        }
    }
    out
}

/// Frame pairs whose predicates are related in the table and which share an
/// entity. frame_a carries the table's first predicate.
pub fn build_predicate_bridges(
    frames_a: &[&SemanticFrame],
    frames_b: &[&SemanticFrame],
    index: &EntityIndex,
    config: &BridgeConfig,
) -> Result<Vec<Bridge>, BridgeError> {
    let table = config.predicate_relation_table.as_ref().ok_or(BridgeError::MissingRelationTable)?;
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for f1 in frames_a {
        for f2 in frames_b {
            if !pair_allowed(f1, f2, config) {
                continue;
            }
            let Some((relation, forward)) = table.lookup(&f1.predicate, &f2.predicate) else { continue };
            let (fa, fb) = if forward { (*f1, *f2) } else { (*f2, *f1) };
            let shared = index.shared_entities(&fa.frame_id, &fb.frame_id);
            if shared.is_empty() {
                continue;
            }
            let bridge_id = format!("predicate:{}|{}", fa.frame_id, fb.frame_id);
            if !seen.insert(bridge_id.clone()) {
                continue;
            }
            out.push(Bridge {
                bridge_id,
                kind: BridgeKind::PredicateChain,
                frame_a: fa.frame_id.clone(),
                frame_b: fb.frame_id.clone(),
                doc_a: fa.doc_id.clone(),
                doc_b: fb.doc_id.clone(),
                shared_entities: shared,
                evidence: BridgeEvidence::PredicateChain {
                    predicate_a: fa.predicate.clone(),
                    predicate_b: fb.predicate.clone(),
                    relation,
                },
                strength: None,
            });
        }
    }
    Ok(out)
}

/// Nodes reachable from `start`, including it.
fn subgraph_nodes<'a>(graph: &'a AmrGraph, start: &'a str) -> BTreeSet<&'a str> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        if !seen.insert(v) {
            continue;
        }
        for e in graph.out_edges(v) {
            if let Target::Node(t) = &e.target {
                stack.push(t.as_str());
            }
        }
    }
    seen
}

/// Whether the subgraph under a marker mentions F2's predicate or one of
/// F2's entities.
fn marker_mentions(graph: &AmrGraph, marker_node: &str, f2: &SemanticFrame, index: &EntityIndex) -> bool {
    let f2_entities = index.entities_of(&f2.frame_id);
    subgraph_nodes(graph, marker_node).into_iter().any(|v| {
        let Some(concept) = graph.concept(v) else { return false };
        if concept == f2.predicate {
            return true;
        }
        if is_predicate(concept) {
            return false;
        }
        let name = name_of(graph, v).unwrap_or_else(|| concept.to_string());
        f2_entities.contains(entity_id(&name, concept).as_str())
    })
}

fn causal_from(f1: &SemanticFrame, f2: &SemanticFrame, corpus: &SemanticCorpus, out: &mut Vec<Bridge>) {
    let index = corpus.entities();
    let shared = index.shared_entities(&f1.frame_id, &f2.frame_id);
    let mut seen_markers = BTreeSet::new();
    for (marker, target) in f1.causal_markers() {
        if !seen_markers.insert(marker.raw_label.clone()) {
            continue;
        }
        let target_node = match target {
            Target::Node(v) => Some(v.as_str()),
            Target::Constant(_) => None,
        };
        let related = !shared.is_empty()
            || match (target_node, corpus.graph(&f1.graph_id)) {
                (Some(v), Some(g)) => marker_mentions(g, v, f2, index),
                _ => false,
            };
        if !related {
            continue;
        }
        out.push(Bridge {
            bridge_id: format!("causal:{}|{}|{}", f1.frame_id, f2.frame_id, marker.short()),
            kind: BridgeKind::Causal,
            frame_a: f1.frame_id.clone(),
            frame_b: f2.frame_id.clone(),
            doc_a: f1.doc_id.clone(),
            doc_b: f2.doc_id.clone(),
            shared_entities: shared.clone(),
            evidence: BridgeEvidence::Causal {
                marker: marker.clone(),
                target: target_node.map(str::to_string).unwrap_or_else(|| target_label(target)),
            },
            strength: None,
        });
    }
}

fn target_label(t: &Target) -> String {
    match t {
        Target::Node(v) => v.clone(),
        Target::Constant(c) => c.value.clone(),
    }
}

/// Pairs where one frame carries a CAU, condition or PRP argument and is
/// related to the other frame. Both orientations are checked; the
/// marker-bearing frame is always frame_a.
pub fn build_causal_bridges(
    frames_a: &[&SemanticFrame],
    frames_b: &[&SemanticFrame],
    corpus: &SemanticCorpus,
    config: &BridgeConfig,
) -> Vec<Bridge> {
    let mut out = Vec::new();
    for f1 in frames_a {
        for f2 in frames_b {
            if !pair_allowed(f1, f2, config) {
                continue;
            }
            causal_from(f1, f2, corpus, &mut out);
            if f1.doc_id != f2.doc_id {
                causal_from(f2, f1, corpus, &mut out);
            }
        }
    }
    out.sort_by(|a, b| a.bridge_id.cmp(&b.bridge_id));
    out.dedup_by(|a, b| a.bridge_id == b.bridge_id);
    out
}

/// Document pairs in sorted order, respecting the window and the
/// cross-document setting.
pub fn document_pairs(docs: &[&str], config: &BridgeConfig) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..docs.len() {
        if !config.cross_document_only {
            out.push((i, i));
        }
        for j in i + 1..docs.len() {
            if config.document_window.map_or(true, |w| j - i <= w) {
                out.push((i, j));
            }
        }
    }
    out
}

/// All unscored bridges for the corpus, deduplicated and sorted by id.
pub fn candidate_bridges(corpus: &SemanticCorpus, config: &BridgeConfig) -> Result<Vec<Bridge>, BridgeError> {
    config.validate()?;
    if config.predicate_relation_table.is_none() {
        return Err(BridgeError::MissingRelationTable);
    }
    let docs: Vec<&str> = corpus.documents().collect();
    let frames: Vec<Vec<&SemanticFrame>> = docs.iter().map(|d| corpus.frames_of_doc(d)).collect();
    let pairs = document_pairs(&docs, config);
    let per_pair: Vec<Vec<Bridge>> = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<Vec<Bridge>, BridgeError> {
            let (a, b) = (&frames[i], &frames[j]);
            let mut v = build_entity_bridges(a, b, corpus.entities(), config);
            v.extend(build_predicate_bridges(a, b, corpus.entities(), config)?);
            v.extend(build_causal_bridges(a, b, corpus, config));
            Ok(v)
        })
        .collect::<Result<_, _>>()?;

    let mut by_id: BTreeMap<String, Bridge> = BTreeMap::new();
    for b in per_pair.into_iter().flatten() {
        by_id.entry(b.bridge_id.clone()).or_insert(b);
    }
    let mut bridges: Vec<Bridge> = by_id.into_values().collect();
    if config.subsume_entity_bridges {
        let linked: BTreeSet<(String, String)> = bridges
            .iter()
            .filter(|b| b.kind != BridgeKind::Entity)
            .map(|b| unordered(&b.frame_a, &b.frame_b))
            .collect();
        bridges.retain(|b| b.kind != BridgeKind::Entity || !linked.contains(&unordered(&b.frame_a, &b.frame_b)));
    }
    Ok(bridges)
}

fn unordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Scores bridges in place.
pub fn score_bridges(bridges: &mut [Bridge], scorer: &Scorer<'_>) -> Result<(), BridgeError> {
    let scored: Vec<StrengthBreakdown> = bridges.par_iter().map(|b| scorer.strength(b)).collect::<Result<_, _>>()?;
    for (b, s) in bridges.iter_mut().zip(scored) {
        b.strength = Some(s);
    }
    Ok(())
}

/// Strength descending, then bridge id.
pub fn sort_bridges(bridges: &mut [Bridge]) {
    bridges.sort_by(|a, b| b.total_strength().total_cmp(&a.total_strength()).then_with(|| a.bridge_id.cmp(&b.bridge_id)));
}

pub fn filter_by_strength(bridges: &[Bridge], min_strength: f64) -> Vec<Bridge> {
    bridges.iter().filter(|b| b.total_strength() >= min_strength).cloned().collect()
}

/// Builds, scores, filters and sorts every bridge in the corpus.
pub fn discover_bridges(corpus: &SemanticCorpus, config: &BridgeConfig, scoring: &ScoringConfig) -> Result<Vec<Bridge>, BridgeError> {
    let mut bridges = candidate_bridges(corpus, config)?;
    if bridges.is_empty() {
        return Ok(bridges);
    }
    let scorer = Scorer::new(corpus, scoring.clone())?;
    score_bridges(&mut bridges, &scorer)?;
    bridges.retain(|b| b.total_strength() >= config.min_strength);
    sort_bridges(&mut bridges);
    Ok(bridges)
}

/// Re-checks a bridge's defining condition against the corpus.
pub fn check_bridge(bridge: &Bridge, corpus: &SemanticCorpus, config: &BridgeConfig) -> Result<(), String> {
    let f1 = corpus.frame(&bridge.frame_a).ok_or("frame_a missing")?;
    let f2 = corpus.frame(&bridge.frame_b).ok_or("frame_b missing")?;
    if !pair_allowed(f1, f2, config) {
        return Err("frames are identical or share a document".into());
    }
    let index = corpus.entities();
    match &bridge.evidence {
        BridgeEvidence::Entity { entity_id, role_a, role_b } => {
            let (r1, r2) = (index.roles_in(entity_id, &f1.frame_id), index.roles_in(entity_id, &f2.frame_id));
            if !r1.contains(role_a) || !r2.contains(role_b) {
                return Err(format!("{entity_id} does not hold the recorded roles"));
            }
            if !matches!(role_a.category, RoleCategory::CoreArg(_)) || !matches!(role_b.category, RoleCategory::CoreArg(_)) {
                return Err("entity roles are not core arguments".into());
            }
            qualifying_roles(f1, f2, r1, r2, config).map(|_| ()).ok_or_else(|| "no role or predicate change".into())
        }
        BridgeEvidence::PredicateChain { predicate_a, predicate_b, relation } => {
            let table = config.predicate_relation_table.as_ref().ok_or("no relation table")?;
            if *predicate_a != f1.predicate || *predicate_b != f2.predicate {
                return Err("predicates do not match frames".into());
            }
            if table.lookup(predicate_a, predicate_b).map(|(c, _)| c) != Some(*relation) {
                return Err("predicates not related in table".into());
            }
            if index.shared_entities(&f1.frame_id, &f2.frame_id).is_empty() {
                return Err("no shared entity".into());
            }
            Ok(())
        }
        BridgeEvidence::Causal { marker, .. } => {
            if !f1.causal_markers().any(|(r, _)| r == marker) {
                return Err("marker absent from frame_a".into());
            }
            let mut found = Vec::new();
            causal_from(f1, f2, corpus, &mut found);
            if found.iter().any(|b| b.bridge_id == bridge.bridge_id) {
                Ok(())
            } else {
                Err("frames are not related through the marker".into())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReasoningPath {
    pub bridges: Vec<Bridge>,
    /// Frames in traversal order.
    pub frames: Vec<FrameId>,
    pub hop_count: usize,
}

impl ReasoningPath {
    pub fn path_id(&self) -> String {
        self.bridges.iter().map(|b| b.bridge_id.as_str()).collect::<Vec<_>>().join(" -> ")
    }

    /// Kind of the first bridge.
    pub fn kind(&self) -> BridgeKind {
        self.bridges[0].kind
    }

    /// Weakest link.
    pub fn strength(&self) -> f64 {
        self.bridges.iter().map(Bridge::total_strength).fold(f64::INFINITY, f64::min)
    }

    pub fn source_docs(&self) -> Vec<String> {
        let docs: BTreeSet<&str> = self.bridges.iter().flat_map(|b| [b.doc_a.as_str(), b.doc_b.as_str()]).collect();
        docs.into_iter().map(str::to_string).collect()
    }
}

/// Simple paths of chained bridges up to `max_frames` frames. Single
/// bridges keep their own orientation; longer paths run from the smaller
/// end frame to the larger.
pub fn weave_paths(bridges: &[Bridge], max_frames: usize) -> Vec<ReasoningPath> {
    if max_frames < 2 {
        return Vec::new();
    }
    let mut adjacency: BTreeMap<&str, Vec<(usize, &str)>> = BTreeMap::new();
    for (i, b) in bridges.iter().enumerate() {
        if b.frame_a == b.frame_b {
            continue;
        }
        adjacency.entry(&b.frame_a).or_default().push((i, &b.frame_b));
        adjacency.entry(&b.frame_b).or_default().push((i, &b.frame_a));
    }

    let mut out = Vec::new();
    for b in bridges.iter().filter(|b| b.frame_a != b.frame_b) {
        out.push(ReasoningPath { bridges: vec![b.clone()], frames: vec![b.frame_a.clone(), b.frame_b.clone()], hop_count: 2 });
    }

    fn extend<'a>(
        adjacency: &BTreeMap<&'a str, Vec<(usize, &'a str)>>,
        bridges: &[Bridge],
        frames: &mut Vec<&'a str>,
        used: &mut Vec<usize>,
        max_frames: usize,
        out: &mut Vec<ReasoningPath>,
    ) {
        if frames.len() >= 3 && frames[0] < frames[frames.len() - 1] {
            out.push(ReasoningPath {
                bridges: used.iter().map(|&i| bridges[i].clone()).collect(),
                frames: frames.iter().map(|f| f.to_string()).collect(),
                hop_count: frames.len(),
            });
        }
        if frames.len() == max_frames {
            return;
        }
        let last = frames[frames.len() - 1];
        for &(i, next) in adjacency.get(last).map(Vec::as_slice).unwrap_or(&[]) {
            if frames.contains(&next) {
                continue;
            }
            frames.push(next);
            used.push(i);
            extend(adjacency, bridges, frames, used, max_frames, out);
            frames.pop();
            used.pop();
        }
    }

    for &start in adjacency.keys() {
        extend(&adjacency, bridges, &mut vec![start], &mut Vec::new(), max_frames, &mut out);
    }
    out.sort_by(|a, b| a.hop_count.cmp(&b.hop_count).then_with(|| a.path_id().cmp(&b.path_id())));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amr::{classify_role, parse_penman};
    use proptest::prelude::*;

    fn role(l: &str) -> Role {
        classify_role(l).unwrap()
    }

    fn corpus(docs: &[(&str, &str)]) -> SemanticCorpus {
        let graphs = docs
            .iter()
            .enumerate()
            .map(|(i, (doc, p))| parse_penman(p, &format!("{doc}.s{i}"), doc).unwrap());
        SemanticCorpus::from_graphs(graphs).unwrap()
    }

    fn all_frames<'a>(c: &'a SemanticCorpus, doc: &str) -> Vec<&'a SemanticFrame> {
        c.frames_of_doc(doc)
    }

    #[test]
    fn distance_table() {
        assert_eq!(role_distance(&role(":ARG0"), &role(":ARG0")), 0.0);
        assert_eq!(role_distance(&role(":ARG0"), &role(":ARG1")), 0.5);
        assert_eq!(role_distance(&role(":ARG0"), &role(":ARGM-CAU")), 0.75);
        assert_eq!(role_distance(&role(":ARG0"), &role(":mod")), 1.0);
        assert_eq!(role_distance(&role(":ARGM-CAU"), &role(":ARGM-TMP")), 1.0);
        assert_eq!(role_distance(&role(":foo"), &role(":foo")), 0.0);
        assert_eq!(role_distance(&role(":foo"), &role(":bar")), 1.0);
    }

    #[test]
    fn relation_table_parsing() {
        let t = RelationTable::shipped();
        assert_eq!(t.lookup("cause-01", "result-01"), Some((RelationClass::Causation, true)));
        assert_eq!(t.lookup("end-01", "begin-01"), Some((RelationClass::Temporal, false)));
        assert_eq!(t.lookup("expand-01", "hire-01"), None);
        assert!(RelationTable::parse("a-01 b-01").is_err());
        assert!(RelationTable::parse("a-01 b-01 vibes").is_err());
        assert!(RelationTable::parse("# only a comment\n\n").unwrap().is_empty());
    }

    const APPLE_A: &str = r#"(a / announce-01 :ARG0 (c / company :name (n / name :op1 "Apple")))"#;
    const APPLE_B: &str = r#"(r / report-01 :ARG0 (c / company :name (n / name :op1 "Apple")))"#;

    #[test]
    fn relaxed_and_strict_entity_bridges() {
        let c = corpus(&[("d1", APPLE_A), ("d2", APPLE_B)]);
        let (a, b) = (all_frames(&c, "d1"), all_frames(&c, "d2"));
        let relaxed = build_entity_bridges(&a, &b, c.entities(), &BridgeConfig::default());
        assert_eq!(relaxed.len(), 1);
        assert_eq!(relaxed[0].shared_entities, vec!["company:Apple".to_string()]);
        let strict = BridgeConfig { strict_role_variation: true, ..Default::default() };
        assert!(build_entity_bridges(&a, &b, c.entities(), &strict).is_empty());
    }

    #[test]
    fn role_shift_passes_strict_mode() {
        let c = corpus(&[
            ("d1", "(h / hire-01 :ARG0 (p / person :name (n / name :op1 \"Kim\")))"),
            ("d2", "(h / hire-01 :ARG1 (p / person :name (n / name :op1 \"Kim\")))"),
        ]);
        let strict = BridgeConfig { strict_role_variation: true, ..Default::default() };
        let out = build_entity_bridges(&all_frames(&c, "d1"), &all_frames(&c, "d2"), c.entities(), &strict);
        assert_eq!(out.len(), 1);
        let BridgeEvidence::Entity { role_a, role_b, .. } = &out[0].evidence else { panic!() };
        assert_eq!((role_a.short(), role_b.short()), ("ARG0".into(), "ARG1".into()));
        let high = BridgeConfig { theta_role: 0.6, strict_role_variation: true, ..Default::default() };
        assert!(build_entity_bridges(&all_frames(&c, "d1"), &all_frames(&c, "d2"), c.entities(), &high).is_empty());
    }

    #[test]
    fn predicate_bridges() {
        let c = corpus(&[
            ("d1", "(e / end-01 :ARG1 (w / war))"),
            ("d2", "(b / begin-01 :ARG1 (w / war))"),
            ("d3", "(b / begin-01 :ARG1 (p / peace))"),
        ]);
        let cfg = BridgeConfig::default();
        let out = build_predicate_bridges(&all_frames(&c, "d1"), &all_frames(&c, "d2"), c.entities(), &cfg).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].frame_a, "d2.s1/b");
        assert!(matches!(out[0].evidence, BridgeEvidence::PredicateChain { relation: RelationClass::Temporal, .. }));
        assert!(build_predicate_bridges(&all_frames(&c, "d1"), &all_frames(&c, "d3"), c.entities(), &cfg)
            .unwrap()
            .is_empty());
        let none = BridgeConfig { predicate_relation_table: None, ..Default::default() };
        assert_eq!(
            build_predicate_bridges(&all_frames(&c, "d1"), &all_frames(&c, "d2"), c.entities(), &none),
            Err(BridgeError::MissingRelationTable)
        );
    }

    #[test]
    fn causal_bridge_via_marker_mention() {
        // no shared core entity; the purpose subgraph names the hire-01 predicate
        let c = corpus(&[
            ("d1", "(x / expand-01 :ARG0 (f / firm) :ARGM-PRP (h / hire-01 :ARG1 (s / staff)))"),
            ("d2", "(h / hire-01 :ARG0 (a / agency))"),
        ]);
        let out = build_causal_bridges(&all_frames(&c, "d2"), &all_frames(&c, "d1"), &c, &BridgeConfig::default());
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].frame_a, "d1.s0/x");
        assert_eq!(out[0].bridge_id, "causal:d1.s0/x|d2.s1/h|PRP");
        let plain = corpus(&[("d1", "(x / expand-01 :ARG0 (f / firm))"), ("d2", "(h / hire-01 :ARG0 (f / firm))")]);
        assert!(build_causal_bridges(&all_frames(&plain, "d1"), &all_frames(&plain, "d2"), &plain, &BridgeConfig::default())
            .is_empty());
    }

    #[test]
    fn discover_empty_and_sorted() {
        let empty = SemanticCorpus::from_graphs(Vec::new()).unwrap();
        assert!(discover_bridges(&empty, &BridgeConfig::default(), &ScoringConfig::default()).unwrap().is_empty());
        let c = corpus(&[("d1", APPLE_A), ("d2", APPLE_B)]);
        let out = discover_bridges(&c, &BridgeConfig::default(), &ScoringConfig::default()).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].total_strength() >= 0.3);
        for b in &out {
            check_bridge(b, &c, &BridgeConfig::default()).unwrap();
        }
    }

    fn bridge(a: &str, b: &str) -> Bridge {
        Bridge {
            bridge_id: format!("entity:{a}|{b}|e"),
            kind: BridgeKind::Entity,
            frame_a: a.into(),
            frame_b: b.into(),
            doc_a: a.into(),
            doc_b: b.into(),
            shared_entities: vec![],
            evidence: BridgeEvidence::Entity { entity_id: "e".into(), role_a: role(":ARG0"), role_b: role(":ARG1") },
            strength: None,
        }
    }

    #[test]
    fn weaving() {
        let single = weave_paths(&[bridge("A", "B")], 4);
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].hop_count, 2);

        let chain = weave_paths(&[bridge("A", "B"), bridge("B", "C")], 4);
        let three: Vec<_> = chain.iter().filter(|p| p.hop_count == 3).collect();
        assert_eq!(three.len(), 1);
        assert_eq!(three[0].frames, vec!["A", "B", "C"]);

        let apart = weave_paths(&[bridge("A", "B"), bridge("C", "D")], 4);
        assert!(apart.iter().all(|p| p.hop_count == 2));
        assert_eq!(apart.len(), 2);
        assert!(weave_paths(&[bridge("A", "B")], 1).is_empty());
    }

    /// Brute-force enumeration over frame sequences for comparison.
    fn oracle_path_count(edges: &[(usize, usize)], n: usize, max_frames: usize) -> usize {
        fn walk(edges: &[(usize, usize)], seq: &mut Vec<usize>, used: &mut Vec<usize>, max: usize, count: &mut usize) {
            if used.len() >= 2 && seq[0] < *seq.last().unwrap() {
                *count += 1;
            }
            if seq.len() == max {
                return;
            }
            let last = *seq.last().unwrap();
            for (i, &(a, b)) in edges.iter().enumerate() {
                let next = if a == last { b } else if b == last { a } else { continue };
                if seq.contains(&next) {
                    continue;
                }
                seq.push(next);
                used.push(i);
                walk(edges, seq, used, max, count);
                seq.pop();
                used.pop();
            }
        }
        let mut count = edges.len();
        for s in 0..n {
            walk(edges, &mut vec![s], &mut Vec::new(), max_frames, &mut count);
        }
        count
    }

    proptest! {
        #[test]
        fn distance_symmetric(a in prop::sample::select(vec![":ARG0", ":ARG1", ":ARG3", ":ARGM-CAU", ":ARGM-TMP", ":mod", ":poss", ":op1", ":time"]),
                              b in prop::sample::select(vec![":ARG0", ":ARG2", ":ARGM-PRP", ":condition", ":mod", ":quant", ":op2", ":ARG0-of"])) {
            let (ra, rb) = (role(a), role(b));
            let d = role_distance(&ra, &rb);
            prop_assert_eq!(d, role_distance(&rb, &ra));
            prop_assert!((0.0..=1.0).contains(&d));
            prop_assert_eq!(d == 0.0, ra.category == rb.category && (ra.category != RoleCategory::Attribute || ra.raw_label == rb.raw_label));
        }

        #[test]
        fn woven_paths_are_simple(edges in prop::collection::vec((0usize..6, 0usize..6), 0..8), max in 2usize..5) {
            let edges: Vec<(usize, usize)> = edges.into_iter().filter(|(a, b)| a != b).collect();
            let bridges: Vec<Bridge> = edges
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| Bridge { bridge_id: format!("b{i}"), ..bridge(&format!("F{a}"), &format!("F{b}")) })
                .collect();
            let paths = weave_paths(&bridges, max);
            for p in &paths {
                let distinct: BTreeSet<&String> = p.frames.iter().collect();
                prop_assert_eq!(distinct.len(), p.frames.len());
                prop_assert_eq!(p.hop_count, p.frames.len());
                prop_assert!(p.hop_count <= max);
            }
            prop_assert_eq!(paths.iter().filter(|p| p.hop_count == 2).count(), bridges.len());
            prop_assert_eq!(paths.len(), oracle_path_count(&edges, 6, max));
        }
    }
}
