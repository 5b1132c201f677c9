//! Semantic contexts, question templates and QA synthesis.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::amr::{AmrGraph, Role, Target};
use crate::bridging::{Bridge, BridgeEvidence, BridgeKind, ReasoningPath, RelationClass};
use crate::corpus::SemanticCorpus;
use crate::frames::{is_predicate, name_of, SemanticFrame};
use crate::http::Endpoint;

const SHIPPED_TEMPLATES: &str = include_str!("../data/templates.txt");

const PLACEHOLDERS: [&str; 10] = [
    "entity",
    "frame_a",
    "frame_b",
    "marker",
    "path",
    "partner",
    "relation",
    "chain_first",
    "chain_middle",
    "chain_last",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerationError {
    #[error("dangling reference to {0}")]
    DanglingReference(String),
    #[error("no template for bridge kind {0}")]
    NoTemplateForKind(BridgeKind),
    #[error("template {template_id} has unresolved placeholder {{{placeholder}}}")]
    UnresolvedPlaceholder { template_id: String, placeholder: String },
    #[error("template file line {line}: {message}")]
    TemplateParse { line: usize, message: String },
    #[error("llm request failed: {0}")]
    LlmRequestFailed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameDescription {
    pub frame_id: String,
    pub doc_id: String,
    pub predicate: String,
    /// `predicate(arg, ...)` over core and non-core arguments.
    pub label: String,
    /// Role-annotated rendering.
    pub detail: String,
    pub sentence: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoleChange {
    pub entity_id: String,
    pub entity: String,
    pub role_a: Role,
    pub role_b: Role,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemanticContext {
    /// Bridge id, or the joined bridge ids of a path.
    pub context_id: String,
    pub bridge_ids: Vec<String>,
    pub kind: BridgeKind,
    pub strength: f64,
    /// Frames in reasoning order.
    pub frames: Vec<FrameDescription>,
    pub shared_entities: Vec<String>,
    pub role_changes: Vec<RoleChange>,
    pub marker: Option<String>,
    pub relation: Option<RelationClass>,
    /// Labels for the cause, the marker-bearing frame and the effect, when the
    /// chain can be read off the graphs.
    pub chain: Vec<String>,
    /// Another entity of the two frames, not shared.
    pub partner: Option<String>,
    pub hop_count: usize,
    pub source_docs: Vec<String>,
}

fn target_text(graph: &AmrGraph, target: &Target) -> String {
    match target {
        Target::Constant(c) => c.value.clone(),
        Target::Node(v) => {
            let concept = graph.concept(v).unwrap_or(v);
            if is_predicate(concept) {
                concept.to_string()
            } else {
                name_of(graph, v).unwrap_or_else(|| concept.to_string())
            }
        }
    }
}

fn describe(frame: &SemanticFrame, corpus: &SemanticCorpus) -> Result<FrameDescription, GenerationError> {
    let graph = corpus.graph(&frame.graph_id).ok_or_else(|| GenerationError::DanglingReference(frame.graph_id.clone()))?;
    let mut args = Vec::new();
    let mut detail = Vec::new();
    for (i, t) in &frame.core_args {
        let text = target_text(graph, t);
        detail.push(format!("ARG{i}: {text}"));
        args.push(text);
    }
    for (r, t) in &frame.non_core_args {
        let text = target_text(graph, t);
        detail.push(format!("{}: {text}", r.short()));
        args.push(text);
    }
    Ok(FrameDescription {
        frame_id: frame.frame_id.clone(),
        doc_id: frame.doc_id.clone(),
        predicate: frame.predicate.clone(),
        label: format!("{}({})", frame.predicate, args.join(", ")),
        detail: format!("{}({})", frame.predicate, detail.join(", ")),
        sentence: graph.source_text().to_string(),
    })
}

fn frame<'a>(corpus: &'a SemanticCorpus, id: &str) -> Result<&'a SemanticFrame, GenerationError> {
    corpus.frame(id).ok_or_else(|| GenerationError::DanglingReference(id.to_string()))
}

fn entity_name(corpus: &SemanticCorpus, id: &str) -> Result<String, GenerationError> {
    corpus
        .entities()
        .get(id)
        .map(|e| e.canonical_name.clone())
        .ok_or_else(|| GenerationError::DanglingReference(id.to_string()))
}

fn marker_label(role: &Role) -> String {
    role.raw_label.trim_start_matches(':').to_string()
}

fn partner_of(corpus: &SemanticCorpus, a: &str, b: &str, shared: &[String]) -> Result<Option<String>, GenerationError> {
    let index = corpus.entities();
    let all: BTreeSet<&str> = index.entities_of(a).union(&index.entities_of(b)).copied().collect();
    match all.into_iter().find(|e| !shared.iter().any(|s| s == e)) {
        Some(e) => entity_name(corpus, e).map(Some),
        None => Ok(None),
    }
}

/// Context for a single bridge.
pub fn build_semantic_context(bridge: &Bridge, corpus: &SemanticCorpus) -> Result<SemanticContext, GenerationError> {
    let fa = frame(corpus, &bridge.frame_a)?;
    let fb = frame(corpus, &bridge.frame_b)?;
    let frames = vec![describe(fa, corpus)?, describe(fb, corpus)?];
    let shared_entities = bridge.shared_entities.iter().map(|e| entity_name(corpus, e)).collect::<Result<Vec<_>, _>>()?;

    let mut role_changes = Vec::new();
    let mut marker = None;
    let mut relation = None;
    let mut chain = Vec::new();
    match &bridge.evidence {
        BridgeEvidence::Entity { entity_id, role_a, role_b } => role_changes.push(RoleChange {
            entity_id: entity_id.clone(),
            entity: entity_name(corpus, entity_id)?,
            role_a: role_a.clone(),
            role_b: role_b.clone(),
        }),
        BridgeEvidence::PredicateChain { relation: r, .. } => relation = Some(*r),
        BridgeEvidence::Causal { marker: m, target } => {
            marker = Some(marker_label(m));
            // a predicate under the marker is the upstream cause
            let cause = crate::frames::frame_id(&fa.graph_id, target);
            if let Some(cf) = corpus.frame(&cause) {
                chain = vec![describe(cf, corpus)?.label, frames[0].label.clone(), frames[1].label.clone()];
            }
        }
    }
    Ok(SemanticContext {
        context_id: bridge.bridge_id.clone(),
        bridge_ids: vec![bridge.bridge_id.clone()],
        kind: bridge.kind,
        strength: bridge.total_strength(),
        partner: partner_of(corpus, &fa.frame_id, &fb.frame_id, &bridge.shared_entities)?,
        frames,
        shared_entities,
        role_changes,
        marker,
        relation,
        chain,
        hop_count: 2,
        source_docs: BTreeSet::from([bridge.doc_a.clone(), bridge.doc_b.clone()]).into_iter().collect(),
    })
}

/// Context for a woven path. Kind, marker and relation come from the first
/// bridge; strength is the weakest link.
pub fn build_path_context(path: &ReasoningPath, corpus: &SemanticCorpus) -> Result<SemanticContext, GenerationError> {
    let first = path.bridges.first().ok_or_else(|| GenerationError::DanglingReference("empty path".into()))?;
    let mut ctx = build_semantic_context(first, corpus)?;
    ctx.frames = path.frames.iter().map(|f| frame(corpus, f).and_then(|f| describe(f, corpus))).collect::<Result<_, _>>()?;
    let mut shared = BTreeSet::new();
    let mut role_changes = Vec::new();
    for b in &path.bridges {
        for e in &b.shared_entities {
            shared.insert(entity_name(corpus, e)?);
        }
        if let BridgeEvidence::Entity { entity_id, role_a, role_b } = &b.evidence {
            role_changes.push(RoleChange {
                entity_id: entity_id.clone(),
                entity: entity_name(corpus, entity_id)?,
                role_a: role_a.clone(),
                role_b: role_b.clone(),
            });
        }
    }
    ctx.shared_entities = shared.into_iter().collect();
    ctx.role_changes = role_changes;
    ctx.chain = ctx.frames.iter().map(|f| f.label.clone()).collect();
    ctx.context_id = path.path_id();
    ctx.bridge_ids = path.bridges.iter().map(|b| b.bridge_id.clone()).collect();
    ctx.strength = path.strength();
    ctx.hop_count = path.hop_count;
    ctx.source_docs = path.source_docs();
    Ok(ctx)
}

impl SemanticContext {
    pub fn resolve(&self, placeholder: &str) -> Option<String> {
        let n = self.frames.len();
        match placeholder {
            "entity" => self.role_changes.first().map(|r| r.entity.clone()).or_else(|| self.shared_entities.first().cloned()),
            "frame_a" => self.frames.first().map(|f| f.label.clone()),
            "frame_b" => self.frames.last().map(|f| f.label.clone()),
            "marker" => self.marker.clone(),
            "relation" => self.relation.map(|r| r.to_string()),
            "partner" => self.partner.clone(),
            "path" => (n > 0).then(|| self.frames.iter().map(|f| f.predicate.as_str()).collect::<Vec<_>>().join(" -> ")),
            "chain_first" if self.chain.len() >= 3 => self.chain.first().cloned(),
            "chain_middle" if self.chain.len() >= 3 => Some(self.chain[1..self.chain.len() - 1].join(" and ")),
            "chain_last" if self.chain.len() >= 3 => self.chain.last().cloned(),
            _ => None,
        }
    }

    pub fn difficulty(&self) -> Difficulty {
        Difficulty::from_hops(self.hop_count)
    }

    /// Plain-text rendering for prompts.
    pub fn describe(&self) -> String {
        let mut out = format!("Bridge type: {} (strength {:.3})\n", self.kind, self.strength);
        for (i, f) in self.frames.iter().enumerate() {
            out.push_str(&format!("Frame {}: {} [{}] \"{}\"\n", i + 1, f.detail, f.doc_id, f.sentence));
        }
        if !self.shared_entities.is_empty() {
            out.push_str(&format!("Shared entities: {}\n", self.shared_entities.join(", ")));
        }
        for r in &self.role_changes {
            out.push_str(&format!("Role change: {} {} -> {}\n", r.entity, r.role_a.short(), r.role_b.short()));
        }
        if let Some(m) = &self.marker {
            out.push_str(&format!("Causal marker: {m}\n"));
        }
        if let Some(r) = self.relation {
            out.push_str(&format!("Predicate relation: {r}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Difficulty {
    Easy,
    Medium,
    Hard,
}

impl Difficulty {
    pub fn from_hops(hops: usize) -> Self {
        match hops {
            0..=2 => Difficulty::Easy,
            3 => Difficulty::Medium,
            _ => Difficulty::Hard,
        }
    }
}

// ---------------------------------------------------------------------------
// Templates
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptTemplate {
    /// `kind/category`
    pub template_id: String,
    pub kind: BridgeKind,
    pub category: String,
    pub pattern: String,
}

impl PromptTemplate {
    pub fn placeholders(&self) -> Vec<&str> {
        let mut out = Vec::new();
        let mut rest = self.pattern.as_str();
        while let Some(start) = rest.find('{') {
            let Some(len) = rest[start..].find('}') else { break };
            out.push(&rest[start + 1..start + len]);
            rest = &rest[start + len + 1..];
        }
        out
    }

    pub fn render(&self, ctx: &SemanticContext) -> Result<String, GenerationError> {
        let mut out = self.pattern.clone();
        for p in self.placeholders() {
            let value = ctx.resolve(p).ok_or_else(|| GenerationError::UnresolvedPlaceholder {
                template_id: self.template_id.clone(),
                placeholder: p.to_string(),
            })?;
            out = out.replacen(&format!("{{{p}}}"), &value, 1);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TemplateSet {
    templates: Vec<PromptTemplate>,
}

fn allowed_for(kind: BridgeKind, placeholder: &str) -> bool {
    match placeholder {
        "marker" => kind == BridgeKind::Causal,
        "relation" => kind == BridgeKind::PredicateChain,
        p => PLACEHOLDERS.contains(&p),
    }
}

impl TemplateSet {
    /// Parses `kind: <kind>` headers followed by `category = pattern` lines.
    pub fn parse(text: &str) -> Result<Self, GenerationError> {
        let mut set = TemplateSet::default();
        let mut kind = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |message: String| GenerationError::TemplateParse { line: i + 1, message };
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(k) = line.strip_prefix("kind:") {
                kind = Some(k.trim().parse::<BridgeKind>().map_err(err)?);
                continue;
            }
            let k = kind.ok_or_else(|| err("template before any `kind:` header".into()))?;
            let (category, pattern) = line.split_once('=').ok_or_else(|| err("expected `category = pattern`".into()))?;
            let (category, pattern) = (category.trim(), pattern.trim());
            if category.is_empty() || pattern.is_empty() {
                return Err(err("empty category or pattern".into()));
            }
            let t = PromptTemplate {
                template_id: format!("{k}/{category}"),
                kind: k,
                category: category.to_string(),
                pattern: pattern.to_string(),
            };
            if let Some(bad) = t.placeholders().into_iter().find(|p| !allowed_for(k, p)) {
                return Err(err(format!("placeholder {{{bad}}} cannot resolve for {k} bridges")));
            }
            set.templates.push(t);
        }
        Ok(set)
    }

    pub fn shipped() -> Self {
        Self::parse(SHIPPED_TEMPLATES).expect("shipped templates parse")
    }

    pub fn for_kind(&self, kind: BridgeKind) -> impl Iterator<Item = &PromptTemplate> {
        self.templates.iter().filter(move |t| t.kind == kind)
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }
}

fn stable_hash(s: &str) -> u64 {
    let digest = Sha256::digest(s.as_bytes());
    u64::from_be_bytes(digest[..8].try_into().expect("8 bytes"))
}

/// Renders the first resolvable template, starting from a position picked
/// by hashing the context id.
pub fn render_prompt<'t>(ctx: &SemanticContext, templates: &'t TemplateSet) -> Result<(String, &'t PromptTemplate), GenerationError> {
    let candidates: Vec<&PromptTemplate> = templates.for_kind(ctx.kind).collect();
    if candidates.is_empty() {
        return Err(GenerationError::NoTemplateForKind(ctx.kind));
    }
    let start = (stable_hash(&ctx.context_id) % candidates.len() as u64) as usize;
    let mut first_err = None;
    for i in 0..candidates.len() {
        let t = candidates[(start + i) % candidates.len()];
        match t.render(ctx) {
            Ok(s) => return Ok((s, t)),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.expect("at least one template tried"))
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

/// Text completion service.
pub trait CompletionClient: Send + Sync {
    fn complete(&self, prompt: &str) -> Result<String, GenerationError>;

    fn model(&self) -> &str;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LlmConfig {
    #[serde(flatten)]
    pub endpoint: Endpoint,
    pub model: String,
    pub max_tokens: u32,
    pub temperature: f64,
}

impl Default for LlmConfig {
    fn default() -> Self {
        LlmConfig { endpoint: Endpoint::default(), model: String::new(), max_tokens: 256, temperature: 0.7 }
    }
}

/// POSTs `{model, prompt, max_tokens, temperature}` and reads `{text}`.
pub struct HttpCompletionClient {
    pub config: LlmConfig,
}

impl CompletionClient for HttpCompletionClient {
    fn complete(&self, prompt: &str) -> Result<String, GenerationError> {
        let body = json!({
            "model": self.config.model,
            "prompt": prompt,
            "max_tokens": self.config.max_tokens,
            "temperature": self.config.temperature,
        });
        self.config.endpoint.post_for_text(&body).map_err(GenerationError::LlmRequestFailed)
    }

    fn model(&self) -> &str {
        &self.config.model
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenerationMode {
    Llm,
    Template,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedQA {
    pub question: String,
    pub answer: String,
    pub bridge_id: String,
    pub bridges: Vec<String>,
    pub bridge_type: BridgeKind,
    pub strength: f64,
    pub hop_count: usize,
    pub source_docs: Vec<String>,
    pub generation_mode: GenerationMode,
    pub template_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    pub difficulty: Difficulty,
    pub question_type: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback_reason: Option<String>,
}

/// Answer grounded in the bridge evidence.
pub fn template_answer(ctx: &SemanticContext) -> String {
    let last = ctx.frames.last().map(|f| f.label.as_str()).unwrap_or_default();
    let first = ctx.frames.first().map(|f| f.predicate.as_str()).unwrap_or_default();
    if ctx.hop_count > 2 {
        let route = ctx.resolve("path").unwrap_or_default();
        return format!("{last}, reached via {route}.");
    }
    match ctx.kind {
        BridgeKind::Entity => match ctx.role_changes.first() {
            Some(r) => format!(
                "{} is {} of {} and {} of {}.",
                r.entity,
                r.role_a.short(),
                first,
                r.role_b.short(),
                ctx.frames.last().map(|f| f.predicate.as_str()).unwrap_or_default()
            ),
            None => format!("{} links {first} and {last}.", ctx.shared_entities.join(", ")),
        },
        BridgeKind::PredicateChain => format!(
            "{last}, linked to {first} by a {} relation through {}.",
            ctx.relation.map(|r| r.to_string()).unwrap_or_default(),
            ctx.shared_entities.join(", ")
        ),
        BridgeKind::Causal => match ctx.chain.first() {
            Some(cause) if ctx.chain.len() >= 3 => {
                format!("{last}, driven by {cause} through the {} argument of {first}.", ctx.marker.as_deref().unwrap_or("causal"))
            }
            _ => format!("{last}, explained by the {} argument of {first}.", ctx.marker.as_deref().unwrap_or("causal")),
        },
    }
}

pub fn build_llm_prompt(ctx: &SemanticContext, seed_question: &str) -> String {
    format!(
        "Write one multi-hop question that requires combining the frames below, and its answer.\n\
         {}Example question: {seed_question}\n\
         Reply with exactly two labeled lines:\nQuestion: <question>\nAnswer: <answer>\n",
        ctx.describe()
    )
}

/// Extracts `Question:` and `Answer:` lines, ignoring other prose.
pub fn parse_llm_response(text: &str) -> Option<(String, String)> {
    let mut question = None;
    let mut answer = None;
    for line in text.lines() {
        let line = line.trim().trim_start_matches(['*', '-', ' ']);
        let lower = line.to_ascii_lowercase();
        if question.is_none() && lower.starts_with("question:") {
            question = Some(line["question:".len()..].trim_matches(|c: char| c == '*' || c.is_whitespace()).to_string());
        } else if answer.is_none() && lower.starts_with("answer:") {
            answer = Some(line["answer:".len()..].trim_matches(|c: char| c == '*' || c.is_whitespace()).to_string());
        }
    }
    match (question, answer) {
        (Some(q), Some(a)) if !q.is_empty() && !a.is_empty() => Some((q, a)),
        _ => None,
    }
}

/// LLM generation when a client is given, template generation otherwise or
/// on any LLM failure.
pub fn generate_question(
    ctx: &SemanticContext,
    client: Option<&dyn CompletionClient>,
    templates: &TemplateSet,
) -> Result<GeneratedQA, GenerationError> {
    let (seed, template) = render_prompt(ctx, templates)?;
    let mut qa = GeneratedQA {
        question: seed.clone(),
        answer: template_answer(ctx),
        bridge_id: ctx.context_id.clone(),
        bridges: ctx.bridge_ids.clone(),
        bridge_type: ctx.kind,
        strength: ctx.strength,
        hop_count: ctx.hop_count,
        source_docs: ctx.source_docs.clone(),
        generation_mode: GenerationMode::Template,
        template_id: template.template_id.clone(),
        model: None,
        difficulty: ctx.difficulty(),
        question_type: template.category.clone(),
        fallback_reason: None,
    };
    let Some(client) = client else { return Ok(qa) };
    let outcome = client
        .complete(&build_llm_prompt(ctx, &seed))
        .and_then(|text| parse_llm_response(&text).ok_or_else(|| GenerationError::LlmRequestFailed("malformed completion".into())));
    match outcome {
        Ok((q, a)) => {
            qa.question = q;
            qa.answer = a;
            qa.generation_mode = GenerationMode::Llm;
            qa.model = Some(client.model().to_string());
        }
        Err(e) => {
            log::warn!("falling back to template for {}: {e}", ctx.context_id);
            qa.fallback_reason = Some(e.to_string());
        }
    }
    Ok(qa)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenerationConfig {
    pub max_questions: Option<usize>,
    /// Per-kind caps; kinds without an entry are uncapped.
    pub quotas: BTreeMap<BridgeKind, usize>,
    pub include_paths: bool,
    pub max_path_frames: usize,
    pub max_in_flight: usize,
    pub llm: Option<LlmConfig>,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            max_questions: None,
            quotas: BTreeMap::new(),
            include_paths: true,
            max_path_frames: 4,
            max_in_flight: 4,
            llm: None,
        }
    }
}

/// Picks contexts by strength (then hop count, then id) under the quotas
/// and the overall cap, generates one QA each, and drops exact duplicate
/// questions.
pub fn synthesize_corpus(
    bridges: &[Bridge],
    paths: &[ReasoningPath],
    corpus: &SemanticCorpus,
    templates: &TemplateSet,
    client: Option<&dyn CompletionClient>,
    config: &GenerationConfig,
) -> Result<Vec<GeneratedQA>, GenerationError> {
    let cap = config.max_questions.unwrap_or(usize::MAX);
    if cap == 0 {
        return Ok(Vec::new());
    }
    let mut contexts = bridges.iter().map(|b| build_semantic_context(b, corpus)).collect::<Result<Vec<_>, _>>()?;
    if config.include_paths {
        for p in paths.iter().filter(|p| p.hop_count > 2) {
            contexts.push(build_path_context(p, corpus)?);
        }
    }
    contexts.sort_by(|a, b| {
        b.strength
            .total_cmp(&a.strength)
            .then(a.hop_count.cmp(&b.hop_count))
            .then_with(|| a.context_id.cmp(&b.context_id))
    });

    let mut used: BTreeMap<BridgeKind, usize> = BTreeMap::new();
    let mut selected = Vec::new();
    for ctx in contexts {
        if selected.len() >= cap {
            break;
        }
        let n = used.entry(ctx.kind).or_default();
        if config.quotas.get(&ctx.kind).is_some_and(|q| *n >= *q) {
            continue;
        }
        *n += 1;
        selected.push(ctx);
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.max_in_flight.max(1))
        .build()
        .map_err(|e| GenerationError::LlmRequestFailed(e.to_string()))?;
    let generated: Vec<GeneratedQA> = pool.install(|| {
        selected.par_iter().map(|ctx| generate_question(ctx, client, templates)).collect::<Result<Vec<_>, _>>()
    })?;
    let mut seen = HashSet::new();
    Ok(generated.into_iter().filter(|qa| seen.insert(qa.question.clone())).collect())
}
