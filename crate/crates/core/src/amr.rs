//! AMR graphs in PENMAN notation.
//!
//! A graph is a rooted DAG of variables (each carrying a concept label) plus
//! leaf constants. Re-entrancies reference an already-declared variable, and
//! directed cycles are rejected at construction so that depth and traversal
//! stay total.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmrError {
    #[error("empty PENMAN input")]
    EmptyInput,
    #[error("unbalanced parentheses at byte {pos}")]
    UnbalancedParens { pos: usize },
    #[error("variable `{var}` is assigned a concept more than once")]
    DuplicateConceptForVariable { var: String },
    #[error("variable `{var}` is referenced but never declared")]
    DanglingReference { var: String },
    #[error("directed cycle through variable `{var}`")]
    Cycle { var: String },
    #[error("node `{var}` is not reachable from the root")]
    Unreachable { var: String },
    #[error("malformed role label `{0}` (expected a leading `:`)")]
    MalformedLabel(String),
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
}

/// A leaf value: quoted string or bare symbol (numbers, `-`, `+`, modes).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Constant {
    pub value: String,
    #[serde(default)]
    pub quoted: bool,
}

impl Constant {
    pub fn quoted(value: impl Into<String>) -> Self {
        Constant { value: value.into(), quoted: true }
    }

    pub fn symbol(value: impl Into<String>) -> Self {
        Constant { value: value.into(), quoted: false }
    }

    fn write_penman(&self, out: &mut String) {
        if self.quoted {
            out.push('"');
            for c in self.value.chars() {
                if c == '"' || c == '\\' {
                    out.push('\\');
                }
                out.push(c);
            }
            out.push('"');
        } else {
            out.push_str(&self.value);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Node(String),
    Constant(Constant),
}

impl Target {
    pub fn as_node(&self) -> Option<&str> {
        match self {
            Target::Node(v) => Some(v),
            Target::Constant(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub source: String,
    pub role: String,
    pub target: Target,
}

impl Edge {
    pub fn new(source: impl Into<String>, role: impl Into<String>, target: Target) -> Self {
        Edge { source: source.into(), role: role.into(), target }
    }
}

#[derive(Debug, Deserialize)]
struct RawGraph {
    graph_id: String,
    doc_id: String,
    #[serde(default)]
    source_text: String,
    root: String,
    nodes: BTreeMap<String, String>,
    edges: Vec<Edge>,
}

/// A validated AMR graph. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct AmrGraph {
    graph_id: String,
    doc_id: String,
    source_text: String,
    root: String,
    nodes: BTreeMap<String, String>,
    edges: Vec<Edge>,
}

impl TryFrom<RawGraph> for AmrGraph {
    type Error = AmrError;

    fn try_from(raw: RawGraph) -> Result<Self, Self::Error> {
        AmrGraph::new(raw.graph_id, raw.doc_id, raw.source_text, raw.root, raw.nodes, raw.edges)
    }
}

impl AmrGraph {
    /// Builds a graph, checking root presence, label shape, declared
    /// targets, reachability and acyclicity.
    pub fn new(
        graph_id: impl Into<String>,
        doc_id: impl Into<String>,
        source_text: impl Into<String>,
        root: impl Into<String>,
        nodes: BTreeMap<String, String>,
        edges: Vec<Edge>,
    ) -> Result<Self, AmrError> {
        let graph = AmrGraph {
            graph_id: graph_id.into(),
            doc_id: doc_id.into(),
            source_text: source_text.into(),
            root: root.into(),
            nodes,
            edges,
        };
        graph.validate()?;
        Ok(graph)
    }

    fn validate(&self) -> Result<(), AmrError> {
        if !self.nodes.contains_key(&self.root) {
            return Err(AmrError::DanglingReference { var: self.root.clone() });
        }
        for edge in &self.edges {
            if !edge.role.starts_with(':') || edge.role.len() < 2 {
                return Err(AmrError::MalformedLabel(edge.role.clone()));
            }
            if !self.nodes.contains_key(&edge.source) {
                return Err(AmrError::DanglingReference { var: edge.source.clone() });
            }
            if let Target::Node(v) = &edge.target {
                if !self.nodes.contains_key(v) {
                    return Err(AmrError::DanglingReference { var: v.clone() });
                }
            }
        }

        // Iterative three-colour DFS: detects cycles and marks reachability.
        let adjacency = self.adjacency();
        let mut state: HashMap<&str, u8> = HashMap::new();
        let mut stack: Vec<(&str, usize)> = vec![(self.root.as_str(), 0)];
        state.insert(self.root.as_str(), 1);
        while let Some((node, next)) = stack.pop() {
            let children = adjacency.get(node).map(Vec::as_slice).unwrap_or(&[]);
            if next < children.len() {
                stack.push((node, next + 1));
                let child = children[next];
                match state.get(child) {
                    Some(1) => return Err(AmrError::Cycle { var: child.to_string() }),
                    Some(_) => {}
                    None => {
                        state.insert(child, 1);
                        stack.push((child, 0));
                    }
                }
            } else {
                state.insert(node, 2);
            }
        }
        if let Some(var) = self.nodes.keys().find(|v| !state.contains_key(v.as_str())) {
            return Err(AmrError::Unreachable { var: var.clone() });
        }
        Ok(())
    }

    fn adjacency(&self) -> HashMap<&str, Vec<&str>> {
        let mut adjacency: HashMap<&str, Vec<&str>> = HashMap::new();
        for edge in &self.edges {
            if let Target::Node(v) = &edge.target {
                adjacency.entry(edge.source.as_str()).or_default().push(v.as_str());
            }
        }
        adjacency
    }

    pub fn graph_id(&self) -> &str {
        &self.graph_id
    }

    pub fn doc_id(&self) -> &str {
        &self.doc_id
    }

    pub fn source_text(&self) -> &str {
        &self.source_text
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn nodes(&self) -> &BTreeMap<String, String> {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn concept(&self, var: &str) -> Option<&str> {
        self.nodes.get(var).map(String::as_str)
    }

    pub fn out_edges<'a>(&'a self, var: &'a str) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| e.source == var)
    }

    /// Same graph under a different identity (used when the corpus record,
    /// not the PENMAN metadata, decides the ids).
    pub fn with_ids(mut self, graph_id: impl Into<String>, doc_id: impl Into<String>) -> Self {
        self.graph_id = graph_id.into();
        self.doc_id = doc_id.into();
        self
    }

    pub fn with_source_text(mut self, text: impl Into<String>) -> Self {
        self.source_text = text.into();
        self
    }

    /// Single-line PENMAN serialization.
    pub fn to_penman(&self) -> String {
        serialize_penman(self)
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Slash,
    Role(String),
    Quoted(String),
    Symbol(String),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, AmrError> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                tokens.push((pos, Token::Open));
            }
            ')' => {
                chars.next();
                tokens.push((pos, Token::Close));
            }
            '/' => {
                chars.next();
                tokens.push((pos, Token::Slash));
            }
            '"' => {
                chars.next();
                let mut value = String::new();
                let mut closed = false;
                while let Some((_, c)) = chars.next() {
                    match c {
                        '\\' => {
                            if let Some((_, escaped)) = chars.next() {
                                value.push(escaped);
                            }
                        }
                        '"' => {
                            closed = true;
                            break;
                        }
                        c => value.push(c),
                    }
                }
                if !closed {
                    return Err(AmrError::Syntax { pos, message: "unterminated string".into() });
                }
                tokens.push((pos, Token::Quoted(value)));
            }
            _ => {
                let mut symbol = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '"' | '/') {
                        break;
                    }
                    symbol.push(c);
                    chars.next();
                }
                if let Some(label) = symbol.strip_prefix(':') {
                    if label.is_empty() {
                        return Err(AmrError::Syntax { pos, message: "empty role label".into() });
                    }
                    tokens.push((pos, Token::Role(symbol)));
                } else {
                    tokens.push((pos, Token::Symbol(symbol)));
                }
            }
        }
    }
    Ok(tokens)
}

/// Bare symbols that are constants rather than variable references.
fn is_symbolic_constant(symbol: &str) -> bool {
    matches!(symbol, "-" | "+" | "imperative" | "expressive" | "interrogative")
        || symbol.parse::<f64>().is_ok()
}

enum PendingTarget {
    Node(String),
    Constant(Constant),
    Symbol(String),
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    nodes: BTreeMap<String, String>,
    edges: Vec<(String, String, PendingTarget)>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Token> {
        let token = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        token
    }

    fn syntax(&self, message: impl Into<String>) -> AmrError {
        AmrError::Syntax { pos: self.offset(), message: message.into() }
    }

    fn node(&mut self) -> Result<String, AmrError> {
        match self.next() {
            Some(Token::Open) => {}
            _ => return Err(self.syntax("expected `(`")),
        }
        let var = match self.next() {
            Some(Token::Symbol(s)) => s,
            _ => return Err(self.syntax("expected variable")),
        };
        match self.next() {
            Some(Token::Slash) => {}
            _ => return Err(self.syntax(format!("expected `/` after variable `{var}`"))),
        }
        let concept = match self.next() {
            Some(Token::Symbol(s)) => s,
            Some(Token::Quoted(s)) => s,
            _ => return Err(self.syntax(format!("expected concept for `{var}`"))),
        };
        if self.nodes.insert(var.clone(), concept).is_some() {
            return Err(AmrError::DuplicateConceptForVariable { var });
        }
        loop {
            match self.peek() {
                Some(Token::Close) => {
                    self.next();
                    return Ok(var);
                }
                Some(Token::Role(_)) => {
                    let Some(Token::Role(role)) = self.next() else { unreachable!() };
                    // reserve the slot so edges stay in document order
                    let slot = self.edges.len();
                    self.edges.push((var.clone(), role.clone(), PendingTarget::Symbol(String::new())));
                    let target = match self.peek() {
                        Some(Token::Open) => PendingTarget::Node(self.node()?),
                        Some(Token::Quoted(_)) => {
                            let Some(Token::Quoted(s)) = self.next() else { unreachable!() };
                            PendingTarget::Constant(Constant::quoted(s))
                        }
                        Some(Token::Symbol(_)) => {
                            let Some(Token::Symbol(s)) = self.next() else { unreachable!() };
                            PendingTarget::Symbol(s)
                        }
                        None => {
                            return Err(AmrError::UnbalancedParens { pos: self.end });
                        }
                        _ => return Err(self.syntax(format!("missing value for role {role}"))),
                    };
                    self.edges[slot].2 = target;
                }
                None => return Err(AmrError::UnbalancedParens { pos: self.end }),
                _ => return Err(self.syntax("expected role or `)`")),
            }
        }
    }
}

/// Parses one PENMAN graph. Leading `#` comment lines are ignored here; use
/// [`read_penman_blocks`] to recover their metadata.
pub fn parse_penman(text: &str, graph_id: &str, doc_id: &str) -> Result<AmrGraph, AmrError> {
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n");
    if body.trim().is_empty() {
        return Err(AmrError::EmptyInput);
    }

    let mut depth: i64 = 0;
    for (pos, c) in body.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(AmrError::UnbalancedParens { pos });
                }
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(AmrError::UnbalancedParens { pos: body.len() });
    }

    let tokens = tokenize(&body)?;
    let mut parser = Parser { tokens, pos: 0, end: body.len(), nodes: BTreeMap::new(), edges: Vec::new() };
    let root = parser.node()?;
    if parser.pos < parser.tokens.len() {
        return Err(parser.syntax("trailing content after graph"));
    }

    let Parser { nodes, edges, .. } = parser;
    let edges = edges
        .into_iter()
        .map(|(source, role, target)| {
            let target = match target {
                PendingTarget::Node(v) => Target::Node(v),
                PendingTarget::Constant(c) => Target::Constant(c),
                PendingTarget::Symbol(s) if nodes.contains_key(&s) => Target::Node(s),
                PendingTarget::Symbol(s) if is_symbolic_constant(&s) => Target::Constant(Constant::symbol(s)),
                PendingTarget::Symbol(s) => return Err(AmrError::DanglingReference { var: s }),
            };
            Ok(Edge { source, role, target })
        })
        .collect::<Result<Vec<_>, _>>()?;

    AmrGraph::new(graph_id, doc_id, "", root, nodes, edges)
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Emits the graph as single-line PENMAN. Each concept is declared at the
/// first visit in depth-first edge order; later visits are bare references.
pub fn serialize_penman(graph: &AmrGraph) -> String {
    let mut out = String::new();
    let mut declared = BTreeSet::new();
    write_node(graph, graph.root(), &mut declared, &mut out, None);
    out
}

/// Multi-line PENMAN with six-space indentation per level.
pub fn serialize_penman_pretty(graph: &AmrGraph) -> String {
    let mut out = String::new();
    let mut declared = BTreeSet::new();
    write_node(graph, graph.root(), &mut declared, &mut out, Some(0));
    out
}

fn write_node<'a>(
    graph: &'a AmrGraph,
    var: &'a str,
    declared: &mut BTreeSet<&'a str>,
    out: &mut String,
    indent: Option<usize>,
) {
    declared.insert(var);
    out.push('(');
    out.push_str(var);
    out.push_str(" / ");
    out.push_str(graph.concept(var).unwrap_or_default());
    for edge in graph.out_edges(var) {
        match indent {
            Some(level) => {
                out.push('\n');
                out.push_str(&" ".repeat(6 * (level + 1)));
            }
            None => out.push(' '),
        }
        out.push_str(&edge.role);
        out.push(' ');
        match &edge.target {
            Target::Constant(c) => c.write_penman(out),
            Target::Node(v) if declared.contains(v.as_str()) => out.push_str(v),
            Target::Node(v) => write_node(graph, v, declared, out, indent.map(|l| l + 1)),
        }
    }
    out.push(')');
}

// ---------------------------------------------------------------------------
// Depth
// ---------------------------------------------------------------------------

/// Longest directed path (in edges) from the root. Constants count as one
/// edge-step leaves.
pub fn graph_depth(graph: &AmrGraph) -> usize {
    node_depth(graph, graph.root())
}

/// Longest directed path (in edges) starting at `var`.
pub fn node_depth(graph: &AmrGraph, var: &str) -> usize {
    let mut memo = HashMap::new();
    depth_memo(graph, var, &mut memo)
}

fn depth_memo<'a>(graph: &'a AmrGraph, var: &'a str, memo: &mut HashMap<&'a str, usize>) -> usize {
    if let Some(&d) = memo.get(var) {
        return d;
    }
    let mut best = 0;
    for edge in graph.out_edges(var) {
        let below = match &edge.target {
            Target::Constant(_) => 0,
            Target::Node(v) => depth_memo(graph, v, memo),
        };
        best = best.max(below + 1);
    }
    memo.insert(var, best);
    best
}

// ---------------------------------------------------------------------------
// Roles
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NonCoreKind {
    Tmp,
    Cau,
    Loc,
    Prp,
    Mnr,
    Adv,
    Condition,
    Other(String),
}

impl NonCoreKind {
    pub fn is_causal_marker(&self) -> bool {
        matches!(self, NonCoreKind::Cau | NonCoreKind::Condition | NonCoreKind::Prp)
    }
}

impl fmt::Display for NonCoreKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonCoreKind::Tmp => f.write_str("TMP"),
            NonCoreKind::Cau => f.write_str("CAU"),
            NonCoreKind::Loc => f.write_str("LOC"),
            NonCoreKind::Prp => f.write_str("PRP"),
            NonCoreKind::Mnr => f.write_str("MNR"),
            NonCoreKind::Adv => f.write_str("ADV"),
            NonCoreKind::Condition => f.write_str("condition"),
            NonCoreKind::Other(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModifierKind {
    Mod,
    Domain,
    Poss,
    Name,
    Quant,
    Polarity,
    Degree,
}

impl fmt::Display for ModifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModifierKind::Mod => "mod",
            ModifierKind::Domain => "domain",
            ModifierKind::Poss => "poss",
            ModifierKind::Name => "name",
            ModifierKind::Quant => "quant",
            ModifierKind::Polarity => "polarity",
            ModifierKind::Degree => "degree",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RoleCategory {
    CoreArg(u8),
    NonCore(NonCoreKind),
    Modifier(ModifierKind),
    Attribute,
}

/// A classified edge label. Serializes as its raw label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Role {
    pub category: RoleCategory,
    pub raw_label: String,
}

impl Role {
    /// Short display form: `ARG0`, `CAU`, `mod`, or the bare attribute label.
    pub fn short(&self) -> String {
        match &self.category {
            RoleCategory::CoreArg(i) => format!("ARG{i}"),
            RoleCategory::NonCore(k) => k.to_string(),
            RoleCategory::Modifier(k) => k.to_string(),
            RoleCategory::Attribute => self.raw_label.trim_start_matches(':').to_string(),
        }
    }

    pub fn attribute(raw_label: impl Into<String>) -> Self {
        Role { category: RoleCategory::Attribute, raw_label: raw_label.into() }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw_label)
    }
}

impl Serialize for Role {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.raw_label)
    }
}

impl<'de> Deserialize<'de> for Role {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        classify_role(&raw).map_err(serde::de::Error::custom)
    }
}

/// Classifies a raw edge label. Total over well-formed labels: anything not
/// recognised is an `Attribute`.
pub fn classify_role(raw_label: &str) -> Result<Role, AmrError> {
    let Some(label) = raw_label.strip_prefix(':').filter(|l| !l.is_empty()) else {
        return Err(AmrError::MalformedLabel(raw_label.to_string()));
    };
    let category = if let Some(kind) = label.strip_prefix("ARGM-") {
        RoleCategory::NonCore(match kind {
            "TMP" => NonCoreKind::Tmp,
            "CAU" => NonCoreKind::Cau,
            "LOC" => NonCoreKind::Loc,
            "PRP" | "PNC" => NonCoreKind::Prp,
            "MNR" => NonCoreKind::Mnr,
            "ADV" => NonCoreKind::Adv,
            "CND" | "COND" => NonCoreKind::Condition,
            other => NonCoreKind::Other(other.to_string()),
        })
    } else {
        match label {
            "ARG0" | "ARG1" | "ARG2" | "ARG3" | "ARG4" | "ARG5" => {
                RoleCategory::CoreArg(label.as_bytes()[3] - b'0')
            }
            "time" => RoleCategory::NonCore(NonCoreKind::Tmp),
            "cause" => RoleCategory::NonCore(NonCoreKind::Cau),
            "location" => RoleCategory::NonCore(NonCoreKind::Loc),
            "purpose" => RoleCategory::NonCore(NonCoreKind::Prp),
            "manner" => RoleCategory::NonCore(NonCoreKind::Mnr),
            "condition" => RoleCategory::NonCore(NonCoreKind::Condition),
            "mod" => RoleCategory::Modifier(ModifierKind::Mod),
            "domain" => RoleCategory::Modifier(ModifierKind::Domain),
            "poss" => RoleCategory::Modifier(ModifierKind::Poss),
            "name" => RoleCategory::Modifier(ModifierKind::Name),
            "quant" => RoleCategory::Modifier(ModifierKind::Quant),
            "polarity" => RoleCategory::Modifier(ModifierKind::Polarity),
            "degree" => RoleCategory::Modifier(ModifierKind::Degree),
            _ => RoleCategory::Attribute,
        }
    };
    Ok(Role { category, raw_label: raw_label.to_string() })
}

// ---------------------------------------------------------------------------
// Multi-graph files
// ---------------------------------------------------------------------------

/// One blank-line-separated block of a PENMAN file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PenmanBlock {
    /// `::key value` pairs from the leading `#` lines.
    pub metadata: BTreeMap<String, String>,
    pub penman: String,
    /// 1-based line where the block starts.
    pub line: usize,
}

impl PenmanBlock {
    pub fn id(&self) -> Option<&str> {
        self.metadata.get("id").map(String::as_str)
    }

    pub fn sentence(&self) -> Option<&str> {
        self.metadata.get("snt").map(String::as_str)
    }
}

fn parse_metadata_line(line: &str, into: &mut BTreeMap<String, String>) {
    let body = line.trim_start_matches('#');
    for chunk in body.split("::").skip(1) {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        let (key, value) = chunk.split_once(char::is_whitespace).unwrap_or((chunk, ""));
        into.insert(key.to_string(), value.trim().to_string());
    }
}

/// Splits a PENMAN file into blocks. Blocks without any graph text (pure
/// comment blocks) are dropped.
pub fn read_penman_blocks(text: &str) -> Vec<PenmanBlock> {
    let mut blocks = Vec::new();
    let mut metadata = BTreeMap::new();
    let mut body = String::new();
    let mut start = 0;

    let mut flush = |metadata: &mut BTreeMap<String, String>, body: &mut String, start: usize| {
        if !body.trim().is_empty() {
            blocks.push(PenmanBlock {
                metadata: std::mem::take(metadata),
                penman: std::mem::take(body).trim().to_string(),
                line: start,
            });
        }
        metadata.clear();
        body.clear();
    };

    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            flush(&mut metadata, &mut body, start);
            continue;
        }
        if metadata.is_empty() && body.is_empty() {
            start = idx + 1;
        }
        if trimmed.starts_with('#') {
            if body.is_empty() {
                parse_metadata_line(trimmed, &mut metadata);
            }
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    flush(&mut metadata, &mut body, start);
    blocks
}
