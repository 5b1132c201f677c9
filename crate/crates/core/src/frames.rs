//! Semantic frame and entity extraction.
//!
//! Every predicate node (a concept carrying a sense suffix such as
//! `announce-01`) yields one frame. Each outgoing edge is filed under core
//! arguments, non-core arguments or modifiers according to its role class;
//! attribute edges land among the modifiers so frames stay lossless.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::amr::{self, AmrGraph, Role, RoleCategory, Target};

pub type FrameId = String;
pub type EntityId = String;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemanticFrame {
    pub frame_id: FrameId,
    pub doc_id: String,
    pub graph_id: String,
    /// Variable of the predicate node inside its graph.
    pub node: String,
    pub predicate: String,
    pub core_args: BTreeMap<u8, Target>,
    pub non_core_args: Vec<(Role, Target)>,
    pub modifiers: Vec<(Role, Target)>,
    pub depth: usize,
}

impl SemanticFrame {
    /// Non-core arguments whose kind marks causation, condition or purpose.
    pub fn causal_markers(&self) -> impl Iterator<Item = &(Role, Target)> {
        self.non_core_args
            .iter()
            .filter(|(role, _)| matches!(&role.category, RoleCategory::NonCore(k) if k.is_causal_marker()))
    }

    /// Number of filled slots plus depth.
    pub fn complexity(&self) -> usize {
        self.core_args.len() + self.non_core_args.len() + self.modifiers.len() + self.depth
    }

    pub fn core_role(index: u8) -> Role {
        Role { category: RoleCategory::CoreArg(index), raw_label: format!(":ARG{index}") }
    }
}

/// True for concepts of the form `lemma-NN`.
pub fn is_predicate(concept: &str) -> bool {
    match concept.rsplit_once('-') {
        Some((lemma, sense)) => !lemma.is_empty() && !sense.is_empty() && sense.bytes().all(|b| b.is_ascii_digit()),
        None => false,
    }
}

pub fn frame_id(graph_id: &str, node: &str) -> FrameId {
    format!("{graph_id}/{node}")
}

pub fn extract_frames(graph: &AmrGraph) -> Vec<SemanticFrame> {
    let mut frames = Vec::new();
    for (node, concept) in graph.nodes() {
        if !is_predicate(concept) {
            continue;
        }
        let mut frame = SemanticFrame {
            frame_id: frame_id(graph.graph_id(), node),
            doc_id: graph.doc_id().to_string(),
            graph_id: graph.graph_id().to_string(),
            node: node.clone(),
            predicate: concept.clone(),
            core_args: BTreeMap::new(),
            non_core_args: Vec::new(),
            modifiers: Vec::new(),
            depth: amr::node_depth(graph, node),
        };
        for edge in graph.out_edges(node) {
            let role = amr::classify_role(&edge.role).expect("role labels are validated at graph construction");
            let target = edge.target.clone();
            match role.category {
                RoleCategory::CoreArg(i) => {
                    if frame.core_args.contains_key(&i) {
                        // a repeated core index is kept as an attribute
                        frame.modifiers.push((Role::attribute(role.raw_label), target));
                    } else {
                        frame.core_args.insert(i, target);
                    }
                }
                RoleCategory::NonCore(_) => frame.non_core_args.push((role, target)),
                RoleCategory::Modifier(_) | RoleCategory::Attribute => frame.modifiers.push((role, target)),
            }
        }
        frames.push(frame);
    }
    frames
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mention {
    pub frame_id: FrameId,
    pub role: Role,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub entity_id: EntityId,
    pub canonical_name: String,
    pub concept: String,
    /// Whether the name came from a `:name` subtree.
    pub named: bool,
    pub mentions: Vec<Mention>,
}

pub fn entity_id(canonical_name: &str, concept: &str) -> EntityId {
    format!("{concept}:{canonical_name}")
}

/// Surface name from a `:name` subtree (its `:opN` constants in index
/// order), if any.
pub fn name_of(graph: &AmrGraph, node: &str) -> Option<String> {
    let name_node = graph.out_edges(node).find_map(|e| match (&e.role[..], &e.target) {
        (":name", Target::Node(n)) => Some(n.as_str()),
        _ => None,
    })?;
    let mut parts: Vec<(u32, String)> = graph
        .out_edges(name_node)
        .filter_map(|e| {
            let index = e.role.strip_prefix(":op")?.parse::<u32>().ok()?;
            match &e.target {
                Target::Constant(c) => Some((index, c.value.clone())),
                Target::Node(v) => Some((index, graph.concept(v)?.to_string())),
            }
        })
        .collect();
    if parts.is_empty() {
        return None;
    }
    parts.sort_by_key(|(i, _)| *i);
    Some(parts.into_iter().map(|(_, s)| s).collect::<Vec<_>>().join(" "))
}

/// One entity per non-predicate node found among the frames' core
/// arguments, merged on (canonical name, concept).
pub fn extract_entities(graph: &AmrGraph, frames: &[SemanticFrame]) -> Vec<Entity> {
    let mut by_key: BTreeMap<EntityId, Entity> = BTreeMap::new();
    for frame in frames {
        for (&index, target) in &frame.core_args {
            let Target::Node(node) = target else { continue };
            let Some(concept) = graph.concept(node) else { continue };
            if is_predicate(concept) {
                continue;
            }
            let name = name_of(graph, node);
            let named = name.is_some();
            let canonical_name = name.unwrap_or_else(|| concept.to_string());
            let id = entity_id(&canonical_name, concept);
            let entity = by_key.entry(id.clone()).or_insert_with(|| Entity {
                entity_id: id,
                canonical_name,
                concept: concept.to_string(),
                named,
                mentions: Vec::new(),
            });
            entity.mentions.push(Mention { frame_id: frame.frame_id.clone(), role: SemanticFrame::core_role(index) });
        }
    }
    let mut entities: Vec<Entity> = by_key.into_values().collect();
    for e in &mut entities {
        e.mentions.sort();
        e.mentions.dedup();
    }
    entities
}

/// Corpus-wide entity index with a reverse map from frames to the entities
/// they hold.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EntityIndex {
    entities: BTreeMap<EntityId, Entity>,
    by_frame: BTreeMap<FrameId, BTreeMap<EntityId, Vec<Role>>>,
}

impl EntityIndex {
    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Entity> {
        self.entities.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Entity> {
        self.entities.values()
    }

    /// Entities held in the frame's core arguments.
    pub fn entities_of(&self, frame_id: &str) -> BTreeSet<&str> {
        self.by_frame.get(frame_id).map(|m| m.keys().map(String::as_str).collect()).unwrap_or_default()
    }

    /// Roles the entity fills in the frame (sorted).
    pub fn roles_in(&self, entity_id: &str, frame_id: &str) -> &[Role] {
        self.by_frame
            .get(frame_id)
            .and_then(|m| m.get(entity_id))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn shared_entities(&self, frame_a: &str, frame_b: &str) -> Vec<EntityId> {
        let a = self.entities_of(frame_a);
        let b = self.entities_of(frame_b);
        a.intersection(&b).map(|s| s.to_string()).collect()
    }

    fn insert(&mut self, entity: Entity) {
        match self.entities.get_mut(&entity.entity_id) {
            Some(existing) => {
                existing.named |= entity.named;
                existing.mentions.extend(entity.mentions);
                existing.mentions.sort();
                existing.mentions.dedup();
            }
            None => {
                self.entities.insert(entity.entity_id.clone(), entity);
            }
        }
    }

    fn rebuild_reverse(&mut self) {
        self.by_frame.clear();
        for entity in self.entities.values() {
            for m in &entity.mentions {
                self.by_frame
                    .entry(m.frame_id.clone())
                    .or_default()
                    .entry(entity.entity_id.clone())
                    .or_default()
                    .push(m.role.clone());
            }
        }
    }

    /// Merges another index into this one. Associative and commutative.
    pub fn merge(&mut self, other: EntityIndex) {
        for entity in other.entities.into_values() {
            self.insert(entity);
        }
        self.rebuild_reverse();
    }
}

/// Merges per-document entity lists on (canonical name, concept).
pub fn build_entity_index<I>(entities: I) -> EntityIndex
where
    I: IntoIterator<Item = Entity>,
{
    let mut index = EntityIndex::default();
    for entity in entities {
        index.insert(entity);
    }
    index.rebuild_reverse();
    index
}
