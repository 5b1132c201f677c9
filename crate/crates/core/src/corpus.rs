//! The analysed corpus: graphs, their frames and the shared entity index.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amr::AmrGraph;
use crate::frames::{self, build_entity_index, Entity, EntityIndex, FrameId, SemanticFrame};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("graph id `{0}` occurs more than once")]
    DuplicateGraph(String),
}

/// Everything derived from one graph. This is the unit the pipeline caches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphAnalysis {
    pub graph: AmrGraph,
    pub frames: Vec<SemanticFrame>,
    pub entities: Vec<Entity>,
}

impl GraphAnalysis {
    pub fn of(graph: AmrGraph) -> Self {
        let frames = frames::extract_frames(&graph);
        let entities = frames::extract_entities(&graph, &frames);
        GraphAnalysis { graph, frames, entities }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SemanticCorpus {
    graphs: BTreeMap<String, AmrGraph>,
    frames: BTreeMap<FrameId, SemanticFrame>,
    doc_frames: BTreeMap<String, Vec<FrameId>>,
    entities: EntityIndex,
}

impl SemanticCorpus {
    pub fn from_graphs(graphs: impl IntoIterator<Item = AmrGraph>) -> Result<Self, CorpusError> {
        Self::from_analyses(graphs.into_iter().map(GraphAnalysis::of))
    }

    pub fn from_analyses(analyses: impl IntoIterator<Item = GraphAnalysis>) -> Result<Self, CorpusError> {
        let mut corpus = SemanticCorpus::default();
        let mut all_entities = Vec::new();
        for analysis in analyses {
            let graph_id = analysis.graph.graph_id().to_string();
            if corpus.graphs.contains_key(&graph_id) {
                return Err(CorpusError::DuplicateGraph(graph_id));
            }
            let doc = corpus.doc_frames.entry(analysis.graph.doc_id().to_string()).or_default();
            for frame in analysis.frames {
                doc.push(frame.frame_id.clone());
                corpus.frames.insert(frame.frame_id.clone(), frame);
            }
            all_entities.extend(analysis.entities);
            corpus.graphs.insert(graph_id, analysis.graph);
        }
        for frames in corpus.doc_frames.values_mut() {
            frames.sort();
        }
        corpus.entities = build_entity_index(all_entities);
        Ok(corpus)
    }

    pub fn graphs(&self) -> impl Iterator<Item = &AmrGraph> {
        self.graphs.values()
    }

    pub fn graph(&self, graph_id: &str) -> Option<&AmrGraph> {
        self.graphs.get(graph_id)
    }

    pub fn sentence_count(&self) -> usize {
        self.graphs.len()
    }

    pub fn frame(&self, frame_id: &str) -> Option<&SemanticFrame> {
        self.frames.get(frame_id)
    }

    pub fn frames(&self) -> impl Iterator<Item = &SemanticFrame> {
        self.frames.values()
    }

    /// Document ids in sorted order.
    pub fn documents(&self) -> impl Iterator<Item = &str> {
        self.doc_frames.keys().map(String::as_str)
    }

    pub fn frames_of_doc(&self, doc_id: &str) -> Vec<&SemanticFrame> {
        self.doc_frames
            .get(doc_id)
            .map(|ids| ids.iter().filter_map(|id| self.frames.get(id)).collect())
            .unwrap_or_default()
    }

    pub fn graphs_of_doc<'a>(&'a self, doc_id: &'a str) -> impl Iterator<Item = &'a AmrGraph> + 'a {
        self.graphs.values().filter(move |g| g.doc_id() == doc_id)
    }

    pub fn entities(&self) -> &EntityIndex {
        &self.entities
    }

    pub fn max_frame_depth(&self) -> usize {
        self.frames.values().map(|f| f.depth).max().unwrap_or(0)
    }

    pub fn max_frame_complexity(&self) -> usize {
        self.frames.values().map(SemanticFrame::complexity).max().unwrap_or(0)
    }
}
