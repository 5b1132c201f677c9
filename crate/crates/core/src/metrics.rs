//! Structural metrics over generated corpora.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amr::RoleCategory;
use crate::bridging::{Bridge, BridgeEvidence, BridgeKind};
use crate::frames::EntityIndex;
use crate::generation::GeneratedQA;

const SHIPPED_RULES: &str = include_str!("../data/relation_rules.csv");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("relation list is empty")]
    EmptyRelationList,
    #[error("rule table line {line}: {message}")]
    RuleTable { line: usize, message: String },
    #[error("annotation out of range: {0}")]
    OutOfRange(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemanticRelationAnnotation {
    pub ral: u8,
    pub cad: u8,
    pub itc: u8,
}

impl SemanticRelationAnnotation {
    pub fn new(ral: u8, cad: u8, itc: u8) -> Result<Self, MetricsError> {
        if !(1..=5).contains(&ral) || !(1..=3).contains(&cad) || !(1..=3).contains(&itc) {
            return Err(MetricsError::OutOfRange(format!("({ral}, {cad}, {itc})")));
        }
        Ok(SemanticRelationAnnotation { ral, cad, itc })
    }

    pub fn product(&self) -> u32 {
        self.ral as u32 * self.cad as u32 * self.itc as u32
    }
}

impl Default for SemanticRelationAnnotation {
    fn default() -> Self {
        SemanticRelationAnnotation { ral: 1, cad: 1, itc: 1 }
    }
}

/// Mean of RAL x CAD x ITC over the relations.
pub fn semantic_depth(relations: &[SemanticRelationAnnotation]) -> Result<f64, MetricsError> {
    if relations.is_empty() {
        return Err(MetricsError::EmptyRelationList);
    }
    Ok(relations.iter().map(|r| r.product() as f64).sum::<f64>() / relations.len() as f64)
}

/// Lookup table from bridge evidence to annotation levels.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RuleTable {
    ral: BTreeMap<String, u8>,
    cad: BTreeMap<String, u8>,
    itc: BTreeMap<String, u8>,
}

impl RuleTable {
    /// Reads `field,key,value` rows; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, MetricsError> {
        let mut table = RuleTable::default();
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        for row in rdr.records() {
            let row = row.map_err(|e| MetricsError::RuleTable { line: e.position().map_or(0, |p| p.line() as usize), message: e.to_string() })?;
            let line = row.position().map_or(0, |p| p.line() as usize);
            let err = |message: String| MetricsError::RuleTable { line, message };
            if row.len() != 3 {
                return Err(err(format!("expected 3 fields, got {}", row.len())));
            }
            let value: u8 = row[2].parse().map_err(|_| err(format!("bad value `{}`", &row[2])))?;
            let (map, max) = match &row[0] {
                "ral" => (&mut table.ral, 5),
                "cad" => (&mut table.cad, 3),
                "itc" => (&mut table.itc, 3),
                other => return Err(err(format!("unknown field `{other}`"))),
            };
            if value < 1 || value > max {
                return Err(err(format!("{} value {value} outside 1..={max}", &row[0])));
            }
            map.insert(row[1].to_string(), value);
        }
        Ok(table)
    }

    pub fn shipped() -> Self {
        Self::parse(SHIPPED_RULES).expect("shipped rule table parses")
    }

    fn relation_key(bridge: &Bridge) -> String {
        match &bridge.evidence {
            BridgeEvidence::Entity { .. } => "entity_role".into(),
            BridgeEvidence::PredicateChain { relation, .. } => format!("relation:{relation}"),
            BridgeEvidence::Causal { marker, .. } => match &marker.category {
                RoleCategory::NonCore(k) => format!("marker:{k}"),
                _ => format!("marker:{}", marker.short()),
            },
        }
    }

    fn entity_cad(&self, index: &EntityIndex, entity_id: &str) -> u8 {
        let Some(e) = index.get(entity_id) else { return 1 };
        if let Some(v) = self.cad.get(&format!("concept:{}", e.concept)) {
            return *v;
        }
        let key = if e.named { "named" } else { "category" };
        self.cad.get(key).copied().unwrap_or(1)
    }
}

/// One annotation for the bridge's evidence relation. Unmapped parts take 1.
pub fn annotate_bridge_relations(bridge: &Bridge, index: &EntityIndex, rules: &RuleTable) -> Vec<SemanticRelationAnnotation> {
    let ral = rules.ral.get(&RuleTable::relation_key(bridge)).copied().unwrap_or(1);
    let cad = bridge.shared_entities.iter().map(|e| rules.entity_cad(index, e)).max().unwrap_or(1);
    let itc = rules.itc.get("explicit").copied().unwrap_or(1);
    vec![SemanticRelationAnnotation { ral, cad, itc }]
}

pub fn annotate_all(bridges: &[Bridge], index: &EntityIndex, rules: &RuleTable) -> BTreeMap<String, Vec<SemanticRelationAnnotation>> {
    bridges.iter().map(|b| (b.bridge_id.clone(), annotate_bridge_relations(b, index, rules))).collect()
}

/// Shannon entropy of the kind distribution divided by ln 3.
pub fn bridge_diversity<'a>(kinds: impl IntoIterator<Item = &'a BridgeKind>) -> f64 {
    let mut counts: BTreeMap<BridgeKind, usize> = BTreeMap::new();
    for k in kinds {
        *counts.entry(*k).or_default() += 1;
    }
    let total: usize = counts.values().sum();
    if total == 0 {
        return 0.0;
    }
    let h: f64 = counts
        .values()
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * p.ln()
        })
        .sum();
    (h / 3f64.ln()).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct KindStats {
    pub bridges: usize,
    pub mean_strength: f64,
    pub questions: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CorpusReport {
    pub question_count: usize,
    pub bridge_count: usize,
    pub mean_hop_count: f64,
    pub mean_semantic_depth: f64,
    pub bridge_diversity: f64,
    pub per_kind: BTreeMap<BridgeKind, KindStats>,
    pub difficulty: BTreeMap<String, usize>,
    pub question_types: BTreeMap<String, usize>,
    pub generation_modes: BTreeMap<String, usize>,
}

fn label<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

/// Aggregates counts, means and diversity. A question's depth uses the
/// annotations of all bridges behind it; questions with none are left out
/// of the depth mean.
pub fn corpus_report(
    qa: &[GeneratedQA],
    bridges: &[Bridge],
    relations: &BTreeMap<String, Vec<SemanticRelationAnnotation>>,
) -> CorpusReport {
    let mut report = CorpusReport { question_count: qa.len(), bridge_count: bridges.len(), ..Default::default() };
    for kind in BridgeKind::ALL {
        report.per_kind.insert(kind, KindStats::default());
    }
    let mut strength_sums: BTreeMap<BridgeKind, f64> = BTreeMap::new();
    for b in bridges {
        report.per_kind.entry(b.kind).or_default().bridges += 1;
        *strength_sums.entry(b.kind).or_default() += b.total_strength();
    }
    for (kind, stats) in report.per_kind.iter_mut() {
        if stats.bridges > 0 {
            stats.mean_strength = strength_sums[kind] / stats.bridges as f64;
        }
    }

    let mut depths = Vec::new();
    for q in qa {
        report.per_kind.entry(q.bridge_type).or_default().questions += 1;
        *report.difficulty.entry(label(&q.difficulty)).or_default() += 1;
        *report.question_types.entry(q.question_type.clone()).or_default() += 1;
        *report.generation_modes.entry(label(&q.generation_mode)).or_default() += 1;
        let anns: Vec<SemanticRelationAnnotation> =
            q.bridges.iter().filter_map(|b| relations.get(b)).flatten().copied().collect();
        if let Ok(d) = semantic_depth(&anns) {
            depths.push(d);
        }
    }
    if !qa.is_empty() {
        report.mean_hop_count = qa.iter().map(|q| q.hop_count as f64).sum::<f64>() / qa.len() as f64;
    }
    if !depths.is_empty() {
        report.mean_semantic_depth = depths.iter().sum::<f64>() / depths.len() as f64;
    }
    report.bridge_diversity = bridge_diversity(bridges.iter().map(|b| &b.kind));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ann(r: u8, c: u8, i: u8) -> SemanticRelationAnnotation {
        SemanticRelationAnnotation::new(r, c, i).unwrap()
    }

    #[test]
    fn depth_examples() {
        assert_eq!(semantic_depth(&[ann(1, 1, 1)]).unwrap(), 1.0);
        assert_eq!(semantic_depth(&[ann(3, 3, 2), ann(4, 3, 2)]).unwrap(), 21.0);
        assert_eq!(semantic_depth(&[ann(5, 3, 3)]).unwrap(), 45.0);
        assert_eq!(semantic_depth(&[]), Err(MetricsError::EmptyRelationList));
        assert!(SemanticRelationAnnotation::new(6, 1, 1).is_err());
        assert!(SemanticRelationAnnotation::new(1, 0, 1).is_err());
    }

    #[test]
    fn diversity_examples() {
        use BridgeKind::*;
        assert_eq!(bridge_diversity(&[Entity, Entity]), 0.0);
        assert!((bridge_diversity(&[Entity, PredicateChain, Causal]) - 1.0).abs() < 1e-12);
        assert_eq!(bridge_diversity(&[]), 0.0);
        let kinds: Vec<BridgeKind> = [vec![Entity; 5], vec![PredicateChain; 3], vec![Causal; 2]].concat();
        let h = -(0.5f64 * 0.5f64.ln() + 0.3 * 0.3f64.ln() + 0.2 * 0.2f64.ln()) / 3f64.ln();
        assert!((bridge_diversity(&kinds) - h).abs() < 1e-12);
        assert!((h - 0.9372305632161296).abs() < 1e-12);
    }

    #[test]
    fn rule_table_parsing() {
        let t = RuleTable::shipped();
        assert_eq!(t.ral.get("marker:CAU"), Some(&3));
        assert_eq!(t.ral.get("marker:condition"), Some(&4));
        assert!(RuleTable::parse("ral,x,9").is_err());
        assert!(RuleTable::parse("zzz,x,1").is_err());
        assert!(RuleTable::parse("ral,x").is_err());
    }

    #[test]
    fn empty_report() {
        let r = corpus_report(&[], &[], &BTreeMap::new());
        assert_eq!(r.question_count, 0);
        assert_eq!(r.bridge_diversity, 0.0);
        assert_eq!(r.mean_hop_count, 0.0);
        assert!(r.per_kind.values().all(|k| k.bridges == 0));
    }

    fn arb_ann() -> impl Strategy<Value = SemanticRelationAnnotation> {
        (1u8..=5, 1u8..=3, 1u8..=3).prop_map(|(r, c, i)| ann(r, c, i))
    }

    proptest! {
        #[test]
        fn depth_order_invariant_and_weighted(a in prop::collection::vec(arb_ann(), 1..10), b in prop::collection::vec(arb_ann(), 1..10)) {
            let mut rev = a.clone();
            rev.reverse();
            prop_assert!((semantic_depth(&a).unwrap() - semantic_depth(&rev).unwrap()).abs() < 1e-12);
            let joined = [a.clone(), b.clone()].concat();
            let weighted = (semantic_depth(&a).unwrap() * a.len() as f64 + semantic_depth(&b).unwrap() * b.len() as f64)
                / (a.len() + b.len()) as f64;
            prop_assert!((semantic_depth(&joined).unwrap() - weighted).abs() < 1e-9);
        }

        #[test]
        fn diversity_permutation_invariant(kinds in prop::collection::vec(0usize..3, 0..30)) {
            let kinds: Vec<BridgeKind> = kinds.into_iter().map(|k| BridgeKind::ALL[k]).collect();
            let mut rev = kinds.clone();
            rev.reverse();
            let d = bridge_diversity(&kinds);
            prop_assert_eq!(d, bridge_diversity(&rev));
            prop_assert!((0.0..=1.0).contains(&d));
        }
    }
}
