use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::cache::{cache_key, AnalysisCache, CacheStats};
use super::config::{ConfigError, GeneratorSpec, PipelineConfig};
use super::ingest::{ingest_corpus, CorpusRecord, IngestedCorpus, SkippedRecord};
use crate::amr::{parse_penman, AmrError, AmrGraph};
use crate::bridging::{discover_bridges, weave_paths, Bridge, BridgeConfig, RelationTable};
use crate::corpus::{GraphAnalysis, SemanticCorpus};
use crate::generation::{synthesize_corpus, CompletionClient, GeneratedQA, GenerationConfig, HttpCompletionClient, TemplateSet};
use crate::metrics::{annotate_all, corpus_report, CorpusReport, RuleTable};
use crate::quality::{round_trip_gate, EmptyGenerator, HttpGenerator, IdentityGenerator, TextGenerator};

pub const BRIDGES_FILE: &str = "bridges.jsonl";
pub const QA_FILE: &str = "qa.jsonl";
pub const REPORT_FILE: &str = "report.json";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{stage} stage failed: {message}")]
    Stage { stage: &'static str, message: String },
}

fn stage<E: std::fmt::Display>(stage: &'static str) -> impl Fn(E) -> PipelineError {
    move |e| PipelineError::Stage { stage, message: e.to_string() }
}

/// Relation table, templates and rule table, from the config's paths or the
/// shipped defaults.
pub struct Resources {
    pub bridging: BridgeConfig,
    pub templates: TemplateSet,
    pub rules: RuleTable,
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => ConfigError::FileNotFound(path.to_path_buf()),
        _ => ConfigError::Io { path: path.to_path_buf(), source: e },
    })
}

impl Resources {
    pub fn load(config: &PipelineConfig) -> Result<Self, ConfigError> {
        let mut bridging = config.bridging.config.clone();
        if let Some(p) = &config.bridging.relation_table {
            let table = RelationTable::parse(&read(p)?).map_err(|e| ConfigError::Parse(format!("{}: {e}", p.display())))?;
            bridging.predicate_relation_table = Some(table);
        }
        let templates = match &config.generation.templates {
            Some(p) => TemplateSet::parse(&read(p)?).map_err(|e| ConfigError::Parse(format!("{}: {e}", p.display())))?,
            None => TemplateSet::shipped(),
        };
        let rules = match &config.metrics.rule_table {
            Some(p) => RuleTable::parse(&read(p)?).map_err(|e| ConfigError::Parse(format!("{}: {e}", p.display())))?,
            None => RuleTable::shipped(),
        };
        Ok(Resources { bridging, templates, rules })
    }
}

pub fn record_graph(record: &CorpusRecord) -> Result<AmrGraph, AmrError> {
    Ok(parse_penman(&record.amr, &record.graph_id(), &record.doc_id)?.with_source_text(record.text.clone()))
}

/// Parses and analyses every record, consulting the cache when given.
pub fn analyze_records(records: &[CorpusRecord], cache: Option<&AnalysisCache>) -> Result<Vec<GraphAnalysis>, AmrError> {
    records
        .par_iter()
        .map(|r| {
            let key = cache.map(|_| cache_key(r));
            if let (Some(c), Some(k)) = (cache, &key) {
                if let Some(hit) = c.get(k) {
                    return Ok(hit);
                }
            }
            let analysis = GraphAnalysis::of(record_graph(r)?);
            if let (Some(c), Some(k)) = (cache, &key) {
                if let Err(e) = c.put(k, &analysis) {
                    log::warn!("cache write failed for {}: {e}", r.graph_id());
                }
            }
            Ok(analysis)
        })
        .collect()
}

pub fn make_generator(spec: &GeneratorSpec) -> Option<Box<dyn TextGenerator>> {
    match spec {
        GeneratorSpec::None => None,
        GeneratorSpec::Identity => Some(Box::new(IdentityGenerator)),
        GeneratorSpec::Empty => Some(Box::new(EmptyGenerator)),
        GeneratorSpec::Http(e) => Some(Box::new(HttpGenerator { endpoint: e.clone() })),
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GateSummary {
    pub applied: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped_reason: Option<String>,
    pub generator: String,
    pub threshold: f64,
    pub tokenizer: String,
    pub total: usize,
    pub accepted: usize,
    pub failed: usize,
    pub retention: f64,
}

/// Runs the round-trip gate when enabled and a generator is configured;
/// otherwise passes everything through.
pub fn apply_gate(analyses: Vec<GraphAnalysis>, config: &PipelineConfig) -> Result<(Vec<GraphAnalysis>, GateSummary), PipelineError> {
    let qc = &config.quality_control;
    let generator = make_generator(&qc.generator);
    let reason = match (&generator, qc.semantic_consistency) {
        (_, false) => Some("semantic_consistency disabled"),
        (None, true) => Some("no generator configured"),
        _ => None,
    };
    let Some(generator) = generator.filter(|_| reason.is_none()) else {
        let n = analyses.len();
        return Ok((
            analyses,
            GateSummary {
                applied: false,
                skipped_reason: reason.map(str::to_string),
                generator: "none".into(),
                threshold: qc.gate.bleu_threshold,
                total: n,
                accepted: n,
                retention: if n == 0 { 0.0 } else { 1.0 },
                ..Default::default()
            },
        ));
    };
    let items: Vec<(&str, &AmrGraph)> = analyses.iter().map(|a| (a.graph.source_text(), &a.graph)).collect();
    let report = round_trip_gate(&items, generator.as_ref(), &qc.gate).map_err(stage("gate"))?;
    let keep: std::collections::HashSet<&str> = report.accepted_ids().collect();
    let summary = GateSummary {
        applied: true,
        skipped_reason: None,
        generator: report.generator.clone(),
        threshold: report.threshold,
        tokenizer: report.tokenizer.clone(),
        total: report.total,
        accepted: report.accepted,
        failed: report.failed,
        retention: report.retention,
    };
    let kept = analyses.iter().filter(|a| keep.contains(a.graph.graph_id())).cloned().collect();
    Ok((kept, summary))
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub records: usize,
    pub skipped: usize,
    pub sentences: usize,
    pub documents: usize,
    pub frames: usize,
    pub entities: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BridgeSummary {
    pub count: usize,
    pub paths: usize,
    /// Bridges per 100 ingested sentences.
    pub density_per_100_sentences: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PipelineReport {
    pub corpus: CorpusSummary,
    pub quality_gate: GateSummary,
    pub bridges: BridgeSummary,
    pub metrics: CorpusReport,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunOptions {
    pub use_cache: bool,
    pub template_only: bool,
    pub max_questions: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Success,
    /// Some records or sentences were dropped along the way.
    Partial,
}

impl RunStatus {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunStatus::Success => 0,
            RunStatus::Partial => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub bridges_path: PathBuf,
    pub qa_path: PathBuf,
    pub report_path: PathBuf,
    pub report: PipelineReport,
    pub cache: Option<CacheStats>,
    /// Wall-clock seconds per stage; not part of any artifact.
    pub timings: Vec<(&'static str, f64)>,
}

/// Writes through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn to_jsonl<T: Serialize>(items: &[T]) -> serde_json::Result<Vec<u8>> {
    let mut out = Vec::new();
    for item in items {
        serde_json::to_writer(&mut out, item)?;
        out.push(b'\n');
    }
    Ok(out)
}

pub fn completion_client(config: &GenerationConfig, template_only: bool) -> Option<Box<dyn CompletionClient>> {
    match (&config.llm, template_only) {
        (Some(llm), false) => Some(Box::new(HttpCompletionClient { config: llm.clone() })),
        _ => None,
    }
}

/// Per-stage wall-clock timer.
pub struct Stages {
    timings: Vec<(&'static str, f64)>,
    clock: Instant,
}

impl Default for Stages {
    fn default() -> Self {
        Self::new()
    }
}

impl Stages {
    pub fn new() -> Self {
        Stages { timings: Vec::new(), clock: Instant::now() }
    }

    pub fn done(&mut self, name: &'static str) {
        self.timings.push((name, self.clock.elapsed().as_secs_f64()));
        log::info!("stage {name} finished in {:.3}s", self.clock.elapsed().as_secs_f64());
        self.clock = Instant::now();
    }

    pub fn timings(&self) -> &[(&'static str, f64)] {
        &self.timings
    }
}

/// A corpus ready for bridging, with what was dropped on the way.
pub struct Prepared {
    pub corpus: SemanticCorpus,
    /// Records that parsed.
    pub records: usize,
    pub skipped: Vec<SkippedRecord>,
    pub gate: GateSummary,
    pub cache: Option<CacheStats>,
}

/// ingest -> parse (through the cache when enabled) -> optional gate.
pub fn prepare_corpus(
    config: &PipelineConfig,
    corpus_path: &Path,
    use_cache: bool,
    gate: bool,
    stages: &mut Stages,
) -> Result<Prepared, PipelineError> {
    let IngestedCorpus { records, skipped } = ingest_corpus(corpus_path).map_err(stage("ingest"))?;
    if !config.quality_control.syntactic_validation {
        if let Some(s) = skipped.first() {
            return Err(PipelineError::Stage { stage: "ingest", message: format!("{} unparseable record(s); first: {} ({})", skipped.len(), s.source, s.reason) });
        }
    }
    for s in &skipped {
        log::warn!("skipped {} line {}: {}", s.source, s.line, s.reason);
    }
    stages.done("ingest");

    let cache = (config.caching.enabled && use_cache).then(|| AnalysisCache::new(&config.caching.cache_dir, config.caching.compression));
    let analyses = analyze_records(&records, cache.as_ref()).map_err(stage("parse"))?;
    stages.done("parse");

    let (analyses, summary) = if gate {
        apply_gate(analyses, config)?
    } else {
        let n = analyses.len();
        let summary = GateSummary {
            skipped_reason: Some("not requested".into()),
            generator: "none".into(),
            threshold: config.quality_control.gate.bleu_threshold,
            total: n,
            accepted: n,
            retention: if n == 0 { 0.0 } else { 1.0 },
            ..Default::default()
        };
        (analyses, summary)
    };
    stages.done("gate");

    let corpus = SemanticCorpus::from_analyses(analyses).map_err(stage("corpus"))?;
    Ok(Prepared { corpus, records: records.len(), skipped, gate: summary, cache: cache.map(|c| c.stats()) })
}

/// ingest -> parse -> gate -> bridges -> paths -> generate -> report.
/// The bridges file is written before generation starts.
pub fn run_pipeline(config: &PipelineConfig, corpus_path: &Path, out_dir: &Path, options: &RunOptions) -> Result<RunOutcome, PipelineError> {
    config.validate()?;
    let resources = Resources::load(config)?;
    let mut stages = Stages::new();

    let prepared = prepare_corpus(config, corpus_path, options.use_cache, true, &mut stages)?;
    let Prepared { corpus, records, skipped, gate, cache } = prepared;
    std::fs::create_dir_all(out_dir).map_err(stage("bridges"))?;
    let bridges_path = out_dir.join(BRIDGES_FILE);
    let qa_path = out_dir.join(QA_FILE);
    let report_path = out_dir.join(REPORT_FILE);
    for stale in [&qa_path, &report_path] {
        if stale.exists() {
            std::fs::remove_file(stale).map_err(stage("bridges"))?;
        }
    }
    let bridges: Vec<Bridge> = discover_bridges(&corpus, &resources.bridging, &config.scoring).map_err(stage("bridges"))?;
    write_atomic(&bridges_path, &to_jsonl(&bridges).map_err(stage("bridges"))?).map_err(stage("bridges"))?;
    stages.done("bridges");

    let paths = weave_paths(&bridges, config.generation.config.max_path_frames);
    stages.done("paths");

    let mut gen_config = config.generation.config.clone();
    if options.max_questions.is_some() {
        gen_config.max_questions = options.max_questions;
    }
    let client = completion_client(&gen_config, options.template_only);
    let qa: Vec<GeneratedQA> =
        synthesize_corpus(&bridges, &paths, &corpus, &resources.templates, client.as_deref(), &gen_config).map_err(stage("generate"))?;
    write_atomic(&qa_path, &to_jsonl(&qa).map_err(stage("generate"))?).map_err(stage("generate"))?;
    stages.done("generate");

    let relations = annotate_all(&bridges, corpus.entities(), &resources.rules);
    let report = PipelineReport {
        corpus: CorpusSummary {
            records,
            skipped: skipped.len(),
            sentences: corpus.sentence_count(),
            documents: corpus.documents().count(),
            frames: corpus.frames().count(),
            entities: corpus.entities().len(),
        },
        bridges: BridgeSummary {
            count: bridges.len(),
            paths: paths.len(),
            density_per_100_sentences: if records == 0 { 0.0 } else { bridges.len() as f64 * 100.0 / records as f64 },
        },
        quality_gate: gate,
        metrics: corpus_report(&qa, &bridges, &relations),
    };
    let mut json = serde_json::to_vec_pretty(&report).map_err(stage("report"))?;
    json.push(b'\n');
    write_atomic(&report_path, &json).map_err(stage("report"))?;
    stages.done("report");

    let dropped = !skipped.is_empty() || (report.quality_gate.applied && report.quality_gate.accepted < report.quality_gate.total);
    Ok(RunOutcome {
        status: if dropped { RunStatus::Partial } else { RunStatus::Success },
        bridges_path,
        qa_path,
        report_path,
        report,
        cache,
        timings: stages.timings,
    })
}
