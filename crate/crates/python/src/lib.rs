use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use serde::Serialize;

use ::semweave::amr::{self, graph_depth, serialize_penman, serialize_penman_pretty};
use ::semweave::bridging::{discover_bridges, weave_paths, BridgeConfig, BridgeKind};
use ::semweave::corpus::{GraphAnalysis, SemanticCorpus};
use ::semweave::frames::extract_frames;
use ::semweave::metrics::{self, SemanticRelationAnnotation};
use ::semweave::pipeline::run::analyze_records;
use ::semweave::pipeline::{self as pipe, ingest_corpus, PipelineConfig, RunOptions};
use ::semweave::quality::{bleu_text, QualityConfig};
use ::semweave::scoring::{self, read_rated_components, GridSpec, ScoringConfig, StrengthWeights};
use ::semweave::synth::{synthetic_corpus, SynthConfig};

create_exception!(semweave, SemweaveError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    SemweaveError::new_err(e.to_string())
}

/// Round-trips through JSON so callers get plain dicts and lists.
fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pyclass(name = "AmrGraph", module = "semweave", frozen)]
struct PyAmrGraph {
    inner: amr::AmrGraph,
}

#[pymethods]
impl PyAmrGraph {
    #[getter]
    fn graph_id(&self) -> &str {
        self.inner.graph_id()
    }

    #[getter]
    fn doc_id(&self) -> &str {
        self.inner.doc_id()
    }

    #[getter]
    fn root(&self) -> &str {
        self.inner.root()
    }

    fn depth(&self) -> usize {
        graph_depth(&self.inner)
    }

    /// Single-line PENMAN.
    fn penman(&self) -> String {
        serialize_penman(&self.inner)
    }

    fn pretty(&self) -> String {
        serialize_penman_pretty(&self.inner)
    }

    fn frames(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &extract_frames(&self.inner))
    }

    fn to_dict(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner)
    }

    fn __repr__(&self) -> String {
        format!("AmrGraph({:?}, {})", self.inner.graph_id(), serialize_penman(&self.inner))
    }
}

#[pyfunction]
#[pyo3(signature = (text, graph_id = "g", doc_id = "d"))]
fn parse_penman(text: &str, graph_id: &str, doc_id: &str) -> PyResult<PyAmrGraph> {
    Ok(PyAmrGraph { inner: amr::parse_penman(text, graph_id, doc_id).map_err(err)? })
}

#[pyclass(name = "Corpus", module = "semweave", frozen)]
struct PyCorpus {
    inner: SemanticCorpus,
}

fn parse_weights(weights: Option<(f64, f64, f64, f64)>) -> ScoringConfig {
    let mut cfg = ScoringConfig::default();
    if let Some((a, b, g, d)) = weights {
        cfg.weights = StrengthWeights::new(a, b, g, d);
    }
    cfg
}

#[pymethods]
impl PyCorpus {
    /// Builds a corpus from parsed graphs.
    #[staticmethod]
    fn from_graphs(graphs: Vec<PyRef<'_, PyAmrGraph>>) -> PyResult<Self> {
        let inner = SemanticCorpus::from_graphs(graphs.iter().map(|g| g.inner.clone())).map_err(err)?;
        Ok(PyCorpus { inner })
    }

    /// Reads a JSONL or PENMAN file, or a directory of them. Malformed
    /// records are skipped.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let ingested = ingest_corpus(&path).map_err(err)?;
        let analyses = analyze_records(&ingested.records, None).map_err(err)?;
        Ok(PyCorpus { inner: SemanticCorpus::from_analyses(analyses).map_err(err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (seed = 7, documents = 10, sentences = 10))]
    fn synthetic(seed: u64, documents: usize, sentences: usize) -> PyResult<Self> {
        let cfg = SynthConfig { seed, documents, sentences_per_document: sentences, ..SynthConfig::default() };
        let analyses = analyze_records(&synthetic_corpus(&cfg), None).map_err(err)?;
        Ok(PyCorpus { inner: SemanticCorpus::from_analyses(analyses).map_err(err)? })
    }

    fn __len__(&self) -> usize {
        self.inner.sentence_count()
    }

    fn documents(&self) -> Vec<String> {
        self.inner.documents().map(str::to_string).collect()
    }

    fn frames(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.frames().collect::<Vec<_>>())
    }

    /// Scored, filtered bridges, strongest first. `weights` is
    /// (alpha, beta, gamma, delta).
    #[pyo3(signature = (min_strength = None, weights = None))]
    fn bridges(&self, py: Python<'_>, min_strength: Option<f64>, weights: Option<(f64, f64, f64, f64)>) -> PyResult<Py<PyAny>> {
        let mut cfg = BridgeConfig::default();
        if let Some(m) = min_strength {
            cfg.min_strength = m;
        }
        let bridges = discover_bridges(&self.inner, &cfg, &parse_weights(weights)).map_err(err)?;
        to_py(py, &bridges)
    }

    /// Chains of bridges covering at most `max_frames` frames.
    #[pyo3(signature = (max_frames = 3))]
    fn paths(&self, py: Python<'_>, max_frames: usize) -> PyResult<Py<PyAny>> {
        let bridges = discover_bridges(&self.inner, &BridgeConfig::default(), &ScoringConfig::default()).map_err(err)?;
        to_py(py, &weave_paths(&bridges, max_frames))
    }
}

#[pyfunction]
fn analyze(graph: PyRef<'_, PyAmrGraph>, py: Python<'_>) -> PyResult<Py<PyAny>> {
    let a = GraphAnalysis::of(graph.inner.clone());
    to_py(py, &serde_json::json!({"frames": a.frames, "entities": a.entities}))
}

#[pyfunction]
#[pyo3(signature = (reference, candidate, max_ngram = 4))]
fn bleu(reference: &str, candidate: &str, max_ngram: usize) -> PyResult<f64> {
    bleu_text(reference, candidate, &QualityConfig { max_ngram, ..QualityConfig::default() }).map_err(err)
}

/// Mean of ral x cad x itc over the annotations.
#[pyfunction]
fn semantic_depth(relations: Vec<(u8, u8, u8)>) -> PyResult<f64> {
    let rel = relations
        .into_iter()
        .map(|(r, c, i)| SemanticRelationAnnotation::new(r, c, i))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    metrics::semantic_depth(&rel).map_err(err)
}

#[pyfunction]
fn bridge_diversity(kinds: Vec<String>) -> PyResult<f64> {
    let kinds = kinds.iter().map(|k| k.parse::<BridgeKind>()).collect::<Result<Vec<_>, _>>().map_err(err)?;
    Ok(metrics::bridge_diversity(&kinds))
}

/// Constraint violations as messages; empty when the weights are valid.
#[pyfunction]
fn validate_weights(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Vec<String> {
    match scoring::validate_weights(&StrengthWeights::new(alpha, beta, gamma, delta)) {
        Ok(()) => Vec::new(),
        Err(v) => v.iter().map(ToString::to_string).collect(),
    }
}

#[pyfunction]
#[pyo3(signature = (ratings, min = 0.1, max = 1.0, step = 0.1, delta = 0.1, top = 10))]
fn grid_search(py: Python<'_>, ratings: PathBuf, min: f64, max: f64, step: f64, delta: f64, top: usize) -> PyResult<Py<PyAny>> {
    let file = std::fs::File::open(&ratings).map_err(|e| err(format!("{}: {e}", ratings.display())))?;
    let items = read_rated_components(file).map_err(err)?;
    let mut outcome = scoring::grid_search(&GridSpec { min, max, step, delta }.candidates(), &items).map_err(err)?;
    outcome.ranked.truncate(top);
    to_py(py, &outcome)
}

#[pyfunction]
#[pyo3(signature = (path, seed = 7, documents = 10, sentences = 10))]
fn write_synthetic_corpus(path: PathBuf, seed: u64, documents: usize, sentences: usize) -> PyResult<usize> {
    let cfg = SynthConfig { seed, documents, sentences_per_document: sentences, ..SynthConfig::default() };
    let records = synthetic_corpus(&cfg);
    let bytes = pipe::run::to_jsonl(&records).map_err(err)?;
    std::fs::write(&path, bytes).map_err(err)?;
    Ok(records.len())
}

/// Parsed configuration with defaults filled in.
#[pyfunction]
fn load_config(py: Python<'_>, path: PathBuf) -> PyResult<Py<PyAny>> {
    to_py(py, &pipe::load_config(&path).map_err(err)?)
}

/// Runs every stage and writes bridges.jsonl, qa.jsonl and report.json
/// into `out_dir`.
#[pyfunction]
#[pyo3(signature = (corpus, out_dir, config = None, template_only = true, use_cache = true, max_questions = None))]
fn run_pipeline(
    py: Python<'_>,
    corpus: PathBuf,
    out_dir: PathBuf,
    config: Option<PathBuf>,
    template_only: bool,
    use_cache: bool,
    max_questions: Option<usize>,
) -> PyResult<Py<PyAny>> {
    let cfg = match config {
        Some(p) => pipe::load_config(&p).map_err(err)?,
        None => PipelineConfig::default(),
    };
    let options = RunOptions { use_cache, template_only, max_questions };
    let outcome = py.detach(|| pipe::run_pipeline(&cfg, &corpus, &out_dir, &options)).map_err(err)?;
    to_py(
        py,
        &serde_json::json!({
            "status": outcome.status,
            "exit_code": outcome.status.exit_code(),
            "bridges_path": outcome.bridges_path,
            "qa_path": outcome.qa_path,
            "report_path": outcome.report_path,
            "report": outcome.report,
        }),
    )
}

#[pymodule]
fn semweave(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SemweaveError", m.py().get_type::<SemweaveError>())?;
    m.add_class::<PyAmrGraph>()?;
    m.add_class::<PyCorpus>()?;
    m.add_function(wrap_pyfunction!(parse_penman, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(bleu, m)?)?;
    m.add_function(wrap_pyfunction!(semantic_depth, m)?)?;
    m.add_function(wrap_pyfunction!(bridge_diversity, m)?)?;
    m.add_function(wrap_pyfunction!(validate_weights, m)?)?;
    m.add_function(wrap_pyfunction!(grid_search, m)?)?;
    m.add_function(wrap_pyfunction!(write_synthetic_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(load_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_pipeline, m)?)?;
    Ok(())
}
