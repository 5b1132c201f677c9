use std::path::{Path, PathBuf};

use semweave::bridging::BridgeKind;
use semweave::generation::GeneratedQA;
use semweave::pipeline::config::GeneratorSpec;
use semweave::pipeline::run::{run_pipeline, PipelineError, PipelineReport, RunOptions, RunStatus};
use semweave::pipeline::{ingest_corpus, load_config, Compression, ConfigError, PipelineConfig};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn template_only() -> RunOptions {
    RunOptions { use_cache: true, template_only: true, max_questions: None }
}

fn read_qa(path: &Path) -> Vec<GeneratedQA> {
    std::fs::read_to_string(path).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn reference_config_loads() {
    let c = load_config(&fixture("reference_config.json")).unwrap();
    assert_eq!(c.amr_acquisition.method, "stepwise_sota");
    assert_eq!(c.amr_acquisition.components["srl"], "allennlp_bert");
    assert_eq!(c.quality_control.gate.bleu_threshold, 0.72);
    assert!(c.quality_control.syntactic_validation && c.quality_control.semantic_consistency);
    assert!(c.caching.enabled);
    assert_eq!(c.caching.cache_dir, PathBuf::from("./amr_cache"));
    assert_eq!(c.caching.compression, Compression::Gzip);
}

#[test]
fn empty_config_file_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("empty.json");
    std::fs::write(&p, "").unwrap();
    assert!(matches!(load_config(&p), Err(ConfigError::Parse(_))));
}

#[test]
fn case_study_ingest_has_distinct_documents() {
    let c = ingest_corpus(&fixture("case_studies")).unwrap();
    assert_eq!(c.records.len(), 6);
    let docs: std::collections::BTreeSet<_> = c.records.iter().map(|r| r.doc_id.as_str()).collect();
    assert_eq!(docs.len(), 6);
}

#[test]
fn case_study_run_writes_all_artifacts() {
    let config = load_config(&fixture("pipeline.json")).unwrap();
    let out = tempfile::tempdir().unwrap();
    let outcome = run_pipeline(&config, &fixture("case_studies"), out.path(), &template_only()).unwrap();
    assert_eq!(outcome.status, RunStatus::Success);
    let qa = read_qa(&outcome.qa_path);
    assert!(!qa.is_empty());
    assert!(qa.iter().all(|q| q.generation_mode == semweave::generation::GenerationMode::Template));
    let report: PipelineReport = serde_json::from_str(&std::fs::read_to_string(&outcome.report_path).unwrap()).unwrap();
    assert_eq!(report.metrics.per_kind.len(), 3);
    for kind in BridgeKind::ALL {
        assert_eq!(report.metrics.per_kind[&kind].bridges, 1, "{kind}");
    }
    assert!(report.quality_gate.applied);
    assert_eq!(report.corpus.records, 6);
}

#[test]
fn max_questions_caps_output() {
    let config = load_config(&fixture("pipeline.json")).unwrap();
    let out = tempfile::tempdir().unwrap();
    let opts = RunOptions { max_questions: Some(1), ..template_only() };
    let outcome = run_pipeline(&config, &fixture("case_studies"), out.path(), &opts).unwrap();
    assert_eq!(read_qa(&outcome.qa_path).len(), 1);
}

#[test]
fn adversarial_generator_empties_the_corpus() {
    let mut config = load_config(&fixture("pipeline.json")).unwrap();
    config.quality_control.generator = GeneratorSpec::Empty;
    let out = tempfile::tempdir().unwrap();
    let outcome = run_pipeline(&config, &fixture("case_studies"), out.path(), &template_only()).unwrap();
    assert_eq!(outcome.status, RunStatus::Partial);
    assert_eq!(outcome.status.exit_code(), 2);
    assert_eq!(std::fs::read_to_string(&outcome.qa_path).unwrap(), "");
    assert_eq!(outcome.report.quality_gate.retention, 0.0);
    assert_eq!(outcome.report.corpus.sentences, 0);
}

#[test]
fn malformed_record_is_skipped_and_marks_partial() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = std::fs::read_to_string(fixture("case_studies/cs3_causal.jsonl")).unwrap();
    text.push_str(r#"{"doc_id":"bad","sent_id":"1","text":"x","amr":"(b / broken"}"#);
    text.push('\n');
    let corpus = dir.path().join("corpus.jsonl");
    std::fs::write(&corpus, text).unwrap();
    let config = load_config(&fixture("pipeline.json")).unwrap();
    let outcome = run_pipeline(&config, &corpus, &dir.path().join("out"), &template_only()).unwrap();
    assert_eq!(outcome.status, RunStatus::Partial);
    assert_eq!(outcome.report.corpus.skipped, 1);

    let mut strict = config.clone();
    strict.quality_control.syntactic_validation = false;
    let err = run_pipeline(&strict, &corpus, &dir.path().join("out2"), &template_only()).unwrap_err();
    assert!(matches!(err, PipelineError::Stage { stage: "ingest", .. }), "{err}");
}

#[test]
fn generation_failure_leaves_bridges_intact() {
    let dir = tempfile::tempdir().unwrap();
    let templates = dir.path().join("entity_only.txt");
    std::fs::write(&templates, "kind: entity\nrole-analysis = What links {frame_a} and {frame_b} through {entity}?\n").unwrap();
    let mut config: PipelineConfig = load_config(&fixture("pipeline.json")).unwrap();
    config.generation.templates = Some(templates);
    let out = dir.path().join("out");
    let err = run_pipeline(&config, &fixture("case_studies"), &out, &template_only()).unwrap_err();
    assert!(matches!(err, PipelineError::Stage { stage: "generate", .. }), "{err}");
    let bridges = std::fs::read_to_string(out.join("bridges.jsonl")).unwrap();
    assert_eq!(bridges.lines().count(), 3);
    assert!(!out.join("qa.jsonl").exists());
    assert!(!out.join("report.json").exists());
}

#[test]
fn missing_resource_file_fails_before_any_output() {
    let mut config = load_config(&fixture("pipeline.json")).unwrap();
    config.metrics.rule_table = Some(PathBuf::from("/nonexistent/rules.csv"));
    let out = tempfile::tempdir().unwrap();
    let err = run_pipeline(&config, &fixture("case_studies"), &out.path().join("o"), &template_only()).unwrap_err();
    assert!(matches!(err, PipelineError::Config(ConfigError::FileNotFound(_))));
    assert!(!out.path().join("o").exists());
}
