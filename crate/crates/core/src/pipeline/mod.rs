//! Configuration, corpus ingestion, caching and staged orchestration.

pub mod cache;
pub mod config;
pub mod ingest;
pub mod run;

pub use cache::{cache_key, AnalysisCache, CacheStats};
pub use config::{load_config, Caching, Compression, ConfigError, GeneratorSpec, PipelineConfig, QualityControl};
pub use ingest::{ingest_corpus, CorpusRecord, IngestError, IngestedCorpus, SkippedRecord};
pub use run::{run_pipeline, PipelineError, PipelineReport, Resources, RunOptions, RunOutcome, RunStatus};
