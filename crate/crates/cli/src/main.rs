use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use semweave::amr::{graph_depth, serialize_penman};
use semweave::bridging::{candidate_bridges, discover_bridges, score_bridges, sort_bridges, weave_paths, Bridge};
use semweave::generation::{synthesize_corpus, GeneratedQA};
use semweave::metrics::{annotate_all, corpus_report};
use semweave::pipeline::run::{
    completion_client, prepare_corpus, run_pipeline, to_jsonl, write_atomic, Prepared, Resources, RunOptions, RunStatus, Stages,
    BRIDGES_FILE, QA_FILE, REPORT_FILE,
};
use semweave::pipeline::{load_config, PipelineConfig};
use semweave::scoring::{grid_search, read_rated_components, GridSpec, Scorer, StrengthWeights};
use semweave::synth::{synthetic_corpus, SynthConfig};

#[derive(Parser)]
#[command(name = "semweave", version, about = "Cross-document semantic bridges and multi-hop QA from AMR corpora")]
struct Cli {
    /// Pipeline configuration (JSON). Defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Log verbosity: -v info, -vv debug.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CorpusArgs {
    /// JSONL or PENMAN file, or a directory of them.
    #[arg(long)]
    corpus: PathBuf,
    /// Ignore the analysis cache even when the config enables it.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    /// Never call the completion endpoint.
    #[arg(long)]
    template_only: bool,
    #[arg(long)]
    max_questions: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse the corpus and print normalised PENMAN as JSONL.
    Parse {
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Print extracted semantic frames as JSONL.
    Frames {
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Discover, score and filter bridges; writes bridges.jsonl.
    Bridges {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Score every candidate bridge, unfiltered, and print JSONL.
    Score {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Override weights as alpha,beta,gamma,delta.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
    },
    /// Run the round-trip quality gate and print its report.
    Gate {
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Bridges plus question generation; writes bridges.jsonl and qa.jsonl.
    Generate {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        gen: GenArgs,
    },
    /// Recompute report.json from the bridges and QA files in --out-dir.
    Report {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Rank weight configurations against rated components.
    GridSearch {
        /// CSV with s_type,s_entities,s_complexity,s_diversity,rating.
        #[arg(long)]
        ratings: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        min: f64,
        #[arg(long, default_value_t = 1.0)]
        max: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Full pipeline: parse, gate, bridges, generate, report.
    Run {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        gen: GenArgs,
    },
    /// Write a seeded synthetic corpus as JSONL.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        documents: usize,
        #[arg(long, default_value_t = 10)]
        sentences: usize,
    },
}

fn config(path: Option<&Path>) -> Result<PipelineConfig> {
    match path {
        Some(p) => Ok(load_config(p)?),
        None => Ok(PipelineConfig::default()),
    }
}

fn print_jsonl<T: serde::Serialize>(items: &[T]) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(&to_jsonl(items)?)?;
    Ok(())
}

fn prepare(cfg: &PipelineConfig, args: &CorpusArgs, gate: bool) -> Result<Prepared> {
    Ok(prepare_corpus(cfg, &args.corpus, !args.no_cache, gate, &mut Stages::new())?)
}

fn status_of(p: &Prepared) -> RunStatus {
    if p.skipped.is_empty() && (!p.gate.applied || p.gate.accepted == p.gate.total) {
        RunStatus::Success
    } else {
        RunStatus::Partial
    }
}

fn write_bridges(dir: &Path, bridges: &[Bridge]) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(BRIDGES_FILE);
    write_atomic(&path, &to_jsonl(bridges)?)?;
    Ok(path)
}

fn read_jsonl<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).with_context(|| format!("{} line {}", path.display(), i + 1)))
        .collect()
}

fn execute(cli: Cli) -> Result<RunStatus> {
    let cfg = config(cli.config.as_deref())?;
    match cli.command {
        Command::Parse { corpus } => {
            let p = prepare(&cfg, &corpus, false)?;
            let rows: Vec<_> = p
                .corpus
                .graphs()
                .map(|g| json!({"graph_id": g.graph_id(), "doc_id": g.doc_id(), "depth": graph_depth(g), "penman": serialize_penman(g)}))
                .collect();
            print_jsonl(&rows)?;
            eprintln!("{} graphs, {} skipped", rows.len(), p.skipped.len());
            Ok(status_of(&p))
        }
        Command::Frames { corpus } => {
            let p = prepare(&cfg, &corpus, false)?;
            let frames: Vec<_> = p.corpus.frames().collect();
            print_jsonl(&frames)?;
            eprintln!("{} frames from {} graphs", frames.len(), p.corpus.sentence_count());
            Ok(status_of(&p))
        }
        Command::Bridges { corpus, out } => {
            let res = Resources::load(&cfg)?;
            let p = prepare(&cfg, &corpus, true)?;
            let bridges = discover_bridges(&p.corpus, &res.bridging, &cfg.scoring)?;
            let path = write_bridges(&out.out_dir, &bridges)?;
            eprintln!("{} bridges -> {}", bridges.len(), path.display());
            Ok(status_of(&p))
        }
        Command::Score { corpus, weights } => {
            let res = Resources::load(&cfg)?;
            let p = prepare(&cfg, &corpus, false)?;
            let mut scoring = cfg.scoring.clone();
            if let Some(w) = weights {
                if w.len() != 4 {
                    bail!("--weights takes exactly four values, got {}", w.len());
                }
                scoring.weights = StrengthWeights::new(w[0], w[1], w[2], w[3]);
            }
            let mut bridges = candidate_bridges(&p.corpus, &res.bridging)?;
            score_bridges(&mut bridges, &Scorer::new(&p.corpus, scoring)?)?;
            sort_bridges(&mut bridges);
            let rows: Vec<_> = bridges
                .iter()
                .map(|b| json!({"bridge_id": b.bridge_id, "kind": b.kind, "strength": b.strength}))
                .collect();
            print_jsonl(&rows)?;
            Ok(status_of(&p))
        }
        Command::Gate { corpus } => {
            if matches!(cfg.quality_control.generator, semweave::pipeline::GeneratorSpec::None) {
                bail!("no quality_control.generator configured; nothing to gate against");
            }
            let p = prepare(&cfg, &corpus, true)?;
            println!("{}", serde_json::to_string_pretty(&p.gate)?);
            Ok(status_of(&p))
        }
        Command::Generate { corpus, out, gen } => {
            let res = Resources::load(&cfg)?;
            let p = prepare(&cfg, &corpus, true)?;
            let bridges = discover_bridges(&p.corpus, &res.bridging, &cfg.scoring)?;
            write_bridges(&out.out_dir, &bridges)?;
            let mut gcfg = cfg.generation.config.clone();
            if gen.max_questions.is_some() {
                gcfg.max_questions = gen.max_questions;
            }
            let paths = weave_paths(&bridges, gcfg.max_path_frames);
            let client = completion_client(&gcfg, gen.template_only);
            let qa = synthesize_corpus(&bridges, &paths, &p.corpus, &res.templates, client.as_deref(), &gcfg)?;
            let qa_path = out.out_dir.join(QA_FILE);
            write_atomic(&qa_path, &to_jsonl(&qa)?)?;
            eprintln!("{} bridges, {} questions -> {}", bridges.len(), qa.len(), out.out_dir.display());
            Ok(status_of(&p))
        }
        Command::Report { corpus, out } => {
            let res = Resources::load(&cfg)?;
            let p = prepare(&cfg, &corpus, false)?;
            let bridges: Vec<Bridge> = read_jsonl(&out.out_dir.join(BRIDGES_FILE))?;
            let qa: Vec<GeneratedQA> = read_jsonl(&out.out_dir.join(QA_FILE))?;
            let relations = annotate_all(&bridges, p.corpus.entities(), &res.rules);
            let report = corpus_report(&qa, &bridges, &relations);
            let mut text = serde_json::to_vec_pretty(&report)?;
            text.push(b'\n');
            std::io::stdout().lock().write_all(&text)?;
            Ok(RunStatus::Success)
        }
        Command::GridSearch { ratings, min, max, step, delta, top } => {
            let file = std::fs::File::open(&ratings).with_context(|| format!("opening {}", ratings.display()))?;
            let items = read_rated_components(file).with_context(|| format!("reading {}", ratings.display()))?;
            let spec = GridSpec { min, max, step, delta };
            let outcome = grid_search(&spec.candidates(), &items)?;
            let best: Vec<_> = outcome.ranked.iter().take(top).collect();
            let doc = json!({
                "items": items.len(),
                "candidates": spec.candidates().len(),
                "rejected": outcome.rejected,
                "skipped": outcome.skipped.len(),
                "ranked": best,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(RunStatus::Success)
        }
        Command::Run { corpus, out, gen } => {
            let opts = RunOptions { use_cache: !corpus.no_cache, template_only: gen.template_only, max_questions: gen.max_questions };
            let outcome = run_pipeline(&cfg, &corpus.corpus, &out.out_dir, &opts)?;
            for (stage, secs) in &outcome.timings {
                log::info!("{stage}: {secs:.3}s");
            }
            if let Some(c) = outcome.cache {
                eprintln!("cache: {} hits, {} misses", c.hits, c.misses);
            }
            eprintln!(
                "{} sentences, {} bridges, {} questions -> {}, {}, {}",
                outcome.report.corpus.sentences,
                outcome.report.bridges.count,
                outcome.report.metrics.question_count,
                outcome.bridges_path.display(),
                outcome.qa_path.display(),
                out.out_dir.join(REPORT_FILE).display()
            );
            Ok(outcome.status)
        }
        Command::Synth { out, seed, documents, sentences } => {
            let records = synthetic_corpus(&SynthConfig { seed, documents, sentences_per_document: sentences, ..SynthConfig::default() });
            write_atomic(&out, &to_jsonl(&records)?)?;
            eprintln!("{} records -> {}", records.len(), out.display());
            Ok(RunStatus::Success)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match execute(cli) {
        Ok(status) => {
            if status == RunStatus::Partial {
                eprintln!("finished with dropped records (partial success)");
            }
            ExitCode::from(status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
