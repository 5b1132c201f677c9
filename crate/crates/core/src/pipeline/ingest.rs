use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amr::{parse_penman, read_penman_blocks};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub doc_id: String,
    pub sent_id: String,
    pub text: String,
    pub amr: String,
}

impl CorpusRecord {
    pub fn graph_id(&self) -> String {
        format!("{}/{}", self.doc_id, self.sent_id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedRecord {
    pub source: String,
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct IngestedCorpus {
    pub records: Vec<CorpusRecord>,
    pub skipped: Vec<SkippedRecord>,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("duplicate record ({doc_id}, {sent_id})")]
    DuplicateRecord { doc_id: String, sent_id: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IngestError + '_ {
    move |source| IngestError::Io { path: path.to_path_buf(), source }
}

fn is_jsonl(path: &Path) -> bool {
    matches!(path.extension().and_then(|e| e.to_str()), Some("jsonl" | "json" | "ndjson"))
}

fn is_penman(path: &Path) -> bool {
    matches!(path.extension().and_then(|e| e.to_str()), Some("amr" | "penman" | "txt"))
}

fn files_under(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), IngestError> {
    for entry in std::fs::read_dir(dir).map_err(io_err(dir))? {
        let path = entry.map_err(io_err(dir))?.path();
        if path.is_dir() {
            files_under(&path, out)?;
        } else if is_jsonl(&path) || is_penman(&path) {
            out.push(path);
        }
    }
    Ok(())
}

fn stem(path: &Path) -> String {
    path.file_stem().and_then(|s| s.to_str()).unwrap_or("doc").to_string()
}

fn read_jsonl(path: &Path, text: &str, out: &mut IngestedCorpus) {
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<CorpusRecord>(line) {
            Ok(r) => out.records.push(r),
            Err(e) => out.skipped.push(SkippedRecord { source: path.display().to_string(), line: i + 1, reason: e.to_string() }),
        }
    }
}

/// `::doc` falls back to the file stem, `::id` to `s<n>`, `::snt` to "".
fn read_penman(path: &Path, text: &str, out: &mut IngestedCorpus) {
    for (n, block) in read_penman_blocks(text).into_iter().enumerate() {
        out.records.push(CorpusRecord {
            doc_id: block.metadata.get("doc").cloned().unwrap_or_else(|| stem(path)),
            sent_id: block.id().map(str::to_string).unwrap_or_else(|| format!("s{}", n + 1)),
            text: block.sentence().unwrap_or_default().to_string(),
            amr: block.penman,
        });
    }
}

/// Reads JSONL or PENMAN files, or every such file below a directory in
/// sorted path order. Records whose AMR fails to parse are skipped and
/// listed; duplicate (doc_id, sent_id) pairs are an error.
pub fn ingest_corpus(path: &Path) -> Result<IngestedCorpus, IngestError> {
    let mut files = Vec::new();
    if path.is_dir() {
        files_under(path, &mut files)?;
        files.sort();
    } else {
        files.push(path.to_path_buf());
    }
    let mut raw = IngestedCorpus::default();
    for file in &files {
        let text = std::fs::read_to_string(file).map_err(io_err(file))?;
        if is_jsonl(file) {
            read_jsonl(file, &text, &mut raw);
        } else {
            read_penman(file, &text, &mut raw);
        }
    }

    let mut out = IngestedCorpus { records: Vec::new(), skipped: raw.skipped };
    let mut seen = BTreeSet::new();
    for (i, r) in raw.records.into_iter().enumerate() {
        if !seen.insert((r.doc_id.clone(), r.sent_id.clone())) {
            return Err(IngestError::DuplicateRecord { doc_id: r.doc_id, sent_id: r.sent_id });
        }
        match parse_penman(&r.amr, &r.graph_id(), &r.doc_id) {
            Ok(_) => out.records.push(r),
            Err(e) => {
                log::warn!("skipping {}: {e}", r.graph_id());
                out.skipped.push(SkippedRecord { source: r.graph_id(), line: i + 1, reason: e.to_string() });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::File::create(&p).unwrap().write_all(body.as_bytes()).unwrap();
        p
    }

    #[test]
    fn jsonl_with_skips() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "c.jsonl",
            concat!(
                r#"{"doc_id":"d1","sent_id":"1","text":"A company.","amr":"(c / company)"}"#,
                "\n",
                r#"{"doc_id":"d1","sent_id":"2","text":"Broken.","amr":"(c / company"}"#,
                "\nnot json\n\n",
                r#"{"doc_id":"d2","sent_id":"1","text":"A firm.","amr":"(f / firm)"}"#,
                "\n"
            ),
        );
        let c = ingest_corpus(&p).unwrap();
        assert_eq!(c.records.len(), 2);
        assert_eq!(c.skipped.len(), 2);
        assert_eq!(c.records[1].graph_id(), "d2/1");
    }

    #[test]
    fn duplicate_is_fatal() {
        let dir = tempfile::tempdir().unwrap();
        let line = r#"{"doc_id":"d1","sent_id":"1","text":"x","amr":"(c / company)"}"#;
        let p = write(dir.path(), "c.jsonl", &format!("{line}\n{line}\n"));
        assert!(matches!(ingest_corpus(&p), Err(IngestError::DuplicateRecord { .. })));
    }

    #[test]
    fn penman_directory() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "alpha.amr", "# ::id a1\n# ::snt A company.\n(c / company)\n\n(f / firm)\n");
        write(dir.path(), "beta.penman", "# ::id b1 ::doc other\n(p / person)\n");
        write(dir.path(), "ignored.md", "nothing");
        let c = ingest_corpus(dir.path()).unwrap();
        let ids: Vec<String> = c.records.iter().map(CorpusRecord::graph_id).collect();
        assert_eq!(ids, vec!["alpha/a1", "alpha/s2", "other/b1"]);
        assert_eq!(c.records[0].text, "A company.");
    }
}
