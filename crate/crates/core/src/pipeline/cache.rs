use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::Compression;
use super::ingest::CorpusRecord;
use crate::corpus::GraphAnalysis;

/// Bumped whenever the cached analysis layout changes.
const SCHEMA: &str = "analysis-v1";

pub fn cache_key(record: &CorpusRecord) -> String {
    let mut h = Sha256::new();
    for part in [&record.doc_id, &record.sent_id, &record.text, &record.amr] {
        h.update(part.as_bytes());
        h.update([0u8]);
    }
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    h.update([0u8]);
    h.update(SCHEMA.as_bytes());
    hex::encode(h.finalize())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CacheStats {
    pub hits: usize,
    pub misses: usize,
}

/// Content-addressed store of per-sentence analyses.
pub struct AnalysisCache {
    dir: PathBuf,
    compression: Compression,
    hits: AtomicUsize,
    misses: AtomicUsize,
}

impl AnalysisCache {
    pub fn new(dir: impl Into<PathBuf>, compression: Compression) -> Self {
        AnalysisCache { dir: dir.into(), compression, hits: AtomicUsize::new(0), misses: AtomicUsize::new(0) }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        let ext = match self.compression {
            Compression::Gzip => "json.gz",
            Compression::None => "json",
        };
        self.dir.join(&key[..2]).join(format!("{key}.{ext}"))
    }

    fn read(&self, path: &Path) -> std::io::Result<GraphAnalysis> {
        let bytes = std::fs::read(path)?;
        let mut text = Vec::new();
        match self.compression {
            Compression::Gzip => {
                GzDecoder::new(bytes.as_slice()).read_to_end(&mut text)?;
            }
            Compression::None => text = bytes,
        }
        serde_json::from_slice(&text).map_err(std::io::Error::other)
    }

    pub fn get(&self, key: &str) -> Option<GraphAnalysis> {
        let path = self.path(key);
        let found = if path.exists() {
            match self.read(&path) {
                Ok(a) => Some(a),
                Err(e) => {
                    log::warn!("ignoring unreadable cache entry {}: {e}", path.display());
                    None
                }
            }
        } else {
            None
        };
        let counter = if found.is_some() { &self.hits } else { &self.misses };
        counter.fetch_add(1, Ordering::Relaxed);
        found
    }

    /// Writes to a temporary file in the target directory, then renames.
    pub fn put(&self, key: &str, analysis: &GraphAnalysis) -> std::io::Result<()> {
        let path = self.path(key);
        let parent = path.parent().expect("cache path has a parent");
        std::fs::create_dir_all(parent)?;
        let json = serde_json::to_vec(analysis).map_err(std::io::Error::other)?;
        let mut tmp = tempfile::NamedTempFile::new_in(parent)?;
        match self.compression {
            Compression::Gzip => {
                let mut enc = GzEncoder::new(&mut tmp, flate2::Compression::default());
                enc.write_all(&json)?;
                enc.finish()?;
            }
            Compression::None => tmp.write_all(&json)?,
        }
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(())
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats { hits: self.hits.load(Ordering::Relaxed), misses: self.misses.load(Ordering::Relaxed) }
    }
}
