//! In-memory corpus index: exact cosine top-k, hyperlink resolution, and
//! line-delimited JSON persistence.
//!
//! File layout (format version 1): the first line is a header object
//! `{"format_version", "embedder", "dimension", "count"}`, followed by one
//! object per chunk with the chunk fields plus `"vector"`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::embedding::{cosine, Embedder, EmbeddingError, EmbeddingVector};
use crate::ingest::{build_chunk_id, Chunk};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("vector dimension {found} does not match index dimension {expected} (chunk {id})")]
    Dimension { id: String, expected: usize, found: usize },
    #[error("embedder `{found}` does not match index embedder `{expected}`")]
    Embedder { expected: String, found: String },
    #[error("cannot open index {path}: {source}")]
    Open {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("i/o error on index {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("index header: field `{field}` {reason}")]
    Header { field: &'static str, reason: String },
    #[error("index format version {found} is not supported (expected {expected})")]
    Version { expected: u64, found: u64 },
    #[error("cannot build an index from zero chunks")]
    NoChunks,
    #[error("embedding chunks: {0}")]
    Embedding(#[from] EmbeddingError),
    #[error("index record on line {line}: field `{field}` {reason}")]
    Record { line: usize, field: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexHeader {
    pub format_version: u64,
    pub embedder: String,
    pub dimension: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexedChunk {
    pub chunk: Chunk,
    pub vector: EmbeddingVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredChunk {
    pub chunk: Chunk,
    pub score: f64,
}

/// Orders by descending score, then ascending chunk id.
pub fn rank_order(a_score: f64, a_id: &str, b_score: f64, b_id: &str) -> Ordering {
    // Adding 0.0 folds -0.0 into 0.0 so that zero scores tie.
    (b_score + 0.0).total_cmp(&(a_score + 0.0)).then_with(|| a_id.cmp(b_id))
}

/// The corpus of chunks with their embeddings.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusIndex {
    header: IndexHeader,
    entries: Vec<IndexedChunk>,
    by_id: HashMap<String, usize>,
    by_page: HashMap<String, Vec<usize>>,
    by_anchor: HashMap<(String, String), Vec<usize>>,
}

impl CorpusIndex {
    pub fn new(embedder: impl Into<String>, dimension: usize) -> Self {
        Self {
            header: IndexHeader {
                format_version: FORMAT_VERSION,
                embedder: embedder.into(),
                dimension,
            },
            entries: Vec::new(),
            by_id: HashMap::new(),
            by_page: HashMap::new(),
            by_anchor: HashMap::new(),
        }
    }

    /// Embeds `chunks` and indexes them; later duplicates of an id are dropped.
    pub fn build<E: Embedder + ?Sized>(embedder: &E, chunks: Vec<Chunk>) -> Result<Self, IndexError> {
        if chunks.is_empty() {
            return Err(IndexError::NoChunks);
        }
        let texts: Vec<&str> = chunks.iter().map(|c| c.text.as_str()).collect();
        let vectors = embedder.embed_batch(&texts)?;
        let mut index = Self::new(embedder.id(), vectors[0].dimension());
        index.upsert(embedder.id(), chunks.into_iter().zip(vectors).collect())?;
        Ok(index)
    }

    pub fn header(&self) -> &IndexHeader {
        &self.header
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[IndexedChunk] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&IndexedChunk> {
        self.by_id.get(id).map(|&i| &self.entries[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.by_id.contains_key(id)
    }

    /// Inserts chunks whose ids are not yet present; existing ids are left
    /// untouched. Returns how many were inserted.
    ///
    /// The whole batch is validated before anything is inserted.
    pub fn upsert(&mut self, embedder: &str, batch: Vec<(Chunk, EmbeddingVector)>) -> Result<usize, IndexError> {
        if embedder != self.header.embedder {
            return Err(IndexError::Embedder {
                expected: self.header.embedder.clone(),
                found: embedder.to_string(),
            });
        }
        if let Some((chunk, v)) = batch.iter().find(|(_, v)| v.dimension() != self.header.dimension) {
            return Err(IndexError::Dimension {
                id: chunk.id.clone(),
                expected: self.header.dimension,
                found: v.dimension(),
            });
        }
        let mut inserted = 0;
        for (chunk, vector) in batch {
            if self.by_id.contains_key(&chunk.id) {
                continue;
            }
            self.insert_unchecked(IndexedChunk { chunk, vector });
            inserted += 1;
        }
        Ok(inserted)
    }

    fn insert_unchecked(&mut self, entry: IndexedChunk) {
        let pos = self.entries.len();
        self.entries.push(entry);
        let c = &self.entries[pos].chunk;
        self.by_id.insert(c.id.clone(), pos);
        self.by_page.entry(c.source_url.clone()).or_default().push(pos);
        let anchored = self
            .by_anchor
            .entry((c.source_url.clone(), c.anchor_name.clone()))
            .or_default();
        anchored.push(pos);
        let entries = &self.entries;
        anchored.sort_by_key(|&i| entries[i].chunk.chunk_index);
    }

    /// Exhaustive cosine scan; descending score, ties by ascending id.
    pub fn top_k(&self, query: &EmbeddingVector, k: usize) -> Vec<ScoredChunk> {
        if k == 0 || self.entries.is_empty() {
            return Vec::new();
        }
        let mut scored: Vec<(f64, usize)> = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| (cosine(query, &e.vector), i))
            .collect();
        let cmp = |a: &(f64, usize), b: &(f64, usize)| {
            rank_order(a.0, &self.entries[a.1].chunk.id, b.0, &self.entries[b.1].chunk.id)
        };
        if k < scored.len() {
            scored.select_nth_unstable_by(k - 1, cmp);
            scored.truncate(k);
        }
        scored.sort_by(cmp);
        scored
            .into_iter()
            .map(|(score, i)| ScoredChunk {
                chunk: self.entries[i].chunk.clone(),
                score,
            })
            .collect()
    }

    /// Chunks a hyperlink points at: the anchored section's chunks when an
    /// anchor is given, otherwise every chunk of the page. Unknown targets
    /// resolve to nothing.
    pub fn resolve_link(&self, target_url: &str, target_anchor: Option<&str>) -> Vec<&IndexedChunk> {
        let positions = match target_anchor {
            Some(anchor) => self.by_anchor.get(&(target_url.to_string(), anchor.to_string())),
            None => self.by_page.get(target_url),
        };
        positions
            .map(|ps| ps.iter().map(|&i| &self.entries[i]).collect())
            .unwrap_or_default()
    }

    /// Chunk ids of a page in insertion order.
    pub fn page_ids(&self, url: &str) -> Vec<&str> {
        self.by_page
            .get(url)
            .map(|ps| ps.iter().map(|&i| self.entries[i].chunk.id.as_str()).collect())
            .unwrap_or_default()
    }

    pub fn save(&self, path: &Path) -> Result<(), IndexError> {
        let io = |source| IndexError::Io {
            path: path.to_path_buf(),
            source,
        };
        let file = File::create(path).map_err(|source| IndexError::Open {
            path: path.to_path_buf(),
            source,
        })?;
        let mut out = BufWriter::new(file);
        let header = serde_json::json!({
            "format_version": self.header.format_version,
            "embedder": self.header.embedder,
            "dimension": self.header.dimension,
            "count": self.entries.len(),
        });
        serde_json::to_writer(&mut out, &header).map_err(|e| io(e.into()))?;
        out.write_all(b"\n").map_err(io)?;
        for entry in &self.entries {
            let record = RecordRef {
                chunk: &entry.chunk,
                vector: &entry.vector,
            };
            serde_json::to_writer(&mut out, &record).map_err(|e| io(e.into()))?;
            out.write_all(b"\n").map_err(io)?;
        }
        out.flush().map_err(io)
    }

    pub fn load(path: &Path) -> Result<Self, IndexError> {
        let file = File::open(path).map_err(|source| IndexError::Open {
            path: path.to_path_buf(),
            source,
        })?;
        let mut lines = BufReader::new(file).lines();
        let io = |source| IndexError::Io {
            path: path.to_path_buf(),
            source,
        };

        let first = lines.next().transpose().map_err(io)?.ok_or(IndexError::Header {
            field: "format_version",
            reason: "missing (empty file)".to_string(),
        })?;
        let (header, count) = parse_header(&first)?;
        let mut index = CorpusIndex::new(header.embedder, header.dimension);

        for (i, line) in lines.enumerate() {
            let line_no = i + 2;
            let line = line.map_err(io)?;
            if line.trim().is_empty() {
                continue;
            }
            let entry = parse_record(&line, line_no, index.header.dimension)?;
            if index.by_id.contains_key(&entry.chunk.id) {
                return Err(IndexError::Record {
                    line: line_no,
                    field: "id".to_string(),
                    reason: format!("duplicate id `{}`", entry.chunk.id),
                });
            }
            index.insert_unchecked(entry);
        }
        if let Some(count) = count {
            if count != index.len() {
                return Err(IndexError::Header {
                    field: "count",
                    reason: format!("says {count} records but file holds {}", index.len()),
                });
            }
        }
        Ok(index)
    }

    /// Loads and checks the index was built with the given embedder.
    pub fn load_for(path: &Path, embedder: &str) -> Result<Self, IndexError> {
        let index = Self::load(path)?;
        if index.header.embedder != embedder {
            return Err(IndexError::Embedder {
                expected: embedder.to_string(),
                found: index.header.embedder,
            });
        }
        Ok(index)
    }
}

#[derive(Serialize)]
struct RecordRef<'a> {
    #[serde(flatten)]
    chunk: &'a Chunk,
    vector: &'a EmbeddingVector,
}

#[derive(Deserialize)]
struct Record {
    #[serde(flatten)]
    chunk: Chunk,
    vector: Vec<f32>,
}

fn parse_header(line: &str) -> Result<(IndexHeader, Option<usize>), IndexError> {
    let value: Value = serde_json::from_str(line).map_err(|e| IndexError::Header {
        field: "format_version",
        reason: format!("unreadable header line: {e}"),
    })?;
    let field = |name: &'static str| {
        value.get(name).ok_or(IndexError::Header {
            field: name,
            reason: "missing".to_string(),
        })
    };
    let version = field("format_version")?.as_u64().ok_or(IndexError::Header {
        field: "format_version",
        reason: "must be a non-negative integer".to_string(),
    })?;
    if version != FORMAT_VERSION {
        return Err(IndexError::Version {
            expected: FORMAT_VERSION,
            found: version,
        });
    }
    let embedder = field("embedder")?
        .as_str()
        .filter(|s| !s.is_empty())
        .ok_or(IndexError::Header {
            field: "embedder",
            reason: "must be a non-empty string".to_string(),
        })?
        .to_string();
    let dimension = field("dimension")?
        .as_u64()
        .filter(|&d| d > 0)
        .ok_or(IndexError::Header {
            field: "dimension",
            reason: "must be a positive integer".to_string(),
        })? as usize;
    let count = match value.get("count") {
        None => None,
        Some(c) => Some(c.as_u64().ok_or(IndexError::Header {
            field: "count",
            reason: "must be a non-negative integer".to_string(),
        })? as usize),
    };
    Ok((
        IndexHeader {
            format_version: version,
            embedder,
            dimension,
        },
        count,
    ))
}

fn parse_record(line: &str, line_no: usize, dimension: usize) -> Result<IndexedChunk, IndexError> {
    let record: Record = serde_json::from_str(line).map_err(|e| {
        let msg = e.to_string();
        let field = msg
            .split('`')
            .nth(1)
            .filter(|_| msg.contains("field"))
            .unwrap_or("record")
            .to_string();
        IndexError::Record {
            line: line_no,
            field,
            reason: msg,
        }
    })?;
    let bad = |field: &str, reason: String| IndexError::Record {
        line: line_no,
        field: field.to_string(),
        reason,
    };
    let chunk = record.chunk;
    let expected_id = build_chunk_id(&chunk.source_url, &chunk.anchor_name, chunk.chunk_index);
    if chunk.id != expected_id {
        return Err(bad(
            "id",
            format!("`{}` is not the canonical `{expected_id}`", chunk.id),
        ));
    }
    if chunk.links.len() != chunk.links_context.len() {
        return Err(bad(
            "links_context",
            format!(
                "has {} entries for {} links",
                chunk.links_context.len(),
                chunk.links.len()
            ),
        ));
    }
    if record.vector.len() != dimension {
        return Err(bad(
            "vector",
            format!("has dimension {} but header says {dimension}", record.vector.len()),
        ));
    }
    let norm = record
        .vector
        .iter()
        .map(|&v| f64::from(v) * f64::from(v))
        .sum::<f64>()
        .sqrt();
    if (norm - 1.0).abs() > 1e-4 {
        return Err(bad("vector", format!("is not unit length (norm {norm})")));
    }
    Ok(IndexedChunk {
        chunk,
        vector: EmbeddingVector::from_unit(record.vector),
    })
}
