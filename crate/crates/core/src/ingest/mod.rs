//! HTML documentation ingestion.
//!
//! Pages are parsed into anchor-aligned [`Section`]s, every hyperlink is
//! normalized to an absolute [`LinkRef`] with a twelve-word context, and
//! sections are split into overlapping [`Chunk`]s whose ids follow the
//! `<source>:<anchor_name>-<chunk_index>` scheme.

mod html;
mod links;
mod split;

use std::io::Write;
use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use url::Url;
use walkdir::WalkDir;

pub use html::{parse_document, ParsedDocument, PAGE_ROOT_ANCHOR};
pub use links::{extract_link_context, LinkNormalizer, LinkRef, LinkWarning, NormalizedLink, CONTEXT_WORDS};
pub use split::{character_windows, TextSplitter, SEPARATORS};

pub const DEFAULT_CHUNK_SIZE: usize = 1000;
pub const DEFAULT_CHUNK_OVERLAP: usize = 150;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot decode {url}: {reason}")]
    Decode { url: String, reason: String },
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid base url `{0}`")]
    BaseUrl(String),
    #[error("invalid chunking parameters: size {chunk_size}, overlap {overlap}")]
    Chunking { chunk_size: usize, overlap: usize },
}

/// A raw page and the absolute URL it is published under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceDocument {
    pub url: String,
    pub html: Vec<u8>,
}

/// One anchor-delimited block of a page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub source_url: String,
    pub anchor_name: String,
    pub text: String,
    pub links: Vec<LinkRef>,
    /// Character range of each link's anchor text in `text`, parallel to `links`.
    pub link_spans: Vec<Range<usize>>,
}

/// The retrieval unit: a bounded piece of a section plus its hypertext metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunk {
    pub id: String,
    pub source_url: String,
    pub anchor_name: String,
    pub chunk_index: usize,
    pub text: String,
    pub links: Vec<LinkRef>,
    pub links_context: Vec<String>,
}

impl Chunk {
    /// Internal links in document order.
    pub fn internal_links(&self) -> impl Iterator<Item = &LinkRef> {
        self.links.iter().filter(|l| l.is_internal)
    }
}

pub fn build_chunk_id(source_url: &str, anchor_name: &str, chunk_index: usize) -> String {
    format!("{source_url}:{anchor_name}-{chunk_index}")
}

/// Splits a section and attaches each link to the first chunk covering the
/// start of its anchor text. Links inside an overlap go to the earlier chunk only.
pub fn chunk_section(section: &Section, splitter: &TextSplitter) -> Vec<Chunk> {
    let ranges = splitter.split(&section.text);
    if ranges.is_empty() {
        return Vec::new();
    }
    let chars: Vec<char> = section.text.chars().collect();
    let mut chunks: Vec<Chunk> = ranges
        .iter()
        .enumerate()
        .map(|(i, r)| Chunk {
            id: build_chunk_id(&section.source_url, &section.anchor_name, i),
            source_url: section.source_url.clone(),
            anchor_name: section.anchor_name.clone(),
            chunk_index: i,
            text: chars[r.clone()].iter().collect(),
            links: Vec::new(),
            links_context: Vec::new(),
        })
        .collect();

    for (link, span) in section.links.iter().zip(&section.link_spans) {
        let at = span.start;
        let owner = ranges
            .iter()
            .position(|r| r.start <= at && at < r.end)
            .unwrap_or(ranges.len() - 1);
        chunks[owner].links.push(link.clone());
        chunks[owner].links_context.push(link.context.clone());
    }
    chunks
}

/// Chunking parameters and the URL convention for a corpus directory.
#[derive(Debug, Clone)]
pub struct IngestOptions {
    pub chunk_size: usize,
    pub overlap: usize,
    /// URL prefix that a file's path relative to the corpus root is appended
    /// to. Also decides which links count as internal.
    pub base_url_prefix: String,
}

/// Everything produced from one ingestion pass.
#[derive(Debug, Clone, Default)]
pub struct IngestOutput {
    pub documents: usize,
    pub sections: usize,
    pub chunks: Vec<Chunk>,
    pub warnings: Vec<LinkWarning>,
}

impl IngestOutput {
    pub fn link_count(&self) -> usize {
        self.chunks.iter().map(|c| c.links.len()).sum()
    }

    pub fn internal_link_count(&self) -> usize {
        self.chunks.iter().map(|c| c.internal_links().count()).sum()
    }

    /// Writes one JSON object per warning.
    pub fn write_warnings<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for w in &self.warnings {
            serde_json::to_writer(&mut out, w)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

pub struct Ingestor {
    splitter: TextSplitter,
    normalizer: LinkNormalizer,
}

impl Ingestor {
    pub fn new(chunk_size: usize, overlap: usize, corpus_prefix: impl Into<String>) -> Result<Self, IngestError> {
        let splitter = TextSplitter::new(chunk_size, overlap).ok_or(IngestError::Chunking { chunk_size, overlap })?;
        Ok(Self {
            splitter,
            normalizer: LinkNormalizer::new(corpus_prefix),
        })
    }

    pub fn normalizer(&self) -> &LinkNormalizer {
        &self.normalizer
    }

    /// Parses and chunks documents, keeping input order.
    pub fn ingest_documents(&self, docs: &[SourceDocument]) -> Result<IngestOutput, IngestError> {
        let mut out = IngestOutput::default();
        for doc in docs {
            let parsed = parse_document(doc, &self.normalizer)?;
            out.documents += 1;
            out.sections += parsed.sections.len();
            for section in &parsed.sections {
                out.chunks.extend(chunk_section(section, &self.splitter));
            }
            out.warnings.extend(parsed.warnings);
        }
        Ok(out)
    }
}

/// Recursively collects `.html`/`.htm` files under `root`, sorted by relative
/// path, each published under `prefix` + relative path.
pub fn load_corpus_dir(root: &Path, prefix: &str) -> Result<Vec<SourceDocument>, IngestError> {
    let prefix = normalize_prefix(prefix)?;
    let mut files = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| IngestError::Io {
            path: e.path().map(Path::to_path_buf).unwrap_or_else(|| root.to_path_buf()),
            source: e.into_io_error().unwrap_or_else(|| std::io::Error::other("walk error")),
        })?;
        let path = entry.path();
        let is_html = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("html") || e.eq_ignore_ascii_case("htm"));
        if entry.file_type().is_file() && is_html {
            files.push(path.to_path_buf());
        }
    }

    let mut docs = Vec::with_capacity(files.len());
    for path in files {
        let rel = path.strip_prefix(root).unwrap_or(&path);
        let rel: Vec<String> = rel
            .components()
            .map(|c| c.as_os_str().to_string_lossy().into_owned())
            .collect();
        let html = std::fs::read(&path).map_err(|source| IngestError::Io {
            path: path.clone(),
            source,
        })?;
        docs.push(SourceDocument {
            url: format!("{prefix}{}", rel.join("/")),
            html,
        });
    }
    docs.sort_by(|a, b| a.url.cmp(&b.url));
    Ok(docs)
}

/// Makes sure the prefix is an absolute URL ending in `/`.
pub fn normalize_prefix(prefix: &str) -> Result<String, IngestError> {
    let mut p = prefix.trim().to_string();
    if !p.ends_with('/') {
        p.push('/');
    }
    Url::parse(&p).map_err(|_| IngestError::BaseUrl(prefix.to_string()))?;
    Ok(p)
}

/// `file://` prefix for a directory, used when no base URL is configured.
pub fn file_url_prefix(root: &Path) -> Result<String, IngestError> {
    let abs = std::fs::canonicalize(root).map_err(|source| IngestError::Io {
        path: root.to_path_buf(),
        source,
    })?;
    Url::from_directory_path(&abs)
        .map(|u| u.to_string())
        .map_err(|_| IngestError::BaseUrl(abs.display().to_string()))
}
