//! Baseline top-k retrieval and link-aware expansion.
//!
//! Link-aware retrieval starts from the same top-k seed set as the baseline
//! and then walks author-defined hyperlinks depth-first. At each chunk the
//! first `n_links` internal links (document order) are followed; each link
//! is resolved to its target chunks, the unvisited candidates are ranked by
//! cosine similarity between the link's context and the chunk, and the best
//! `top_m` are kept and expanded in turn, up to `depth` hops from the seed.
//! One visited set is shared by the whole traversal, so a chunk enters the
//! context at most once.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{cosine, Embedder, EmbeddingError, EmbeddingVector};
use crate::index::{rank_order, CorpusIndex, IndexedChunk, ScoredChunk};
use crate::ingest::{Chunk, LinkRef};

#[derive(Debug, Error)]
pub enum RetrievalError {
    #[error("the index is empty")]
    EmptyIndex,
    #[error("query is empty")]
    EmptyQuery,
    #[error("invalid retrieval config: {0}")]
    Config(String),
    #[error("index was built with embedder `{index}` but retriever uses `{embedder}`")]
    EmbedderMismatch { index: String, embedder: String },
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssemblyMode {
    /// Seeds in score order followed by expanded chunks in traversal order.
    #[default]
    Augment,
    /// Seeds and expansions rescored against the query, truncated to `k`.
    RerankTruncate,
}

impl fmt::Display for AssemblyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AssemblyMode::Augment => "augment",
            AssemblyMode::RerankTruncate => "rerank_truncate",
        })
    }
}

impl FromStr for AssemblyMode {
    type Err = RetrievalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "augment" => Ok(AssemblyMode::Augment),
            "rerank_truncate" | "rerank-truncate" => Ok(AssemblyMode::RerankTruncate),
            other => Err(RetrievalError::Config(format!("unknown assembly mode `{other}`"))),
        }
    }
}

/// `k` plus the expansion triple `(n_links, depth, top_m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetrievalConfig {
    pub k: usize,
    pub n_links: usize,
    pub depth: usize,
    pub top_m: usize,
    #[serde(default)]
    pub assembly_mode: AssemblyMode,
}

impl Default for RetrievalConfig {
    fn default() -> Self {
        Self::link_aware(5, 1, 1, 1)
    }
}

impl RetrievalConfig {
    /// Plain top-k: traversal triple `(0, 0, 0)`.
    pub fn baseline(k: usize) -> Self {
        Self::link_aware(k, 0, 0, 0)
    }

    pub fn link_aware(k: usize, n_links: usize, depth: usize, top_m: usize) -> Self {
        Self {
            k,
            n_links,
            depth,
            top_m,
            assembly_mode: AssemblyMode::Augment,
        }
    }

    pub fn with_mode(mut self, mode: AssemblyMode) -> Self {
        self.assembly_mode = mode;
        self
    }

    pub fn expansion_enabled(&self) -> bool {
        self.n_links > 0
    }

    /// `k >= 1`, and the triple is either all zero or all positive.
    pub fn validate(&self) -> Result<(), RetrievalError> {
        if self.k == 0 {
            return Err(RetrievalError::Config("k must be at least 1".into()));
        }
        let zeros = [self.n_links, self.depth, self.top_m]
            .iter()
            .filter(|&&v| v == 0)
            .count();
        if zeros != 0 && zeros != 3 {
            return Err(RetrievalError::Config(format!(
                "({},{},{}): n_links, depth and top_m must all be zero (no expansion) or all positive",
                self.n_links, self.depth, self.top_m
            )));
        }
        Ok(())
    }

    /// Parses a `n_links,depth,top_m` triple.
    pub fn parse_triple(s: &str) -> Result<(usize, usize, usize), RetrievalError> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || RetrievalError::Config(format!("expected n_links,depth,top_m but got `{s}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let nums: Vec<usize> = parts
            .iter()
            .map(|p| p.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        Ok((nums[0], nums[1], nums[2]))
    }

    /// Short stable label, e.g. `k5_n1d1m1`, with `_rt` for rerank-truncate.
    pub fn label(&self) -> String {
        let mut s = format!("k{}_n{}d{}m{}", self.k, self.n_links, self.depth, self.top_m);
        if self.assembly_mode == AssemblyMode::RerankTruncate {
            s.push_str("_rt");
        }
        s
    }

    pub fn parse_label(label: &str) -> Result<Self, RetrievalError> {
        let bad = || RetrievalError::Config(format!("malformed config label `{label}`"));
        let (body, mode) = match label.strip_suffix("_rt") {
            Some(body) => (body, AssemblyMode::RerankTruncate),
            None => (label, AssemblyMode::Augment),
        };
        let (k, triple) = body
            .strip_prefix('k')
            .and_then(|r| r.split_once("_n"))
            .ok_or_else(bad)?;
        let (n, rest) = triple.split_once('d').ok_or_else(bad)?;
        let (d, m) = rest.split_once('m').ok_or_else(bad)?;
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        Ok(Self::link_aware(num(k)?, num(n)?, num(d)?, num(m)?).with_mode(mode))
    }
}

/// A chunk added by following a hyperlink.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpandedChunk {
    pub chunk: Chunk,
    /// The link that was followed.
    pub via: LinkRef,
    /// Id of the chunk the link was taken from.
    pub from: String,
    /// `cos(e(link context), e(chunk))`.
    pub link_score: f64,
    /// Hops from the seed (1 = direct target of a seed).
    pub hop: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RetrievalEvent {
    /// A link had neither context nor anchor text to score candidates with;
    /// candidates were kept in document order.
    DegenerateRerank { from: String, link: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetrievedContext {
    pub query: String,
    pub seeds: Vec<ScoredChunk>,
    pub expanded: Vec<ExpandedChunk>,
    /// Chunk ids handed to generation, in order.
    pub final_ids: Vec<String>,
    pub events: Vec<RetrievalEvent>,
}

impl RetrievedContext {
    pub fn chunk(&self, id: &str) -> Option<&Chunk> {
        self.seeds
            .iter()
            .map(|s| &s.chunk)
            .chain(self.expanded.iter().map(|e| &e.chunk))
            .find(|c| c.id == id)
    }

    pub fn is_seed(&self, id: &str) -> bool {
        self.seeds.iter().any(|s| s.chunk.id == id)
    }

    pub fn final_chunks(&self) -> Vec<&Chunk> {
        self.final_ids.iter().filter_map(|id| self.chunk(id)).collect()
    }

    /// Final chunks split into (seed-derived, link-derived), each in final order.
    pub fn final_partition(&self) -> (Vec<&Chunk>, Vec<&Chunk>) {
        self.final_chunks().into_iter().partition(|c| self.is_seed(&c.id))
    }
}

/// Ranked candidates for one link.
#[derive(Debug, Clone)]
pub struct LinkRerank<'a> {
    pub ranked: Vec<(&'a IndexedChunk, f64)>,
    /// Set when there was no text to score against.
    pub degenerate: bool,
}

pub struct Retriever<'a, E: Embedder + ?Sized> {
    index: &'a CorpusIndex,
    embedder: &'a E,
}

impl<'a, E: Embedder + ?Sized> Retriever<'a, E> {
    pub fn new(index: &'a CorpusIndex, embedder: &'a E) -> Result<Self, RetrievalError> {
        if index.header().embedder != embedder.id() {
            return Err(RetrievalError::EmbedderMismatch {
                index: index.header().embedder.clone(),
                embedder: embedder.id().to_string(),
            });
        }
        Ok(Self { index, embedder })
    }

    pub fn index(&self) -> &'a CorpusIndex {
        self.index
    }

    fn embed_query(&self, query: &str) -> Result<EmbeddingVector, RetrievalError> {
        if query.trim().is_empty() {
            return Err(RetrievalError::EmptyQuery);
        }
        if self.index.is_empty() {
            return Err(RetrievalError::EmptyIndex);
        }
        Ok(self.embedder.embed(query)?)
    }

    pub fn retrieve_baseline(&self, query: &str, k: usize) -> Result<RetrievedContext, RetrievalError> {
        if k == 0 {
            return Err(RetrievalError::Config("k must be at least 1".into()));
        }
        let q = self.embed_query(query)?;
        Ok(self.baseline_with(query, &q, k))
    }

    fn baseline_with(&self, query: &str, q: &EmbeddingVector, k: usize) -> RetrievedContext {
        let seeds = self.index.top_k(q, k);
        let final_ids = seeds.iter().map(|s| s.chunk.id.clone()).collect();
        RetrievedContext {
            query: query.to_string(),
            seeds,
            expanded: Vec::new(),
            final_ids,
            events: Vec::new(),
        }
    }

    /// Scores candidates by `cos(e(link context), e(chunk))`, descending,
    /// ties by chunk id, keeping at most `top_m`.
    ///
    /// Chunk embeddings come from the index, which holds `e(chunk.text)`
    /// for the same embedder. An empty context falls back to the target
    /// anchor name; with neither, candidates keep document order.
    pub fn rerank_link_candidates<'c>(
        &self,
        link: &LinkRef,
        candidates: Vec<&'c IndexedChunk>,
        top_m: usize,
    ) -> Result<LinkRerank<'c>, RetrievalError> {
        self.rerank_cached(link, candidates, top_m, &mut HashMap::new())
    }

    fn rerank_cached<'c>(
        &self,
        link: &LinkRef,
        candidates: Vec<&'c IndexedChunk>,
        top_m: usize,
        cache: &mut HashMap<String, EmbeddingVector>,
    ) -> Result<LinkRerank<'c>, RetrievalError> {
        let scoring_text = if !link.context.trim().is_empty() {
            Some(link.context.clone())
        } else {
            link.target_anchor
                .as_deref()
                .map(|a| a.replace(['-', '_'], " "))
                .filter(|a| !a.trim().is_empty())
        };

        let Some(text) = scoring_text else {
            let ranked = candidates.into_iter().take(top_m).map(|c| (c, 0.0)).collect();
            return Ok(LinkRerank {
                ranked,
                degenerate: true,
            });
        };

        let probe = match cache.get(&text) {
            Some(v) => v.clone(),
            None => {
                let v = self.embedder.embed(&text)?;
                cache.insert(text, v.clone());
                v
            }
        };
        let mut ranked: Vec<(&IndexedChunk, f64)> =
            candidates.into_iter().map(|c| (c, cosine(&probe, &c.vector))).collect();
        ranked.sort_by(|a, b| rank_order(a.1, &a.0.chunk.id, b.1, &b.0.chunk.id));
        ranked.truncate(top_m);
        Ok(LinkRerank {
            ranked,
            degenerate: false,
        })
    }

    /// Depth-first hyperlink expansion from `seeds` (in the given order).
    /// `visited` must already hold the seed ids and is updated in place.
    pub fn expand_links(
        &self,
        seeds: &[ScoredChunk],
        config: &RetrievalConfig,
        visited: &mut HashSet<String>,
    ) -> Result<(Vec<ExpandedChunk>, Vec<RetrievalEvent>), RetrievalError> {
        let mut walk = Walk {
            out: Vec::new(),
            events: Vec::new(),
            cache: HashMap::new(),
        };
        if config.expansion_enabled() {
            for seed in seeds {
                self.expand_from(&seed.chunk, 1, config, visited, &mut walk)?;
            }
        }
        Ok((walk.out, walk.events))
    }

    fn expand_from(
        &self,
        source: &Chunk,
        hop: usize,
        config: &RetrievalConfig,
        visited: &mut HashSet<String>,
        walk: &mut Walk,
    ) -> Result<(), RetrievalError> {
        if hop > config.depth {
            return Ok(());
        }
        for link in source.internal_links().take(config.n_links) {
            let candidates: Vec<&IndexedChunk> = self
                .index
                .resolve_link(&link.target_url, link.target_anchor.as_deref())
                .into_iter()
                .filter(|c| !visited.contains(&c.chunk.id))
                .collect();
            if candidates.is_empty() {
                continue;
            }
            let rerank = self.rerank_cached(link, candidates, config.top_m, &mut walk.cache)?;
            if rerank.degenerate {
                walk.events.push(RetrievalEvent::DegenerateRerank {
                    from: source.id.clone(),
                    link: link.href(),
                });
            }
            for (c, _) in &rerank.ranked {
                visited.insert(c.chunk.id.clone());
            }
            for (c, score) in rerank.ranked {
                walk.out.push(ExpandedChunk {
                    chunk: c.chunk.clone(),
                    via: link.clone(),
                    from: source.id.clone(),
                    link_score: score,
                    hop,
                });
                self.expand_from(&c.chunk, hop + 1, config, visited, walk)?;
            }
        }
        Ok(())
    }

    pub fn retrieve_link_aware(
        &self,
        query: &str,
        config: &RetrievalConfig,
    ) -> Result<RetrievedContext, RetrievalError> {
        config.validate()?;
        let q = self.embed_query(query)?;
        let mut ctx = self.baseline_with(query, &q, config.k);
        if !config.expansion_enabled() {
            return Ok(ctx);
        }

        let mut visited: HashSet<String> = ctx.seeds.iter().map(|s| s.chunk.id.clone()).collect();
        let (expanded, events) = self.expand_links(&ctx.seeds, config, &mut visited)?;
        ctx.expanded = expanded;
        ctx.events = events;

        ctx.final_ids = match config.assembly_mode {
            AssemblyMode::Augment => ctx
                .seeds
                .iter()
                .map(|s| s.chunk.id.clone())
                .chain(ctx.expanded.iter().map(|e| e.chunk.id.clone()))
                .collect(),
            AssemblyMode::RerankTruncate => {
                let mut union: Vec<(f64, &str)> = ctx
                    .seeds
                    .iter()
                    .map(|s| s.chunk.id.as_str())
                    .chain(ctx.expanded.iter().map(|e| e.chunk.id.as_str()))
                    .map(|id| {
                        let v = &self.index.get(id).expect("retrieved chunks come from the index").vector;
                        (cosine(&q, v), id)
                    })
                    .collect();
                union.sort_by(|a, b| rank_order(a.0, a.1, b.0, b.1));
                union.into_iter().take(config.k).map(|(_, id)| id.to_string()).collect()
            }
        };
        Ok(ctx)
    }
}

struct Walk {
    out: Vec<ExpandedChunk>,
    events: Vec<RetrievalEvent>,
    cache: HashMap<String, EmbeddingVector>,
}
