#![allow(dead_code)]

pub mod graph;
pub mod planted;

use linkrag_core::index::ScoredChunk;
use linkrag_core::ingest::{build_chunk_id, Chunk, LinkRef};
use linkrag_core::retrieval::{ExpandedChunk, RetrievedContext};

pub const GOLDEN_QUESTION: &str = "How do I run a flow?";

pub fn golden_path(kind: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{kind}.txt"))
}

pub fn plain_chunk(page: &str, anchor: &str, text: &str) -> Chunk {
    let url = format!("https://docs.example/{page}");
    Chunk {
        id: build_chunk_id(&url, anchor, 0),
        source_url: url,
        anchor_name: anchor.into(),
        chunk_index: 0,
        text: text.into(),
        links: vec![],
        links_context: vec![],
    }
}

/// Two seeds and one linked chunk, matching the golden prompt files.
pub fn golden_context() -> RetrievedContext {
    let s1 = plain_chunk("run.html", "run", "To run a flow, open it in Studio and press Compute.");
    let s2 = plain_chunk("flows.html", "flows", "Flows are built from tasks connected by arrows.");
    let l1 = plain_chunk(
        "import.html",
        "import",
        "Before running a flow, import a dataset with the Import task.",
    );
    let via = LinkRef {
        target_url: l1.source_url.clone(),
        target_anchor: Some("import".into()),
        context: "first import a dataset".into(),
        is_internal: true,
    };
    RetrievedContext {
        query: GOLDEN_QUESTION.into(),
        final_ids: vec![s1.id.clone(), s2.id.clone(), l1.id.clone()],
        seeds: vec![
            ScoredChunk {
                chunk: s1.clone(),
                score: 0.9,
            },
            ScoredChunk { chunk: s2, score: 0.8 },
        ],
        expanded: vec![ExpandedChunk {
            chunk: l1,
            via,
            from: s1.id,
            link_score: 0.7,
            hop: 1,
        }],
        events: vec![],
    }
}
