use linkrag_core::ingest::{build_chunk_id, Chunk, LinkRef};
use rand::seq::IndexedRandom;
use rand::RngExt;
use rand_chacha::ChaCha8Rng;

/// Random chunk graph with broken, external and anchorless links.
pub fn random_graph(rng: &mut ChaCha8Rng, words: &[&str]) -> Vec<Chunk> {
    let pages = rng.random_range(2..=8);
    let url = |p: usize| format!("https://g.example/p{p}.html");
    let text = |rng: &mut ChaCha8Rng, lo: usize, hi: usize| {
        let n = rng.random_range(lo..=hi);
        (0..n)
            .map(|_| *words.choose(rng).unwrap())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut chunks = Vec::new();
    for p in 0..pages {
        for a in 0..rng.random_range(1..=4) {
            for i in 0..rng.random_range(1..=3) {
                let mut links = Vec::new();
                for _ in 0..rng.random_range(0..=4) {
                    let external = rng.random_bool(0.15);
                    let target = rng.random_range(0..pages + 2);
                    let anchor = match rng.random_range(0..4) {
                        0 => None,
                        1 => Some("missing".to_string()),
                        _ => Some(format!("s{}", rng.random_range(0..4))),
                    };
                    let context = if rng.random_bool(0.1) {
                        String::new()
                    } else {
                        text(rng, 1, 12)
                    };
                    links.push(LinkRef {
                        target_url: if external {
                            format!("https://elsewhere.example/x{target}.html")
                        } else {
                            url(target)
                        },
                        target_anchor: anchor,
                        context,
                        is_internal: !external,
                    });
                }
                let anchor = format!("s{a}");
                chunks.push(Chunk {
                    id: build_chunk_id(&url(p), &anchor, i),
                    source_url: url(p),
                    anchor_name: anchor,
                    chunk_index: i,
                    text: text(rng, 3, 14),
                    links_context: links.iter().map(|l| l.context.clone()).collect(),
                    links,
                });
            }
        }
    }
    chunks
}

pub const GRAPH_WORDS: &[&str] = &[
    "flow", "task", "import", "export", "dataset", "model", "rule", "filter", "join", "chart", "schedule", "server",
    "license", "user", "role", "token", "cache", "queue", "report", "widget", "column", "table", "merge", "split",
];
