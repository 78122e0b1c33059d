use linkrag_core::embedding::{cosine, Embedder, HashedEmbedder};
use linkrag_core::ingest::Ingestor;
use linkrag_core::synthetic;

/// Distinct twelve-word windows (stride two) of the synthetic corpus should rarely look
/// identical to the offline embedder.
#[test]
fn offline_embedder_separates_distinct_windows() {
    let out = Ingestor::new(1000, 150, synthetic::BASE_URL)
        .unwrap()
        .ingest_documents(&synthetic::source_documents())
        .unwrap();
    let words: Vec<&str> = out.chunks.iter().flat_map(|c| c.text.split_whitespace()).collect();
    let mut windows: Vec<String> = words.windows(12).step_by(2).map(|w| w.join(" ")).collect();
    windows.sort();
    windows.dedup();
    assert!(windows.len() >= 1000, "only {} windows", windows.len());
    windows.truncate(1000);

    let e = HashedEmbedder::default();
    let vectors: Vec<_> = windows.iter().map(|w| e.embed(w).unwrap()).collect();
    let (mut total, mut distinct) = (0usize, 0usize);
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            total += 1;
            distinct += usize::from(cosine(&vectors[i], &vectors[j]) < 0.99);
        }
    }
    let share = distinct as f64 / total as f64;
    assert!(share >= 0.99, "{share:.4} of pairs below 0.99");
}
