use xxhash_rust::xxh3::xxh3_64_with_seed;

use super::{Embedder, EmbeddingError, EmbeddingVector};

pub const OFFLINE_DIMENSION: usize = 256;

const BUCKET_SEED: u64 = 0x6c69_6e6b_7261_6701;
const SIGN_SEED: u64 = 0x6c69_6e6b_7261_6702;

/// Deterministic hashed bag-of-words embedder.
///
/// Lowercases, splits on non-alphanumerics, and adds ±1 per token in a
/// hashed bucket (bucket and sign use independent seeds). Needs no model and
/// is stable across runs and platforms.
#[derive(Debug, Clone)]
pub struct HashedEmbedder {
    dimension: usize,
    id: String,
}

impl Default for HashedEmbedder {
    fn default() -> Self {
        Self::new(OFFLINE_DIMENSION)
    }
}

impl HashedEmbedder {
    pub fn new(dimension: usize) -> Self {
        assert!(dimension > 0, "embedding dimension must be positive");
        Self {
            dimension,
            id: format!("offline-hashed-bow-{dimension}-v1"),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    fn counts(&self, text: &str) -> Vec<f32> {
        let mut counts = vec![0.0f32; self.dimension];
        let lowered = text.to_lowercase();
        for token in lowered.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()) {
            self.add(&mut counts, token);
        }
        counts
    }

    fn add(&self, counts: &mut [f32], token: &str) {
        let bucket = (xxh3_64_with_seed(token.as_bytes(), BUCKET_SEED) % self.dimension as u64) as usize;
        let sign = if xxh3_64_with_seed(token.as_bytes(), SIGN_SEED) & 1 == 0 {
            1.0
        } else {
            -1.0
        };
        counts[bucket] += sign;
    }
}

impl Embedder for HashedEmbedder {
    fn id(&self) -> &str {
        &self.id
    }

    fn embed(&self, text: &str) -> Result<EmbeddingVector, EmbeddingError> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(EmbeddingError::EmptyText);
        }
        if let Some(v) = EmbeddingVector::normalized(self.counts(text)) {
            return Ok(v);
        }
        // Punctuation-only text, or tokens whose signs cancelled: fall back
        // to hashing the whole trimmed text as a single token.
        let mut counts = vec![0.0f32; self.dimension];
        self.add(&mut counts, trimmed);
        Ok(EmbeddingVector::normalized(counts).expect("single token gives a non-zero vector"))
    }
}
