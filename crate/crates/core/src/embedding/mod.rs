//! The embedding function and cosine similarity.
//!
//! Every [`Embedder`] returns unit-length vectors, so cosine similarity is a
//! plain dot product.

mod offline;
mod remote;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::http::HttpError;

pub use offline::{HashedEmbedder, OFFLINE_DIMENSION};
pub use remote::{RemoteEmbedder, RemoteEmbedderConfig};

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("cannot embed empty text")]
    EmptyText,
    #[error("embedding service: {0}")]
    Http(#[from] HttpError),
    #[error("embedding service returned {found} vectors for {expected} inputs")]
    Count { expected: usize, found: usize },
    #[error("embedding dimension {found} does not match expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("embedding service returned a zero vector")]
    ZeroVector,
}

/// A unit-normalized embedding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EmbeddingVector(Vec<f32>);

impl EmbeddingVector {
    /// Scales `values` to unit L2 norm. Returns `None` for a zero or
    /// non-finite vector.
    pub fn normalized(values: Vec<f32>) -> Option<Self> {
        let norm = values.iter().map(|&v| f64::from(v) * f64::from(v)).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return None;
        }
        Some(Self(values.into_iter().map(|v| (f64::from(v) / norm) as f32).collect()))
    }

    /// Wraps values that are already unit length (e.g. read back from disk).
    pub fn from_unit(values: Vec<f32>) -> Self {
        Self(values)
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|&v| f64::from(v) * f64::from(v)).sum::<f64>().sqrt()
    }
}

/// Cosine similarity of two unit vectors.
///
/// # Panics
///
/// Panics if the dimensions differ.
pub fn cosine(a: &EmbeddingVector, b: &EmbeddingVector) -> f64 {
    assert_eq!(
        a.dimension(),
        b.dimension(),
        "cosine over vectors of different dimension"
    );
    a.0.iter().zip(&b.0).map(|(&x, &y)| f64::from(x) * f64::from(y)).sum()
}

pub trait Embedder: Send + Sync {
    /// Stable identifier recorded in index headers.
    fn id(&self) -> &str;

    fn embed(&self, text: &str) -> Result<EmbeddingVector, EmbeddingError>;

    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, EmbeddingError> {
        texts.iter().map(|t| self.embed(t)).collect()
    }
}

impl<E: Embedder + ?Sized> Embedder for Box<E> {
    fn id(&self) -> &str {
        (**self).id()
    }
    fn embed(&self, text: &str) -> Result<EmbeddingVector, EmbeddingError> {
        (**self).embed(text)
    }
    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, EmbeddingError> {
        (**self).embed_batch(texts)
    }
}

impl<E: Embedder + ?Sized> Embedder for std::sync::Arc<E> {
    fn id(&self) -> &str {
        (**self).id()
    }
    fn embed(&self, text: &str) -> Result<EmbeddingVector, EmbeddingError> {
        (**self).embed(text)
    }
    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, EmbeddingError> {
        (**self).embed_batch(texts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit(v: &[f32]) -> EmbeddingVector {
        EmbeddingVector::normalized(v.to_vec()).unwrap()
    }

    #[test]
    fn cosine_examples() {
        let v = unit(&[0.3, -0.2, 0.9]);
        assert!((cosine(&v, &v) - 1.0).abs() < 1e-6);
        assert_eq!(cosine(&unit(&[1.0, 0.0]), &unit(&[0.0, 1.0])), 0.0);
        // 0.6*0.8 + 0.8*0.6
        let c = cosine(&unit(&[0.6, 0.8]), &unit(&[0.8, 0.6]));
        assert!((c - 0.96).abs() < 1e-6, "{c}");
    }

    #[test]
    #[should_panic(expected = "different dimension")]
    fn cosine_dimension_mismatch_panics() {
        cosine(&unit(&[1.0, 0.0]), &unit(&[1.0, 0.0, 0.0]));
    }

    #[test]
    fn zero_vector_cannot_be_normalized() {
        assert!(EmbeddingVector::normalized(vec![0.0; 4]).is_none());
        assert!(EmbeddingVector::normalized(vec![f32::NAN, 1.0]).is_none());
    }

    proptest! {
        #[test]
        fn cosine_bounded_and_symmetric(
            a in prop::collection::vec(-10.0f32..10.0, 8),
            b in prop::collection::vec(-10.0f32..10.0, 8),
        ) {
            let (Some(a), Some(b)) = (EmbeddingVector::normalized(a), EmbeddingVector::normalized(b)) else {
                return Ok(());
            };
            let ab = cosine(&a, &b);
            prop_assert!(ab.abs() <= 1.0 + 1e-9);
            prop_assert_eq!(ab, cosine(&b, &a));
            prop_assert!((a.norm() - 1.0).abs() < 1e-6);
        }
    }
}
