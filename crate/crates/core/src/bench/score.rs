use std::collections::HashMap;
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{cosine, Embedder, EmbeddingError, EmbeddingVector, HashedEmbedder};

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("cannot score an empty {0}")]
    Empty(&'static str),
    #[error("token embedding failed: {0}")]
    Embedding(#[from] EmbeddingError),
    #[error("no external score for ({query_id}, {prompt_kind}, {config})")]
    Missing {
        query_id: String,
        prompt_kind: String,
        config: String,
    },
    #[error("score file line {line}: {reason}")]
    File { line: u64, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreTriple {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl ScoreTriple {
    pub fn from_pr(precision: f64, recall: f64) -> Self {
        Self {
            precision,
            recall,
            f1: f1(precision, recall),
        }
    }
}

pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

/// Lowercase, drop punctuation, split on whitespace.
pub fn words(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split_whitespace()
        .map(|w| w.chars().filter(|c| c.is_alphanumeric()).collect::<String>())
        .filter(|w| !w.is_empty())
        .collect()
}

pub fn word_count(text: &str) -> usize {
    words(text).len()
}

/// Identifies one benchmark record for scorers that look scores up.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecordKey {
    pub query_id: String,
    pub prompt_kind: String,
    pub config: String,
}

pub trait AnswerScorer: Send + Sync {
    fn id(&self) -> &str;

    fn score(&self, key: &RecordKey, prediction: &str, reference: &str) -> Result<ScoreTriple, ScoreError>;
}

/// Greedy token matching over embedded tokens.
///
/// P is the mean over prediction tokens of the best similarity to any
/// reference token, R the same with roles swapped. Similarities below zero
/// count as zero so that P and R stay in [0, 1].
#[derive(Debug, Clone)]
pub struct SurrogateScorer<E = HashedEmbedder> {
    embedder: E,
    id: String,
}

impl Default for SurrogateScorer<HashedEmbedder> {
    fn default() -> Self {
        Self::new(HashedEmbedder::default())
    }
}

impl<E: Embedder> SurrogateScorer<E> {
    pub fn new(embedder: E) -> Self {
        let id = format!("surrogate:{}", embedder.id());
        Self { embedder, id }
    }

    pub fn score_texts(&self, prediction: &str, reference: &str) -> Result<ScoreTriple, ScoreError> {
        let pred = words(prediction);
        let refs = words(reference);
        if pred.is_empty() {
            return Err(ScoreError::Empty("prediction"));
        }
        if refs.is_empty() {
            return Err(ScoreError::Empty("reference"));
        }
        let mut cache: HashMap<&str, EmbeddingVector> = HashMap::new();
        for w in pred.iter().chain(&refs) {
            if !cache.contains_key(w.as_str()) {
                cache.insert(w, self.embedder.embed(w)?);
            }
        }
        let sims: Vec<Vec<f64>> = pred
            .iter()
            .map(|p| {
                refs.iter()
                    .map(|r| cosine(&cache[p.as_str()], &cache[r.as_str()]).max(0.0))
                    .collect()
            })
            .collect();
        let precision = sims
            .iter()
            .map(|row| row.iter().copied().fold(0.0, f64::max))
            .sum::<f64>()
            / pred.len() as f64;
        let recall = (0..refs.len())
            .map(|j| sims.iter().map(|row| row[j]).fold(0.0, f64::max))
            .sum::<f64>()
            / refs.len() as f64;
        Ok(ScoreTriple::from_pr(precision, recall))
    }
}

impl<E: Embedder> AnswerScorer for SurrogateScorer<E> {
    fn id(&self) -> &str {
        &self.id
    }

    fn score(&self, _key: &RecordKey, prediction: &str, reference: &str) -> Result<ScoreTriple, ScoreError> {
        self.score_texts(prediction, reference)
    }
}

#[derive(Debug, Deserialize)]
struct ScoreRow {
    query_id: String,
    prompt_kind: String,
    config: String,
    #[serde(alias = "P", alias = "p")]
    precision: f64,
    #[serde(alias = "R", alias = "r")]
    recall: f64,
    #[serde(alias = "F1")]
    f1: f64,
}

/// Scores computed elsewhere, keyed by (query_id, prompt_kind, config).
#[derive(Debug, Clone, Default)]
pub struct ExternalScores {
    scores: HashMap<RecordKey, ScoreTriple>,
}

impl ExternalScores {
    /// Reads CSV with columns query_id, prompt_kind, config, precision (or P),
    /// recall (or R), f1 (or F1).
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, ScoreError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut scores = HashMap::new();
        for row in rdr.deserialize::<ScoreRow>() {
            let row = row.map_err(|e| ScoreError::File {
                line: e.position().map_or(0, |p| p.line()),
                reason: e.to_string(),
            })?;
            let key = RecordKey {
                query_id: row.query_id,
                prompt_kind: row.prompt_kind,
                config: row.config,
            };
            let triple = ScoreTriple {
                precision: row.precision,
                recall: row.recall,
                f1: row.f1,
            };
            scores.insert(key, triple);
        }
        Ok(Self { scores })
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn get(&self, key: &RecordKey) -> Option<ScoreTriple> {
        self.scores.get(key).copied()
    }
}

impl AnswerScorer for ExternalScores {
    fn id(&self) -> &str {
        "external"
    }

    fn score(&self, key: &RecordKey, _prediction: &str, _reference: &str) -> Result<ScoreTriple, ScoreError> {
        self.get(key).ok_or_else(|| ScoreError::Missing {
            query_id: key.query_id.clone(),
            prompt_kind: key.prompt_kind.clone(),
            config: key.config.clone(),
        })
    }
}
