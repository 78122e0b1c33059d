use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Embedder, EmbeddingError, EmbeddingVector};
use crate::http::{HttpError, JsonClient, RetryPolicy};

/// Settings for an embeddings endpoint speaking the common
/// `{"model", "input": [..]}` -> `{"data": [{"embedding": [..]}]}` shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RemoteEmbedderConfig {
    pub base_url: String,
    pub path: String,
    pub model: String,
    #[serde(skip_serializing)]
    pub api_key: Option<String>,
    pub timeout_secs: u64,
    pub batch_size: usize,
    /// Expected vector length; checked on every response when set.
    pub dimension: Option<usize>,
}

impl Default for RemoteEmbedderConfig {
    fn default() -> Self {
        Self {
            base_url: "https://api.openai.com".to_string(),
            path: "/v1/embeddings".to_string(),
            model: "text-embedding-3-large".to_string(),
            api_key: None,
            timeout_secs: 30,
            batch_size: 64,
            dimension: None,
        }
    }
}

impl RemoteEmbedderConfig {
    pub fn endpoint(&self) -> String {
        format!(
            "{}/{}",
            self.base_url.trim_end_matches('/'),
            self.path.trim_start_matches('/')
        )
    }
}

#[derive(Debug)]
pub struct RemoteEmbedder {
    client: JsonClient,
    model: String,
    batch_size: usize,
    dimension: Option<usize>,
    id: String,
}

impl RemoteEmbedder {
    pub fn new(config: &RemoteEmbedderConfig) -> Result<Self, EmbeddingError> {
        Self::with_policy(config, RetryPolicy::default())
    }

    pub fn with_policy(config: &RemoteEmbedderConfig, policy: RetryPolicy) -> Result<Self, EmbeddingError> {
        let client = JsonClient::new(
            config.endpoint(),
            config.api_key.clone(),
            Duration::from_secs(config.timeout_secs),
            policy,
        )?;
        Ok(Self {
            client,
            model: config.model.clone(),
            batch_size: config.batch_size.max(1),
            dimension: config.dimension,
            id: format!("remote:{}", config.model),
        })
    }

    fn request(&self, batch: &[&str]) -> Result<Vec<EmbeddingVector>, EmbeddingError> {
        let body = json!({ "model": self.model, "input": batch });
        let response = self.client.post(&body)?;
        let vectors = parse_response(&response)?;
        if vectors.len() != batch.len() {
            return Err(EmbeddingError::Count {
                expected: batch.len(),
                found: vectors.len(),
            });
        }
        vectors
            .into_iter()
            .map(|v| {
                if let Some(expected) = self.dimension {
                    if v.len() != expected {
                        return Err(EmbeddingError::Dimension {
                            expected,
                            found: v.len(),
                        });
                    }
                }
                EmbeddingVector::normalized(v).ok_or(EmbeddingError::ZeroVector)
            })
            .collect()
    }
}

fn parse_response(response: &Value) -> Result<Vec<Vec<f32>>, EmbeddingError> {
    let bad = |msg: &str| EmbeddingError::Http(HttpError::Decode(msg.to_string()));
    let data = response
        .get("data")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing `data` array"))?;
    let mut items = Vec::with_capacity(data.len());
    for (pos, item) in data.iter().enumerate() {
        let index = item.get("index").and_then(Value::as_u64).map_or(pos, |i| i as usize);
        let values = item
            .get("embedding")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `embedding` array"))?
            .iter()
            .map(|x| x.as_f64().map(|f| f as f32))
            .collect::<Option<Vec<f32>>>()
            .ok_or_else(|| bad("non-numeric embedding value"))?;
        items.push((index, values));
    }
    items.sort_by_key(|(i, _)| *i);
    Ok(items.into_iter().map(|(_, v)| v).collect())
}

impl Embedder for RemoteEmbedder {
    fn id(&self) -> &str {
        &self.id
    }

    fn embed(&self, text: &str) -> Result<EmbeddingVector, EmbeddingError> {
        let mut out = self.embed_batch(&[text])?;
        Ok(out.remove(0))
    }

    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, EmbeddingError> {
        if texts.iter().any(|t| t.trim().is_empty()) {
            return Err(EmbeddingError::EmptyText);
        }
        let mut out = Vec::with_capacity(texts.len());
        for batch in texts.chunks(self.batch_size) {
            out.extend(self.request(batch)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_joins_base_and_path() {
        let cfg = RemoteEmbedderConfig {
            base_url: "http://localhost:8080/".into(),
            path: "/v1/embeddings".into(),
            ..Default::default()
        };
        assert_eq!(cfg.endpoint(), "http://localhost:8080/v1/embeddings");
    }

    #[test]
    fn response_is_reordered_by_index() {
        let resp = json!({"data": [
            {"index": 1, "embedding": [0.0, 2.0]},
            {"index": 0, "embedding": [3.0, 0.0]}
        ]});
        let v = parse_response(&resp).unwrap();
        assert_eq!(v, vec![vec![3.0, 0.0], vec![0.0, 2.0]]);
    }

    #[test]
    fn malformed_response_is_an_error() {
        assert!(parse_response(&json!({"nope": 1})).is_err());
        assert!(parse_response(&json!({"data": [{"embedding": ["x"]}]})).is_err());
    }

    #[test]
    fn api_key_is_not_serialized() {
        let cfg = RemoteEmbedderConfig {
            api_key: Some("secret".into()),
            ..Default::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(!text.contains("secret"));
    }
}
