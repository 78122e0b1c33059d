//! Answer generators and token accounting.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use super::prompt::RenderedPrompt;
use crate::http::{HttpError, JsonClient, RetryPolicy};

#[derive(Debug, Error)]
pub enum GenerationError {
    #[error("prompt is empty")]
    EmptyPrompt,
    #[error("generation service: {0}")]
    Http(#[from] HttpError),
    #[error("generation response has no answer: {0}")]
    NoAnswer(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationResult {
    pub answer: String,
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    pub total_tokens: u64,
    /// Seconds spent inside the generator.
    pub latency: f64,
    /// Token counts come from [`count_tokens`] rather than the provider.
    pub tokens_estimated: bool,
    /// The provider declined; `answer` holds its message verbatim.
    pub refusal: bool,
}

impl GenerationResult {
    fn new(answer: String, prompt_tokens: u64, completion_tokens: u64, latency: f64, estimated: bool) -> Self {
        Self {
            answer,
            prompt_tokens,
            completion_tokens,
            total_tokens: prompt_tokens + completion_tokens,
            latency,
            tokens_estimated: estimated,
            refusal: false,
        }
    }
}

/// Rough token estimate: one token per four bytes, rounded up.
pub fn count_tokens(text: &str) -> u64 {
    (text.len() as u64).div_ceil(4)
}

pub trait Generator: Send + Sync {
    fn id(&self) -> &str;

    fn generate(&self, prompt: &RenderedPrompt) -> Result<GenerationResult, GenerationError>;
}

const STOPWORDS: &[&str] = &[
    "the", "and", "for", "are", "but", "not", "you", "all", "any", "can", "had", "her", "was", "one", "our", "out",
    "has", "have", "how", "its", "may", "who", "did", "does", "what", "when", "where", "which", "why", "with", "this",
    "that", "from", "they", "will", "would", "there", "their", "into", "than", "then", "them", "these", "those",
    "your", "about", "should", "could", "been", "being", "also", "some", "such", "use", "using", "used",
];

fn content_words(text: &str) -> HashSet<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| w.chars().count() >= 3 && !STOPWORDS.contains(w))
        .map(str::to_string)
        .collect()
}

fn sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '\n' {
            push_sentence(&mut out, &mut current);
            continue;
        }
        current.push(c);
        if matches!(c, '.' | '!' | '?') && chars.peek().is_none_or(|n| n.is_whitespace()) {
            push_sentence(&mut out, &mut current);
        }
    }
    push_sentence(&mut out, &mut current);
    out
}

fn push_sentence(out: &mut Vec<String>, current: &mut String) {
    let s = current.split_whitespace().collect::<Vec<_>>().join(" ");
    if !s.is_empty() {
        out.push(s);
    }
    current.clear();
}

/// Deterministic extractive stand-in for a language model.
///
/// Picks the context block(s) sharing the most content words with the
/// question and answers with their first three sentences. Token counts use
/// [`count_tokens`] and are flagged as estimates; latency is reported as zero.
#[derive(Debug, Clone, Default)]
pub struct MockGenerator;

impl MockGenerator {
    pub const SENTENCES: usize = 3;

    pub fn answer(prompt: &RenderedPrompt) -> String {
        let question = content_words(&prompt.question);
        let overlaps: Vec<usize> = prompt
            .blocks
            .iter()
            .map(|b| content_words(b).intersection(&question).count())
            .collect();
        let best = overlaps.iter().copied().max().unwrap_or(0);
        let chosen: Vec<&str> = prompt
            .blocks
            .iter()
            .zip(&overlaps)
            .filter(|(_, &o)| o == best)
            .map(|(b, _)| b.as_str())
            .collect();
        let picked: Vec<String> = chosen.iter().flat_map(|b| sentences(b)).take(Self::SENTENCES).collect();
        if picked.is_empty() {
            "The provided context does not contain an answer.".to_string()
        } else {
            picked.join(" ")
        }
    }
}

impl Generator for MockGenerator {
    fn id(&self) -> &str {
        "mock-extractive-v1"
    }

    fn generate(&self, prompt: &RenderedPrompt) -> Result<GenerationResult, GenerationError> {
        if prompt.text.trim().is_empty() {
            return Err(GenerationError::EmptyPrompt);
        }
        let answer = Self::answer(prompt);
        let completion = count_tokens(&answer);
        Ok(GenerationResult::new(
            answer,
            count_tokens(&prompt.text),
            completion,
            0.0,
            true,
        ))
    }
}

/// Chat-completions endpoint settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RemoteGeneratorConfig {
    pub base_url: String,
    pub path: String,
    pub model: String,
    #[serde(skip_serializing)]
    pub api_key: Option<String>,
    pub temperature: f64,
    pub timeout_secs: u64,
}

impl Default for RemoteGeneratorConfig {
    fn default() -> Self {
        Self {
            base_url: "https://api.openai.com".to_string(),
            path: "/v1/chat/completions".to_string(),
            model: "gpt-4o-mini".to_string(),
            api_key: None,
            temperature: 0.0,
            timeout_secs: 60,
        }
    }
}

impl RemoteGeneratorConfig {
    pub fn endpoint(&self) -> String {
        format!(
            "{}/{}",
            self.base_url.trim_end_matches('/'),
            self.path.trim_start_matches('/')
        )
    }
}

#[derive(Debug)]
pub struct RemoteGenerator {
    client: JsonClient,
    model: String,
    temperature: f64,
    id: String,
}

impl RemoteGenerator {
    pub fn new(config: &RemoteGeneratorConfig) -> Result<Self, GenerationError> {
        Self::with_policy(config, RetryPolicy::default())
    }

    pub fn with_policy(config: &RemoteGeneratorConfig, policy: RetryPolicy) -> Result<Self, GenerationError> {
        let client = JsonClient::new(
            config.endpoint(),
            config.api_key.clone(),
            Duration::from_secs(config.timeout_secs),
            policy,
        )?;
        Ok(Self {
            client,
            model: config.model.clone(),
            temperature: config.temperature,
            id: format!("remote:{}", config.model),
        })
    }
}

impl Generator for RemoteGenerator {
    fn id(&self) -> &str {
        &self.id
    }

    fn generate(&self, prompt: &RenderedPrompt) -> Result<GenerationResult, GenerationError> {
        if prompt.text.trim().is_empty() {
            return Err(GenerationError::EmptyPrompt);
        }
        let body = json!({
            "model": self.model,
            "temperature": self.temperature,
            "messages": [{"role": "user", "content": prompt.text}],
        });
        let started = Instant::now();
        let response = self.client.post(&body)?;
        let latency = started.elapsed().as_secs_f64();
        parse_chat_response(&response, &prompt.text, latency)
    }
}

fn parse_chat_response(response: &Value, prompt: &str, latency: f64) -> Result<GenerationResult, GenerationError> {
    let message = response
        .pointer("/choices/0/message")
        .ok_or_else(|| GenerationError::NoAnswer(truncate(response.to_string())))?;
    let refusal = message.get("refusal").and_then(Value::as_str).filter(|s| !s.is_empty());
    let (answer, refused) = match (refusal, message.get("content").and_then(Value::as_str)) {
        (Some(r), _) => (r.to_string(), true),
        (None, Some(c)) => (c.to_string(), false),
        (None, None) => return Err(GenerationError::NoAnswer(truncate(message.to_string()))),
    };

    let usage = response.get("usage");
    let reported = |key: &str| usage.and_then(|u| u.get(key)).and_then(Value::as_u64);
    let mut result = match (reported("prompt_tokens"), reported("completion_tokens")) {
        (Some(p), Some(c)) => GenerationResult::new(answer, p, c, latency, false),
        _ => {
            let completion = count_tokens(&answer);
            GenerationResult::new(answer, count_tokens(prompt), completion, latency, true)
        }
    };
    result.refusal = refused;
    Ok(result)
}

fn truncate(mut s: String) -> String {
    if s.len() > 200 {
        let mut cut = 200;
        while !s.is_char_boundary(cut) {
            cut -= 1;
        }
        s.truncate(cut);
        s.push('…');
    }
    s
}
