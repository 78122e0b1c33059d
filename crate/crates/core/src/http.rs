//! Blocking JSON-over-HTTP client with exponential backoff, shared by the
//! remote embedder and the remote generator.

use std::time::Duration;

use reqwest::blocking::Client;
use reqwest::StatusCode;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    /// Retries after the first attempt.
    pub max_retries: u32,
    pub base_delay: Duration,
    pub max_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_retries: 3,
            base_delay: Duration::from_millis(500),
            max_delay: Duration::from_secs(8),
        }
    }
}

impl RetryPolicy {
    /// Delay before retry number `retry` (0-based).
    pub fn delay(&self, retry: u32) -> Duration {
        let factor = 1u32.checked_shl(retry).unwrap_or(u32::MAX);
        self.base_delay.saturating_mul(factor).min(self.max_delay)
    }
}

#[derive(Debug, Error)]
pub enum HttpError {
    #[error("transport error after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },
    #[error("authentication rejected (HTTP {status}): {body}")]
    Auth { status: u16, body: String },
    #[error("rate limited after {attempts} attempt(s); retry after {retry_after:?}")]
    RateLimited {
        attempts: u32,
        retry_after: Option<Duration>,
    },
    #[error("HTTP {status} after {attempts} attempt(s): {body}")]
    Status { status: u16, attempts: u32, body: String },
    #[error("malformed response: {0}")]
    Decode(String),
    #[error("cannot build HTTP client: {0}")]
    Client(String),
}

impl HttpError {
    pub fn attempts(&self) -> u32 {
        match self {
            HttpError::Transport { attempts, .. }
            | HttpError::RateLimited { attempts, .. }
            | HttpError::Status { attempts, .. } => *attempts,
            HttpError::Auth { .. } | HttpError::Decode(_) => 1,
            HttpError::Client(_) => 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct JsonClient {
    client: Client,
    url: String,
    api_key: Option<String>,
    policy: RetryPolicy,
}

impl JsonClient {
    pub fn new(
        url: impl Into<String>,
        api_key: Option<String>,
        timeout: Duration,
        policy: RetryPolicy,
    ) -> Result<Self, HttpError> {
        let client = Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| HttpError::Client(e.to_string()))?;
        Ok(Self {
            client,
            url: url.into(),
            api_key,
            policy,
        })
    }

    pub fn url(&self) -> &str {
        &self.url
    }

    pub fn post(&self, body: &Value) -> Result<Value, HttpError> {
        let mut attempt = 0u32;
        loop {
            attempt += 1;
            let last = attempt > self.policy.max_retries;
            let mut request = self.client.post(&self.url).json(body);
            if let Some(key) = &self.api_key {
                request = request.bearer_auth(key);
            }

            let (error, wait) = match request.send() {
                Err(e) => (
                    HttpError::Transport {
                        attempts: attempt,
                        message: e.to_string(),
                    },
                    None,
                ),
                Ok(resp) => {
                    let status = resp.status();
                    if status.is_success() {
                        return resp.json::<Value>().map_err(|e| HttpError::Decode(e.to_string()));
                    }
                    let retry_after = resp
                        .headers()
                        .get(reqwest::header::RETRY_AFTER)
                        .and_then(|v| v.to_str().ok())
                        .and_then(|v| v.trim().parse::<u64>().ok())
                        .map(Duration::from_secs);
                    let text = resp.text().unwrap_or_default();
                    match status {
                        StatusCode::UNAUTHORIZED | StatusCode::FORBIDDEN => {
                            return Err(HttpError::Auth {
                                status: status.as_u16(),
                                body: text,
                            })
                        }
                        StatusCode::TOO_MANY_REQUESTS => (
                            HttpError::RateLimited {
                                attempts: attempt,
                                retry_after,
                            },
                            retry_after,
                        ),
                        s if s.is_server_error() || s == StatusCode::REQUEST_TIMEOUT => (
                            HttpError::Status {
                                status: s.as_u16(),
                                attempts: attempt,
                                body: text,
                            },
                            retry_after,
                        ),
                        s => {
                            return Err(HttpError::Status {
                                status: s.as_u16(),
                                attempts: attempt,
                                body: text,
                            })
                        }
                    }
                }
            };
            if last {
                return Err(error);
            }
            let delay = wait
                .unwrap_or_else(|| self.policy.delay(attempt - 1))
                .min(self.policy.max_delay);
            tracing::warn!(url = %self.url, attempt, ?delay, "retrying request: {error}");
            std::thread::sleep(delay);
        }
    }
}
