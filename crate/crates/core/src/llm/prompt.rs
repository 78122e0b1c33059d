//! Prompt templates and rendering.
//!
//! Placeholders are substituted in a single pass, so braces that occur in
//! chunk text or in the question are never re-expanded.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::Chunk;
use crate::retrieval::RetrievedContext;

/// Separator placed between chunk texts inside a context block.
pub const CHUNK_SEPARATOR: &str = "\n\n";

/// Product name used by the role-based template unless overridden.
pub const DEFAULT_PRODUCT: &str = "Rulex";

const BASIC: &str = "Answer the question based only on the following context:

{context}

---

Answer the question based on the above context: {question}";

const ROLE_BASED: &str = "You are a technical assistant specializing in {product} documentation.
Answer the question using best practices, potential problems,
and expert recommendations. \nIf applicable, include a \"Warning\" or \"Tip\" section.

CONTEXT: {context}
QUESTION: {question}
ANSWER:";

const REASONING: &str = "Answer the question based only on the following context. \nIf the context does not provide sufficient information, explicitly
state which details are missing and supplement them with \nexternal documentation.

CONTEXT: {context}
QUESTION: {question}
ANSWER:";

const HYPERLINKED: &str = "Original context:
{original_context}

---

Additional context (linked):
{linked_context}

---

Question:
{question}

Please use both sections of context to answer the question \ncomprehensively. Carefully consider the information from \nboth the original context and the linked context.";

const UNIFIED: &str = "CONTEXT:
{context}

QUESTION:
{question}

Please use the above context to answer the question comprehensively.";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PromptError {
    #[error("cannot render a prompt without context")]
    EmptyContext,
    #[error("unknown prompt kind `{0}`")]
    UnknownKind(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptKind {
    Basic,
    RoleBased,
    Reasoning,
    /// Seed and linked chunks in two labelled blocks.
    Hyperlinked,
    /// Flat counterpart of `Hyperlinked`, used for baseline runs.
    Unified,
}

impl PromptKind {
    pub const ALL: [PromptKind; 5] = [
        PromptKind::Basic,
        PromptKind::RoleBased,
        PromptKind::Reasoning,
        PromptKind::Hyperlinked,
        PromptKind::Unified,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PromptKind::Basic => "basic",
            PromptKind::RoleBased => "role_based",
            PromptKind::Reasoning => "reasoning",
            PromptKind::Hyperlinked => "hyperlinked",
            PromptKind::Unified => "unified",
        }
    }

    /// The fourth strategy comes in two forms: link-aware runs get
    /// `Hyperlinked`, baseline runs get `Unified`.
    pub fn paired_for(self, link_aware: bool) -> PromptKind {
        match (self, link_aware) {
            (PromptKind::Hyperlinked | PromptKind::Unified, true) => PromptKind::Hyperlinked,
            (PromptKind::Hyperlinked | PromptKind::Unified, false) => PromptKind::Unified,
            (other, _) => other,
        }
    }

    /// Strategy label that groups `Hyperlinked` with `Unified`.
    pub fn strategy(self) -> &'static str {
        match self {
            PromptKind::Hyperlinked | PromptKind::Unified => "structured",
            other => other.as_str(),
        }
    }
}

impl fmt::Display for PromptKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PromptKind {
    type Err = PromptError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PromptKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s.trim() || k.as_str().replace('_', "-") == s.trim())
            .ok_or_else(|| PromptError::UnknownKind(s.to_string()))
    }
}

/// A rendered prompt plus the pieces a generator may want separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedPrompt {
    pub kind: PromptKind,
    pub text: String,
    pub question: String,
    /// Chunk texts in the order they appear in the prompt.
    pub blocks: Vec<String>,
    /// Hyperlinked prompt rendered with nothing in the linked block.
    pub empty_linked_block: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptRenderer {
    product: String,
}

impl Default for PromptRenderer {
    fn default() -> Self {
        Self::new(DEFAULT_PRODUCT)
    }
}

impl PromptRenderer {
    pub fn new(product: impl Into<String>) -> Self {
        Self {
            product: product.into(),
        }
    }

    pub fn render(
        &self,
        kind: PromptKind,
        context: &RetrievedContext,
        question: &str,
    ) -> Result<RenderedPrompt, PromptError> {
        if context.final_ids.is_empty() {
            return Err(PromptError::EmptyContext);
        }
        match kind {
            PromptKind::Hyperlinked => {
                let (seeds, linked) = context.final_partition();
                Ok(self.render_blocks(kind, &seeds, &linked, question))
            }
            _ => Ok(self.render_blocks(kind, &context.final_chunks(), &[], question)),
        }
    }

    /// Renders from explicit chunk lists. For `Hyperlinked`, `primary` fills
    /// the original block and `linked` the linked block; other kinds join
    /// `primary` followed by `linked` into one block.
    pub fn render_blocks(
        &self,
        kind: PromptKind,
        primary: &[&Chunk],
        linked: &[&Chunk],
        question: &str,
    ) -> RenderedPrompt {
        let join = |chunks: &[&Chunk]| {
            chunks
                .iter()
                .map(|c| c.text.as_str())
                .collect::<Vec<_>>()
                .join(CHUNK_SEPARATOR)
        };
        let blocks: Vec<String> = primary.iter().chain(linked).map(|c| c.text.clone()).collect();

        let (template, empty_linked_block) = match kind {
            PromptKind::Basic => (BASIC, false),
            PromptKind::RoleBased => (ROLE_BASED, false),
            PromptKind::Reasoning => (REASONING, false),
            PromptKind::Hyperlinked => (HYPERLINKED, linked.is_empty()),
            PromptKind::Unified => (UNIFIED, false),
        };
        let all: Vec<&Chunk> = primary.iter().chain(linked).copied().collect();
        let context = join(&all);
        let original = join(primary);
        let linked_text = join(linked);

        let text = substitute(template, |name| match name {
            "context" => Some(context.as_str()),
            "original_context" => Some(original.as_str()),
            "linked_context" => Some(linked_text.as_str()),
            "question" => Some(question),
            "product" => Some(self.product.as_str()),
            _ => None,
        });
        RenderedPrompt {
            kind,
            text,
            question: question.to_string(),
            blocks,
            empty_linked_block,
        }
    }
}

fn substitute<'v>(template: &str, value: impl Fn(&str) -> Option<&'v str>) -> String {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        match after
            .find('}')
            .and_then(|close| value(&after[..close]).map(|v| (close, v)))
        {
            Some((close, v)) => {
                out.push_str(v);
                rest = &after[close + 1..];
            }
            None => {
                out.push('{');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    out
}
