//! Prompt rendering and answer generation.

mod generate;
mod prompt;

pub use generate::{
    count_tokens, GenerationError, GenerationResult, Generator, MockGenerator, RemoteGenerator, RemoteGeneratorConfig,
};
pub use prompt::{PromptError, PromptKind, PromptRenderer, RenderedPrompt, CHUNK_SEPARATOR, DEFAULT_PRODUCT};
