//! Link-aware retrieval-augmented generation over hyperlinked documentation.

pub mod bench;
pub mod embedding;
pub mod http;
pub mod index;
pub mod ingest;
pub mod llm;
pub mod retrieval;
pub mod synthetic;
