//! Application configuration. Each field resolves in the order
//! command-line flag, environment variable, config file, built-in default.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};

use linkrag_core::embedding::RemoteEmbedderConfig;
use linkrag_core::ingest::{DEFAULT_CHUNK_OVERLAP, DEFAULT_CHUNK_SIZE};
use linkrag_core::llm::{PromptKind, RemoteGeneratorConfig, DEFAULT_PRODUCT};
use linkrag_core::retrieval::{AssemblyMode, RetrievalConfig};

pub const EMBEDDING_KEY_ENV: &str = "LINKRAG_EMBEDDING_API_KEY";
pub const GENERATION_KEY_ENV: &str = "LINKRAG_GENERATION_API_KEY";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum EmbedderKind {
    Offline,
    Remote,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Mock,
    Remote,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedderConfig {
    pub kind: EmbedderKind,
    #[serde(flatten)]
    pub remote: RemoteEmbedderConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub kind: GeneratorKind,
    #[serde(flatten)]
    pub remote: RemoteGeneratorConfig,
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AppConfig {
    pub corpus_root: PathBuf,
    /// `None` publishes files under their `file://` URL.
    pub base_url_prefix: Option<String>,
    pub index_path: PathBuf,
    pub chunk_size: usize,
    pub overlap: usize,
    pub retrieval: RetrievalConfig,
    pub embedder: EmbedderConfig,
    pub generator: GeneratorConfig,
    pub prompt_kind: PromptKind,
    pub product: String,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileRetrieval {
    k: Option<usize>,
    n_links: Option<usize>,
    depth: Option<usize>,
    top_m: Option<usize>,
    assembly_mode: Option<AssemblyMode>,
}

#[derive(Debug, Clone, Default, Deserialize)]
struct FileEmbedder {
    kind: Option<EmbedderKind>,
    #[serde(flatten)]
    remote: RemoteEmbedderConfig,
}

#[derive(Debug, Clone, Default, Deserialize)]
struct FileGenerator {
    kind: Option<GeneratorKind>,
    #[serde(flatten)]
    remote: RemoteGeneratorConfig,
}

/// The config file; every field optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    corpus_root: Option<PathBuf>,
    base_url_prefix: Option<String>,
    index_path: Option<PathBuf>,
    chunk_size: Option<usize>,
    overlap: Option<usize>,
    retrieval: Option<FileRetrieval>,
    embedder: Option<FileEmbedder>,
    generator: Option<FileGenerator>,
    prompt_kind: Option<PromptKind>,
    product: Option<String>,
}

/// Flags shared by every subcommand. Each also reads an environment
/// variable, which clap consults only when the flag is absent.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// JSON config file.
    #[arg(long, global = true, env = "LINKRAG_CONFIG_FILE", value_name = "PATH")]
    pub config_file: Option<PathBuf>,
    /// Directory of .html files to ingest.
    #[arg(long, global = true, env = "LINKRAG_CORPUS_ROOT", value_name = "DIR")]
    pub corpus_root: Option<PathBuf>,
    /// URL prefix that corpus-relative paths are appended to.
    #[arg(long, global = true, env = "LINKRAG_BASE_URL", value_name = "URL")]
    pub base_url: Option<String>,
    #[arg(long, global = true, env = "LINKRAG_INDEX", value_name = "PATH")]
    pub index: Option<PathBuf>,
    #[arg(long, global = true, env = "LINKRAG_CHUNK_SIZE")]
    pub chunk_size: Option<usize>,
    #[arg(long, global = true, env = "LINKRAG_OVERLAP")]
    pub overlap: Option<usize>,
    /// Number of seed chunks.
    #[arg(short, long, global = true, env = "LINKRAG_K")]
    pub k: Option<usize>,
    /// Expansion triple n_links,depth,top_m, e.g. 1,1,1 (0,0,0 disables expansion).
    #[arg(long = "config", global = true, env = "LINKRAG_EXPANSION", value_name = "N,D,M")]
    pub expansion: Option<String>,
    #[arg(long, global = true, env = "LINKRAG_ASSEMBLY", value_name = "MODE")]
    pub assembly: Option<AssemblyMode>,
    #[arg(long, global = true, env = "LINKRAG_EMBEDDER", value_enum)]
    pub embedder: Option<EmbedderKind>,
    #[arg(long, global = true, env = "LINKRAG_EMBEDDING_URL", value_name = "URL")]
    pub embedding_url: Option<String>,
    #[arg(long, global = true, env = "LINKRAG_EMBEDDING_MODEL")]
    pub embedding_model: Option<String>,
    #[arg(long, global = true, env = "LINKRAG_GENERATOR", value_enum)]
    pub generator: Option<GeneratorKind>,
    #[arg(long, global = true, env = "LINKRAG_GENERATION_URL", value_name = "URL")]
    pub generation_url: Option<String>,
    #[arg(long, global = true, env = "LINKRAG_GENERATION_MODEL")]
    pub generation_model: Option<String>,
    #[arg(long, global = true, env = "LINKRAG_PROMPT", value_name = "KIND")]
    pub prompt: Option<PromptKind>,
    /// Product name used by the role-based prompt.
    #[arg(long, global = true, env = "LINKRAG_PRODUCT")]
    pub product: Option<String>,
    /// Defaults supplied by `--seed-corpus`, ranked just above built-ins.
    #[arg(skip)]
    pub seed_defaults: Option<SeedDefaults>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedDefaults {
    pub corpus_root: PathBuf,
    pub base_url: String,
    pub product: String,
}

fn read_file_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config file {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing config file {}", path.display()))
}

impl ConfigArgs {
    /// Resolves every field. `env_key` looks up secrets, which have no flag.
    pub fn resolve_with(&self, env_key: impl Fn(&str) -> Option<String>) -> Result<AppConfig> {
        let file = match &self.config_file {
            Some(p) => read_file_config(p)?,
            None => FileConfig::default(),
        };
        let fr = file.retrieval.unwrap_or_default();
        let defaults = RetrievalConfig::default();

        let (n_links, depth, top_m) = match &self.expansion {
            Some(t) => {
                let (n, d, m) = RetrievalConfig::parse_triple(t)?;
                (n, d, m)
            }
            None => (
                fr.n_links.unwrap_or(defaults.n_links),
                fr.depth.unwrap_or(defaults.depth),
                fr.top_m.unwrap_or(defaults.top_m),
            ),
        };
        let retrieval = RetrievalConfig::link_aware(self.k.or(fr.k).unwrap_or(defaults.k), n_links, depth, top_m)
            .with_mode(self.assembly.or(fr.assembly_mode).unwrap_or(defaults.assembly_mode));
        retrieval.validate()?;

        let fe = file.embedder.unwrap_or_default();
        let mut embedder = EmbedderConfig {
            kind: self.embedder.or(fe.kind).unwrap_or(EmbedderKind::Offline),
            remote: fe.remote,
        };
        if let Some(u) = &self.embedding_url {
            embedder.remote.base_url = u.clone();
        }
        if let Some(m) = &self.embedding_model {
            embedder.remote.model = m.clone();
        }
        if let Some(key) = env_key(EMBEDDING_KEY_ENV) {
            embedder.remote.api_key = Some(key);
        }

        let fg = file.generator.unwrap_or_default();
        let mut generator = GeneratorConfig {
            kind: self.generator.or(fg.kind).unwrap_or(GeneratorKind::Mock),
            remote: fg.remote,
        };
        if let Some(u) = &self.generation_url {
            generator.remote.base_url = u.clone();
        }
        if let Some(m) = &self.generation_model {
            generator.remote.model = m.clone();
        }
        if let Some(key) = env_key(GENERATION_KEY_ENV) {
            generator.remote.api_key = Some(key);
        }

        let chunk_size = self.chunk_size.or(file.chunk_size).unwrap_or(DEFAULT_CHUNK_SIZE);
        let overlap = self.overlap.or(file.overlap).unwrap_or(DEFAULT_CHUNK_OVERLAP);
        if chunk_size == 0 || overlap >= chunk_size {
            bail!("chunk overlap ({overlap}) must be smaller than chunk size ({chunk_size})");
        }

        let seed = self.seed_defaults.clone();
        Ok(AppConfig {
            corpus_root: self
                .corpus_root
                .clone()
                .or(file.corpus_root)
                .or_else(|| seed.as_ref().map(|s| s.corpus_root.clone()))
                .unwrap_or_else(|| PathBuf::from("docs")),
            base_url_prefix: self
                .base_url
                .clone()
                .or(file.base_url_prefix)
                .or_else(|| seed.as_ref().map(|s| s.base_url.clone())),
            index_path: self
                .index
                .clone()
                .or(file.index_path)
                .unwrap_or_else(|| PathBuf::from("linkrag-index.jsonl")),
            chunk_size,
            overlap,
            retrieval,
            embedder,
            generator,
            prompt_kind: self.prompt.or(file.prompt_kind).unwrap_or(PromptKind::Hyperlinked),
            product: self
                .product
                .clone()
                .or(file.product)
                .or_else(|| seed.map(|s| s.product))
                .unwrap_or_else(|| DEFAULT_PRODUCT.to_string()),
        })
    }

    pub fn resolve(&self) -> Result<AppConfig> {
        self.resolve_with(|name| std::env::var(name).ok().filter(|v| !v.is_empty()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(json: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(json.as_bytes()).unwrap();
        f
    }

    #[test]
    fn defaults() {
        let cfg = ConfigArgs::default().resolve_with(|_| None).unwrap();
        assert_eq!((cfg.chunk_size, cfg.overlap), (1000, 150));
        assert_eq!(cfg.retrieval, RetrievalConfig::link_aware(5, 1, 1, 1));
        assert_eq!(cfg.embedder.kind, EmbedderKind::Offline);
        assert_eq!(cfg.generator.kind, GeneratorKind::Mock);
        assert_eq!(cfg.product, "Rulex");
    }

    #[test]
    fn flag_beats_file_beats_default() {
        let f = file(r#"{"chunk_size": 800, "overlap": 100, "retrieval": {"k": 7, "n_links": 2}}"#);
        let args = ConfigArgs {
            config_file: Some(f.path().to_path_buf()),
            overlap: Some(50),
            ..Default::default()
        };
        let cfg = args.resolve_with(|_| None).unwrap();
        assert_eq!(cfg.chunk_size, 800);
        assert_eq!(cfg.overlap, 50);
        assert_eq!(cfg.retrieval.k, 7);
        assert_eq!((cfg.retrieval.n_links, cfg.retrieval.depth), (2, 1));
    }

    #[test]
    fn expansion_flag_replaces_the_whole_triple() {
        let f = file(r#"{"retrieval": {"n_links": 3, "depth": 2, "top_m": 2}}"#);
        let args = ConfigArgs {
            config_file: Some(f.path().to_path_buf()),
            expansion: Some("0,0,0".into()),
            ..Default::default()
        };
        let cfg = args.resolve_with(|_| None).unwrap();
        assert!(!cfg.retrieval.expansion_enabled());
    }

    #[test]
    fn api_keys_come_from_the_environment() {
        let f = file(r#"{"embedder": {"kind": "remote", "model": "m", "api_key": "from-file"}}"#);
        let args = ConfigArgs {
            config_file: Some(f.path().to_path_buf()),
            ..Default::default()
        };
        let cfg = args.resolve_with(|_| None).unwrap();
        assert_eq!(cfg.embedder.remote.api_key.as_deref(), Some("from-file"));
        assert_eq!(cfg.embedder.remote.model, "m");
        let cfg = args
            .resolve_with(|k| (k == EMBEDDING_KEY_ENV).then(|| "from-env".to_string()))
            .unwrap();
        assert_eq!(cfg.embedder.remote.api_key.as_deref(), Some("from-env"));
    }

    #[test]
    fn invalid_values_are_rejected() {
        let args = ConfigArgs {
            chunk_size: Some(100),
            overlap: Some(100),
            ..Default::default()
        };
        assert!(args.resolve_with(|_| None).is_err());
        let f = file(r#"{"chunk_sise": 800}"#);
        let args = ConfigArgs {
            config_file: Some(f.path().to_path_buf()),
            ..Default::default()
        };
        assert!(args.resolve_with(|_| None).is_err());
        let args = ConfigArgs {
            expansion: Some("1,0,1".into()),
            ..Default::default()
        };
        assert!(args.resolve_with(|_| None).is_err());
    }
}
