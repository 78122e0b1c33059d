//! The `linkrag` command line.

pub mod config;

use std::fs::{self, File, OpenOptions};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use linkrag_core::bench::{
    aggregate_report, apply_external_scores, load_suite, read_records, write_records, AnswerScorer, BenchOptions,
    BenchRunner, ExternalScores, SurrogateScorer, TimingMode,
};
use linkrag_core::embedding::{Embedder, HashedEmbedder, RemoteEmbedder};
use linkrag_core::index::CorpusIndex;
use linkrag_core::ingest::{file_url_prefix, load_corpus_dir, Ingestor};
use linkrag_core::llm::{Generator, MockGenerator, PromptKind, PromptRenderer, RemoteGenerator};
use linkrag_core::retrieval::{RetrievalConfig, RetrievedContext, Retriever};
use linkrag_core::synthetic;

pub use config::{AppConfig, ConfigArgs, EmbedderKind, GeneratorKind};

#[derive(Debug, Parser)]
#[command(
    name = "linkrag",
    version,
    about = "Link-aware retrieval-augmented generation over HTML documentation"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,

    /// Write the bundled sample corpus and its benchmark suite into DIR.
    /// Combined with a subcommand, DIR also becomes the default corpus root.
    #[arg(long, value_name = "DIR")]
    pub seed_corpus: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse the corpus, embed its chunks and save the index.
    Ingest {
        /// Where to write discarded-link warnings (default: <index>.warnings.jsonl).
        #[arg(long, value_name = "PATH")]
        warnings: Option<PathBuf>,
    },
    /// Answer one question and print the retrieval trace.
    Query {
        question: String,
        /// Print the answer and trace as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run the benchmark grid and write the records CSV.
    Bench {
        /// Benchmark suite, one JSON case per line (default: <corpus_root>/benchmark.jsonl).
        #[arg(long, value_name = "PATH")]
        suite: Option<PathBuf>,
        #[arg(long, short, default_value = "records.csv", value_name = "PATH")]
        out: PathBuf,
        /// Configuration labels such as k5_n1d1m1; repeatable.
        #[arg(long = "grid", value_name = "LABEL", default_values_t = default_grid())]
        grid: Vec<String>,
        /// Prompt strategies, comma separated.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "basic,role_based,reasoning,hyperlinked"
        )]
        kinds: Vec<PromptKind>,
        /// Latency measurement; `auto` disables it for the mock generator.
        #[arg(long, value_enum, default_value_t = Timing::Auto)]
        timing: Timing,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        /// Take P/R/F1 from an external score CSV instead of the built-in scorer.
        #[arg(long, value_name = "PATH")]
        scores: Option<PathBuf>,
    },
    /// Print aggregate tables for a records CSV.
    Report {
        records: PathBuf,
        /// Replace scores with those from an external score CSV.
        #[arg(long, value_name = "PATH")]
        scores: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Print one chunk's metadata.
    Inspect {
        id: String,
        /// Include the embedding vector.
        #[arg(long)]
        vector: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Timing {
    Auto,
    Wall,
    None,
}

/// The three configurations compared by default: flat top-5, flat top-10 and
/// link-aware (1,1,1) with k=5.
pub fn default_grid() -> Vec<String> {
    ["k5_n0d0m0", "k10_n0d0m0", "k5_n1d1m1"].map(String::from).to_vec()
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let mut args = cli.config;
    if let Some(dir) = &cli.seed_corpus {
        let m = synthetic::materialize(dir).with_context(|| format!("writing sample corpus to {}", dir.display()))?;
        writeln!(
            out,
            "seeded {} pages and {} into {}",
            m.pages.len(),
            synthetic::SUITE_FILE,
            dir.display()
        )?;
        args.seed_defaults = Some(config::SeedDefaults {
            corpus_root: dir.clone(),
            base_url: synthetic::BASE_URL.to_string(),
            product: synthetic::PRODUCT.to_string(),
        });
    }
    let Some(command) = cli.command else {
        if cli.seed_corpus.is_some() {
            return Ok(());
        }
        bail!("no subcommand given (try --help)");
    };
    let cfg = args.resolve()?;
    match command {
        Command::Ingest { warnings } => ingest(&cfg, warnings, out),
        Command::Query { question, json } => query(&cfg, &question, json, out),
        Command::Bench {
            suite,
            out: records,
            grid,
            kinds,
            timing,
            parallelism,
            scores,
        } => bench(
            &cfg,
            BenchArgs {
                suite,
                records,
                grid,
                kinds,
                timing,
                parallelism,
                scores,
            },
            out,
        ),
        Command::Report { records, scores, json } => report(&records, scores.as_deref(), json, out),
        Command::Inspect { id, vector } => inspect(&cfg, &id, vector, out),
    }
}

fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Appends a timestamped line to `<path>.log`; primary outputs carry no
/// timestamps so that they stay byte-identical between runs.
fn log_run(path: &Path, message: &str) -> Result<()> {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let log = sidecar(path, ".log");
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&log)
        .with_context(|| format!("opening {}", log.display()))?;
    writeln!(f, "{secs} {message}")?;
    Ok(())
}

fn make_embedder(cfg: &AppConfig) -> Result<Box<dyn Embedder>> {
    Ok(match cfg.embedder.kind {
        EmbedderKind::Offline => Box::new(HashedEmbedder::default()),
        EmbedderKind::Remote => Box::new(RemoteEmbedder::new(&cfg.embedder.remote)?),
    })
}

fn make_generator(cfg: &AppConfig) -> Result<Box<dyn Generator>> {
    Ok(match cfg.generator.kind {
        GeneratorKind::Mock => Box::new(MockGenerator),
        GeneratorKind::Remote => Box::new(RemoteGenerator::new(&cfg.generator.remote)?),
    })
}

fn load_index(cfg: &AppConfig, embedder: &dyn Embedder) -> Result<CorpusIndex> {
    CorpusIndex::load_for(&cfg.index_path, embedder.id()).with_context(|| {
        format!(
            "loading index {} (run `linkrag ingest` first?)",
            cfg.index_path.display()
        )
    })
}

fn ingest(cfg: &AppConfig, warnings_path: Option<PathBuf>, out: &mut dyn Write) -> Result<()> {
    let prefix = match &cfg.base_url_prefix {
        Some(p) => p.clone(),
        None => file_url_prefix(&cfg.corpus_root)?,
    };
    let docs = load_corpus_dir(&cfg.corpus_root, &prefix)?;
    let ingestor = Ingestor::new(cfg.chunk_size, cfg.overlap, prefix.as_str())?;
    let output = ingestor.ingest_documents(&docs)?;
    let embedder = make_embedder(cfg)?;
    let (links, internal) = (output.link_count(), output.internal_link_count());
    let n_chunks = output.chunks.len();
    let index = CorpusIndex::build(embedder.as_ref(), output.chunks.clone())?;
    if let Some(parent) = cfg.index_path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    index.save(&cfg.index_path)?;

    if !output.warnings.is_empty() || warnings_path.is_some() {
        let path = warnings_path.unwrap_or_else(|| sidecar(&cfg.index_path, ".warnings.jsonl"));
        output.write_warnings(BufWriter::new(File::create(&path)?))?;
        writeln!(
            out,
            "{} link warnings written to {}",
            output.warnings.len(),
            path.display()
        )?;
    }
    writeln!(
        out,
        "ingested {} documents: {} sections, {} chunks ({} indexed), {} links ({} internal)",
        output.documents,
        output.sections,
        n_chunks,
        index.len(),
        links,
        internal
    )?;
    writeln!(out, "index written to {}", cfg.index_path.display())?;
    log_run(
        &cfg.index_path,
        &format!(
            "ingest root={} chunks={} embedder={}",
            cfg.corpus_root.display(),
            index.len(),
            embedder.id()
        ),
    )
}

fn trace_json(ctx: &RetrievedContext, config: &RetrievalConfig) -> serde_json::Value {
    json!({
        "config": config.label(),
        "seeds": ctx.seeds.iter().map(|s| json!({"id": s.chunk.id, "score": s.score})).collect::<Vec<_>>(),
        "expanded": ctx.expanded.iter().map(|e| json!({
            "id": e.chunk.id,
            "from": e.from,
            "via": e.via.href(),
            "link_context": e.via.context,
            "link_score": e.link_score,
            "hop": e.hop,
        })).collect::<Vec<_>>(),
        "final": ctx.final_ids,
    })
}

fn query(cfg: &AppConfig, question: &str, as_json: bool, out: &mut dyn Write) -> Result<()> {
    let embedder = make_embedder(cfg)?;
    let index = load_index(cfg, embedder.as_ref())?;
    let retriever = Retriever::new(&index, embedder.as_ref())?;
    let ctx = retriever.retrieve_link_aware(question, &cfg.retrieval)?;
    let kind = cfg.prompt_kind.paired_for(cfg.retrieval.expansion_enabled());
    let prompt = PromptRenderer::new(cfg.product.as_str()).render(kind, &ctx, question)?;
    let generator = make_generator(cfg)?;
    let result = generator.generate(&prompt)?;

    if as_json {
        let mut v = trace_json(&ctx, &cfg.retrieval);
        v["question"] = json!(question);
        v["prompt_kind"] = json!(kind.as_str());
        v["answer"] = json!(result.answer);
        v["refusal"] = json!(result.refusal);
        v["tokens"] = json!({
            "prompt": result.prompt_tokens,
            "completion": result.completion_tokens,
            "total": result.total_tokens,
            "estimated": result.tokens_estimated,
        });
        serde_json::to_writer_pretty(&mut *out, &v)?;
        writeln!(out)?;
        return Ok(());
    }

    writeln!(out, "{}", result.answer)?;
    writeln!(out)?;
    writeln!(
        out,
        "retrieval trace ({}, prompt {}, {} tokens{})",
        cfg.retrieval.label(),
        kind,
        result.total_tokens,
        if result.tokens_estimated { " estimated" } else { "" }
    )?;
    writeln!(out, "seeds:")?;
    for s in &ctx.seeds {
        writeln!(out, "  {:.4}  {}", s.score, s.chunk.id)?;
    }
    writeln!(out, "expanded:")?;
    for e in &ctx.expanded {
        writeln!(
            out,
            "  {:.4}  {}  via {} from {} (hop {})",
            e.link_score,
            e.chunk.id,
            e.via.href(),
            e.from,
            e.hop
        )?;
    }
    writeln!(out, "final: {} chunks", ctx.final_ids.len())?;
    Ok(())
}

struct BenchArgs {
    suite: Option<PathBuf>,
    records: PathBuf,
    grid: Vec<String>,
    kinds: Vec<PromptKind>,
    timing: Timing,
    parallelism: usize,
    scores: Option<PathBuf>,
}

fn bench(cfg: &AppConfig, args: BenchArgs, out: &mut dyn Write) -> Result<()> {
    let suite_path = args
        .suite
        .unwrap_or_else(|| cfg.corpus_root.join(synthetic::SUITE_FILE));
    let suite = load_suite(BufReader::new(
        File::open(&suite_path).with_context(|| format!("opening suite {}", suite_path.display()))?,
    ))
    .with_context(|| format!("reading suite {}", suite_path.display()))?;
    let configs = args
        .grid
        .iter()
        .map(|l| RetrievalConfig::parse_label(l))
        .collect::<Result<Vec<_>, _>>()?;

    let embedder = make_embedder(cfg)?;
    let index = load_index(cfg, embedder.as_ref())?;
    let retriever = Retriever::new(&index, embedder.as_ref())?;
    let generator = make_generator(cfg)?;
    let scorer: Box<dyn AnswerScorer> = match &args.scores {
        Some(p) => Box::new(ExternalScores::from_csv(
            File::open(p).with_context(|| format!("opening scores {}", p.display()))?,
        )?),
        None => Box::new(SurrogateScorer::default()),
    };
    let timing = match (args.timing, cfg.generator.kind) {
        (Timing::Wall, _) | (Timing::Auto, GeneratorKind::Remote) => TimingMode::WallClock,
        (Timing::None, _) | (Timing::Auto, GeneratorKind::Mock) => TimingMode::Disabled,
    };
    let renderer = PromptRenderer::new(cfg.product.as_str());
    let runner = BenchRunner {
        retriever: &retriever,
        renderer: &renderer,
        generator: generator.as_ref(),
        scorer: scorer.as_ref(),
        options: BenchOptions {
            timing,
            parallelism: args.parallelism.max(1),
        },
    };
    let records = runner.run(&suite, &args.kinds, &configs)?;

    if let Some(parent) = args.records.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let file = File::create(&args.records).with_context(|| format!("creating {}", args.records.display()))?;
    let mut w = BufWriter::new(file);
    write_records(&records, &mut w)?;
    w.flush()?;

    let failed = records.iter().filter(|r| r.error.is_some()).count();
    writeln!(
        out,
        "wrote {} records ({} failed) to {}",
        records.len(),
        failed,
        args.records.display()
    )?;
    log_run(
        &args.records,
        &format!(
            "bench suite={} records={} failed={} generator={} scorer={}",
            suite_path.display(),
            records.len(),
            failed,
            generator.id(),
            scorer.id()
        ),
    )
}

fn report(path: &Path, scores: Option<&Path>, as_json: bool, out: &mut dyn Write) -> Result<()> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut records = read_records(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))?;
    if let Some(p) = scores {
        let ext = ExternalScores::from_csv(File::open(p).with_context(|| format!("opening scores {}", p.display()))?)?;
        let missing = apply_external_scores(&mut records, &ext);
        if !missing.is_empty() {
            writeln!(
                out,
                "{} records have no external score and keep their original scores",
                missing.len()
            )?;
        }
    }
    let report = aggregate_report(&records).with_context(|| format!("reporting on {}", path.display()))?;
    if as_json {
        serde_json::to_writer_pretty(&mut *out, &report)?;
        writeln!(out)?;
    } else {
        write!(out, "{report}")?;
    }
    Ok(())
}

fn inspect(cfg: &AppConfig, id: &str, with_vector: bool, out: &mut dyn Write) -> Result<()> {
    let embedder = make_embedder(cfg)?;
    let index = load_index(cfg, embedder.as_ref())?;
    let Some(entry) = index.get(id) else {
        bail!("no chunk with id `{id}` in {}", cfg.index_path.display());
    };
    let mut v = serde_json::to_value(&entry.chunk)?;
    v["dimension"] = json!(entry.vector.dimension());
    if with_vector {
        v["vector"] = json!(entry.vector.as_slice());
    }
    serde_json::to_writer_pretty(&mut *out, &v)?;
    writeln!(out)?;
    Ok(())
}
