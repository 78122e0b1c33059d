//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::{HashMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::graph::{random_graph, GRAPH_WORDS};
use common::planted::planted_corpus;
use common::{golden_context, golden_path, GOLDEN_QUESTION};
use linkrag_core::bench::{
    pearson, quantile_bins, write_records, BenchOptions, BenchRunner, BenchmarkCase, SurrogateScorer, TimingMode,
};
use linkrag_core::embedding::{Embedder, EmbeddingError, EmbeddingVector, HashedEmbedder};
use linkrag_core::index::{CorpusIndex, IndexError};
use linkrag_core::ingest::{build_chunk_id, Chunk, Ingestor, LinkRef, SourceDocument, CONTEXT_WORDS};
use linkrag_core::llm::{MockGenerator, PromptKind, PromptRenderer};
use linkrag_core::retrieval::{AssemblyMode, RetrievalConfig, Retriever};
use linkrag_core::synthetic;
use rand::seq::IndexedRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn within(elapsed: Duration, limit_secs: u64) -> Result<(), String> {
    if elapsed > Duration::from_secs(limit_secs) {
        Err(format!("took {:.2}s, limit {limit_secs}s", elapsed.as_secs_f64()))
    } else {
        Ok(())
    }
}

fn synthetic_index() -> Result<(CorpusIndex, HashedEmbedder, Vec<Chunk>), String> {
    let ingestor = Ingestor::new(1000, 150, synthetic::BASE_URL).map_err(err)?;
    let out = ingestor.ingest_documents(&synthetic::source_documents()).map_err(err)?;
    let embedder = HashedEmbedder::default();
    let index = CorpusIndex::build(&embedder, out.chunks.clone()).map_err(err)?;
    Ok((index, embedder, out.chunks))
}

fn vocabulary(chunks: &[Chunk]) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut words = Vec::new();
    for c in chunks {
        for w in c.text.split(|ch: char| !ch.is_alphanumeric()).filter(|w| w.len() > 1) {
            let w = w.to_lowercase();
            if seen.insert(w.clone()) {
                words.push(w);
            }
        }
    }
    words
}

fn random_query(rng: &mut ChaCha8Rng, vocab: &[String]) -> String {
    let n = rng.random_range(1..=8);
    (0..n)
        .map(|_| vocab.choose(rng).unwrap().as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

fn baseline_equivalence() -> Outcome {
    let start = Instant::now();
    let (index, embedder, chunks) = synthetic_index()?;
    let retriever = Retriever::new(&index, &embedder).map_err(err)?;
    let vocab = vocabulary(&chunks);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let config = RetrievalConfig::baseline(5);
    for i in 0..100 {
        let q = random_query(&mut rng, &vocab);
        let base = retriever.retrieve_baseline(&q, 5).map_err(err)?;
        let link = retriever.retrieve_link_aware(&q, &config).map_err(err)?;
        ensure!(
            base.final_ids == link.final_ids,
            "query {i} `{q}`: {:?} != {:?}",
            base.final_ids,
            link.final_ids
        );
        ensure!(link.expanded.is_empty(), "query {i}: (0,0,0) expanded chunks");
    }
    within(start.elapsed(), 5)?;
    Ok(format!("100/100 queries identical over {} chunks", index.len()))
}

fn context_size_law() -> Outcome {
    let start = Instant::now();
    let embedder = HashedEmbedder::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut expanded_trials = 0;
    for trial in 0..500 {
        let chunks = random_graph(&mut rng, GRAPH_WORDS);
        let index = CorpusIndex::build(&embedder, chunks).map_err(err)?;
        let retriever = Retriever::new(&index, &embedder).map_err(err)?;
        let k = rng.random_range(1..=8);
        let config = if rng.random_bool(0.2) {
            RetrievalConfig::baseline(k)
        } else {
            RetrievalConfig::link_aware(
                k,
                rng.random_range(1..=3),
                rng.random_range(1..=3),
                rng.random_range(1..=3),
            )
        };
        let config = if rng.random_bool(0.5) {
            config.with_mode(AssemblyMode::RerankTruncate)
        } else {
            config
        };
        let q = (0..rng.random_range(1..=5))
            .map(|_| *GRAPH_WORDS.choose(&mut rng).unwrap())
            .collect::<Vec<_>>()
            .join(" ");
        let ctx = retriever.retrieve_link_aware(&q, &config).map_err(err)?;

        let fanout = config.n_links * config.top_m;
        let bound = config.k * (0..=config.depth).map(|i| fanout.pow(i as u32)).sum::<usize>();
        let limit = match config.assembly_mode {
            AssemblyMode::Augment => bound,
            AssemblyMode::RerankTruncate => config.k,
        };
        let n = ctx.final_ids.len();
        ensure!(n <= limit, "trial {trial} {}: {n} chunks > {limit}", config.label());
        let unique: HashSet<&String> = ctx.final_ids.iter().collect();
        ensure!(unique.len() == n, "trial {trial} {}: duplicate ids", config.label());
        if !ctx.expanded.is_empty() {
            expanded_trials += 1;
        }
    }
    within(start.elapsed(), 30)?;
    ensure!(
        expanded_trials >= 100,
        "only {expanded_trials} trials expanded any link"
    );
    Ok(format!(
        "500 trials within bound, no duplicates ({expanded_trials} with expansion)"
    ))
}

fn planted_recall() -> Outcome {
    let corpus = planted_corpus(50, 3);
    let ingestor = Ingestor::new(1000, 150, common::planted::BASE).map_err(err)?;
    let out = ingestor.ingest_documents(&corpus.documents).map_err(err)?;
    let embedder = HashedEmbedder::default();
    let index = CorpusIndex::build(&embedder, out.chunks).map_err(err)?;
    let retriever = Retriever::new(&index, &embedder).map_err(err)?;
    let larag = RetrievalConfig::link_aware(5, 1, 1, 1);
    let (mut hit_link, mut hit_base) = (0, 0);
    for case in &corpus.cases {
        ensure!(index.contains(&case.gold_id), "fixture lacks {}", case.gold_id);
        let base = retriever.retrieve_baseline(&case.question, 5).map_err(err)?;
        let link = retriever.retrieve_link_aware(&case.question, &larag).map_err(err)?;
        hit_base += usize::from(base.final_ids.contains(&case.gold_id));
        hit_link += usize::from(link.final_ids.contains(&case.gold_id));
    }
    let n = corpus.cases.len() as f64;
    let (r_link, r_base) = (hit_link as f64 / n, hit_base as f64 / n);
    ensure!(
        r_link >= 0.9 && r_base == 0.0,
        "link-aware {r_link:.2}, baseline {r_base:.2}"
    );
    Ok(format!(
        "link-aware recall {r_link:.2}, baseline {r_base:.2} over {} cases",
        corpus.cases.len()
    ))
}

/// Embeds known texts through a lookup table.
struct TableEmbedder {
    table: HashMap<String, EmbeddingVector>,
}

impl Embedder for TableEmbedder {
    fn id(&self) -> &str {
        "table"
    }

    fn embed(&self, text: &str) -> Result<EmbeddingVector, EmbeddingError> {
        self.table.get(text).cloned().ok_or(EmbeddingError::EmptyText)
    }
}

const DIM: usize = 6;

fn quantized(rng: &mut ChaCha8Rng) -> EmbeddingVector {
    loop {
        let v: Vec<f32> = (0..DIM).map(|_| rng.random_range(-1i8..=1) as f32).collect();
        if let Some(v) = EmbeddingVector::normalized(v) {
            return v;
        }
    }
}

fn dot(a: &EmbeddingVector, b: &EmbeddingVector) -> f64 {
    let mut s = 0.0;
    for i in 0..DIM {
        s += f64::from(a.as_slice()[i]) * f64::from(b.as_slice()[i]);
    }
    s
}

/// Descending score, ascending id: the reference ordering.
fn oracle_order(mut scored: Vec<(f64, String)>, keep: usize) -> Vec<(f64, String)> {
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then_with(|| a.1.cmp(&b.1)));
    scored.truncate(keep);
    scored
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checks = 0usize;
    for inst in 0..200 {
        let n = rng.random_range(1..=1000);
        let pool: Vec<EmbeddingVector> = (0..rng.random_range(1..=30)).map(|_| quantized(&mut rng)).collect();
        let texts: Vec<String> = (0..pool.len()).map(|i| format!("text {i}")).collect();
        let table: HashMap<String, EmbeddingVector> = texts.iter().cloned().zip(pool.iter().cloned()).collect();
        let embedder = TableEmbedder { table };

        let pages = rng.random_range(1..=20);
        let mut seen = HashSet::new();
        let mut rows: Vec<(Chunk, EmbeddingVector)> = Vec::new();
        while rows.len() < n {
            let url = format!("https://o.example/p{}.html", rng.random_range(0..pages));
            let anchor = format!("a{}", rng.random_range(0..5));
            let idx = rng.random_range(0..200);
            let id = build_chunk_id(&url, &anchor, idx);
            if !seen.insert(id.clone()) {
                continue;
            }
            let t = rng.random_range(0..pool.len());
            rows.push((
                Chunk {
                    id,
                    source_url: url,
                    anchor_name: anchor,
                    chunk_index: idx,
                    text: texts[t].clone(),
                    links: vec![],
                    links_context: vec![],
                },
                pool[t].clone(),
            ));
        }
        let mut index = CorpusIndex::new("table", DIM);
        index.upsert("table", rows.clone()).map_err(err)?;

        for _ in 0..5 {
            let query = if rng.random_bool(0.5) {
                pool.choose(&mut rng).unwrap().clone()
            } else {
                quantized(&mut rng)
            };
            let k = rng.random_range(1..=n + 3);
            let got: Vec<(f64, String)> = index
                .top_k(&query, k)
                .into_iter()
                .map(|s| (s.score, s.chunk.id))
                .collect();
            let want = oracle_order(rows.iter().map(|(c, v)| (dot(&query, v), c.id.clone())).collect(), k);
            ensure!(got == want, "instance {inst}: top_k({k}) differs from brute force");
            checks += 1;
        }

        let retriever = Retriever::new(&index, &embedder).map_err(err)?;
        for _ in 0..5 {
            let url = format!("https://o.example/p{}.html", rng.random_range(0..pages));
            let anchor = rng.random_bool(0.5).then(|| format!("a{}", rng.random_range(0..5)));
            let context = texts.choose(&mut rng).unwrap().clone();
            let link = LinkRef {
                target_url: url.clone(),
                target_anchor: anchor.clone(),
                context: context.clone(),
                is_internal: true,
            };
            let visited: HashSet<&str> = rows
                .iter()
                .filter(|_| rng.random_bool(0.2))
                .map(|(c, _)| c.id.as_str())
                .collect();
            let top_m = rng.random_range(1..=6);

            let candidates: Vec<_> = index
                .resolve_link(&url, anchor.as_deref())
                .into_iter()
                .filter(|c| !visited.contains(c.chunk.id.as_str()))
                .collect();
            let rerank = retriever
                .rerank_link_candidates(&link, candidates, top_m)
                .map_err(err)?;
            let got: Vec<(f64, String)> = rerank.ranked.iter().map(|(c, s)| (*s, c.chunk.id.clone())).collect();

            let probe = &embedder.table[&context];
            let want = oracle_order(
                rows.iter()
                    .filter(|(c, _)| c.source_url == url && anchor.as_ref().is_none_or(|a| &c.anchor_name == a))
                    .filter(|(c, _)| !visited.contains(c.id.as_str()))
                    .map(|(c, v)| (dot(probe, v), c.id.clone()))
                    .collect(),
                top_m,
            );
            ensure!(got == want, "instance {inst}: rerank differs from brute force");
            checks += 1;
        }
    }
    within(start.elapsed(), 60)?;
    Ok(format!("{checks} rankings identical to brute force over 200 instances"))
}

const FIXTURE_URL: &str = "https://doc.rulex.ai/docs/v14/studio/index.html";
const FIXTURE_ID: &str = "https://doc.rulex.ai/docs/v14/studio/index.html:rulex-studio-homepage-1";
const FIXTURE_SENTENCE: &str = "If some concepts are not clear for you please refer to the platform section";

fn fixture_page() -> SourceDocument {
    let filler = "Rulex Studio is the environment where flows are designed, executed and monitored. \
        From the homepage you can open recent flows, browse shared resources, and start new projects. \
        Each panel of the homepage summarises a different area of your workspace.";
    let intro: String = (0..5)
        .map(|i| format!("<p>{filler} Panel {i} lists the items you used most recently.</p>\n"))
        .collect();
    let html = format!(
        "<!DOCTYPE html><html><head><title>Rulex Studio Homepage</title></head><body>\n\
         <div class=\"body\" role=\"main\">\n\
         <section id=\"rulex-studio-homepage\">\n<h1>Rulex Studio Homepage<a class=\"headerlink\" href=\"#rulex-studio-homepage\">¶</a></h1>\n\
         {intro}<p>Widgets are described in <a class=\"reference internal\" href=\"../dashboards/widgets.html\">the widget reference, which lists every option available for every kind of widget in the product</a>.</p>\n\
         <p>{} <a class=\"reference internal\" href=\"../platform/index.html#platform-overview\">platform section</a>.</p>\n\
         </section>\n</div></body></html>\n",
        FIXTURE_SENTENCE.trim_end_matches(" platform section")
    );
    SourceDocument {
        url: FIXTURE_URL.into(),
        html: html.into_bytes(),
    }
}

fn plain_words(s: &str) -> Vec<String> {
    s.split_whitespace()
        .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric()).to_string())
        .filter(|w| !w.is_empty())
        .collect()
}

fn metadata_fidelity() -> Outcome {
    let ingestor = Ingestor::new(1000, 150, "https://doc.rulex.ai/docs/v14/").map_err(err)?;
    let out = ingestor.ingest_documents(&[fixture_page()]).map_err(err)?;
    let chunk = out.chunks.iter().find(|c| c.id == FIXTURE_ID).ok_or_else(|| {
        format!(
            "no chunk `{FIXTURE_ID}` among {:?}",
            out.chunks.iter().map(|c| &c.id).collect::<Vec<_>>()
        )
    })?;
    let link = chunk
        .links
        .iter()
        .find(|l| l.href() == "https://doc.rulex.ai/docs/v14/platform/index.html#platform-overview")
        .ok_or("platform link not attached to chunk 1")?;
    ensure!(link.is_internal, "platform link marked external");
    let sentence = plain_words(FIXTURE_SENTENCE);
    let ctx = plain_words(&link.context);
    ensure!(
        sentence.windows(ctx.len()).any(|w| w == ctx.as_slice()),
        "context `{}` is not a window of the source sentence",
        link.context
    );
    let mut contexts = 0;
    for c in &out.chunks {
        ensure!(
            c.links.len() == c.links_context.len(),
            "{}: links and contexts differ in length",
            c.id
        );
        for ctx in &c.links_context {
            let n = ctx.split_whitespace().count();
            ensure!(n <= CONTEXT_WORDS, "{}: context has {n} words", c.id);
            contexts += 1;
        }
    }
    Ok(format!(
        "id `{FIXTURE_ID}` present, {contexts} link contexts <= {CONTEXT_WORDS} words"
    ))
}

fn prompt_fidelity() -> Outcome {
    let ctx = golden_context();
    let renderer = PromptRenderer::default();
    for kind in PromptKind::ALL {
        let expected = std::fs::read_to_string(golden_path(kind.as_str())).map_err(err)?;
        let got = renderer.render(kind, &ctx, GOLDEN_QUESTION).map_err(err)?;
        ensure!(got.text == expected, "{kind} differs from its golden file");
    }
    Ok(format!(
        "{} kinds byte-identical to golden files",
        PromptKind::ALL.len()
    ))
}

fn bench_csv(
    retriever: &Retriever<HashedEmbedder>,
    suite: &[BenchmarkCase],
    kinds: &[PromptKind],
    configs: &[RetrievalConfig],
) -> Result<(usize, Vec<u8>), String> {
    let scorer = SurrogateScorer::new(HashedEmbedder::default());
    let renderer = PromptRenderer::new(synthetic::PRODUCT);
    let runner = BenchRunner {
        retriever,
        renderer: &renderer,
        generator: &MockGenerator,
        scorer: &scorer,
        options: BenchOptions {
            timing: TimingMode::Disabled,
            parallelism: 4,
        },
    };
    let records = runner.run(suite, kinds, configs).map_err(err)?;
    if let Some(r) = records.iter().find(|r| r.error.is_some()) {
        return Err(format!("record {:?} failed: {:?}", r.key(), r.error));
    }
    let mut csv = Vec::new();
    write_records(&records, &mut csv).map_err(err)?;
    Ok((records.len(), csv))
}

fn aggregate_machinery() -> Outcome {
    let start = Instant::now();
    let x = [1.0, 2.0, 3.0, 4.0, 5.0];
    for (ys, want) in [
        ([2.0, 4.0, 5.0, 4.0, 5.0], 6.0 / 60f64.sqrt()),
        ([5.0, 1.0, 4.0, 2.0, 3.0], -0.3),
        ([8.0, 6.0, 4.0, 2.0, 0.0], -1.0),
        ([3.0, 5.0, 7.0, 9.0, 11.0], 1.0),
    ] {
        let r = pearson(&x, &ys).map_err(err)?;
        ensure!((r - want).abs() <= 1e-12, "pearson {ys:?}: {r} vs {want}");
    }

    let eight: Vec<f64> = (1..=8).map(f64::from).collect();
    let bins = quantile_bins(&eight, 4).map_err(err)?;
    ensure!(bins.sizes() == vec![2, 2, 2, 2], "1..8 sizes {:?}", bins.sizes());
    ensure!(
        bins.labels == ["(0.999, 2.75]", "(2.75, 4.5]", "(4.5, 6.25]", "(6.25, 8.0]"],
        "1..8 labels {:?}",
        bins.labels
    );
    for (v, b) in [(2.0, 0), (2.75, 0), (3.0, 1), (8.0, 3)] {
        ensure!(bins.bin_of(v) == Some(b), "{v} should fall in bin {b}");
    }
    let lengths = [
        54.0, 100.0, 150.0, 200.0, 234.0, 235.0, 250.0, 280.0, 300.0, 320.0, 324.0, 350.0, 400.0, 500.0, 575.0, 577.0,
        700.0, 800.0, 1000.0, 1158.0,
    ];
    let bins = quantile_bins(&lengths, 4).map_err(err)?;
    ensure!(
        bins.labels
            == [
                "(53.999, 234.75]",
                "(234.75, 322.0]",
                "(322.0, 575.5]",
                "(575.5, 1158.0]"
            ],
        "length labels {:?}",
        bins.labels
    );

    let (index, embedder, _) = synthetic_index()?;
    let retriever = Retriever::new(&index, &embedder).map_err(err)?;
    let suite = synthetic::benchmark_suite();
    let small = &suite[..2];
    let kinds = [PromptKind::Basic, PromptKind::Reasoning];
    let one = [RetrievalConfig::link_aware(5, 1, 1, 1)];
    let (n1, csv1) = bench_csv(&retriever, small, &kinds, &one)?;
    let (n2, csv2) = bench_csv(&retriever, small, &kinds, &one)?;
    let hash = |b: &[u8]| Sha256::digest(b).iter().map(|x| format!("{x:02x}")).collect::<String>();
    ensure!(n1 == 4 && n2 == 4, "2x2x1 gave {n1} and {n2} records");
    ensure!(hash(&csv1) == hash(&csv2), "2x2x1 CSV differs between runs");

    let kinds = [
        PromptKind::Basic,
        PromptKind::RoleBased,
        PromptKind::Reasoning,
        PromptKind::Hyperlinked,
    ];
    let grid = [
        RetrievalConfig::baseline(5),
        RetrievalConfig::baseline(10),
        RetrievalConfig::link_aware(5, 1, 1, 1),
    ];
    let (n, _) = bench_csv(&retriever, &suite, &kinds, &grid)?;
    ensure!(suite.len() == 20 && n == 240, "{}x4x3 gave {n} records", suite.len());
    within(start.elapsed(), 120)?;
    Ok(format!(
        "pearson and bins exact, 2x2x1 = 4 records (sha256 {}), 20x4x3 = {n}",
        &hash(&csv1)[..12]
    ))
}

fn persistence() -> Outcome {
    let (_, embedder, chunks) = synthetic_index()?;
    let vocab = vocabulary(&chunks);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let rows: Vec<Chunk> = (0..500)
        .map(|i| {
            let url = format!("https://p.example/page{}.html", i / 10);
            let anchor = format!("part-{}", (i / 2) % 5);
            let text = random_query(&mut rng, &vocab) + " " + &random_query(&mut rng, &vocab);
            Chunk {
                id: build_chunk_id(&url, &anchor, i % 2),
                source_url: url,
                anchor_name: anchor,
                chunk_index: i % 2,
                text,
                links: vec![],
                links_context: vec![],
            }
        })
        .collect();
    let index = CorpusIndex::build(&embedder, rows).map_err(err)?;
    ensure!(index.len() == 500, "built {} chunks", index.len());

    let dir = tempfile::tempdir().map_err(err)?;
    let path = dir.path().join("index.jsonl");
    index.save(&path).map_err(err)?;
    let loaded = CorpusIndex::load_for(&path, embedder.id()).map_err(err)?;
    for i in 0..20 {
        let q = embedder.embed(&random_query(&mut rng, &vocab)).map_err(err)?;
        let a: Vec<_> = index.top_k(&q, 10).into_iter().map(|s| (s.chunk, s.score)).collect();
        let b: Vec<_> = loaded.top_k(&q, 10).into_iter().map(|s| (s.chunk, s.score)).collect();
        ensure!(a == b, "query {i}: top_k changed after reload");
    }

    let text = std::fs::read_to_string(&path).map_err(err)?;
    let (header, body) = text.split_once('\n').ok_or("index has no header line")?;
    let corrupted = header.replace("\"dimension\":256", "\"dimension\":\"wide\"");
    ensure!(
        corrupted != header,
        "header has no dimension field to corrupt: {header}"
    );
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, format!("{corrupted}\n{body}")).map_err(err)?;
    match CorpusIndex::load(&bad) {
        Err(IndexError::Header { field: "dimension", .. }) => {}
        other => return Err(format!("corrupted header gave {:?}", other.map(|i| i.len()))),
    }
    Ok("20/20 queries identical after reload; bad header rejected on `dimension`".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("baseline equivalence", baseline_equivalence),
        ("context-size law", context_size_law),
        ("planted-link recall", planted_recall),
        ("oracle equivalence", oracle_equivalence),
        ("metadata fidelity", metadata_fidelity),
        ("prompt fidelity", prompt_fidelity),
        ("aggregate machinery", aggregate_machinery),
        ("persistence", persistence),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {}. {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {}. {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
