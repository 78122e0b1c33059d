//! Benchmark harness: run the query × prompt × configuration grid, score
//! answers against references and aggregate the results.

mod report;
mod score;
mod stats;

use std::collections::HashSet;
use std::io::{BufRead, Write};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::Embedder;
use crate::llm::{Generator, PromptKind, PromptRenderer};
use crate::retrieval::{RetrievalConfig, RetrievalError, Retriever};

pub use report::{
    aggregate_report, AggregateReport, ConfigCorrelations, GroupMeans, LengthBinTable, REPORT_VERSION_LINE,
};
pub use score::{
    f1, word_count, words, AnswerScorer, ExternalScores, RecordKey, ScoreError, ScoreTriple, SurrogateScorer,
};
pub use stats::{mean, pearson, quantile_bins, quantile_sorted, QuantileBins, StatsError};

/// First line of every records CSV.
pub const RECORDS_VERSION_LINE: &str = "# linkrag-records v1";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("suite line {line}: {reason}")]
    Suite { line: usize, reason: String },
    #[error("duplicate query_id `{0}` in suite")]
    DuplicateQuery(String),
    #[error(transparent)]
    Config(#[from] RetrievalError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("records file: {0}")]
    Csv(String),
    #[error("records file does not start with `{expected}` (found `{found}`)")]
    Version { expected: &'static str, found: String },
    #[error("no records to report on")]
    NoRecords,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkCase {
    pub query_id: String,
    pub question: String,
    pub reference: String,
}

/// Reads a suite with one JSON case per line; blank lines are skipped.
pub fn load_suite<R: BufRead>(reader: R) -> Result<Vec<BenchmarkCase>, BenchError> {
    let mut cases = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let case: BenchmarkCase = serde_json::from_str(&line).map_err(|e| BenchError::Suite {
            line: i + 1,
            reason: e.to_string(),
        })?;
        cases.push(case);
    }
    validate_suite(&cases)?;
    Ok(cases)
}

pub fn write_suite<W: Write>(cases: &[BenchmarkCase], mut out: W) -> std::io::Result<()> {
    for case in cases {
        serde_json::to_writer(&mut out, case)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn validate_suite(cases: &[BenchmarkCase]) -> Result<(), BenchError> {
    let mut seen = HashSet::new();
    for (i, case) in cases.iter().enumerate() {
        let bad = |reason: &str| BenchError::Suite {
            line: i + 1,
            reason: reason.to_string(),
        };
        if case.query_id.trim().is_empty() {
            return Err(bad("empty query_id"));
        }
        if case.question.trim().is_empty() {
            return Err(bad("empty question"));
        }
        if case.reference.trim().is_empty() {
            return Err(bad("empty reference"));
        }
        if !seen.insert(case.query_id.as_str()) {
            return Err(BenchError::DuplicateQuery(case.query_id.clone()));
        }
    }
    Ok(())
}

/// One (case, prompt, configuration) run.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRecord {
    pub query_id: String,
    /// The template actually rendered (the fourth strategy depends on the config).
    pub prompt_kind: PromptKind,
    pub config: String,
    pub answer: String,
    pub retrieved_chunks: usize,
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    pub total_tokens: u64,
    pub tokens_estimated: bool,
    /// Seconds around retrieve + render + generate; zero when timing is off.
    pub latency: f64,
    /// Absent when the run or the scorer failed.
    pub scores: Option<ScoreTriple>,
    pub len_ref: usize,
    pub len_pred: usize,
    pub error: Option<String>,
}

impl BenchmarkRecord {
    pub fn key(&self) -> RecordKey {
        RecordKey {
            query_id: self.query_id.clone(),
            prompt_kind: self.prompt_kind.as_str().to_string(),
            config: self.config.clone(),
        }
    }

    pub fn strategy(&self) -> &'static str {
        self.prompt_kind.strategy()
    }

    fn sort_key(&self) -> (&str, &str, &str) {
        (&self.query_id, self.prompt_kind.as_str(), &self.config)
    }
}

/// Replaces scores with externally computed ones; records without a match
/// keep their scores and are returned as keys.
pub fn apply_external_scores(records: &mut [BenchmarkRecord], scores: &ExternalScores) -> Vec<RecordKey> {
    let mut missing = Vec::new();
    for r in records.iter_mut() {
        let key = r.key();
        match scores.get(&key) {
            Some(s) => r.scores = Some(s),
            None => missing.push(key),
        }
    }
    missing
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimingMode {
    #[default]
    WallClock,
    /// Report zero latency so that output is byte-stable between runs.
    Disabled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchOptions {
    pub timing: TimingMode,
    /// Worker threads; 1 runs inline.
    pub parallelism: usize,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            timing: TimingMode::WallClock,
            parallelism: 1,
        }
    }
}

pub struct BenchRunner<'a, E: Embedder + ?Sized> {
    pub retriever: &'a Retriever<'a, E>,
    pub renderer: &'a PromptRenderer,
    pub generator: &'a dyn Generator,
    pub scorer: &'a dyn AnswerScorer,
    pub options: BenchOptions,
}

struct Job<'s> {
    case: &'s BenchmarkCase,
    kind: PromptKind,
    config: &'s RetrievalConfig,
}

impl<E: Embedder + ?Sized> BenchRunner<'_, E> {
    /// Runs every (case, kind, config) combination and returns the records
    /// sorted by (query_id, prompt_kind, config).
    ///
    /// `Hyperlinked` and `Unified` are one strategy; passing both keeps the
    /// first. Failures inside a run are recorded on its record.
    pub fn run(
        &self,
        suite: &[BenchmarkCase],
        kinds: &[PromptKind],
        configs: &[RetrievalConfig],
    ) -> Result<Vec<BenchmarkRecord>, BenchError> {
        validate_suite(suite)?;
        for c in configs {
            c.validate()?;
        }
        let mut strategies = HashSet::new();
        let kinds: Vec<PromptKind> = kinds
            .iter()
            .copied()
            .filter(|k| strategies.insert(k.strategy()))
            .collect();

        let jobs: Vec<Job> = suite
            .iter()
            .flat_map(|case| {
                kinds.iter().flat_map(move |&kind| {
                    configs.iter().map(move |config| Job {
                        case,
                        kind: kind.paired_for(config.expansion_enabled()),
                        config,
                    })
                })
            })
            .collect();

        let mut records = if self.options.parallelism <= 1 || jobs.len() <= 1 {
            jobs.iter().map(|j| self.run_one(j)).collect()
        } else {
            self.run_parallel(&jobs)
        };
        records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        Ok(records)
    }

    fn run_parallel(&self, jobs: &[Job]) -> Vec<BenchmarkRecord> {
        let next = AtomicUsize::new(0);
        let out = Mutex::new(Vec::with_capacity(jobs.len()));
        std::thread::scope(|s| {
            for _ in 0..self.options.parallelism.min(jobs.len()) {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(job) = jobs.get(i) else { break };
                    let record = self.run_one(job);
                    out.lock()
                        .expect("no worker panics while holding the lock")
                        .push(record);
                });
            }
        });
        out.into_inner().expect("workers finished")
    }

    fn run_one(&self, job: &Job) -> BenchmarkRecord {
        let mut record = BenchmarkRecord {
            query_id: job.case.query_id.clone(),
            prompt_kind: job.kind,
            config: job.config.label(),
            answer: String::new(),
            retrieved_chunks: 0,
            prompt_tokens: 0,
            completion_tokens: 0,
            total_tokens: 0,
            tokens_estimated: false,
            latency: 0.0,
            scores: None,
            len_ref: word_count(&job.case.reference),
            len_pred: 0,
            error: None,
        };
        let started = Instant::now();
        let generated = self
            .retriever
            .retrieve_link_aware(&job.case.question, job.config)
            .map_err(|e| format!("retrieval: {e}"))
            .and_then(|ctx| {
                record.retrieved_chunks = ctx.final_ids.len();
                self.renderer
                    .render(job.kind, &ctx, &job.case.question)
                    .map_err(|e| format!("prompt: {e}"))
            })
            .and_then(|prompt| self.generator.generate(&prompt).map_err(|e| format!("generation: {e}")));
        if self.options.timing == TimingMode::WallClock {
            record.latency = started.elapsed().as_secs_f64();
        }

        let result = match generated {
            Ok(r) => r,
            Err(e) => {
                record.error = Some(e);
                return record;
            }
        };
        record.len_pred = word_count(&result.answer);
        record.prompt_tokens = result.prompt_tokens;
        record.completion_tokens = result.completion_tokens;
        record.total_tokens = result.total_tokens;
        record.tokens_estimated = result.tokens_estimated;
        record.answer = result.answer;
        if result.refusal {
            record.error = Some("generation: refused".to_string());
        }
        match self.scorer.score(&record.key(), &record.answer, &job.case.reference) {
            Ok(s) => record.scores = Some(s),
            Err(e) => record.error = Some(format!("scoring: {e}")),
        }
        record
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    query_id: String,
    prompt_kind: String,
    strategy: String,
    config: String,
    retrieved_chunks: usize,
    prompt_tokens: u64,
    completion_tokens: u64,
    total_tokens: u64,
    tokens_estimated: bool,
    latency: f64,
    precision: Option<f64>,
    recall: Option<f64>,
    f1: Option<f64>,
    len_ref: usize,
    len_pred: usize,
    error: Option<String>,
    answer: String,
}

/// Writes the version line followed by one CSV row per record.
pub fn write_records<W: Write>(records: &[BenchmarkRecord], mut out: W) -> Result<(), BenchError> {
    writeln!(out, "{RECORDS_VERSION_LINE}")?;
    let mut wtr = csv::Writer::from_writer(out);
    for r in records {
        wtr.serialize(CsvRow {
            query_id: r.query_id.clone(),
            prompt_kind: r.prompt_kind.as_str().to_string(),
            strategy: r.strategy().to_string(),
            config: r.config.clone(),
            retrieved_chunks: r.retrieved_chunks,
            prompt_tokens: r.prompt_tokens,
            completion_tokens: r.completion_tokens,
            total_tokens: r.total_tokens,
            tokens_estimated: r.tokens_estimated,
            latency: r.latency,
            precision: r.scores.map(|s| s.precision),
            recall: r.scores.map(|s| s.recall),
            f1: r.scores.map(|s| s.f1),
            len_ref: r.len_ref,
            len_pred: r.len_pred,
            error: r.error.clone(),
            answer: r.answer.clone(),
        })
        .map_err(|e| BenchError::Csv(e.to_string()))?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_records<R: BufRead>(mut reader: R) -> Result<Vec<BenchmarkRecord>, BenchError> {
    let mut first = String::new();
    reader.read_line(&mut first)?;
    let first = first.trim_end();
    if first.is_empty() {
        return Ok(Vec::new());
    }
    if first != RECORDS_VERSION_LINE {
        return Err(BenchError::Version {
            expected: RECORDS_VERSION_LINE,
            found: first.chars().take(60).collect(),
        });
    }
    let mut rdr = csv::Reader::from_reader(reader);
    let mut records = Vec::new();
    for row in rdr.deserialize::<CsvRow>() {
        let row = row.map_err(|e| BenchError::Csv(e.to_string()))?;
        let prompt_kind = row
            .prompt_kind
            .parse()
            .map_err(|e: crate::llm::PromptError| BenchError::Csv(e.to_string()))?;
        let scores = match (row.precision, row.recall, row.f1) {
            (Some(precision), Some(recall), Some(f1)) => Some(ScoreTriple { precision, recall, f1 }),
            (None, None, None) => None,
            _ => return Err(BenchError::Csv(format!("partial scores for {}", row.query_id))),
        };
        records.push(BenchmarkRecord {
            query_id: row.query_id,
            prompt_kind,
            config: row.config,
            answer: row.answer,
            retrieved_chunks: row.retrieved_chunks,
            prompt_tokens: row.prompt_tokens,
            completion_tokens: row.completion_tokens,
            total_tokens: row.total_tokens,
            tokens_estimated: row.tokens_estimated,
            latency: row.latency,
            scores,
            len_ref: row.len_ref,
            len_pred: row.len_pred,
            error: row.error,
        });
    }
    Ok(records)
}
