use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::stats::{mean, pearson, quantile_bins};
use super::{BenchError, BenchmarkRecord};

pub const REPORT_VERSION_LINE: &str = "# linkrag-report v1";

const LENGTH_BINS: usize = 4;
const STRATEGY_ORDER: [&str; 4] = ["basic", "role_based", "reasoning", "structured"];

/// Means over one group of records. Cost columns average records that
/// produced an answer; score columns average records that were scored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupMeans {
    pub group: String,
    pub records: usize,
    pub failed: usize,
    pub retrieved_chunks: Option<f64>,
    pub total_tokens: Option<f64>,
    pub latency: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

/// Per-record Pearson correlations within one configuration. `None` where
/// the correlation is undefined (e.g. a constant series).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigCorrelations {
    pub config: String,
    pub f1_total_tokens: Option<f64>,
    pub f1_latency: Option<f64>,
    pub f1_len_ref: Option<f64>,
    pub f1_len_pred: Option<f64>,
}

/// Mean F1 per reference-length quartile, per configuration. Bin edges come
/// from the pooled `len_ref` of all scored records.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthBinTable {
    pub labels: Vec<String>,
    pub collapsed: bool,
    /// (config, mean F1 per bin)
    pub rows: Vec<(String, Vec<Option<f64>>)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateReport {
    pub records: usize,
    pub failed: usize,
    pub configs: Vec<GroupMeans>,
    pub strategies: Vec<GroupMeans>,
    pub correlations: Vec<ConfigCorrelations>,
    pub length_bins: Option<LengthBinTable>,
}

fn group_means(group: &str, records: &[&BenchmarkRecord]) -> GroupMeans {
    let answered: Vec<&&BenchmarkRecord> = records.iter().filter(|r| !r.answer.is_empty()).collect();
    let scored: Vec<_> = records.iter().filter_map(|r| r.scores).collect();
    let avg = |xs: Vec<f64>| mean(&xs);
    GroupMeans {
        group: group.to_string(),
        records: records.len(),
        failed: records.iter().filter(|r| r.error.is_some()).count(),
        retrieved_chunks: avg(answered.iter().map(|r| r.retrieved_chunks as f64).collect()),
        total_tokens: avg(answered.iter().map(|r| r.total_tokens as f64).collect()),
        latency: avg(answered.iter().map(|r| r.latency).collect()),
        precision: avg(scored.iter().map(|s| s.precision).collect()),
        recall: avg(scored.iter().map(|s| s.recall).collect()),
        f1: avg(scored.iter().map(|s| s.f1).collect()),
    }
}

fn correlations(config: &str, records: &[&BenchmarkRecord]) -> ConfigCorrelations {
    let scored: Vec<(&BenchmarkRecord, f64)> = records.iter().filter_map(|r| r.scores.map(|s| (*r, s.f1))).collect();
    let f1: Vec<f64> = scored.iter().map(|(_, f)| *f).collect();
    let against = |x: fn(&BenchmarkRecord) -> f64| {
        let xs: Vec<f64> = scored.iter().map(|(r, _)| x(r)).collect();
        pearson(&f1, &xs).ok()
    };
    ConfigCorrelations {
        config: config.to_string(),
        f1_total_tokens: against(|r| r.total_tokens as f64),
        f1_latency: against(|r| r.latency),
        f1_len_ref: against(|r| r.len_ref as f64),
        f1_len_pred: against(|r| r.len_pred as f64),
    }
}

fn length_bins(records: &[BenchmarkRecord], configs: &BTreeMap<&str, Vec<&BenchmarkRecord>>) -> Option<LengthBinTable> {
    let scored: Vec<&BenchmarkRecord> = records.iter().filter(|r| r.scores.is_some()).collect();
    let lens: Vec<f64> = scored.iter().map(|r| r.len_ref as f64).collect();
    let bins = quantile_bins(&lens, LENGTH_BINS).ok()?;
    let rows = configs
        .iter()
        .map(|(config, group)| {
            let mut per_bin = vec![Vec::new(); bins.bins()];
            for r in group {
                if let Some(s) = r.scores {
                    let b = bins.bin_of(r.len_ref as f64).expect("pooled edges cover every record");
                    per_bin[b].push(s.f1);
                }
            }
            (config.to_string(), per_bin.iter().map(|v| mean(v)).collect())
        })
        .collect();
    Some(LengthBinTable {
        collapsed: bins.collapsed(),
        labels: bins.labels,
        rows,
    })
}

pub fn aggregate_report(records: &[BenchmarkRecord]) -> Result<AggregateReport, BenchError> {
    if records.is_empty() {
        return Err(BenchError::NoRecords);
    }
    let mut by_config: BTreeMap<&str, Vec<&BenchmarkRecord>> = BTreeMap::new();
    let mut by_strategy: BTreeMap<&str, Vec<&BenchmarkRecord>> = BTreeMap::new();
    for r in records {
        by_config.entry(r.config.as_str()).or_default().push(r);
        by_strategy.entry(r.strategy()).or_default().push(r);
    }
    let mut strategies: Vec<GroupMeans> = by_strategy.iter().map(|(s, g)| group_means(s, g)).collect();
    strategies.sort_by_key(|g| {
        STRATEGY_ORDER
            .iter()
            .position(|s| *s == g.group)
            .unwrap_or(STRATEGY_ORDER.len())
    });

    Ok(AggregateReport {
        records: records.len(),
        failed: records.iter().filter(|r| r.error.is_some()).count(),
        configs: by_config.iter().map(|(c, g)| group_means(c, g)).collect(),
        strategies,
        correlations: by_config.iter().map(|(c, g)| correlations(c, g)).collect(),
        length_bins: length_bins(records, &by_config),
    })
}

struct Cell(Option<f64>, usize);

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(v) => write!(f, "{:.*}", self.1, v),
            None => f.write_str("-"),
        }
    }
}

impl fmt::Display for AggregateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{REPORT_VERSION_LINE}")?;
        writeln!(f, "records: {} (failed: {})", self.records, self.failed)?;

        for (title, rows) in [
            ("Per configuration", &self.configs),
            ("Per prompt strategy", &self.strategies),
        ] {
            writeln!(f, "\n## {title}")?;
            writeln!(
                f,
                "{:<18} {:>4} {:>6} {:>8} {:>10} {:>9} {:>7} {:>7} {:>7}",
                "group", "n", "failed", "chunks", "tokens", "time(s)", "P", "R", "F1"
            )?;
            for g in rows {
                writeln!(
                    f,
                    "{:<18} {:>4} {:>6} {:>8} {:>10} {:>9} {:>7} {:>7} {:>7}",
                    g.group,
                    g.records,
                    g.failed,
                    Cell(g.retrieved_chunks, 2).to_string(),
                    Cell(g.total_tokens, 2).to_string(),
                    Cell(g.latency, 3).to_string(),
                    Cell(g.precision, 4).to_string(),
                    Cell(g.recall, 4).to_string(),
                    Cell(g.f1, 4).to_string(),
                )?;
            }
        }

        writeln!(f, "\n## Correlations (Pearson, per record within each configuration)")?;
        writeln!(
            f,
            "{:<18} {:>14} {:>12} {:>12} {:>13}",
            "config", "F1~tokens", "F1~time", "F1~len_ref", "F1~len_pred"
        )?;
        for c in &self.correlations {
            writeln!(
                f,
                "{:<18} {:>14} {:>12} {:>12} {:>13}",
                c.config,
                Cell(c.f1_total_tokens, 3).to_string(),
                Cell(c.f1_latency, 3).to_string(),
                Cell(c.f1_len_ref, 3).to_string(),
                Cell(c.f1_len_pred, 3).to_string(),
            )?;
        }

        writeln!(f, "\n## Mean F1 by len_ref quartile")?;
        match &self.length_bins {
            None => writeln!(f, "(not enough distinct reference lengths)")?,
            Some(t) => {
                if t.collapsed {
                    writeln!(f, "(duplicate edges merged: {} bins)", t.labels.len())?;
                }
                write!(f, "{:<24}", "len_ref bin")?;
                for (config, _) in &t.rows {
                    write!(f, " {config:>12}")?;
                }
                writeln!(f)?;
                for (i, label) in t.labels.iter().enumerate() {
                    write!(f, "{label:<24}")?;
                    for (_, means) in &t.rows {
                        write!(f, " {:>12}", Cell(means[i], 4).to_string())?;
                    }
                    writeln!(f)?;
                }
            }
        }
        Ok(())
    }
}
