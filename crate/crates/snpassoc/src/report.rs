//! Results tables as TSV or JSON, each carrying the provenance needed to
//! reproduce them.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use snpassoc_core::corpus::VerificationReport;
use snpassoc_core::metrics::Metrics;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Tsv,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub method: String,
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fold: Option<usize>,
    pub precision_undefined: bool,
    pub recall_undefined: bool,
}

pub fn rows(method: &str, metrics: &Metrics, fold: Option<usize>) -> Vec<Row> {
    metrics
        .classes
        .iter()
        .map(|c| Row {
            method: method.to_string(),
            class: c.class.clone(),
            precision: c.precision,
            recall: c.recall,
            f1: c.f1,
            support: c.support,
            fold,
            precision_undefined: c.precision_undefined,
            recall_undefined: c.recall_undefined,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hyperparameters {
    #[serde(rename = "C")]
    pub c: f64,
    pub tol: f64,
    pub max_passes: usize,
    pub lambda: f64,
    pub n_max: usize,
    pub window: usize,
    pub pvalue_buckets: Vec<f64>,
    pub merge_high_medium: bool,
    pub three_way: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool_version: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub hyperparameters: Hyperparameters,
    /// Lexicon name → sha256 of its text.
    pub lexicons: BTreeMap<String, String>,
    pub corpus_sha256: String,
    /// Whether any subtree payload came from the fallback tree builder.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub heuristic_trees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trees_sha256: Option<String>,
}

impl Provenance {
    fn tsv_comments(&self, out: &mut String) {
        let h = &self.hyperparameters;
        let _ = writeln!(out, "# tool_version={}", self.tool_version);
        let _ = writeln!(out, "# seed={}", self.seed);
        if let Some(k) = self.k {
            let _ = writeln!(out, "# k={k}");
        }
        let buckets: Vec<String> = h.pvalue_buckets.iter().map(f64::to_string).collect();
        let _ = writeln!(
            out,
            "# C={} tol={} max_passes={} lambda={} n_max={} window={} pvalue_buckets={} merge_high_medium={} three_way={}",
            h.c,
            h.tol,
            h.max_passes,
            h.lambda,
            h.n_max,
            h.window,
            buckets.join(","),
            h.merge_high_medium,
            h.three_way
        );
        for (name, hash) in &self.lexicons {
            let _ = writeln!(out, "# lexicon {name} sha256={hash}");
        }
        let _ = writeln!(out, "# corpus sha256={}", self.corpus_sha256);
        if let Some(t) = self.heuristic_trees {
            let _ = writeln!(out, "# heuristic_trees={t}");
        }
        if let Some(t) = &self.trees_sha256 {
            let _ = writeln!(out, "# trees sha256={t}");
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub report: String,
    pub rows: Vec<Row>,
    pub provenance: Provenance,
}

impl Report {
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# report={}", self.report);
        self.provenance.tsv_comments(&mut out);
        out.push_str("method\tclass\tprecision\trecall\tf1\tsupport\n");
        for r in &self.rows {
            let method = match r.fold {
                Some(f) => format!("{}:fold{f}", r.method),
                None => r.method.clone(),
            };
            let _ = writeln!(
                out,
                "{method}\t{}\t{:.4}\t{:.4}\t{:.4}\t{}",
                r.class, r.precision, r.recall, r.f1, r.support
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Tsv => self.to_tsv(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub report: String,
    pub stats: VerificationReport,
    pub top_connectors: Vec<(String, usize)>,
    pub provenance: Provenance,
}

impl StatsReport {
    pub fn new(stats: VerificationReport, provenance: Provenance) -> Self {
        let top_connectors = stats
            .top_connectors()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        StatsReport {
            report: "stats".into(),
            stats,
            top_connectors,
            provenance,
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            OutputFormat::Tsv => {
                let s = &self.stats;
                let mut out = String::new();
                let _ = writeln!(out, "# report=stats");
                self.provenance.tsv_comments(&mut out);
                out.push_str("field\tvalue\n");
                let fields: [(&str, String); 10] = [
                    ("n_candidates", s.n_candidates.to_string()),
                    ("n_sentences", s.n_sentences.to_string()),
                    ("avg_tokens_per_sentence", format!("{:.4}", s.avg_tokens_per_sentence)),
                    (
                        "concessive_instance_ratio",
                        format!("{:.4}", s.concessive_instance_ratio),
                    ),
                    (
                        "candidates_with_connector_ratio",
                        format!("{:.4}", s.candidates_with_connector_ratio),
                    ),
                    ("avg_snp_per_sentence", format!("{:.4}", s.avg_snp_per_sentence)),
                    (
                        "avg_phenotype_per_sentence",
                        format!("{:.4}", s.avg_phenotype_per_sentence),
                    ),
                    ("innate_positive", s.innate_positive.to_string()),
                    ("innate_negative", s.innate_negative.to_string()),
                    ("distinct_connectors", s.connector_histogram.len().to_string()),
                ];
                for (k, v) in fields {
                    let _ = writeln!(out, "{k}\t{v}");
                }
                for (k, v) in &self.top_connectors {
                    let _ = writeln!(out, "connector:{k}\t{v}");
                }
                out
            }
        }
    }
}
