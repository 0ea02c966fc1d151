//! Command line: `stats`, `split`, `train`, `extract`, `eval` and `cv`.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fmt;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use snpassoc_core::confidence::{mms_predict, MmsModel, MmsOptions, PValueBuckets};
use snpassoc_core::corpus::{compute_verification_stats, split_corpus, Corpus, GoldLabel, SplitTag};
use snpassoc_core::cv::{
    association_classes, cross_validate, gold_associations, plan_folds, run_table1, run_table2, run_table3, EvalConfig,
    Method, TreeBank,
};
use snpassoc_core::features::{DEFAULT_N_MAX, DEFAULT_WINDOW};
use snpassoc_core::kernel::DEFAULT_LAMBDA;
use snpassoc_core::metrics::score;
use snpassoc_core::nnb::{extract_associations, rank_predictions, train_neutral_detector, NeutralOptions, Prediction};
use snpassoc_core::pipeline::{Resources, SentenceAnalysis};
use snpassoc_core::svm::SmoParams;

use crate::config::Config;
use crate::corpus_io::{load_corpus, raw_text_corpus, write_jsonl};
use crate::models::ModelFile;
use crate::report::{rows, Hyperparameters, OutputFormat, Provenance, Report, Row, StatsReport};
use crate::resources::{load_resources, sha256_hex, LexiconPaths};
use crate::trees::load_trees;

const DEFAULT_K: usize = 10;

/// Bad combination of otherwise well-formed arguments; exits with 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(UsageError(msg.into()).into())
}

#[derive(Debug, Parser)]
#[command(
    name = "snpassoc",
    version,
    about = "SNP-phenotype association extraction and evaluation"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every random choice (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: OutputFormat,
    #[arg(long, global = true)]
    cues: Option<PathBuf>,
    #[arg(long, global = true)]
    connectors: Option<PathBuf>,
    #[arg(long, global = true)]
    triggers: Option<PathBuf>,
    #[arg(long = "modality-lexicon", global = true)]
    modality_lexicon: Option<PathBuf>,
    #[arg(long, global = true)]
    gazetteer: Option<PathBuf>,
    /// Parse-tree sidecar for the subtree kernel.
    #[arg(long, global = true)]
    trees: Option<PathBuf>,
    /// Keep neutral candidates as a third class in output and scoring.
    #[arg(long = "emit-neutral", global = true)]
    emit_neutral: bool,
    /// Comma-separated p-value bucket thresholds.
    #[arg(long = "pvalue-buckets", global = true, value_delimiter = ',')]
    pvalue_buckets: Option<Vec<f64>>,
    #[arg(long = "merge-high-medium", global = true)]
    merge_high_medium: bool,
    /// SVM box constraint.
    #[arg(long = "C", global = true)]
    c: Option<f64>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long = "max-passes", global = true)]
    max_passes: Option<usize>,
    /// Subtree kernel decay.
    #[arg(long, global = true)]
    lambda: Option<f64>,
    /// Longest n-gram of the global context features.
    #[arg(long = "n-max", global = true)]
    n_max: Option<usize>,
    /// Local context window.
    #[arg(long, global = true)]
    window: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Part {
    Train,
    Test,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    Neutral,
    Mms,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Nnb,
    Lck,
    Gck,
    Subtree,
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Corpus verification statistics.
    Stats { corpus: PathBuf },
    /// Tag documents train/test and write the corpus as JSONL.
    Split {
        corpus: PathBuf,
        /// Share of documents tagged train.
        #[arg(long, conflicts_with_all = ["k", "fold"])]
        ratio: Option<f64>,
        /// Tag the given fold of a k-fold plan as test.
        #[arg(long, requires = "fold")]
        k: Option<usize>,
        #[arg(long, requires = "k")]
        fold: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a neutral detector or a confidence model.
    Train {
        corpus: PathBuf,
        #[arg(long, value_enum)]
        model: ModelKind,
        #[arg(long, value_enum, default_value = "train")]
        part: Part,
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify and rank candidates of a corpus or of raw text.
    Extract {
        #[arg(required_unless_present = "text", conflicts_with = "text")]
        corpus: Option<PathBuf>,
        /// Plain text file; entities are found automatically.
        #[arg(long)]
        text: Option<PathBuf>,
        #[arg(long = "neutral-model")]
        neutral_model: PathBuf,
        #[arg(long = "mms-model")]
        mms_model: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "all")]
        part: Part,
    },
    /// Results tables, or scoring of an extract output against gold labels.
    Eval {
        corpus: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3), conflicts_with = "predictions")]
        table: Option<u8>,
        #[arg(long)]
        k: Option<usize>,
        /// Predictions written by `extract`.
        #[arg(long)]
        predictions: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "all")]
        part: Part,
    },
    /// k-fold cross-validation.
    Cv {
        corpus: PathBuf,
        #[arg(long, value_enum, default_value = "nnb")]
        method: MethodArg,
        #[arg(long)]
        k: Option<usize>,
    },
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                1
            } else {
                2
            }
        }
    }
}

/// Everything resolved from flags, config file and defaults.
struct Session {
    config: Config,
    resources: Resources,
    lexicon_hashes: BTreeMap<String, String>,
    seed: u64,
    eval: EvalConfig,
    format: OutputFormat,
    emit_neutral: bool,
    trees: Option<(TreeBank, String)>,
    output: Option<PathBuf>,
}

fn build_context(g: &Global) -> anyhow::Result<Session> {
    let config = match &g.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let pick = |flag: &Option<PathBuf>, conf: &Option<PathBuf>| flag.clone().or_else(|| conf.clone());
    let paths = LexiconPaths {
        cues: pick(&g.cues, &config.cues),
        connectors: pick(&g.connectors, &config.connectors),
        triggers: pick(&g.triggers, &config.triggers),
        modality: pick(&g.modality_lexicon, &config.modality_lexicon),
        gazetteer: pick(&g.gazetteer, &config.gazetteer),
    };
    let (resources, lexicon_hashes) = load_resources(&paths)?;
    let trees = match pick(&g.trees, &config.trees) {
        Some(p) => {
            let (bank, bytes) = load_trees(&p)?;
            Some((bank, sha256_hex(&bytes)))
        }
        None => None,
    };
    let defaults = SmoParams::default();
    let smo = SmoParams {
        c: g.c.or(config.c).unwrap_or(defaults.c),
        tol: g.tol.or(config.tol).unwrap_or(defaults.tol),
        max_passes: g.max_passes.or(config.max_passes).unwrap_or(defaults.max_passes),
        seed: g.seed.or(config.seed).unwrap_or(0),
        ..defaults
    };
    if let Err(e) = smo.validate() {
        return usage(e.to_string());
    }
    let thresholds = g.pvalue_buckets.clone().or_else(|| config.pvalue_buckets.clone());
    let buckets = match thresholds {
        Some(t) => match PValueBuckets::new(t) {
            Ok(b) => b,
            Err(e) => return usage(format!("--pvalue-buckets: {e}")),
        },
        None => PValueBuckets::default(),
    };
    let lambda = g.lambda.or(config.lambda).unwrap_or(DEFAULT_LAMBDA);
    if !(lambda > 0.0 && lambda <= 1.0) {
        return usage(format!("lambda {lambda} outside (0,1]"));
    }
    let n_max = g.n_max.or(config.n_max).unwrap_or(DEFAULT_N_MAX);
    if n_max == 0 {
        return usage("n-max must be at least 1");
    }
    let eval = EvalConfig {
        smo,
        n_max,
        window: g.window.or(config.window).unwrap_or(DEFAULT_WINDOW),
        lambda,
        three_way: g.emit_neutral,
        mms: MmsOptions {
            buckets,
            merge_high_medium: g.merge_high_medium || config.merge_high_medium.unwrap_or(false),
            params: smo,
        },
    };
    Ok(Session {
        seed: smo.seed,
        config,
        resources,
        lexicon_hashes,
        eval,
        format: g.format,
        emit_neutral: g.emit_neutral,
        trees,
        output: g.output.clone(),
    })
}

impl Session {
    fn provenance(&self, corpus_bytes: &[u8], k: Option<usize>, heuristic_trees: Option<bool>) -> Provenance {
        let e = &self.eval;
        Provenance {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: self.seed,
            k,
            hyperparameters: Hyperparameters {
                c: e.smo.c,
                tol: e.smo.tol,
                max_passes: e.smo.max_passes,
                lambda: e.lambda,
                n_max: e.n_max,
                window: e.window,
                pvalue_buckets: e.mms.buckets.thresholds().to_vec(),
                merge_high_medium: e.mms.merge_high_medium,
                three_way: e.three_way,
            },
            lexicons: self.lexicon_hashes.clone(),
            corpus_sha256: sha256_hex(corpus_bytes),
            heuristic_trees,
            trees_sha256: self.trees.as_ref().map(|(_, h)| h.clone()),
        }
    }

    fn tree_bank(&self) -> Option<&TreeBank> {
        self.trees.as_ref().map(|(t, _)| t)
    }

    /// Whether any candidate lacks a sidecar tree and so gets a built one.
    fn uses_heuristic_trees(&self, corpus: &Corpus) -> bool {
        match self.tree_bank() {
            Some(bank) => corpus.candidates().any(|(_, _, c)| !bank.contains_key(&c.id)),
            None => true,
        }
    }

    fn load(&self, path: &Path) -> anyhow::Result<(Corpus, Vec<u8>)> {
        load_corpus(path, &self.config)
    }

    fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.output {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                out.flush()?;
                Ok(())
            }
        }
    }

    fn k(&self, flag: Option<usize>) -> usize {
        flag.or(self.config.k).unwrap_or(DEFAULT_K)
    }
}

fn select_part(corpus: &Corpus, part: Part) -> anyhow::Result<Corpus> {
    let (tag, name) = match part {
        Part::All => return Ok(corpus.clone()),
        Part::Train => (SplitTag::Train, "train"),
        Part::Test => (SplitTag::Test, "test"),
    };
    let selected = corpus.part(tag);
    if selected.documents.is_empty() {
        bail!("corpus has no documents tagged {name}");
    }
    Ok(selected)
}

fn execute(cli: Cli) -> anyhow::Result<()> {
    let ctx = build_context(&cli.global)?;
    match cli.command {
        Command::Stats { corpus } => stats(&ctx, &corpus),
        Command::Split {
            corpus,
            ratio,
            k,
            fold,
            out,
        } => split(&ctx, &corpus, ratio, k.zip(fold), &out),
        Command::Train {
            corpus,
            model,
            part,
            out,
        } => train(&ctx, &corpus, model, part, &out),
        Command::Extract {
            corpus,
            text,
            neutral_model,
            mms_model,
            part,
        } => extract(
            &ctx,
            corpus.as_deref(),
            text.as_deref(),
            &neutral_model,
            mms_model.as_deref(),
            part,
        ),
        Command::Eval {
            corpus,
            table,
            k,
            predictions,
            part,
        } => match (table, predictions) {
            (Some(t), None) => eval_table(&ctx, &corpus, t, k),
            (None, Some(p)) => eval_predictions(&ctx, &corpus, &p, part),
            _ => usage("eval needs --table or --predictions"),
        },
        Command::Cv { corpus, method, k } => cv(&ctx, &corpus, method, k),
    }
}

fn stats(ctx: &Session, path: &Path) -> anyhow::Result<()> {
    let (corpus, bytes) = ctx.load(path)?;
    let r = &ctx.resources;
    let stats = compute_verification_stats(&corpus, &r.connectors, &r.cues, &r.triggers);
    ctx.emit(&StatsReport::new(stats, ctx.provenance(&bytes, None, None)).render(ctx.format))
}

fn split(
    ctx: &Session,
    path: &Path,
    ratio: Option<f64>,
    fold: Option<(usize, usize)>,
    out: &Path,
) -> anyhow::Result<()> {
    let (corpus, _) = ctx.load(path)?;
    let tagged = match fold {
        Some((k, f)) => {
            if f >= k {
                return usage(format!("--fold {f} must be below --k {k}"));
            }
            let plan = plan_folds(&corpus, k, ctx.seed)?;
            let mut tagged = corpus;
            for (doc, assigned) in tagged.documents.iter_mut().zip(&plan.assignment) {
                doc.split = if *assigned == f {
                    SplitTag::Test
                } else {
                    SplitTag::Train
                };
            }
            tagged
        }
        None => {
            if ratio.is_none() && !corpus.has_split() {
                return usage("split needs --ratio or --k/--fold for an untagged corpus");
            }
            split_corpus(&corpus, ratio, ctx.seed)?
        }
    };
    std::fs::write(out, write_jsonl(&tagged)).with_context(|| format!("writing {}", out.display()))
}

fn train(ctx: &Session, path: &Path, kind: ModelKind, part: Part, out: &Path) -> anyhow::Result<()> {
    let (corpus, _) = ctx.load(path)?;
    let corpus = select_part(&corpus, part)?;
    let file = match kind {
        ModelKind::Neutral => {
            let options = NeutralOptions {
                n_max: ctx.eval.n_max,
                params: ctx.eval.smo,
            };
            ModelFile::neutral(train_neutral_detector(&corpus, &ctx.resources, &options)?)
        }
        ModelKind::Mms => ModelFile::mms(snpassoc_core::confidence::mms_train(
            &corpus,
            &ctx.resources,
            &ctx.eval.mms,
        )?),
    };
    std::fs::write(out, file.to_json()).with_context(|| format!("writing {}", out.display()))
}

fn attach_confidence(
    corpus: &Corpus,
    predictions: &mut [Prediction],
    model: &MmsModel,
    resources: &Resources,
) -> anyhow::Result<()> {
    let associated: BTreeSet<&str> = predictions
        .iter()
        .filter(|p| p.associated)
        .map(|p| p.candidate_id.as_str())
        .collect();
    let mut levels = BTreeMap::new();
    for doc in &corpus.documents {
        for sentence in &doc.sentences {
            let targets: Vec<_> = sentence
                .candidates
                .iter()
                .filter(|c| associated.contains(c.id.as_str()))
                .collect();
            if targets.is_empty() {
                continue;
            }
            let analysis = SentenceAnalysis::new(sentence, resources)?;
            for c in targets {
                levels.insert(
                    c.id.clone(),
                    mms_predict(model, sentence, c, &analysis, &resources.modality)?,
                );
            }
        }
    }
    for p in predictions.iter_mut() {
        p.confidence = levels.get(&p.candidate_id).copied();
    }
    Ok(())
}

fn prediction_tsv(predictions: &[Prediction], emit_neutral: bool) -> String {
    let mut out =
        String::from("candidate_id\tdoc_id\tsentence_id\tsnp\tphenotype\tassociated\tconfidence\tneutral_score");
    if emit_neutral {
        out.push_str("\tverdict");
    }
    out.push('\n');
    for p in predictions {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            p.candidate_id,
            p.doc_id,
            p.sentence_id,
            p.snp,
            p.phenotype,
            p.associated,
            p.confidence.map_or("", |c| c.as_str()),
            p.neutral_score
        ));
        if emit_neutral {
            out.push('\t');
            out.push_str(p.verdict.as_str());
        }
        out.push('\n');
    }
    out
}

fn prediction_jsonl(predictions: &[Prediction], emit_neutral: bool) -> String {
    let mut out = String::new();
    for p in predictions {
        let mut value = serde_json::to_value(p).expect("prediction serializes");
        if !emit_neutral {
            value.as_object_mut().expect("object").remove("verdict");
        }
        out.push_str(&value.to_string());
        out.push('\n');
    }
    out
}

fn extract(
    ctx: &Session,
    corpus_path: Option<&Path>,
    text: Option<&Path>,
    neutral_model: &Path,
    mms_model: Option<&Path>,
    part: Part,
) -> anyhow::Result<()> {
    let corpus = match (corpus_path, text) {
        (Some(p), _) => select_part(&ctx.load(p)?.0, part)?,
        (None, Some(t)) => {
            let raw = std::fs::read_to_string(t).with_context(|| format!("reading {}", t.display()))?;
            raw_text_corpus(&raw, &ctx.resources.gazetteer)
        }
        (None, None) => return usage("extract needs a corpus or --text"),
    };
    let detector = ModelFile::load_neutral(neutral_model)?;
    let mut predictions = Vec::new();
    for doc in &corpus.documents {
        predictions.extend(extract_associations(doc, &detector, &ctx.resources)?);
    }
    if let Some(p) = mms_model {
        attach_confidence(&corpus, &mut predictions, &ModelFile::load_mms(p)?, &ctx.resources)?;
    }
    rank_predictions(&mut predictions);
    let text = match ctx.format {
        OutputFormat::Json => prediction_jsonl(&predictions, ctx.emit_neutral),
        OutputFormat::Tsv => prediction_tsv(&predictions, ctx.emit_neutral),
    };
    ctx.emit(&text)
}

#[derive(Deserialize)]
struct PredictionLine {
    candidate_id: String,
    associated: bool,
    #[serde(default)]
    verdict: Option<snpassoc_core::nnb::Verdict>,
}

fn read_predictions(path: &Path, three_way: bool) -> anyhow::Result<Vec<(String, GoldLabel)>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let p: PredictionLine =
            serde_json::from_str(line).with_context(|| format!("{} line {}", path.display(), n + 1))?;
        let class = match (three_way, p.verdict, p.associated) {
            (true, None, _) => bail!(
                "{} line {}: three-way scoring needs a verdict (run extract with --emit-neutral)",
                path.display(),
                n + 1
            ),
            (true, Some(snpassoc_core::nnb::Verdict::Neutral), _) => GoldLabel::Neutral,
            (_, _, true) => GoldLabel::Positive,
            _ => GoldLabel::Negative,
        };
        out.push((p.candidate_id, class));
    }
    Ok(out)
}

fn eval_predictions(ctx: &Session, corpus_path: &Path, predictions: &Path, part: Part) -> anyhow::Result<()> {
    let (corpus, bytes) = ctx.load(corpus_path)?;
    let corpus = select_part(&corpus, part)?;
    let gold = gold_associations(&corpus, ctx.eval.three_way);
    let wanted: BTreeSet<&str> = gold.iter().map(|(id, _)| id.as_str()).collect();
    let predicted: Vec<_> = read_predictions(predictions, ctx.eval.three_way)?
        .into_iter()
        .filter(|(id, _)| wanted.contains(id.as_str()))
        .collect();
    let metrics = score(&predicted, &gold, &association_classes(ctx.eval.three_way))?;
    let report = Report {
        report: "predictions".into(),
        rows: rows("predictions", &metrics, None),
        provenance: ctx.provenance(&bytes, None, None),
    };
    ctx.emit(&report.render(ctx.format))
}

fn cv_rows(result: &snpassoc_core::cv::CvResult) -> Vec<Row> {
    let name = result.method.as_str();
    let mut out = rows(name, &result.aggregate, None);
    for f in &result.folds {
        if let Some(m) = &f.metrics {
            out.extend(rows(name, m, Some(f.fold)));
        }
    }
    out
}

fn eval_table(ctx: &Session, path: &Path, table: u8, k: Option<usize>) -> anyhow::Result<()> {
    let (corpus, bytes) = ctx.load(path)?;
    let trees = ctx.tree_bank();
    let (report_rows, k, heuristic) = match table {
        1 => {
            let results = run_table1(&corpus, &ctx.resources, &ctx.eval, trees)?;
            let r = results.iter().flat_map(|m| rows(&m.method, &m.metrics, None)).collect();
            (r, None, Some(ctx.uses_heuristic_trees(&corpus)))
        }
        2 => {
            let k = ctx.k(k);
            let results = run_table2(&corpus, k, ctx.seed, &ctx.resources, &ctx.eval, trees)?;
            (
                results.iter().flat_map(cv_rows).collect(),
                Some(k),
                Some(ctx.uses_heuristic_trees(&corpus)),
            )
        }
        _ => {
            let results = run_table3(&corpus, &ctx.resources, &ctx.eval)?;
            (
                results.iter().flat_map(|m| rows(&m.method, &m.metrics, None)).collect(),
                None,
                None,
            )
        }
    };
    let report = Report {
        report: format!("table{table}"),
        rows: report_rows,
        provenance: ctx.provenance(&bytes, k, heuristic),
    };
    ctx.emit(&report.render(ctx.format))
}

fn cv(ctx: &Session, path: &Path, method: MethodArg, k: Option<usize>) -> anyhow::Result<()> {
    let (corpus, bytes) = ctx.load(path)?;
    let k = ctx.k(k);
    let methods: Vec<Method> = match method {
        MethodArg::All => Method::ALL.to_vec(),
        MethodArg::Nnb => vec![Method::Nnb],
        MethodArg::Lck => vec![Method::Lck],
        MethodArg::Gck => vec![Method::Gck],
        MethodArg::Subtree => vec![Method::Subtree],
    };
    let mut report_rows = Vec::new();
    for m in &methods {
        let result = cross_validate(&corpus, k, ctx.seed, *m, &ctx.resources, &ctx.eval, ctx.tree_bank())?;
        report_rows.extend(cv_rows(&result));
    }
    let heuristic = methods
        .contains(&Method::Subtree)
        .then(|| ctx.uses_heuristic_trees(&corpus));
    let report = Report {
        report: "cv".into(),
        rows: report_rows,
        provenance: ctx.provenance(&bytes, Some(k), heuristic),
    };
    ctx.emit(&report.render(ctx.format))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["snpassoc", "frobnicate"]), 1);
        assert_eq!(run(["snpassoc", "stats"]), 1);
        assert_eq!(run(["snpassoc", "--help"]), 0);
        assert_eq!(run(["snpassoc", "--bogus", "stats", "x"]), 1);
    }

    #[test]
    fn missing_corpus_is_data_error() {
        assert_eq!(run(["snpassoc", "stats", "/nonexistent/corpus.jsonl"]), 2);
    }

    #[test]
    fn bad_buckets_are_usage_errors() {
        assert_eq!(
            run(["snpassoc", "--pvalue-buckets", "0.05,0.001", "stats", "x.jsonl"]),
            1
        );
    }
}
