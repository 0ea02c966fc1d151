//! Train/test evaluation, document-level k-fold cross-validation and the
//! three results tables.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::confidence::{bow_confidence_train, mms_predict, mms_train, ConfidenceLevel, MmsOptions};
use crate::corpus::{Corpus, GoldLabel, SplitTag};
use crate::error::{Error, Result};
use crate::features::{
    candidate_local_map, candidate_ngram_map, FeatureMap, Vocabulary, DEFAULT_N_MAX, DEFAULT_WINDOW,
};
use crate::kernel::{KernelSpec, Payload, DEFAULT_LAMBDA};
use crate::metrics::{score, Metrics};
use crate::nnb::{extract_associations, train_neutral_detector, NeutralOptions, Verdict};
use crate::pipeline::{Resources, SentenceAnalysis};
use crate::svm::{smo_train, SmoParams, TrainingSet};
use crate::tree::{heuristic_tree, ParseTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Nnb,
    Lck,
    Gck,
    Subtree,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Nnb, Method::Lck, Method::Gck, Method::Subtree];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Nnb => "nnb",
            Method::Lck => "lck",
            Method::Gck => "gck",
            Method::Subtree => "subtree",
        }
    }
}

impl core::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method `{s}`")))
    }
}

/// Hyperparameters shared by every method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub smo: SmoParams,
    pub n_max: usize,
    pub window: usize,
    pub lambda: f64,
    /// Score Positive / Negative / Neutral separately instead of folding
    /// Neutral into Negative.
    pub three_way: bool,
    pub mms: MmsOptions,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            smo: SmoParams::default(),
            n_max: DEFAULT_N_MAX,
            window: DEFAULT_WINDOW,
            lambda: DEFAULT_LAMBDA,
            three_way: false,
            mms: MmsOptions::default(),
        }
    }
}

/// Externally supplied parse trees by candidate id.
pub type TreeBank = BTreeMap<String, ParseTree>;

pub fn association_classes(three_way: bool) -> Vec<(GoldLabel, &'static str)> {
    let mut c = alloc::vec![(GoldLabel::Positive, "positive"), (GoldLabel::Negative, "negative")];
    if three_way {
        c.push((GoldLabel::Neutral, "neutral"));
    }
    c
}

fn fold_gold(label: GoldLabel, three_way: bool) -> GoldLabel {
    if label == GoldLabel::Neutral && !three_way {
        GoldLabel::Negative
    } else {
        label
    }
}

/// Gold association classes of every labelled candidate, in corpus order.
pub fn gold_associations(corpus: &Corpus, three_way: bool) -> Vec<(String, GoldLabel)> {
    corpus
        .candidates()
        .filter_map(|(_, _, c)| c.gold_label.map(|g| (c.id.clone(), fold_gold(g, three_way))))
        .collect()
}

/// Candidate id, gold label, and either a finished payload or a feature map
/// still waiting for the training vocabulary.
type BaselineItem = (String, Option<GoldLabel>, Result<Payload, FeatureMap>);

fn baseline_payloads(
    corpus: &Corpus,
    method: Method,
    resources: &Resources,
    config: &EvalConfig,
    trees: Option<&TreeBank>,
) -> Result<Vec<BaselineItem>> {
    let mut out = Vec::new();
    for doc in &corpus.documents {
        for sentence in &doc.sentences {
            if sentence.candidates.is_empty() {
                continue;
            }
            let analysis =
                SentenceAnalysis::new(sentence, resources).map_err(|e| e.for_candidate(&sentence.candidates[0].id))?;
            for c in &sentence.candidates {
                let item = match method {
                    Method::Lck => Err(candidate_local_map(c, &analysis, config.window)?),
                    Method::Gck => Err(candidate_ngram_map(c, &analysis, config.n_max)?),
                    Method::Subtree => Ok(Payload::Tree(
                        trees
                            .and_then(|t| t.get(&c.id).cloned())
                            .unwrap_or_else(|| heuristic_tree(&analysis, c)),
                    )),
                    Method::Nnb => unreachable!("NNB has no kernel payload"),
                };
                out.push((c.id.clone(), c.gold_label, item));
            }
        }
    }
    Ok(out)
}

fn kernel_for(method: Method, config: &EvalConfig) -> KernelSpec {
    match method {
        Method::Lck => KernelSpec::LocalContext,
        Method::Gck => KernelSpec::GlobalContext,
        Method::Subtree => KernelSpec::Subtree { lambda: config.lambda },
        Method::Nnb => unreachable!("NNB has no kernel"),
    }
}

/// Trains `method` on `train` and predicts every labelled candidate of `test`.
pub fn predict_split(
    train: &Corpus,
    test: &Corpus,
    method: Method,
    resources: &Resources,
    config: &EvalConfig,
    trees: Option<&TreeBank>,
) -> Result<Vec<(String, GoldLabel)>> {
    if method == Method::Nnb {
        let options = NeutralOptions {
            n_max: config.n_max,
            params: config.smo,
        };
        let detector = train_neutral_detector(train, resources, &options)?;
        let mut out = Vec::new();
        for doc in &test.documents {
            let labelled: BTreeMap<&str, ()> = doc
                .candidates()
                .filter(|(_, c)| c.gold_label.is_some())
                .map(|(_, c)| (c.id.as_str(), ()))
                .collect();
            for p in extract_associations(doc, &detector, resources)? {
                if !labelled.contains_key(p.candidate_id.as_str()) {
                    continue;
                }
                let class = match (config.three_way, p.verdict, p.associated) {
                    (true, Verdict::Neutral, _) => GoldLabel::Neutral,
                    (_, _, true) => GoldLabel::Positive,
                    _ => GoldLabel::Negative,
                };
                out.push((p.candidate_id, class));
            }
        }
        return Ok(out);
    }
    let train_items: Vec<_> = baseline_payloads(train, method, resources, config, trees)?
        .into_iter()
        .filter(|(_, g, _)| g.is_some())
        .collect();
    let test_items: Vec<_> = baseline_payloads(test, method, resources, config, trees)?
        .into_iter()
        .filter(|(_, g, _)| g.is_some())
        .collect();
    let vocab = Vocabulary::from_maps(train_items.iter().filter_map(|(_, _, p)| p.as_ref().err()));
    let payload = |item: Result<Payload, FeatureMap>| match item {
        Ok(p) => p,
        Err(map) => Payload::Sparse(vocab.vectorize(&map)),
    };
    let labels: Vec<i8> = train_items
        .iter()
        .map(|(_, g, _)| if *g == Some(GoldLabel::Positive) { 1 } else { -1 })
        .collect();
    let payloads: Vec<Payload> = train_items.into_iter().map(|(_, _, p)| payload(p)).collect();
    let model = smo_train(
        &TrainingSet::new(payloads, labels)?,
        kernel_for(method, config),
        &config.smo,
    )?;
    test_items
        .into_iter()
        .map(|(id, _, p)| {
            let class = if model.predict(&payload(p)).map_err(|e| e.for_candidate(&id))? == 1 {
                GoldLabel::Positive
            } else {
                GoldLabel::Negative
            };
            Ok((id, class))
        })
        .collect()
}

pub fn evaluate_split(
    train: &Corpus,
    test: &Corpus,
    method: Method,
    resources: &Resources,
    config: &EvalConfig,
    trees: Option<&TreeBank>,
) -> Result<Metrics> {
    let predictions = predict_split(train, test, method, resources, config, trees)?;
    score(
        &predictions,
        &gold_associations(test, config.three_way),
        &association_classes(config.three_way),
    )
}

/// Document-level fold assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    /// Fold of each document, parallel to `Corpus::documents`.
    pub assignment: Vec<usize>,
}

fn positives(corpus: &Corpus, doc: usize) -> usize {
    corpus.documents[doc]
        .candidates()
        .filter(|(_, c)| c.gold_label == Some(GoldLabel::Positive))
        .count()
}

/// Shuffles documents with `seed`, orders them by positive-candidate count
/// (stable, descending) and deals them out in rounds of `k`. Within a round
/// each document goes to the fold with the fewest positives that has not yet
/// received a document in that round, so fold sizes differ by at most one and
/// positives spread evenly.
pub fn plan_folds(corpus: &Corpus, k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k must be at least 2, got {k}")));
    }
    let n = corpus.documents.len();
    if n < k {
        return Err(Error::TooSmall { needed: k, got: n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let pos: Vec<usize> = (0..n).map(|d| positives(corpus, d)).collect();
    order.sort_by(|a, b| pos[*b].cmp(&pos[*a]));
    let mut assignment = alloc::vec![0; n];
    let mut fold_pos = alloc::vec![0usize; k];
    for round in order.chunks(k) {
        let mut used = alloc::vec![false; k];
        for &d in round {
            let f = (0..k)
                .filter(|&f| !used[f])
                .min_by_key(|&f| (fold_pos[f], f))
                .expect("round is no longer than k");
            used[f] = true;
            fold_pos[f] += pos[d];
            assignment[d] = f;
        }
    }
    Ok(FoldPlan { k, seed, assignment })
}

impl FoldPlan {
    pub fn test_docs(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&d| self.assignment[d] == fold)
            .collect()
    }

    pub fn train_docs(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&d| self.assignment[d] != fold)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub n_documents: usize,
    /// `None` when the held-out fold has no labelled candidates.
    pub metrics: Option<Metrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub method: Method,
    pub plan: FoldPlan,
    pub folds: Vec<FoldResult>,
    /// Micro-aggregated over the concatenated fold predictions.
    pub aggregate: Metrics,
    pub predictions: Vec<(String, GoldLabel)>,
}

pub fn cross_validate(
    corpus: &Corpus,
    k: usize,
    seed: u64,
    method: Method,
    resources: &Resources,
    config: &EvalConfig,
    trees: Option<&TreeBank>,
) -> Result<CvResult> {
    let plan = plan_folds(corpus, k, seed)?;
    let classes = association_classes(config.three_way);
    let mut folds = Vec::with_capacity(k);
    let mut predictions = Vec::new();
    let mut gold = Vec::new();
    for fold in 0..k {
        let test_docs = plan.test_docs(fold);
        let train = corpus.select(&plan.train_docs(fold));
        let test = corpus.select(&test_docs);
        let fold_pred = predict_split(&train, &test, method, resources, config, trees)?;
        let fold_gold = gold_associations(&test, config.three_way);
        let metrics = if fold_gold.is_empty() {
            None
        } else {
            Some(score(&fold_pred, &fold_gold, &classes)?)
        };
        folds.push(FoldResult {
            fold,
            n_documents: test_docs.len(),
            metrics,
        });
        predictions.extend(fold_pred);
        gold.extend(fold_gold);
    }
    let aggregate = score(&predictions, &gold, &classes)?;
    Ok(CvResult {
        method,
        plan,
        folds,
        aggregate,
        predictions,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodMetrics {
    pub method: String,
    pub metrics: Metrics,
}

fn tagged_parts(corpus: &Corpus) -> Result<(Corpus, Corpus)> {
    let train = corpus.part(SplitTag::Train);
    let test = corpus.part(SplitTag::Test);
    if train.documents.is_empty() || test.documents.is_empty() {
        return Err(Error::InvalidArgument(
            "corpus needs documents tagged both train and test".into(),
        ));
    }
    Ok((train, test))
}

/// NNB, LCK and subtree baselines on the tagged test part.
pub fn run_table1(
    corpus: &Corpus,
    resources: &Resources,
    config: &EvalConfig,
    trees: Option<&TreeBank>,
) -> Result<Vec<MethodMetrics>> {
    let (train, test) = tagged_parts(corpus)?;
    [Method::Nnb, Method::Lck, Method::Subtree]
        .into_iter()
        .map(|m| {
            Ok(MethodMetrics {
                method: m.as_str().to_string(),
                metrics: evaluate_split(&train, &test, m, resources, config, trees)?,
            })
        })
        .collect()
}

/// The same three methods under k-fold cross-validation over the whole corpus.
pub fn run_table2(
    corpus: &Corpus,
    k: usize,
    seed: u64,
    resources: &Resources,
    config: &EvalConfig,
    trees: Option<&TreeBank>,
) -> Result<Vec<CvResult>> {
    [Method::Nnb, Method::Lck, Method::Subtree]
        .into_iter()
        .map(|m| cross_validate(corpus, k, seed, m, resources, config, trees))
        .collect()
}

pub const CONFIDENCE_CLASSES: [(ConfidenceLevel, &str); 3] = [
    (ConfidenceLevel::Low, "low"),
    (ConfidenceLevel::Medium, "medium"),
    (ConfidenceLevel::High, "high"),
];

/// Gold confidence of gold-positive candidates.
pub fn gold_confidences(corpus: &Corpus, merge_high_medium: bool) -> Vec<(String, ConfidenceLevel)> {
    corpus
        .candidates()
        .filter(|(_, _, c)| c.gold_label == Some(GoldLabel::Positive))
        .filter_map(|(_, _, c)| c.gold_confidence.map(|l| (c.id.clone(), l.merged(merge_high_medium))))
        .collect()
}

/// BOW and MMS confidence classifiers trained on `train`, scored per level on
/// the gold-positive candidates of `test`.
pub fn confidence_split(
    train: &Corpus,
    test: &Corpus,
    resources: &Resources,
    options: &MmsOptions,
) -> Result<Vec<MethodMetrics>> {
    let gold = gold_confidences(test, options.merge_high_medium);
    let wanted: BTreeMap<&str, ()> = gold.iter().map(|(id, _)| (id.as_str(), ())).collect();
    let bow = bow_confidence_train(train, options)?;
    let mms = mms_train(train, resources, options)?;
    let mut bow_pred = Vec::new();
    let mut mms_pred = Vec::new();
    for doc in &test.documents {
        for sentence in &doc.sentences {
            let targets: Vec<_> = sentence
                .candidates
                .iter()
                .filter(|c| wanted.contains_key(c.id.as_str()))
                .collect();
            if targets.is_empty() {
                continue;
            }
            let analysis = SentenceAnalysis::new(sentence, resources).map_err(|e| e.for_candidate(&targets[0].id))?;
            let bow_level = bow.predict(sentence)?;
            for c in targets {
                bow_pred.push((c.id.clone(), bow_level));
                mms_pred.push((
                    c.id.clone(),
                    mms_predict(&mms, sentence, c, &analysis, &resources.modality)?,
                ));
            }
        }
    }
    Ok(alloc::vec![
        MethodMetrics {
            method: "bow".into(),
            metrics: score(&bow_pred, &gold, &CONFIDENCE_CLASSES)?,
        },
        MethodMetrics {
            method: "mms".into(),
            metrics: score(&mms_pred, &gold, &CONFIDENCE_CLASSES)?,
        },
    ])
}

/// BOW vs MMS per confidence level on the tagged test part.
pub fn run_table3(corpus: &Corpus, resources: &Resources, config: &EvalConfig) -> Result<Vec<MethodMetrics>> {
    let (train, test) = tagged_parts(corpus)?;
    let options = MmsOptions {
        params: config.smo,
        ..config.mms.clone()
    };
    confidence_split(&train, &test, resources, &options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixtures::{doc, sentence};
    use crate::corpus::Document;
    use crate::corpus::EntityKind::*;

    fn fixture(n_docs: usize) -> Corpus {
        let ents = [(Snp, "rs1"), (Phenotype, "asthma")];
        let texts = [
            ("rs1 is associated with asthma", GoldLabel::Positive),
            ("There was no association between rs1 and asthma", GoldLabel::Negative),
            ("We genotyped rs1 in patients with asthma", GoldLabel::Neutral),
            ("rs1 increases the risk of asthma", GoldLabel::Positive),
        ];
        let docs: Vec<Document> = (0..n_docs)
            .map(|d| {
                let sentences = (0..2)
                    .map(|s| {
                        let (t, l) = texts[(d + s) % texts.len()];
                        sentence(&format!("d{d}:s{s}"), t, &ents, &[(0, 1, Some(l))])
                    })
                    .collect();
                doc(&format!("d{d}"), sentences)
            })
            .collect();
        Corpus::new(docs)
    }

    #[test]
    fn folds_partition_documents() {
        let c = fixture(4);
        let plan = plan_folds(&c, 2, 3).unwrap();
        let mut seen: Vec<usize> = (0..2).flat_map(|f| plan.test_docs(f)).collect();
        seen.sort();
        assert_eq!(seen, [0, 1, 2, 3]);
        assert_eq!(plan.test_docs(0).len(), 2);
        assert!(matches!(
            plan_folds(&c, 5, 0),
            Err(Error::TooSmall { needed: 5, got: 4 })
        ));
    }

    #[test]
    fn fold_sizes_balanced() {
        let c = fixture(23);
        let plan = plan_folds(&c, 10, 1).unwrap();
        let sizes: Vec<usize> = (0..10).map(|f| plan.test_docs(f).len()).collect();
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn nnb_cv_on_rule_consistent_fixture() {
        let c = fixture(8);
        let r = Resources::default();
        let cfg = EvalConfig::default();
        let res = cross_validate(&c, 4, 7, Method::Nnb, &r, &cfg, None).unwrap();
        assert_eq!(res.predictions.len(), c.n_candidates());
        assert_eq!(res.aggregate.class("positive").unwrap().f1, 1.0);
        let again = cross_validate(&c, 4, 7, Method::Nnb, &r, &cfg, None).unwrap();
        assert_eq!(res, again);
        let concat = score(
            &res.predictions,
            &gold_associations(&c, false),
            &association_classes(false),
        )
        .unwrap();
        assert_eq!(concat, res.aggregate);
    }

    #[test]
    fn baselines_run() {
        let c = fixture(6);
        let r = Resources::default();
        for m in [Method::Lck, Method::Gck, Method::Subtree] {
            let res = cross_validate(&c, 3, 1, m, &r, &EvalConfig::default(), None).unwrap();
            assert_eq!(res.predictions.len(), c.n_candidates());
        }
    }

    #[test]
    fn table1_needs_tags() {
        let c = fixture(4);
        assert!(run_table1(&c, &Resources::default(), &EvalConfig::default(), None).is_err());
        let mut tagged = c.clone();
        for (i, d) in tagged.documents.iter_mut().enumerate() {
            d.split = if i < 3 { SplitTag::Train } else { SplitTag::Test };
        }
        let rows = run_table1(&tagged, &Resources::default(), &EvalConfig::default(), None).unwrap();
        let names: Vec<_> = rows.iter().map(|r| r.method.as_str()).collect();
        assert_eq!(names, ["nnb", "lck", "subtree"]);
    }

    #[test]
    fn method_names() {
        assert_eq!("GCK".parse::<Method>().unwrap(), Method::Gck);
        assert!("svm".parse::<Method>().is_err());
    }
}
