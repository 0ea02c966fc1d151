//! Neutral-candidate detection and the negation/neutral rule classifier.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::confidence::ConfidenceLevel;
use crate::corpus::{CandidatePair, Corpus, Document, GoldLabel, Sentence};
use crate::error::{Error, Result};
use crate::features::{
    candidate_ngram_map, candidate_positional_features, PositionalFeatures, Vocabulary, DEFAULT_N_MAX,
};
use crate::kernel::{KernelSpec, Payload};
use crate::pipeline::{Resources, SentenceAnalysis};
use crate::svm::{smo_train, SmoParams, SvmModel, TrainingSet};

/// A candidate is associated unless negation scope covers at least one of its
/// entities (both inside, or one inside with the other on either side) or it
/// is predicted neutral.
pub fn nnb_classify(f: &PositionalFeatures) -> bool {
    let negated = f.both_inside || f.one_left_one_inside || f.one_right_one_inside;
    !negated && !f.is_neutral_cand
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Associated,
    NotAssociated,
    Neutral,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Associated => "associated",
            Verdict::NotAssociated => "not_associated",
            Verdict::Neutral => "neutral",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub candidate_id: String,
    pub doc_id: String,
    pub sentence_id: String,
    pub snp: String,
    pub phenotype: String,
    pub associated: bool,
    pub verdict: Verdict,
    /// Set only for associated candidates, by the confidence classifier.
    pub confidence: Option<ConfidenceLevel>,
    pub neutral_score: f64,
    /// Names of the positional features that fired.
    pub rationale: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeutralOptions {
    pub n_max: usize,
    pub params: SmoParams,
}

impl Default for NeutralOptions {
    fn default() -> Self {
        NeutralOptions {
            n_max: DEFAULT_N_MAX,
            params: SmoParams::default(),
        }
    }
}

/// Global-context SVM with +1 = Neutral. The vocabulary lives in the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeutralDetector {
    pub model: SvmModel,
    pub n_max: usize,
}

pub fn train_neutral_detector(
    corpus: &Corpus,
    resources: &Resources,
    options: &NeutralOptions,
) -> Result<NeutralDetector> {
    let mut maps = Vec::new();
    let mut labels = Vec::new();
    for (_, sentence, candidate) in corpus.candidates() {
        let Some(gold) = candidate.gold_label else { continue };
        let analysis = SentenceAnalysis::new(sentence, resources).map_err(|e| e.for_candidate(&candidate.id))?;
        maps.push(candidate_ngram_map(candidate, &analysis, options.n_max)?);
        labels.push(if gold == GoldLabel::Neutral { 1 } else { -1 });
    }
    if !labels.contains(&1) {
        return Err(Error::DegenerateTrainingSet(
            "no neutral candidates in training data".into(),
        ));
    }
    if !labels.contains(&-1) {
        return Err(Error::DegenerateTrainingSet(
            "no non-neutral candidates in training data".into(),
        ));
    }
    let vocabulary = Vocabulary::from_maps(&maps);
    let payloads = maps.iter().map(|m| Payload::Sparse(vocabulary.vectorize(m))).collect();
    let mut model = smo_train(
        &TrainingSet::new(payloads, labels)?,
        KernelSpec::GlobalContext,
        &options.params,
    )?;
    model.vocabulary = Some(vocabulary);
    Ok(NeutralDetector {
        model,
        n_max: options.n_max,
    })
}

impl NeutralDetector {
    pub fn score(&self, candidate: &CandidatePair, analysis: &SentenceAnalysis) -> Result<f64> {
        let vocab = self
            .model
            .vocabulary
            .as_ref()
            .ok_or_else(|| Error::Kernel("neutral model has no vocabulary".into()))?;
        let x = vocab.vectorize(&candidate_ngram_map(candidate, analysis, self.n_max)?);
        self.model.decision(&Payload::Sparse(x))
    }

    /// Neutral when the score is ≥ 0.
    pub fn predict(&self, candidate: &CandidatePair, analysis: &SentenceAnalysis) -> Result<(bool, f64)> {
        let s = self.score(candidate, analysis)?;
        Ok((s >= 0.0, s))
    }

    pub fn prepare(&mut self) -> Result<()> {
        self.model.prepare()
    }
}

/// Runs negation analysis, neutral detection and the rule on one candidate.
pub fn classify_candidate(
    doc_id: &str,
    sentence: &Sentence,
    candidate: &CandidatePair,
    analysis: &SentenceAnalysis,
    detector: &NeutralDetector,
) -> Result<Prediction> {
    let mut features = candidate_positional_features(candidate, analysis);
    let (neutral, neutral_score) = detector.predict(candidate, analysis)?;
    features.is_neutral_cand = neutral;
    let associated = nnb_classify(&features);
    let verdict = if neutral {
        Verdict::Neutral
    } else if associated {
        Verdict::Associated
    } else {
        Verdict::NotAssociated
    };
    Ok(Prediction {
        candidate_id: candidate.id.clone(),
        doc_id: doc_id.to_string(),
        sentence_id: sentence.id.clone(),
        snp: sentence.snp_of(candidate).surface.clone(),
        phenotype: sentence.phenotype_of(candidate).surface.clone(),
        associated,
        verdict,
        confidence: None,
        neutral_score,
        rationale: features.fired().into_iter().map(String::from).collect(),
    })
}

/// One prediction per candidate, in candidate order.
pub fn extract_associations(
    doc: &Document,
    detector: &NeutralDetector,
    resources: &Resources,
) -> Result<Vec<Prediction>> {
    let mut out = Vec::with_capacity(doc.n_candidates());
    for sentence in &doc.sentences {
        if sentence.candidates.is_empty() {
            continue;
        }
        let analysis =
            SentenceAnalysis::new(sentence, resources).map_err(|e| e.for_candidate(&sentence.candidates[0].id))?;
        for candidate in &sentence.candidates {
            out.push(
                classify_candidate(&doc.id, sentence, candidate, &analysis, detector)
                    .map_err(|e| e.for_candidate(&candidate.id))?,
            );
        }
    }
    Ok(out)
}

/// Total order used for ranked output: confidence (highest first, unset
/// last), then neutral score ascending, then candidate id.
pub fn rank_order(a: &Prediction, b: &Prediction) -> Ordering {
    b.confidence
        .cmp(&a.confidence)
        .then_with(|| a.neutral_score.total_cmp(&b.neutral_score))
        .then_with(|| a.candidate_id.cmp(&b.candidate_id))
}

pub fn rank_predictions(predictions: &mut [Prediction]) {
    predictions.sort_by(rank_order);
}
