//! Sentence-level annotated corpus, train/test splitting and corpus
//! verification statistics (sentence complexity and innate polarity).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::confidence::ConfidenceLevel;
use crate::error::{Error, Result};
use crate::lexicon::{ConnectorLexicon, CueLexicon, TriggerLexicon};
use crate::span::{Span, TokenRange};
use crate::textproc::{segment_clauses, tokenize, tokens_for_span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityKind {
    Snp,
    Phenotype,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityMention {
    pub kind: EntityKind,
    pub span: Span,
    pub surface: String,
    /// Lowercased, whitespace-collapsed surface.
    pub normalized: String,
}

impl EntityMention {
    /// Builds a mention by slicing `text`; `None` when the span is empty or
    /// runs past the text.
    pub fn from_text(kind: EntityKind, span: Span, text: &str) -> Option<Self> {
        if span.is_empty() {
            return None;
        }
        let surface = span.slice(text)?.to_string();
        Some(EntityMention {
            kind,
            span,
            normalized: normalize(&surface),
            surface,
        })
    }
}

pub fn normalize(surface: &str) -> String {
    surface
        .split_whitespace()
        .map(|w| w.to_lowercase())
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GoldLabel {
    Positive,
    Negative,
    Neutral,
}

impl GoldLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            GoldLabel::Positive => "positive",
            GoldLabel::Negative => "negative",
            GoldLabel::Neutral => "neutral",
        }
    }
}

impl core::str::FromStr for GoldLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "positive" => Ok(GoldLabel::Positive),
            "negative" => Ok(GoldLabel::Negative),
            "neutral" => Ok(GoldLabel::Neutral),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

/// One (SNP mention, phenotype mention) pair in a sentence. `snp` and
/// `phenotype` index into [`Sentence::mentions`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidatePair {
    pub id: String,
    pub snp: usize,
    pub phenotype: usize,
    pub gold_label: Option<GoldLabel>,
    pub gold_confidence: Option<ConfidenceLevel>,
}

impl CandidatePair {
    pub fn new(id: String, snp: usize, phenotype: usize) -> Self {
        CandidatePair {
            id,
            snp,
            phenotype,
            gold_label: None,
            gold_confidence: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub id: String,
    pub text: String,
    pub mentions: Vec<EntityMention>,
    pub candidates: Vec<CandidatePair>,
}

impl Sentence {
    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }

    /// Checks span bounds, surfaces and candidate references.
    pub fn validate(&self) -> Result<()> {
        let len = self.char_len();
        for (i, m) in self.mentions.iter().enumerate() {
            let locator = || format!("{} entity {}", self.id, i);
            if m.span.is_empty() || m.span.end > len {
                return Err(Error::InvalidSpan(locator()));
            }
            if m.span.slice(&self.text) != Some(m.surface.as_str()) {
                return Err(Error::InvalidSpan(locator()));
            }
        }
        for c in &self.candidates {
            let kinds = (
                self.mentions.get(c.snp).map(|m| m.kind),
                self.mentions.get(c.phenotype).map(|m| m.kind),
            );
            if kinds != (Some(EntityKind::Snp), Some(EntityKind::Phenotype)) {
                return Err(Error::InvalidSpan(c.id.clone()));
            }
        }
        Ok(())
    }

    pub fn snp_of(&self, c: &CandidatePair) -> &EntityMention {
        &self.mentions[c.snp]
    }

    pub fn phenotype_of(&self, c: &CandidatePair) -> &EntityMention {
        &self.mentions[c.phenotype]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitTag {
    Train,
    Test,
    #[default]
    Unsplit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub sentences: Vec<Sentence>,
    pub split: SplitTag,
}

impl Document {
    pub fn candidates(&self) -> impl Iterator<Item = (&Sentence, &CandidatePair)> {
        self.sentences
            .iter()
            .flat_map(|s| s.candidates.iter().map(move |c| (s, c)))
    }

    pub fn n_candidates(&self) -> usize {
        self.sentences.iter().map(|s| s.candidates.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    pub documents: Vec<Document>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Self {
        Corpus { documents }
    }

    /// Validates every sentence and the corpus-wide uniqueness of candidate ids.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for doc in &self.documents {
            for s in &doc.sentences {
                s.validate()?;
                for c in &s.candidates {
                    if !seen.insert(c.id.as_str()) {
                        return Err(Error::Parse {
                            locator: format!("document {}", doc.id),
                            message: format!("duplicate candidate id `{}`", c.id),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn candidates(&self) -> impl Iterator<Item = (&Document, &Sentence, &CandidatePair)> {
        self.documents
            .iter()
            .flat_map(|d| d.candidates().map(move |(s, c)| (d, s, c)))
    }

    pub fn n_candidates(&self) -> usize {
        self.documents.iter().map(Document::n_candidates).sum()
    }

    pub fn n_sentences(&self) -> usize {
        self.documents.iter().map(|d| d.sentences.len()).sum()
    }

    pub fn has_split(&self) -> bool {
        self.documents.iter().any(|d| d.split != SplitTag::Unsplit)
    }

    /// Documents carrying `tag`, in corpus order.
    pub fn part(&self, tag: SplitTag) -> Corpus {
        Corpus::new(self.documents.iter().filter(|d| d.split == tag).cloned().collect())
    }

    /// Subset of documents by index, in the given order.
    pub fn select(&self, indices: &[usize]) -> Corpus {
        Corpus::new(indices.iter().map(|&i| self.documents[i].clone()).collect())
    }
}

/// Assigns Train/Test tags at document level.
///
/// With `ratio = None` a corpus that is already tagged passes through
/// unchanged. Otherwise `round(ratio * n)` documents (at least one, at most
/// `n - 1`) become Train after a seeded shuffle; document order is preserved.
pub fn split_corpus(corpus: &Corpus, ratio: Option<f64>, seed: u64) -> Result<Corpus> {
    let n = corpus.documents.len();
    if n < 2 {
        return Err(Error::TooSmall { needed: 2, got: n });
    }
    let Some(ratio) = ratio else {
        if corpus.has_split() {
            return Ok(corpus.clone());
        }
        return Err(Error::InvalidArgument(
            "corpus carries no split tags and no ratio was given".into(),
        ));
    };
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidArgument(format!("split ratio {ratio} outside (0,1)")));
    }
    let n_train = ((ratio * n as f64) + 0.5) as usize;
    let n_train = n_train.clamp(1, n - 1);
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let train: BTreeSet<usize> = order[..n_train].iter().copied().collect();
    let mut out = corpus.clone();
    for (i, doc) in out.documents.iter_mut().enumerate() {
        doc.split = if train.contains(&i) {
            SplitTag::Train
        } else {
            SplitTag::Test
        };
    }
    Ok(out)
}

/// Corpus verification statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n_candidates: usize,
    pub n_sentences: usize,
    pub avg_tokens_per_sentence: f64,
    pub connector_histogram: BTreeMap<String, usize>,
    pub concessive_instance_ratio: f64,
    pub candidates_with_connector_ratio: f64,
    pub avg_snp_per_sentence: f64,
    pub avg_phenotype_per_sentence: f64,
    pub innate_positive: usize,
    pub innate_negative: usize,
}

impl VerificationReport {
    /// Connectors ordered by descending frequency, ties alphabetically.
    pub fn top_connectors(&self) -> Vec<(&str, usize)> {
        let mut v: Vec<(&str, usize)> = self.connector_histogram.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        v
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn compute_verification_stats(
    corpus: &Corpus,
    connectors: &ConnectorLexicon,
    cues: &CueLexicon,
    triggers: &TriggerLexicon,
) -> VerificationReport {
    let mut histogram = BTreeMap::new();
    let mut n_tokens = 0usize;
    let mut n_snp = 0usize;
    let mut n_phen = 0usize;
    let mut concessive = 0usize;
    let mut with_connector = 0usize;
    for s in corpus.documents.iter().flat_map(|d| &d.sentences) {
        let tokens = tokenize(&s.text);
        n_tokens += tokens.len();
        n_snp += s.mentions.iter().filter(|m| m.kind == EntityKind::Snp).count();
        n_phen += s.mentions.iter().filter(|m| m.kind == EntityKind::Phenotype).count();
        let found = connectors.find_matches(&tokens);
        for m in &found {
            *histogram.entry(connectors.entry(m.entry).text()).or_insert(0) += 1;
        }
        if !found.is_empty() {
            with_connector += s.candidates.len();
        }
        if found.iter().any(|m| connectors.entry(m.entry).tag.concessive) {
            concessive += s.candidates.len();
        }
    }
    let n_sentences = corpus.n_sentences();
    let n_candidates = corpus.n_candidates();
    let (innate_positive, innate_negative) = estimate_innate_polarity(corpus, cues, triggers);
    VerificationReport {
        n_candidates,
        n_sentences,
        avg_tokens_per_sentence: ratio(n_tokens, n_sentences),
        connector_histogram: histogram,
        concessive_instance_ratio: ratio(concessive, n_candidates),
        candidates_with_connector_ratio: ratio(with_connector, n_candidates),
        avg_snp_per_sentence: ratio(n_snp, n_sentences),
        avg_phenotype_per_sentence: ratio(n_phen, n_sentences),
        innate_positive,
        innate_negative,
    }
}

/// Tokens on either side of a candidate that still count as adjacent to it
/// when looking for association triggers.
pub const TRIGGER_WINDOW: usize = 3;

/// Estimates innate polarity over candidates whose sentence has no negation
/// cue: positive when a trigger phrase overlaps the region from
/// `TRIGGER_WINDOW` tokens before the first entity to `TRIGGER_WINDOW` tokens
/// after the second, negative otherwise.
pub fn estimate_innate_polarity(corpus: &Corpus, cues: &CueLexicon, triggers: &TriggerLexicon) -> (usize, usize) {
    let mut positive = 0;
    let mut negative = 0;
    for s in corpus.documents.iter().flat_map(|d| &d.sentences) {
        if s.candidates.is_empty() {
            continue;
        }
        let tokens = tokenize(&s.text);
        if !cues.find_matches(&tokens).is_empty() {
            continue;
        }
        let found = triggers.find_matches(&tokens);
        for c in &s.candidates {
            let a = tokens_for_span(&tokens, s.snp_of(c).span);
            let b = tokens_for_span(&tokens, s.phenotype_of(c).span);
            let hit = match (a, b) {
                (Some(a), Some(b)) => {
                    let lo = a.start.min(b.start).saturating_sub(TRIGGER_WINDOW);
                    let hi = (a.end.max(b.end) + TRIGGER_WINDOW).min(tokens.len());
                    let region = TokenRange::new(lo, hi);
                    found.iter().any(|m| m.tokens.overlaps(&region))
                }
                _ => false,
            };
            if hit {
                positive += 1;
            } else {
                negative += 1;
            }
        }
    }
    (positive, negative)
}

/// Number of clauses per sentence, used by reports.
pub fn clause_count(text: &str, connectors: &ConnectorLexicon) -> usize {
    segment_clauses(&tokenize(text), connectors).len()
}
