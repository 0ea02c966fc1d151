//! Confidence levels for positive associations from modality markers and
//! reported p-values, plus the bag-of-words baseline.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::bow::bow_feature_map;
use crate::corpus::{CandidatePair, Corpus, GoldLabel, Sentence};
use crate::error::{Error, Result};
use crate::features::{FeatureMap, Vocabulary};
use crate::kernel::{KernelSpec, Payload};
use crate::lexicon::ModalityLexicon;
use crate::ovr::{ovr_train, OvrModel};
use crate::pipeline::{Resources, SentenceAnalysis};
use crate::span::{Span, TokenRange};
use crate::svm::SmoParams;
use crate::textproc::{clause_of, tokenize, ClauseSpan, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConfidenceLevel {
    Low,
    Medium,
    High,
}

impl ConfidenceLevel {
    pub const ALL: [ConfidenceLevel; 3] = [ConfidenceLevel::Low, ConfidenceLevel::Medium, ConfidenceLevel::High];

    pub fn as_str(&self) -> &'static str {
        match self {
            ConfidenceLevel::Low => "low",
            ConfidenceLevel::Medium => "medium",
            ConfidenceLevel::High => "high",
        }
    }

    /// High folds into Medium when `merge_high_medium` is set.
    pub fn merged(self, merge_high_medium: bool) -> Self {
        if merge_high_medium && self == ConfidenceLevel::High {
            ConfidenceLevel::Medium
        } else {
            self
        }
    }
}

impl core::fmt::Display for ConfidenceLevel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for ConfidenceLevel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "low" => Ok(ConfidenceLevel::Low),
            "medium" => Ok(ConfidenceLevel::Medium),
            "high" => Ok(ConfidenceLevel::High),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModalTier {
    Hedge,
    Neutral,
    Booster,
}

impl ModalTier {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModalTier::Hedge => "hedge",
            ModalTier::Neutral => "neutral",
            ModalTier::Booster => "booster",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModalMarker {
    pub phrase: String,
    pub span: Span,
    pub tokens: TokenRange,
    pub tier: ModalTier,
}

/// Longest-match, non-overlapping marker detection, ordered by position.
pub fn detect_modal_markers(tokens: &[Token], lexicon: &ModalityLexicon) -> Vec<ModalMarker> {
    lexicon
        .find_matches(tokens)
        .into_iter()
        .map(|m| {
            let entry = lexicon.entry(m.entry);
            ModalMarker {
                phrase: entry.text(),
                span: Span::new(tokens[m.tokens.start].span.start, tokens[m.tokens.end - 1].span.end),
                tokens: m.tokens,
                tier: entry.tag,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparator {
    EQ,
    LT,
    LE,
    GT,
    GE,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PValueMention {
    pub span: Span,
    pub comparator: Comparator,
    pub value: f64,
}

impl PValueMention {
    /// Upper bound on p implied by the mention, and whether it is strict.
    pub fn upper_bound(&self) -> (f64, bool) {
        match self.comparator {
            Comparator::LT => (self.value, true),
            Comparator::EQ | Comparator::LE => (self.value, false),
            Comparator::GT | Comparator::GE => (1.0, false),
        }
    }
}

fn lower_at(chars: &[char], i: usize) -> Option<char> {
    chars.get(i).map(|c| c.to_ascii_lowercase())
}

fn skip_spaces(chars: &[char], mut i: usize) -> usize {
    while chars.get(i).is_some_and(|c| c.is_whitespace()) {
        i += 1;
    }
    i
}

fn starts_with_ci(chars: &[char], i: usize, word: &str) -> bool {
    word.chars().enumerate().all(|(k, w)| lower_at(chars, i + k) == Some(w))
}

fn comparator_at(chars: &[char], i: usize) -> Option<(Comparator, usize)> {
    let two: Option<Comparator> = match (chars.get(i), chars.get(i + 1)) {
        (Some('<'), Some('=')) | (Some('='), Some('<')) => Some(Comparator::LE),
        (Some('>'), Some('=')) | (Some('='), Some('>')) => Some(Comparator::GE),
        _ => None,
    };
    if let Some(c) = two {
        return Some((c, i + 2));
    }
    let one = match chars.get(i)? {
        '=' => Comparator::EQ,
        '<' => Comparator::LT,
        '>' => Comparator::GT,
        '≤' | '⩽' => Comparator::LE,
        '≥' | '⩾' => Comparator::GE,
        _ => return None,
    };
    Some((one, i + 1))
}

fn is_minus(c: char) -> bool {
    matches!(c, '-' | '−' | '–')
}

fn digits(chars: &[char], mut i: usize) -> usize {
    while chars.get(i).is_some_and(char::is_ascii_digit) {
        i += 1;
    }
    i
}

/// Parses a decimal number with optional exponent (`5e-8`, `5E−8`,
/// `5×10^-8`, `5 x 10-8`). Returns the value and the end position.
fn number_at(chars: &[char], start: usize) -> Option<(f64, usize)> {
    let mut i = digits(chars, start);
    let mut mantissa: String = chars[start..i].iter().collect();
    if chars.get(i) == Some(&'.') && chars.get(i + 1).is_some_and(char::is_ascii_digit) {
        let end = digits(chars, i + 1);
        if mantissa.is_empty() {
            mantissa.push('0');
        }
        mantissa.extend(&chars[i..end]);
        i = end;
    }
    if mantissa.is_empty() {
        return None;
    }
    let mut exponent: Option<String> = None;
    // e-notation
    if matches!(chars.get(i), Some('e') | Some('E')) {
        let mut j = i + 1;
        let mut e = String::new();
        if let Some(&c) = chars.get(j) {
            if is_minus(c) || c == '+' {
                if is_minus(c) {
                    e.push('-');
                }
                j += 1;
            }
        }
        let end = digits(chars, j);
        if end > j {
            e.extend(&chars[j..end]);
            exponent = Some(e);
            i = end;
        }
    } else {
        // times-ten notation
        let j = skip_spaces(chars, i);
        if matches!(chars.get(j), Some('×') | Some('x') | Some('X') | Some('*')) {
            let k = skip_spaces(chars, j + 1);
            if chars.get(k) == Some(&'1') && chars.get(k + 1) == Some(&'0') {
                let mut m = k + 2;
                if chars.get(m) == Some(&'^') {
                    m += 1;
                }
                let mut e = String::new();
                if let Some(&c) = chars.get(m) {
                    if is_minus(c) {
                        e.push('-');
                        m += 1;
                    } else if c == '+' {
                        m += 1;
                    }
                }
                let end = digits(chars, m);
                if end > m {
                    e.extend(&chars[m..end]);
                    exponent = Some(e);
                    i = end;
                }
            }
        }
    }
    let text = match exponent {
        Some(e) => format!("{mantissa}e{e}"),
        None => mantissa,
    };
    text.parse::<f64>().ok().map(|v| (v, i))
}

/// Finds p-value statements such as `p=0.043`, `P < 0.001`, `p ≤ 5e-8` and
/// `p-value = 0.05`. Mentions whose value lies outside (0, 1] are dropped
/// with a warning.
pub fn extract_pvalues(text: &str) -> Vec<PValueMention> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let boundary = i == 0 || !chars[i - 1].is_alphanumeric();
        if !(boundary && (c == 'p' || c == 'P')) {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        if chars.get(j).is_some_and(|c| is_minus(*c) || c.is_whitespace()) {
            let k = skip_spaces(chars.as_slice(), j + usize::from(is_minus(chars[j])));
            if starts_with_ci(&chars, k, "value") {
                j = k + 5;
            }
        } else if starts_with_ci(&chars, j, "value") {
            j += 5;
        }
        if chars.get(j).is_some_and(|c| c.is_alphanumeric()) {
            i += 1;
            continue;
        }
        let k = skip_spaces(&chars, j);
        let Some((comparator, after)) = comparator_at(&chars, k) else {
            i += 1;
            continue;
        };
        let n = skip_spaces(&chars, after);
        let Some((value, end)) = number_at(&chars, n) else {
            i += 1;
            continue;
        };
        if value > 0.0 && value <= 1.0 {
            out.push(PValueMention {
                span: Span::new(i, end),
                comparator,
                value,
            });
        } else {
            log::warn!("dropping p-value {value} outside (0, 1] at offset {i}");
        }
        i = end;
    }
    out
}

/// Ascending significance thresholds splitting p-values into buckets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PValueBuckets {
    thresholds: Vec<f64>,
}

impl Default for PValueBuckets {
    fn default() -> Self {
        PValueBuckets {
            thresholds: alloc::vec![0.001, 0.05],
        }
    }
}

impl TryFrom<Vec<f64>> for PValueBuckets {
    type Error = Error;
    fn try_from(thresholds: Vec<f64>) -> Result<Self> {
        PValueBuckets::new(thresholds)
    }
}

impl From<PValueBuckets> for Vec<f64> {
    fn from(b: PValueBuckets) -> Self {
        b.thresholds
    }
}

impl PValueBuckets {
    pub fn new(thresholds: Vec<f64>) -> Result<Self> {
        if thresholds.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one p-value threshold is required".into(),
            ));
        }
        if thresholds.iter().any(|t| !(*t > 0.0 && *t <= 1.0)) {
            return Err(Error::InvalidArgument("p-value thresholds must lie in (0, 1]".into()));
        }
        if thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "p-value thresholds must be strictly increasing".into(),
            ));
        }
        Ok(PValueBuckets { thresholds })
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// Bucket index of one mention: the first threshold the mention's upper
    /// bound is known to fall below, or the number of thresholds.
    pub fn index(&self, mention: &PValueMention) -> usize {
        let (bound, strict) = mention.upper_bound();
        self.thresholds
            .iter()
            .position(|&t| if strict { bound <= t } else { bound < t })
            .unwrap_or(self.thresholds.len())
    }

    /// Strongest bucket over the mentions, `None` when there are none.
    pub fn sentence_index(&self, mentions: &[PValueMention]) -> Option<usize> {
        mentions.iter().map(|m| self.index(m)).min()
    }

    pub fn label(&self, index: Option<usize>) -> String {
        let t = &self.thresholds;
        match index {
            None => "none".into(),
            Some(0) => format!("p<{}", t[0]),
            Some(i) if i >= t.len() => format!("p≥{}", t[t.len() - 1]),
            Some(i) => format!("{}≤p<{}", t[i - 1], t[i]),
        }
    }
}

/// True iff some marker's clause contains at least one token of each entity.
pub fn entities_in_modal_clause(
    snp: TokenRange,
    phenotype: TokenRange,
    clauses: &[ClauseSpan],
    markers: &[ModalMarker],
) -> bool {
    markers.iter().any(|m| {
        clause_of(clauses, m.tokens.start)
            .map(|c| clauses[c].tokens)
            .is_some_and(|c| c.overlaps(&snp) && c.overlaps(&phenotype))
    })
}

/// Everything the confidence classifier looks at for one candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct MmsEvidence {
    pub markers: Vec<ModalMarker>,
    pub pvalues: Vec<PValueMention>,
    pub in_clause: bool,
}

pub fn mms_evidence(
    sentence: &Sentence,
    candidate: &CandidatePair,
    analysis: &SentenceAnalysis,
    modality: &ModalityLexicon,
) -> MmsEvidence {
    let markers = detect_modal_markers(&analysis.tokens, modality);
    let (snp, phen) = analysis.entity_tokens(candidate);
    let in_clause = entities_in_modal_clause(snp, phen, &analysis.clauses, &markers);
    MmsEvidence {
        markers,
        pvalues: extract_pvalues(&sentence.text),
        in_clause,
    }
}

/// Marker phrase indicators, per-tier counts, the p-value bucket and the
/// clause flag.
pub fn mms_featurize(evidence: &MmsEvidence, buckets: &PValueBuckets) -> FeatureMap {
    let mut map = FeatureMap::new();
    for m in &evidence.markers {
        map.insert(format!("marker={}", m.phrase), 1.0);
        *map.entry(format!("tier={}", m.tier.as_str())).or_insert(0.0) += 1.0;
    }
    map.insert(
        format!("pbucket={}", buckets.label(buckets.sentence_index(&evidence.pvalues))),
        1.0,
    );
    map.insert(format!("in_clause={}", evidence.in_clause), 1.0);
    map
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MmsOptions {
    pub buckets: PValueBuckets,
    pub merge_high_medium: bool,
    pub params: SmoParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MmsModel {
    pub classifier: OvrModel<ConfidenceLevel>,
    pub vocabulary: Vocabulary,
    pub buckets: PValueBuckets,
    pub merge_high_medium: bool,
}

/// Gold-positive candidates with a gold confidence level.
fn positive_examples(corpus: &Corpus) -> impl Iterator<Item = (&Sentence, &CandidatePair, ConfidenceLevel)> {
    corpus
        .candidates()
        .filter_map(|(_, s, c)| match (c.gold_label, c.gold_confidence) {
            (Some(GoldLabel::Positive), Some(level)) => Some((s, c, level)),
            _ => None,
        })
}

fn train_levels(
    maps: Vec<FeatureMap>,
    levels: Vec<ConfidenceLevel>,
    params: &SmoParams,
) -> Result<(OvrModel<ConfidenceLevel>, Vocabulary)> {
    if maps.is_empty() {
        return Err(Error::DegenerateTrainingSet(
            "no positive candidates with a confidence level".into(),
        ));
    }
    let vocabulary = Vocabulary::from_maps(&maps);
    let payloads: Vec<Payload> = maps.iter().map(|m| Payload::Sparse(vocabulary.vectorize(m))).collect();
    let classifier = ovr_train(&payloads, &levels, KernelSpec::Linear, params)?;
    Ok((classifier, vocabulary))
}

/// Trains the one-vs-rest linear confidence classifier on gold-positive
/// candidates.
pub fn mms_train(corpus: &Corpus, resources: &Resources, options: &MmsOptions) -> Result<MmsModel> {
    let mut maps = Vec::new();
    let mut levels = Vec::new();
    for (sentence, candidate, level) in positive_examples(corpus) {
        let analysis = SentenceAnalysis::new(sentence, resources).map_err(|e| e.for_candidate(&candidate.id))?;
        let evidence = mms_evidence(sentence, candidate, &analysis, &resources.modality);
        maps.push(mms_featurize(&evidence, &options.buckets));
        levels.push(level.merged(options.merge_high_medium));
    }
    let (classifier, vocabulary) = train_levels(maps, levels, &options.params)?;
    Ok(MmsModel {
        classifier,
        vocabulary,
        buckets: options.buckets.clone(),
        merge_high_medium: options.merge_high_medium,
    })
}

impl MmsModel {
    /// Medium when there is no marker or no marker shares a clause with both
    /// entities; otherwise the classifier's level.
    pub fn predict_evidence(&self, evidence: &MmsEvidence) -> Result<ConfidenceLevel> {
        if evidence.markers.is_empty() || !evidence.in_clause {
            return Ok(ConfidenceLevel::Medium);
        }
        let x = Payload::Sparse(self.vocabulary.vectorize(&mms_featurize(evidence, &self.buckets)));
        Ok(self.classifier.predict(&x)?.merged(self.merge_high_medium))
    }

    pub fn prepare(&mut self) -> Result<()> {
        self.classifier.prepare()
    }
}

pub fn mms_predict(
    model: &MmsModel,
    sentence: &Sentence,
    candidate: &CandidatePair,
    analysis: &SentenceAnalysis,
    modality: &ModalityLexicon,
) -> Result<ConfidenceLevel> {
    model
        .predict_evidence(&mms_evidence(sentence, candidate, analysis, modality))
        .map_err(|e| e.for_candidate(&candidate.id))
}

/// Sentence-level bag-of-words confidence classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BowConfidenceModel {
    pub classifier: OvrModel<ConfidenceLevel>,
    pub vocabulary: Vocabulary,
    pub merge_high_medium: bool,
}

pub fn bow_confidence_train(corpus: &Corpus, options: &MmsOptions) -> Result<BowConfidenceModel> {
    let (maps, levels): (Vec<_>, Vec<_>) = positive_examples(corpus)
        .map(|(s, _, level)| {
            (
                bow_feature_map(&tokenize(&s.text)),
                level.merged(options.merge_high_medium),
            )
        })
        .unzip();
    let (classifier, vocabulary) = train_levels(maps, levels, &options.params)?;
    Ok(BowConfidenceModel {
        classifier,
        vocabulary,
        merge_high_medium: options.merge_high_medium,
    })
}

impl BowConfidenceModel {
    pub fn predict(&self, sentence: &Sentence) -> Result<ConfidenceLevel> {
        let x = Payload::Sparse(self.vocabulary.vectorize(&bow_feature_map(&tokenize(&sentence.text))));
        Ok(self.classifier.predict(&x)?.merged(self.merge_high_medium))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixtures::{doc, sentence};
    use crate::corpus::EntityKind::*;
    use crate::lexicon::default_modality;

    fn markers(text: &str) -> Vec<ModalMarker> {
        detect_modal_markers(&tokenize(text), &default_modality())
    }

    #[test]
    fn detects_markers() {
        let m = markers("the rs1051730 variant may not merely operate");
        assert_eq!(m.len(), 1);
        assert_eq!((m[0].phrase.as_str(), m[0].tier), ("may", ModalTier::Hedge));
        let m = markers("significantly associated with an increased risk");
        assert_eq!((m[0].phrase.as_str(), m[0].tier), ("significantly", ModalTier::Booster));
        assert!(markers("rs1 is associated with asthma").is_empty());
    }

    #[test]
    fn parses_pvalues() {
        let p = extract_pvalues("(OR=3.2 [CI 1.04-9.8], p=0.043)");
        assert_eq!(p.len(), 1);
        assert_eq!((p[0].comparator, p[0].value), (Comparator::EQ, 0.043));
        let p = extract_pvalues("P < 0.001");
        assert_eq!((p[0].comparator, p[0].value), (Comparator::LT, 0.001));
        let p = extract_pvalues("p ≤ 5e-8 and p-value = 0.05, P-value>0.2, p=<.01");
        let got: Vec<_> = p.iter().map(|m| (m.comparator, m.value)).collect();
        assert_eq!(
            got,
            [
                (Comparator::LE, 5e-8),
                (Comparator::EQ, 0.05),
                (Comparator::GT, 0.2),
                (Comparator::LE, 0.01)
            ]
        );
        let p = extract_pvalues("p = 3.1×10^-5; P=2 x 10−4");
        assert_eq!(p.len(), 2);
        assert!((p[0].value - 3.1e-5).abs() < 1e-18);
        assert!((p[1].value - 2e-4).abs() < 1e-18);
        assert!(extract_pvalues("p=43").is_empty());
        assert!(extract_pvalues("p=0").is_empty());
        assert!(extract_pvalues("group p53 = 4 and top=0.1").is_empty());
    }

    #[test]
    fn pvalue_span_covers_mention() {
        let text = "risk (p = 0.01).";
        let p = extract_pvalues(text);
        assert_eq!(p[0].span.slice(text), Some("p = 0.01"));
    }

    #[test]
    fn buckets() {
        let b = PValueBuckets::default();
        let label = |text: &str| b.label(b.sentence_index(&extract_pvalues(text)));
        assert_eq!(label("p=0.043"), "0.001≤p<0.05");
        assert_eq!(label("p<0.001"), "p<0.001");
        assert_eq!(label("p=0.001"), "0.001≤p<0.05");
        assert_eq!(label("p<0.05"), "0.001≤p<0.05");
        assert_eq!(label("p=0.05"), "p≥0.05");
        assert_eq!(label("p>0.001"), "p≥0.05");
        assert_eq!(label("p=0.2, p=1e-9"), "p<0.001");
        assert_eq!(label("none here"), "none");
        assert!(PValueBuckets::new(alloc::vec![0.05, 0.001]).is_err());
        assert!(PValueBuckets::new(alloc::vec![]).is_err());
    }

    fn analysis_for(text: &str, ents: &[(crate::corpus::EntityKind, &str)]) -> (Sentence, SentenceAnalysis) {
        let s = sentence("s", text, ents, &[(0, 1, Some(GoldLabel::Positive))]);
        let a = SentenceAnalysis::new(&s, &Resources::default()).unwrap();
        (s, a)
    }

    #[test]
    fn clause_containment() {
        let (s, a) = analysis_for("rs1 may affect asthma", &[(Snp, "rs1"), (Phenotype, "asthma")]);
        assert!(mms_evidence(&s, &s.candidates[0], &a, &default_modality()).in_clause);
        let (s, a) = analysis_for(
            "Results may vary but rs1 affects asthma",
            &[(Snp, "rs1"), (Phenotype, "asthma")],
        );
        assert!(!mms_evidence(&s, &s.candidates[0], &a, &default_modality()).in_clause);
        let (s, a) = analysis_for(
            "rs1 may act but asthma persists",
            &[(Snp, "rs1"), (Phenotype, "asthma")],
        );
        assert!(!mms_evidence(&s, &s.candidates[0], &a, &default_modality()).in_clause);
    }

    #[test]
    fn featurize_keys() {
        let (s, a) = analysis_for("rs1 affects asthma", &[(Snp, "rs1"), (Phenotype, "asthma")]);
        let e = mms_evidence(&s, &s.candidates[0], &a, &default_modality());
        let keys: Vec<_> = mms_featurize(&e, &PValueBuckets::default()).into_keys().collect();
        assert_eq!(keys, ["in_clause=false", "pbucket=none"]);

        let (s, a) = analysis_for(
            "rs1 was significantly associated with asthma (p=0.043)",
            &[(Snp, "rs1"), (Phenotype, "asthma")],
        );
        let e = mms_evidence(&s, &s.candidates[0], &a, &default_modality());
        let f = mms_featurize(&e, &PValueBuckets::default());
        assert_eq!(f["tier=booster"], 1.0);
        assert_eq!(f["pbucket=0.001≤p<0.05"], 1.0);
        assert_eq!(f["in_clause=true"], 1.0);

        let (s, a) = analysis_for("rs1 may possibly affect asthma", &[(Snp, "rs1"), (Phenotype, "asthma")]);
        let e = mms_evidence(&s, &s.candidates[0], &a, &default_modality());
        assert_eq!(mms_featurize(&e, &PValueBuckets::default())["tier=hedge"], 2.0);
    }

    fn level_corpus() -> Corpus {
        let ents = [(Snp, "rs1"), (Phenotype, "asthma")];
        let mut sentences = Vec::new();
        let texts = [
            (
                "rs1 was significantly associated with asthma (p<0.001)",
                ConfidenceLevel::High,
            ),
            (
                "rs1 was strongly associated with asthma (p=0.0004)",
                ConfidenceLevel::High,
            ),
            ("rs1 may be associated with asthma", ConfidenceLevel::Low),
            ("rs1 might possibly affect asthma", ConfidenceLevel::Low),
            ("rs1 suggests a role in asthma", ConfidenceLevel::Medium),
            ("rs1 is associated with asthma", ConfidenceLevel::Medium),
        ];
        for (i, (t, level)) in texts.iter().enumerate() {
            let mut s = sentence(&format!("s{i}"), t, &ents, &[(0, 1, Some(GoldLabel::Positive))]);
            s.candidates[0].gold_confidence = Some(*level);
            sentences.push(s);
        }
        Corpus::new(alloc::vec![doc("d", sentences)])
    }

    #[test]
    fn trains_and_predicts_levels() {
        let corpus = level_corpus();
        let r = Resources::default();
        let model = mms_train(&corpus, &r, &MmsOptions::default()).unwrap();
        for (_, s, c) in corpus.candidates() {
            let a = SentenceAnalysis::new(s, &r).unwrap();
            let got = mms_predict(&model, s, c, &a, &r.modality).unwrap();
            assert_eq!(got, c.gold_confidence.unwrap(), "{}", s.text);
        }
        let again = mms_train(&corpus, &r, &MmsOptions::default()).unwrap();
        assert_eq!(model, again);
    }

    #[test]
    fn merged_levels_never_high() {
        let corpus = level_corpus();
        let r = Resources::default();
        let opts = MmsOptions {
            merge_high_medium: true,
            ..MmsOptions::default()
        };
        let model = mms_train(&corpus, &r, &opts).unwrap();
        assert_eq!(
            model.classifier.classes,
            [ConfidenceLevel::Low, ConfidenceLevel::Medium]
        );
    }

    #[test]
    fn single_level_is_degenerate() {
        let (mut s, _) = analysis_for("rs1 may affect asthma", &[(Snp, "rs1"), (Phenotype, "asthma")]);
        s.candidates[0].gold_confidence = Some(ConfidenceLevel::Low);
        let corpus = Corpus::new(alloc::vec![doc("d", alloc::vec![s])]);
        let err = mms_train(&corpus, &Resources::default(), &MmsOptions::default()).unwrap_err();
        assert!(matches!(err, Error::DegenerateTrainingSet(_)));
    }

    #[test]
    fn bow_memorizes() {
        let corpus = level_corpus();
        let model = bow_confidence_train(&corpus, &MmsOptions::default()).unwrap();
        for (_, s, c) in corpus.candidates() {
            assert_eq!(model.predict(s).unwrap(), c.gold_confidence.unwrap(), "{}", s.text);
        }
    }

    #[test]
    fn level_order_and_names() {
        assert!(ConfidenceLevel::Low < ConfidenceLevel::Medium);
        assert!(ConfidenceLevel::Medium < ConfidenceLevel::High);
        assert_eq!("High".parse::<ConfidenceLevel>().unwrap(), ConfidenceLevel::High);
        assert!("middle".parse::<ConfidenceLevel>().is_err());
    }
}
