//! Positional negation features and sparse context features.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::CandidatePair;
use crate::error::{Error, Result};
use crate::negation::NegationAnnotation;
use crate::pipeline::SentenceAnalysis;
use crate::span::TokenRange;
use crate::textproc::{Token, TokenKind};

pub const SNP_PLACEHOLDER: &str = "SNP_ENT";
pub const PHEN_PLACEHOLDER: &str = "PHEN_ENT";
pub const DEFAULT_N_MAX: usize = 3;
pub const DEFAULT_WINDOW: usize = 2;

/// Where an entity sits relative to a negation scope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    Left,
    Inside,
    Right,
}

/// An entity touching the scope at all counts as inside.
pub fn position(entity: TokenRange, scope: TokenRange) -> Position {
    if entity.overlaps(&scope) {
        Position::Inside
    } else if entity.end <= scope.start {
        Position::Left
    } else {
        Position::Right
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PositionalFeatures {
    pub both_inside: bool,
    pub one_left_one_inside: bool,
    pub one_right_one_inside: bool,
    pub both_left: bool,
    pub both_right: bool,
    pub one_left_one_right: bool,
    pub is_neutral_cand: bool,
}

impl PositionalFeatures {
    pub const NAMES: [&'static str; 7] = [
        "BothInsNegSc",
        "OneLeftOneInsNegSc",
        "OneRightOneInsNegSc",
        "BothLeftNegSc",
        "BothRightNegSc",
        "OneLeftOneRightNegSc",
        "IsNeutralCand",
    ];

    pub fn as_array(&self) -> [bool; 7] {
        [
            self.both_inside,
            self.one_left_one_inside,
            self.one_right_one_inside,
            self.both_left,
            self.both_right,
            self.one_left_one_right,
            self.is_neutral_cand,
        ]
    }

    pub fn from_array(bits: [bool; 7]) -> Self {
        PositionalFeatures {
            both_inside: bits[0],
            one_left_one_inside: bits[1],
            one_right_one_inside: bits[2],
            both_left: bits[3],
            both_right: bits[4],
            one_left_one_right: bits[5],
            is_neutral_cand: bits[6],
        }
    }

    /// Names of the features that are set, in declaration order.
    pub fn fired(&self) -> Vec<&'static str> {
        self.as_array()
            .iter()
            .zip(Self::NAMES)
            .filter(|(b, _)| **b)
            .map(|(_, n)| n)
            .collect()
    }

    fn set_for(&mut self, a: Position, b: Position) {
        use Position::*;
        match (a, b) {
            (Inside, Inside) => self.both_inside = true,
            (Left, Inside) | (Inside, Left) => self.one_left_one_inside = true,
            (Right, Inside) | (Inside, Right) => self.one_right_one_inside = true,
            (Left, Left) => self.both_left = true,
            (Right, Right) => self.both_right = true,
            (Left, Right) | (Right, Left) => self.one_left_one_right = true,
        }
    }
}

/// The six positional features for a candidate whose entities occupy `snp`
/// and `phenotype`, OR-ed over all annotations. `is_neutral_cand` stays false.
pub fn positional_features(
    snp: TokenRange,
    phenotype: TokenRange,
    annotations: &[NegationAnnotation],
) -> PositionalFeatures {
    let mut f = PositionalFeatures::default();
    for ann in annotations {
        f.set_for(position(snp, ann.scope), position(phenotype, ann.scope));
    }
    f
}

pub fn candidate_positional_features(candidate: &CandidatePair, analysis: &SentenceAnalysis) -> PositionalFeatures {
    let (snp, phen) = analysis.entity_tokens(candidate);
    positional_features(snp, phen, &analysis.negations)
}

/// Feature key to count map, before vocabulary lookup.
pub type FeatureMap = BTreeMap<String, f64>;

/// Sorted sparse vector over a vocabulary.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SparseVector {
    pub indices: Vec<u32>,
    pub values: Vec<f64>,
    /// Fingerprint of the vocabulary the indices refer to; 0 for raw vectors.
    pub vocab_id: u64,
}

impl SparseVector {
    /// Builds a vector from (index, value) pairs; duplicates are summed and
    /// zeros dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, f64)>, vocab_id: u64) -> Self {
        let mut map: BTreeMap<u32, f64> = BTreeMap::new();
        for (i, v) in pairs {
            *map.entry(i).or_insert(0.0) += v;
        }
        let (indices, values) = map.into_iter().filter(|(_, v)| *v != 0.0).unzip();
        SparseVector {
            indices,
            values,
            vocab_id,
        }
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (mut i, mut j, mut acc) = (0, 0, 0.0);
        while i < self.indices.len() && j < other.indices.len() {
            match self.indices[i].cmp(&other.indices[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    acc += self.values[i] * other.values[j];
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

/// Sorted feature-key vocabulary. Keys are assigned indices in sorted order,
/// so the serialized key list fully determines the mapping.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<String>", into = "Vec<String>")]
pub struct Vocabulary {
    keys: Vec<String>,
    id: u64,
}

impl From<Vec<String>> for Vocabulary {
    fn from(keys: Vec<String>) -> Self {
        Vocabulary::from_keys(keys)
    }
}

impl From<Vocabulary> for Vec<String> {
    fn from(v: Vocabulary) -> Self {
        v.keys
    }
}

fn fnv1a(keys: &[String]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for k in keys {
        for b in k.bytes().chain(core::iter::once(0xff)) {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

impl Vocabulary {
    pub fn from_keys(keys: impl IntoIterator<Item = String>) -> Self {
        let set: BTreeSet<String> = keys.into_iter().collect();
        let keys: Vec<String> = set.into_iter().collect();
        let id = fnv1a(&keys) | 1;
        Vocabulary { keys, id }
    }

    /// Vocabulary over the union of keys of the given feature maps.
    pub fn from_maps<'a>(maps: impl IntoIterator<Item = &'a FeatureMap>) -> Self {
        Self::from_keys(maps.into_iter().flat_map(|m| m.keys().cloned()))
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn index_of(&self, key: &str) -> Option<u32> {
        self.keys
            .binary_search_by(|k| k.as_str().cmp(key))
            .ok()
            .map(|i| i as u32)
    }

    /// Maps a feature map onto the vocabulary; unseen keys are dropped.
    pub fn vectorize(&self, features: &FeatureMap) -> SparseVector {
        SparseVector::from_pairs(
            features.iter().filter_map(|(k, v)| self.index_of(k).map(|i| (i, *v))),
            self.id,
        )
    }
}

/// Token streams around a candidate with its two entities collapsed to
/// placeholders.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ContextPatterns {
    /// Sentence start up to (not including) the second entity.
    pub fore_between: Vec<String>,
    /// Strictly between the two entities.
    pub between: Vec<String>,
    /// After the first entity to the sentence end.
    pub between_after: Vec<String>,
}

pub fn context_patterns(tokens: &[Token], snp: TokenRange, phenotype: TokenRange) -> ContextPatterns {
    let (first, second, first_ph, second_ph) = if (snp.start, snp.end) <= (phenotype.start, phenotype.end) {
        (snp, phenotype, SNP_PLACEHOLDER, PHEN_PLACEHOLDER)
    } else {
        (phenotype, snp, PHEN_PLACEHOLDER, SNP_PLACEHOLDER)
    };
    let mut stream = Vec::with_capacity(tokens.len());
    let mut first_at = None;
    let mut second_at = None;
    let mut i = 0;
    while i < tokens.len() {
        if i == first.start {
            first_at = Some(stream.len());
            stream.push(first_ph.to_string());
            i = first.end.max(i + 1);
            if second.start < i {
                // overlapping mentions collapse into the first placeholder
                second_at = first_at;
            }
            continue;
        }
        if i == second.start && second_at.is_none() {
            second_at = Some(stream.len());
            stream.push(second_ph.to_string());
            i = second.end.max(i + 1);
            continue;
        }
        stream.push(tokens[i].lower.clone());
        i += 1;
    }
    let p1 = first_at.unwrap_or(0);
    let p2 = second_at.unwrap_or(stream.len()).max(p1);
    let between = if p2 > p1 {
        stream[p1 + 1..p2].to_vec()
    } else {
        Vec::new()
    };
    ContextPatterns {
        fore_between: stream[..p2].to_vec(),
        between,
        between_after: stream[(p1 + 1).min(stream.len())..].to_vec(),
    }
}

/// Tagged n-gram counts (1..=n_max) over the three context patterns.
pub fn ngram_feature_map(patterns: &ContextPatterns, n_max: usize) -> Result<FeatureMap> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let mut map = FeatureMap::new();
    for (tag, seq) in [
        ("fore_between", &patterns.fore_between),
        ("between", &patterns.between),
        ("between_after", &patterns.between_after),
    ] {
        for n in 1..=n_max {
            for window in seq.windows(n) {
                *map.entry(format!("{tag}:{}", window.join(" "))).or_insert(0.0) += 1.0;
            }
        }
    }
    Ok(map)
}

pub fn candidate_ngram_map(candidate: &CandidatePair, analysis: &SentenceAnalysis, n_max: usize) -> Result<FeatureMap> {
    let (snp, phen) = analysis.entity_tokens(candidate);
    ngram_feature_map(&context_patterns(&analysis.tokens, snp, phen), n_max)
}

/// Global-context n-gram vector over a frozen vocabulary.
pub fn context_ngram_features(
    candidate: &CandidatePair,
    analysis: &SentenceAnalysis,
    vocab: &Vocabulary,
    n_max: usize,
) -> Result<SparseVector> {
    Ok(vocab.vectorize(&candidate_ngram_map(candidate, analysis, n_max)?))
}

fn shape(surface: &str) -> &'static str {
    let has_alpha = surface.chars().any(char::is_alphabetic);
    let has_digit = surface.chars().any(|c| c.is_ascii_digit());
    if !has_alpha && has_digit {
        return "digit";
    }
    if has_alpha && has_digit {
        return "mixed";
    }
    let letters: Vec<char> = surface.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.iter().all(|c| c.is_lowercase()) {
        "lower"
    } else if letters.iter().all(|c| c.is_uppercase()) {
        if letters.len() == 1 {
            "cap"
        } else {
            "upper"
        }
    } else if letters[0].is_uppercase() && letters[1..].iter().all(|c| c.is_lowercase()) {
        "cap"
    } else {
        "mixed"
    }
}

/// Position-indexed features for up to `window` tokens on each side of each
/// entity. Keys look like `SNP:-1:w=the`, `PHEN:+2:shape=cap`, `SNP:+1:punct`,
/// `PHEN:-2:PAD`.
pub fn local_context_map(
    tokens: &[Token],
    snp: TokenRange,
    phenotype: TokenRange,
    window: usize,
) -> Result<FeatureMap> {
    if window == 0 {
        return Err(Error::InvalidArgument("local context window must be at least 1".into()));
    }
    let mut map = FeatureMap::new();
    for (role, range) in [("SNP", snp), ("PHEN", phenotype)] {
        for d in 1..=window {
            let left = range.start.checked_sub(d);
            let right = Some(range.end + d - 1).filter(|&i| i < tokens.len());
            for (offset, idx) in [(format!("-{d}"), left), (format!("+{d}"), right)] {
                let prefix = format!("{role}:{offset}");
                match idx {
                    None => {
                        map.insert(format!("{prefix}:PAD"), 1.0);
                    }
                    Some(i) => {
                        let t = &tokens[i];
                        map.insert(format!("{prefix}:w={}", t.lower), 1.0);
                        match t.kind {
                            TokenKind::Punct | TokenKind::Symbol => {
                                map.insert(format!("{prefix}:punct"), 1.0);
                            }
                            TokenKind::Word | TokenKind::Number => {
                                map.insert(format!("{prefix}:shape={}", shape(&t.surface)), 1.0);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(map)
}

pub fn candidate_local_map(
    candidate: &CandidatePair,
    analysis: &SentenceAnalysis,
    window: usize,
) -> Result<FeatureMap> {
    let (snp, phen) = analysis.entity_tokens(candidate);
    local_context_map(&analysis.tokens, snp, phen, window)
}

pub fn local_context_features(
    candidate: &CandidatePair,
    analysis: &SentenceAnalysis,
    vocab: &Vocabulary,
    window: usize,
) -> Result<SparseVector> {
    Ok(vocab.vectorize(&candidate_local_map(candidate, analysis, window)?))
}
