//! Binary bag-of-words vectors.

use alloc::format;

use crate::features::{FeatureMap, SparseVector, Vocabulary};
use crate::textproc::{Token, TokenKind};

/// `w=<lowercased unigram>` → 1.0 for every word, number or symbol token.
/// Punctuation is skipped.
pub fn bow_feature_map(tokens: &[Token]) -> FeatureMap {
    tokens
        .iter()
        .filter(|t| t.kind != TokenKind::Punct)
        .map(|t| (format!("w={}", t.lower), 1.0))
        .collect()
}

pub fn bow_vectorize(tokens: &[Token], vocab: &Vocabulary) -> SparseVector {
    vocab.vectorize(&bow_feature_map(tokens))
}
