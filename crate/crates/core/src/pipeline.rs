//! Lexicon bundle and per-sentence analysis shared by every method.

use alloc::vec::Vec;

use crate::corpus::{CandidatePair, Sentence};
use crate::error::{Error, Result};
use crate::lexicon::{
    default_connectors, default_cues, default_gazetteer, default_modality, default_triggers, ConnectorLexicon,
    CueLexicon, Gazetteer, ModalityLexicon, TriggerLexicon,
};
use crate::negation::{annotate_tokens, NegationAnnotation};
use crate::span::TokenRange;
use crate::textproc::{segment_clauses, tokenize, tokens_for_span, ClauseSpan, Token};

#[derive(Debug, Clone)]
pub struct Resources {
    pub cues: CueLexicon,
    pub connectors: ConnectorLexicon,
    pub triggers: TriggerLexicon,
    pub modality: ModalityLexicon,
    pub gazetteer: Gazetteer,
}

impl Default for Resources {
    fn default() -> Self {
        Resources {
            cues: default_cues(),
            connectors: default_connectors(),
            triggers: default_triggers(),
            modality: default_modality(),
            gazetteer: default_gazetteer(),
        }
    }
}

/// Tokens, clauses, negation annotations and entity token ranges of one
/// sentence.
#[derive(Debug, Clone)]
pub struct SentenceAnalysis {
    pub tokens: Vec<Token>,
    pub clauses: Vec<ClauseSpan>,
    pub negations: Vec<NegationAnnotation>,
    /// Token range of each mention, parallel to `Sentence::mentions`.
    pub mention_tokens: Vec<TokenRange>,
}

impl SentenceAnalysis {
    pub fn new(sentence: &Sentence, resources: &Resources) -> Result<Self> {
        let tokens = tokenize(&sentence.text);
        let clauses = segment_clauses(&tokens, &resources.connectors);
        let negations = annotate_tokens(&tokens, &clauses, &resources.cues)?;
        let mention_tokens = sentence
            .mentions
            .iter()
            .enumerate()
            .map(|(i, m)| {
                tokens_for_span(&tokens, m.span)
                    .ok_or_else(|| Error::InvalidSpan(alloc::format!("{} entity {}", sentence.id, i)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SentenceAnalysis {
            tokens,
            clauses,
            negations,
            mention_tokens,
        })
    }

    /// Token ranges of the candidate's (SNP, phenotype) mentions.
    pub fn entity_tokens(&self, candidate: &CandidatePair) -> (TokenRange, TokenRange) {
        (
            self.mention_tokens[candidate.snp],
            self.mention_tokens[candidate.phenotype],
        )
    }
}
