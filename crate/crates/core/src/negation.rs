//! Negation cue detection and clause-bounded scope resolution.
//!
//! A forward cue negates everything from the token after it to the end of its
//! clause; a connector opening the next clause ends the scope. A backward cue
//! ("was not", "were not") whose clause ends within [`BACKWARD_REACH`] tokens
//! after it negates its whole clause instead, which covers post-posed
//! negation such as "... was not observed".

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lexicon::{ConnectorLexicon, CueDirection, CueLexicon};
use crate::span::{Span, TokenRange};
use crate::textproc::{clause_of, segment_clauses, tokenize, ClauseSpan, Token};

/// Maximum number of tokens between a backward cue and its clause end for
/// the scope to extend back to the clause start.
pub const BACKWARD_REACH: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CueMatch {
    pub span: Span,
    pub tokens: TokenRange,
    pub direction: CueDirection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NegationAnnotation {
    /// Cue as a character span.
    pub cue: Span,
    pub cue_tokens: TokenRange,
    /// Token-index range the cue negates.
    pub scope: TokenRange,
    /// True when the scope was cut short by a clause boundary before the end
    /// of the sentence.
    pub clause_bounded: bool,
}

pub fn detect_cues(tokens: &[Token], cues: &CueLexicon) -> Vec<CueMatch> {
    cues.find_matches(tokens)
        .into_iter()
        .map(|m| CueMatch {
            span: Span::new(tokens[m.tokens.start].span.start, tokens[m.tokens.end - 1].span.end),
            tokens: m.tokens,
            direction: cues.entry(m.entry).tag,
        })
        .collect()
}

fn align(cue: Span, tokens: &[Token]) -> Result<TokenRange> {
    let start = tokens.iter().position(|t| t.span.start == cue.start);
    let end = tokens.iter().position(|t| t.span.end == cue.end);
    match (start, end) {
        (Some(s), Some(e)) if s <= e => Ok(TokenRange::new(s, e + 1)),
        _ => Err(Error::Alignment(alloc::format!(
            "cue span {}..{} is not aligned to token boundaries",
            cue.start,
            cue.end
        ))),
    }
}

/// Resolves the scope of one cue. The cue must align with token boundaries
/// and lie inside a single clause.
pub fn resolve_scope(
    cue: Span,
    direction: CueDirection,
    tokens: &[Token],
    clauses: &[ClauseSpan],
) -> Result<NegationAnnotation> {
    let cue_tokens = align(cue, tokens)?;
    let clause = clause_of(clauses, cue_tokens.start)
        .filter(|&c| clauses[c].tokens.contains_index(cue_tokens.end - 1))
        .map(|c| &clauses[c])
        .ok_or_else(|| {
            Error::Alignment(alloc::format!(
                "cue {}..{} crosses a clause boundary",
                cue.start,
                cue.end
            ))
        })?;
    let after = clause.tokens.end - cue_tokens.end;
    let backward = direction == CueDirection::Backward && after <= BACKWARD_REACH;
    let scope = if backward || after == 0 {
        clause.tokens
    } else {
        TokenRange::new(cue_tokens.end, clause.tokens.end)
    };
    Ok(NegationAnnotation {
        cue,
        cue_tokens,
        scope,
        clause_bounded: clause.tokens.end < tokens.len(),
    })
}

/// One annotation per detected cue, in cue order.
pub fn annotate_tokens(tokens: &[Token], clauses: &[ClauseSpan], cues: &CueLexicon) -> Result<Vec<NegationAnnotation>> {
    detect_cues(tokens, cues)
        .into_iter()
        .map(|m| resolve_scope(m.span, m.direction, tokens, clauses))
        .collect()
}

pub fn annotate_negation(
    text: &str,
    cues: &CueLexicon,
    connectors: &ConnectorLexicon,
) -> Result<Vec<NegationAnnotation>> {
    let tokens = tokenize(text);
    let clauses = segment_clauses(&tokens, connectors);
    annotate_tokens(&tokens, &clauses, cues)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{default_connectors, default_cues};

    const APOE: &str =
        "There were no associations between APOE polymorphisms and serum HDL-C, APO-CIII and triglycerides";
    const RS1051730: &str =
        "Moreover, the rs1051730 variant may not merely operate as a marker for dependence or heaviness of smoking.";

    fn words(text: &str, r: TokenRange) -> Vec<alloc::string::String> {
        tokenize(text)[r.start..r.end]
            .iter()
            .map(|t| t.surface.clone())
            .collect()
    }

    #[test]
    fn detects_no_in_apoe_sentence() {
        let tokens = tokenize(APOE);
        let cues = detect_cues(&tokens, &default_cues());
        assert_eq!(cues.len(), 1);
        assert_eq!(cues[0].span.slice(APOE), Some("no"));
    }

    #[test]
    fn detects_not_and_ignores_nothing() {
        let tokens = tokenize(RS1051730);
        let cues = detect_cues(&tokens, &default_cues());
        assert_eq!(cues.len(), 1);
        assert_eq!(cues[0].span.slice(RS1051730), Some("not"));
        assert!(detect_cues(&tokenize("nothing was found"), &default_cues()).is_empty());
    }

    #[test]
    fn apoe_scope_runs_to_sentence_end() {
        let ann = annotate_negation(APOE, &default_cues(), &default_connectors()).unwrap();
        assert_eq!(ann.len(), 1);
        let w = words(APOE, ann[0].scope);
        assert_eq!(w.first().unwrap(), "associations");
        assert_eq!(w.last().unwrap(), "triglycerides");
        assert!(!ann[0].clause_bounded);
    }

    #[test]
    fn rs1051730_scope() {
        let ann = annotate_negation(RS1051730, &default_cues(), &default_connectors()).unwrap();
        assert_eq!(ann.len(), 1);
        let w = words(RS1051730, ann[0].scope);
        assert_eq!(w.first().unwrap(), "merely");
        assert_eq!(&w[w.len() - 2], "smoking");
        let snp_idx = tokenize(RS1051730)
            .iter()
            .position(|t| t.surface == "rs1051730")
            .unwrap();
        assert!(snp_idx < ann[0].scope.start);
    }

    #[test]
    fn scope_stops_before_connector() {
        let text = "no effect, but X increased";
        let ann = annotate_negation(text, &default_cues(), &default_connectors()).unwrap();
        assert_eq!(words(text, ann[0].scope), ["effect", ","]);
        assert!(ann[0].clause_bounded);
    }

    #[test]
    fn cue_free_sentence_has_no_annotations() {
        let ann = annotate_negation("rs1 is associated with asthma.", &default_cues(), &default_connectors()).unwrap();
        assert!(ann.is_empty());
    }

    #[test]
    fn two_cues_in_two_clauses_have_disjoint_scopes() {
        // Clause 1: "rs1 was not linked to asthma"; clause 2 opened by "but":
        // "but showed no effect on obesity".
        let text = "rs1 was not linked to asthma but showed no effect on obesity";
        let ann = annotate_negation(text, &default_cues(), &default_connectors()).unwrap();
        assert_eq!(ann.len(), 2);
        assert_eq!(words(text, ann[0].scope), ["linked", "to", "asthma"]);
        assert_eq!(words(text, ann[1].scope), ["effect", "on", "obesity"]);
        assert!(!ann[0].scope.overlaps(&ann[1].scope));
    }

    #[test]
    fn backward_cue_covers_clause() {
        let text = "An association with asthma was not observed";
        let ann = annotate_negation(text, &default_cues(), &default_connectors()).unwrap();
        assert_eq!(ann.len(), 1);
        assert_eq!(ann[0].scope, TokenRange::new(0, 7));
        // far from the clause end the pseudo-cue behaves as a forward cue
        let text = "rs7 was not associated with asthma in adults";
        let ann = annotate_negation(text, &default_cues(), &default_connectors()).unwrap();
        assert_eq!(ann[0].scope.start, 3);
    }

    #[test]
    fn misaligned_cue_is_rejected() {
        let tokens = tokenize("no effect");
        let clauses = segment_clauses(&tokens, &default_connectors());
        let err = resolve_scope(Span::new(0, 1), CueDirection::Forward, &tokens, &clauses);
        assert!(matches!(err, Err(Error::Alignment(_))));
    }
}
