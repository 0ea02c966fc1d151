//! Tokenization, clause segmentation and entity recognition.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::corpus::{CandidatePair, EntityKind, EntityMention, Sentence};
use crate::lexicon::{ConnectorLexicon, Gazetteer};
use crate::span::{Span, TokenRange};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TokenKind {
    Word,
    Number,
    Punct,
    Symbol,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub span: Span,
    pub kind: TokenKind,
    pub lower: String,
}

impl Token {
    fn new(chars: &[char], start: usize, end: usize, kind: TokenKind) -> Self {
        let surface: String = chars[start..end].iter().collect();
        let lower = surface.to_lowercase();
        Token {
            surface,
            span: Span::new(start, end),
            kind,
            lower,
        }
    }
}

const SYMBOLS: &[char] = &[
    '=', '<', '>', '+', '±', '≤', '≥', '⩽', '⩾', '%', '~', '^', '|', '×', '*', '&', '$', '#', '@', '§', '°', '÷', '≈',
    '≠', '→', '←', 'µ', 'µ',
];

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_joining_hyphen(c: char) -> bool {
    matches!(c, '-' | '\u{2010}' | '\u{2011}')
}

fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}')
}

fn classify(surface: &[char]) -> TokenKind {
    let first = surface[0];
    if first.is_ascii_digit() {
        let s: String = surface.iter().collect();
        if surface.iter().all(|c| c.is_ascii_digit() || *c == '.') || s.parse::<f64>().is_ok() {
            return TokenKind::Number;
        }
    }
    TokenKind::Word
}

/// Splits a sentence into tokens with character-offset spans.
///
/// Runs of letters and digits form words or numbers. A hyphen between two
/// alphanumerics stays inside the token ("tobacco-related", "HDL-C"), as does a
/// decimal point between two digits ("0.043"). The contraction "n't" is split
/// off its host ("don't" → "do", "n't"). Every other non-space character is a
/// token of its own.
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < n {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if !is_word_char(c) {
            let kind = if SYMBOLS.contains(&c) {
                TokenKind::Symbol
            } else {
                TokenKind::Punct
            };
            tokens.push(Token::new(&chars, i, i + 1, kind));
            i += 1;
            continue;
        }
        let mut j = i;
        loop {
            while j < n && is_word_char(chars[j]) {
                j += 1;
            }
            if j + 1 < n && is_word_char(chars[j + 1]) {
                if is_joining_hyphen(chars[j]) {
                    j += 1;
                    continue;
                }
                if chars[j] == '.' && chars[j - 1].is_ascii_digit() && chars[j + 1].is_ascii_digit() {
                    j += 1;
                    continue;
                }
                // Scientific notation like 5e-8: the hyphen rule already joins it.
            }
            break;
        }
        // "n't" contraction
        let contraction = j + 1 < n
            && is_apostrophe(chars[j])
            && matches!(chars[j + 1], 't' | 'T')
            && (j + 2 >= n || !is_word_char(chars[j + 2]))
            && matches!(chars[j - 1], 'n' | 'N');
        if contraction {
            let host_end = j - 1;
            if host_end > i {
                tokens.push(Token::new(&chars, i, host_end, classify(&chars[i..host_end])));
            }
            tokens.push(Token::new(&chars, host_end, j + 2, TokenKind::Word));
            i = j + 2;
            continue;
        }
        tokens.push(Token::new(&chars, i, j, classify(&chars[i..j])));
        i = j;
    }
    tokens
}

/// Splits running text into sentence strings with their character offsets.
///
/// A sentence ends at `.`, `!` or `?` followed by whitespace and an uppercase
/// letter, digit or opening bracket. Common abbreviations ("e.g.", "et al.",
/// "vs.") and single capital initials do not end a sentence.
pub fn split_sentences(text: &str) -> Vec<(Span, String)> {
    const ABBREVIATIONS: &[&str] = &[
        "e.g", "i.e", "al", "vs", "fig", "figs", "approx", "ca", "cf", "etc", "no", "dr", "mr", "mrs", "ms", "st",
        "resp",
    ];
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let mut out = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < n {
        let c = chars[i];
        if matches!(c, '.' | '!' | '?') {
            let mut k = i + 1;
            while k < n && matches!(chars[k], ')' | '"' | '\'' | ']') {
                k += 1;
            }
            let mut gap = k;
            while gap < n && chars[gap].is_whitespace() {
                gap += 1;
            }
            let boundary = if gap == n {
                true
            } else if gap > k {
                let next = chars[gap];
                let opens = next.is_uppercase() || next.is_ascii_digit() || matches!(next, '(' | '[');
                let mut w = i;
                while w > start && !chars[w - 1].is_whitespace() {
                    w -= 1;
                }
                let word: String = chars[w..i].iter().collect::<String>().to_lowercase();
                let single_initial = i - w == 1 && chars[w].is_uppercase();
                opens && c != '.' || opens && !ABBREVIATIONS.contains(&word.as_str()) && !single_initial
            } else {
                false
            };
            if boundary {
                push_sentence(&chars, start, k, &mut out);
                start = gap;
                i = gap;
                continue;
            }
        }
        i += 1;
    }
    push_sentence(&chars, start, n, &mut out);
    out
}

fn push_sentence(chars: &[char], mut start: usize, mut end: usize, out: &mut Vec<(Span, String)>) {
    while start < end && chars[start].is_whitespace() {
        start += 1;
    }
    while end > start && chars[end - 1].is_whitespace() {
        end -= 1;
    }
    if start < end {
        out.push((Span::new(start, end), chars[start..end].iter().collect()));
    }
}

/// A clause as a contiguous run of tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseSpan {
    pub tokens: TokenRange,
    /// Connector tokens that opened the clause, if any.
    pub opened_by: Option<TokenRange>,
    /// Lowercased connector phrase that opened the clause.
    pub opener: Option<String>,
}

/// Segments a token sequence into clauses.
///
/// A clause opens at every connector match (longest match first) and after
/// every `;`. A clause opened by a sentence-initial connector ("Although X,
/// Y ...") is closed by its first comma. Only the first clause can carry a
/// sentence-initial opener; every other clause boundary sits at a connector or
/// after a semicolon. The result covers every token exactly once, in order.
pub fn segment_clauses(tokens: &[Token], connectors: &ConnectorLexicon) -> Vec<ClauseSpan> {
    if tokens.is_empty() {
        return Vec::new();
    }
    let matches = connectors.find_matches(tokens);
    let mut clauses = Vec::new();
    let mut current = ClauseSpan {
        tokens: TokenRange::new(0, 0),
        opened_by: None,
        opener: None,
    };
    let mut fronted = false;
    let mut next_match = 0;
    let mut i = 0;
    while i < tokens.len() {
        if next_match < matches.len() && matches[next_match].tokens.start == i {
            let m = matches[next_match];
            next_match += 1;
            let opener = Some(connectors.entry(m.entry).text());
            if i == 0 {
                current.opened_by = Some(m.tokens);
                current.opener = opener;
                fronted = true;
            } else {
                if current.tokens.start < i {
                    current.tokens.end = i;
                    clauses.push(current);
                }
                current = ClauseSpan {
                    tokens: TokenRange::new(i, i),
                    opened_by: Some(m.tokens),
                    opener,
                };
                fronted = false;
            }
            i = m.tokens.end;
            continue;
        }
        let lower = tokens[i].lower.as_str();
        let closes = lower == ";" || (lower == "," && fronted);
        if closes && i + 1 < tokens.len() {
            current.tokens.end = i + 1;
            clauses.push(current);
            current = ClauseSpan {
                tokens: TokenRange::new(i + 1, i + 1),
                opened_by: None,
                opener: None,
            };
            fronted = false;
        }
        i += 1;
    }
    current.tokens.end = tokens.len();
    if !current.tokens.is_empty() {
        clauses.push(current);
    }
    clauses
}

/// Index of the clause containing token `idx`.
pub fn clause_of(clauses: &[ClauseSpan], idx: usize) -> Option<usize> {
    clauses.iter().position(|c| c.tokens.contains_index(idx))
}

fn is_rsid(surface: &str) -> bool {
    let bytes = surface.as_bytes();
    bytes.len() >= 3
        && bytes.len() <= 12
        && bytes[0].eq_ignore_ascii_case(&b'r')
        && bytes[1].eq_ignore_ascii_case(&b's')
        && bytes[2..].iter().all(u8::is_ascii_digit)
}

/// Recognizes rsID tokens ("rs" + 1 to 10 digits, case-insensitive) as SNP
/// mentions.
pub fn recognize_snps(text: &str, tokens: &[Token]) -> Vec<EntityMention> {
    tokens
        .iter()
        .filter(|t| is_rsid(&t.surface))
        .map(|t| EntityMention::from_text(EntityKind::Snp, t.span, text).expect("token span in text"))
        .collect()
}

/// Longest-match, non-overlapping, case-insensitive gazetteer lookup.
pub fn recognize_phenotypes(text: &str, tokens: &[Token], gazetteer: &Gazetteer) -> Vec<EntityMention> {
    gazetteer
        .find_matches(tokens)
        .into_iter()
        .map(|m| {
            let span = Span::new(tokens[m.tokens.start].span.start, tokens[m.tokens.end - 1].span.end);
            EntityMention::from_text(EntityKind::Phenotype, span, text).expect("token span in text")
        })
        .collect()
}

/// Cross product of SNP and phenotype mentions, ordered by SNP start and then
/// phenotype start. Candidate ids are `<sentence id>:<n>`.
pub fn enumerate_candidates(sentence: &Sentence) -> Vec<CandidatePair> {
    let mut snps: Vec<usize> = (0..sentence.mentions.len())
        .filter(|&i| sentence.mentions[i].kind == EntityKind::Snp)
        .collect();
    let mut phens: Vec<usize> = (0..sentence.mentions.len())
        .filter(|&i| sentence.mentions[i].kind == EntityKind::Phenotype)
        .collect();
    snps.sort_by_key(|&i| (sentence.mentions[i].span.start, i));
    phens.sort_by_key(|&i| (sentence.mentions[i].span.start, i));
    let mut out = Vec::with_capacity(snps.len() * phens.len());
    for &s in &snps {
        for &p in &phens {
            let id = alloc::format!("{}:{}", sentence.id, out.len());
            out.push(CandidatePair::new(id, s, p));
        }
    }
    out
}

/// Tokens overlapping a character span.
pub fn tokens_for_span(tokens: &[Token], span: Span) -> Option<TokenRange> {
    let start = tokens.iter().position(|t| t.span.overlaps(&span))?;
    let end = tokens.iter().rposition(|t| t.span.overlaps(&span))? + 1;
    Some(TokenRange::new(start, end))
}

/// Builds a raw-text sentence: recognizes entities and enumerates candidates.
pub fn analyze_raw_sentence(id: &str, text: &str, gazetteer: &Gazetteer) -> Sentence {
    let tokens = tokenize(text);
    let mut mentions = recognize_snps(text, &tokens);
    mentions.extend(recognize_phenotypes(text, &tokens, gazetteer));
    mentions.sort_by_key(|m| (m.span.start, m.span.end));
    let mut sentence = Sentence {
        id: id.to_string(),
        text: text.to_string(),
        mentions,
        candidates: Vec::new(),
    };
    sentence.candidates = enumerate_candidates(&sentence);
    sentence
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{default_connectors, ConnectorTag};

    fn surfaces(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.surface.as_str()).collect()
    }

    #[test]
    fn tokenizes_biomedical_fragments() {
        assert_eq!(
            surfaces(&tokenize("rs1051730 variant may not")),
            ["rs1051730", "variant", "may", "not"]
        );
        assert!(tokenize("").is_empty());
        let t = tokenize("p=0.043).");
        assert_eq!(surfaces(&t), ["p", "=", "0.043", ")", "."]);
        assert_eq!(
            t.iter().map(|t| t.kind).collect::<Vec<_>>(),
            [
                TokenKind::Word,
                TokenKind::Symbol,
                TokenKind::Number,
                TokenKind::Punct,
                TokenKind::Punct
            ]
        );
        let text = "p=0.043).";
        for tok in &t {
            assert_eq!(tok.span.slice(text).unwrap(), tok.surface);
        }
    }

    #[test]
    fn keeps_hyphenated_terms() {
        assert_eq!(
            surfaces(&tokenize("major tobacco-related diseases, HDL-C and APO-CIII")),
            ["major", "tobacco-related", "diseases", ",", "HDL-C", "and", "APO-CIII"]
        );
        assert_eq!(surfaces(&tokenize("p < 5e-8")), ["p", "<", "5e-8"]);
        assert_eq!(tokenize("5e-8")[0].kind, TokenKind::Number);
        assert_eq!(tokenize("15q25")[0].kind, TokenKind::Word);
    }

    #[test]
    fn splits_contractions() {
        assert_eq!(
            surfaces(&tokenize("it didn't replicate")),
            ["it", "did", "n't", "replicate"]
        );
        assert_eq!(surfaces(&tokenize("n't")), ["n't"]);
        assert_eq!(surfaces(&tokenize("Alzheimer's")), ["Alzheimer", "'", "s"]);
    }

    fn connectors() -> ConnectorLexicon {
        default_connectors()
    }

    #[test]
    fn single_connector_opens_second_clause() {
        let tokens = tokenize("X increased Y but Z was unchanged");
        let clauses = segment_clauses(&tokens, &connectors());
        assert_eq!(clauses.len(), 2);
        assert_eq!(clauses[0].opener, None);
        assert_eq!(clauses[1].opener.as_deref(), Some("but"));
        assert_eq!(clauses[1].tokens, TokenRange::new(3, 7));
    }

    #[test]
    fn no_connector_single_clause() {
        let tokens = tokenize("rs4680 is associated with anorexia nervosa.");
        let clauses = segment_clauses(&tokens, &connectors());
        assert_eq!(clauses.len(), 1);
        assert_eq!(clauses[0].tokens, TokenRange::new(0, tokens.len()));
    }

    #[test]
    fn fronted_subordinate_clause() {
        // Brute-force check: boundaries are the connector positions (1 = "after")
        // plus the comma closing the fronted "although" clause.
        let tokens = tokenize("although X, Y after Z");
        let lex = connectors();
        let connector_positions: Vec<usize> = (0..tokens.len())
            .filter(|&i| {
                lex.entries()
                    .iter()
                    .any(|e| e.phrase.len() == 1 && e.phrase[0] == tokens[i].lower)
            })
            .collect();
        assert_eq!(connector_positions, [0, 4]);
        let clauses = segment_clauses(&tokens, &lex);
        assert_eq!(clauses.len(), 3);
        let openers: Vec<_> = clauses.iter().filter_map(|c| c.opener.clone()).collect();
        assert_eq!(openers, ["although", "after"]);
        assert_eq!(clauses[0].tokens, TokenRange::new(0, 3));
        assert_eq!(clauses[1].tokens, TokenRange::new(3, 4));
        assert_eq!(clauses[2].tokens, TokenRange::new(4, 6));
    }

    #[test]
    fn multi_token_connector_is_greedy() {
        let lex = ConnectorLexicon::from_phrases([
            ("though", ConnectorTag { concessive: true }),
            ("even though", ConnectorTag { concessive: true }),
        ])
        .unwrap();
        let tokens = tokenize("X rose even though Y fell");
        let clauses = segment_clauses(&tokens, &lex);
        assert_eq!(clauses.len(), 2);
        assert_eq!(clauses[1].opener.as_deref(), Some("even though"));
        assert_eq!(clauses[1].tokens.start, 2);
    }

    #[test]
    fn semicolon_closes_clause() {
        let tokens = tokenize("A rose; B fell");
        let clauses = segment_clauses(&tokens, &connectors());
        assert_eq!(clauses.len(), 2);
        assert_eq!(clauses[0].tokens, TokenRange::new(0, 3));
        assert_eq!(clauses[1].opener, None);
    }

    #[test]
    fn recognizes_rsids() {
        let text = "rs1051730 on 15q25 and RS4680, not rsX123 or risk";
        let tokens = tokenize(text);
        let snps = recognize_snps(text, &tokens);
        let found: Vec<_> = snps.iter().map(|m| m.normalized.as_str()).collect();
        assert_eq!(found, ["rs1051730", "rs4680"]);
        assert_eq!(snps[1].surface, "RS4680");
        assert!(recognize_snps("rs12345678901", &tokenize("rs12345678901")).is_empty());
    }

    #[test]
    fn recognizes_phenotypes_longest_match() {
        let gaz = Gazetteer::from_phrases([("preterm birth", ())]).unwrap();
        let text = "increased risk of preterm birth (OR=3.2 [CI 1.04-9.8], p=0.043).";
        let tokens = tokenize(text);
        let found = recognize_phenotypes(text, &tokens, &gaz);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].surface, "preterm birth");

        let gaz = Gazetteer::from_phrases([("lung cancer", ()), ("cancer", ())]).unwrap();
        let text = "lung cancer";
        let found = recognize_phenotypes(text, &tokenize(text), &gaz);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].surface, "lung cancer");

        let empty = Gazetteer::new();
        assert!(recognize_phenotypes(text, &tokenize(text), &empty).is_empty());
    }

    #[test]
    fn enumerates_cross_product_in_order() {
        let gaz = Gazetteer::from_phrases([("asthma", ()), ("obesity", ()), ("copd", ())]).unwrap();
        let s = analyze_raw_sentence("s1", "rs1 and asthma, rs2 with obesity and COPD", &gaz);
        assert_eq!(s.candidates.len(), 6);
        // brute-force: all (snp, phen) pairs sorted by (snp start, phen start)
        let mut expected = Vec::new();
        for (i, m) in s.mentions.iter().enumerate() {
            if m.kind != EntityKind::Snp {
                continue;
            }
            for (j, p) in s.mentions.iter().enumerate() {
                if p.kind == EntityKind::Phenotype {
                    expected.push((m.span.start, p.span.start, i, j));
                }
            }
        }
        expected.sort();
        let got: Vec<_> = s.candidates.iter().map(|c| (c.snp, c.phenotype)).collect();
        let want: Vec<_> = expected.iter().map(|e| (e.2, e.3)).collect();
        assert_eq!(got, want);
        assert_eq!(s.candidates[0].id, "s1:0");

        let none = analyze_raw_sentence("s2", "asthma and obesity", &gaz);
        assert!(none.candidates.is_empty());
    }

    #[test]
    fn splits_sentences_respecting_abbreviations() {
        let text = "Smokers were studied, e.g. in Norway. The rs1051730 variant was typed (Smith et al. 2010). 12 SNPs failed.";
        let sents = split_sentences(text);
        let texts: Vec<_> = sents.iter().map(|s| s.1.as_str()).collect();
        assert_eq!(
            texts,
            [
                "Smokers were studied, e.g. in Norway.",
                "The rs1051730 variant was typed (Smith et al. 2010).",
                "12 SNPs failed."
            ]
        );
        for (span, s) in &sents {
            assert_eq!(span.slice(text).unwrap(), s);
        }
    }
}
