//! Phrase lexicons (negation cues, clause connectors, association triggers,
//! modality markers, phenotype gazetteer) and longest-match phrase search.
//!
//! Lexicon text format: UTF-8, one entry per line, `#` starts a comment line,
//! an optional tab-separated tag follows the phrase (`but\tconcessive`,
//! `was not\tbackward`, `may\thedge`).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::confidence::ModalTier;
use crate::error::{Error, Result};
use crate::span::TokenRange;
use crate::textproc::{tokenize, Token};

pub const DEFAULT_CUES: &str = include_str!("../data/cues.txt");
pub const DEFAULT_CONNECTORS: &str = include_str!("../data/connectors.txt");
pub const DEFAULT_TRIGGERS: &str = include_str!("../data/triggers.txt");
pub const DEFAULT_MODALITY: &str = include_str!("../data/modality.txt");
pub const DEFAULT_GAZETTEER: &str = include_str!("../data/gazetteer.txt");

/// Per-entry tag carried by a lexicon line.
pub trait EntryTag: Sized + Clone {
    fn parse_tag(tag: Option<&str>) -> core::result::Result<Self, String>;
}

impl EntryTag for () {
    fn parse_tag(tag: Option<&str>) -> core::result::Result<Self, String> {
        match tag {
            None => Ok(()),
            Some(t) => Err(format!("unexpected tag `{t}`")),
        }
    }
}

/// Scope direction of a negation cue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CueDirection {
    #[default]
    Forward,
    /// Pseudo-cues such as "was not" that may negate material to their left.
    Backward,
}

impl EntryTag for CueDirection {
    fn parse_tag(tag: Option<&str>) -> core::result::Result<Self, String> {
        match tag {
            None => Ok(CueDirection::Forward),
            Some("backward") => Ok(CueDirection::Backward),
            Some(t) => Err(format!("unknown cue tag `{t}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConnectorTag {
    pub concessive: bool,
}

impl EntryTag for ConnectorTag {
    fn parse_tag(tag: Option<&str>) -> core::result::Result<Self, String> {
        match tag {
            None => Ok(ConnectorTag { concessive: false }),
            Some("concessive") => Ok(ConnectorTag { concessive: true }),
            Some(t) => Err(format!("unknown connector tag `{t}`")),
        }
    }
}

impl EntryTag for ModalTier {
    fn parse_tag(tag: Option<&str>) -> core::result::Result<Self, String> {
        match tag {
            Some("hedge") => Ok(ModalTier::Hedge),
            Some("neutral") => Ok(ModalTier::Neutral),
            Some("booster") => Ok(ModalTier::Booster),
            Some(t) => Err(format!("unknown modality tier `{t}`")),
            None => Err("modality entries need a tier".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexiconEntry<T> {
    /// Lowercased token surfaces of the phrase.
    pub phrase: Vec<String>,
    pub tag: T,
}

impl<T> LexiconEntry<T> {
    pub fn text(&self) -> String {
        self.phrase.join(" ")
    }
}

/// A match of one lexicon entry over a token sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhraseMatch {
    pub tokens: TokenRange,
    pub entry: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon<T> {
    entries: Vec<LexiconEntry<T>>,
    by_first: BTreeMap<String, Vec<usize>>,
}

pub type CueLexicon = Lexicon<CueDirection>;
pub type ConnectorLexicon = Lexicon<ConnectorTag>;
pub type TriggerLexicon = Lexicon<()>;
pub type ModalityLexicon = Lexicon<ModalTier>;
pub type Gazetteer = Lexicon<()>;

impl<T: EntryTag> Lexicon<T> {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (phrase, tag) = match line.split_once('\t') {
                Some((p, t)) => (p, Some(t.trim())),
                None => (line, None),
            };
            let tag = T::parse_tag(tag.filter(|t| !t.is_empty())).map_err(|message| Error::Parse {
                locator: format!("line {}", lineno + 1),
                message,
            })?;
            entries.push((lineno + 1, phrase.trim().to_string(), tag));
        }
        let mut lexicon = Lexicon {
            entries: Vec::new(),
            by_first: BTreeMap::new(),
        };
        for (lineno, phrase, tag) in entries {
            lexicon.insert(&phrase, tag).map_err(|message| Error::Parse {
                locator: format!("line {lineno}"),
                message,
            })?;
        }
        Ok(lexicon)
    }
}

impl<T: Clone> Lexicon<T> {
    pub fn new() -> Self {
        Lexicon {
            entries: Vec::new(),
            by_first: BTreeMap::new(),
        }
    }

    pub fn from_phrases<'a>(phrases: impl IntoIterator<Item = (&'a str, T)>) -> Result<Self> {
        let mut lexicon = Self::new();
        for (phrase, tag) in phrases {
            lexicon.insert(phrase, tag).map_err(Error::InvalidArgument)?;
        }
        Ok(lexicon)
    }

    /// Adds a phrase. Phrases are tokenized with the sentence tokenizer so that
    /// they match token sequences exactly.
    pub fn insert(&mut self, phrase: &str, tag: T) -> core::result::Result<(), String> {
        let tokens: Vec<String> = tokenize(phrase).into_iter().map(|t| t.lower).collect();
        if tokens.is_empty() {
            return Err("empty phrase".into());
        }
        if self.entries.iter().any(|e| e.phrase == tokens) {
            return Err(format!("duplicate phrase `{}`", tokens.join(" ")));
        }
        let idx = self.entries.len();
        self.by_first.entry(tokens[0].clone()).or_default().push(idx);
        self.entries.push(LexiconEntry { phrase: tokens, tag });
        Ok(())
    }

    pub fn entries(&self) -> &[LexiconEntry<T>] {
        &self.entries
    }

    pub fn entry(&self, idx: usize) -> &LexiconEntry<T> {
        &self.entries[idx]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All non-overlapping matches over `tokens`, chosen longest-first and then
    /// leftmost, returned in token order. Matching is case-insensitive.
    pub fn find_matches(&self, tokens: &[Token]) -> Vec<PhraseMatch> {
        let mut candidates = Vec::new();
        for start in 0..tokens.len() {
            let Some(ids) = self.by_first.get(tokens[start].lower.as_str()) else {
                continue;
            };
            for &id in ids {
                let phrase = &self.entries[id].phrase;
                let end = start + phrase.len();
                if end <= tokens.len() && phrase.iter().zip(&tokens[start..end]).all(|(p, t)| *p == t.lower) {
                    candidates.push(PhraseMatch {
                        tokens: TokenRange::new(start, end),
                        entry: id,
                    });
                }
            }
        }
        candidates.sort_by(|a, b| {
            b.tokens
                .len()
                .cmp(&a.tokens.len())
                .then(a.tokens.start.cmp(&b.tokens.start))
                .then(a.entry.cmp(&b.entry))
        });
        let mut accepted: Vec<PhraseMatch> = Vec::new();
        for m in candidates {
            if accepted.iter().all(|a| !a.tokens.overlaps(&m.tokens)) {
                accepted.push(m);
            }
        }
        accepted.sort_by_key(|m| m.tokens.start);
        accepted
    }
}

impl<T: Clone> Default for Lexicon<T> {
    fn default() -> Self {
        Self::new()
    }
}

pub fn default_cues() -> CueLexicon {
    CueLexicon::parse(DEFAULT_CUES).expect("bundled cue lexicon parses")
}

pub fn default_connectors() -> ConnectorLexicon {
    ConnectorLexicon::parse(DEFAULT_CONNECTORS).expect("bundled connector lexicon parses")
}

pub fn default_triggers() -> TriggerLexicon {
    TriggerLexicon::parse(DEFAULT_TRIGGERS).expect("bundled trigger lexicon parses")
}

pub fn default_modality() -> ModalityLexicon {
    ModalityLexicon::parse(DEFAULT_MODALITY).expect("bundled modality lexicon parses")
}

pub fn default_gazetteer() -> Gazetteer {
    Gazetteer::parse(DEFAULT_GAZETTEER).expect("bundled gazetteer parses")
}
