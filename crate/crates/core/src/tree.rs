//! Bracketed parse trees and the clause-chunk fallback tree builder.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::CandidatePair;
use crate::error::{Error, Result};
use crate::pipeline::SentenceAnalysis;

/// An ordered labelled tree; a node without children is a leaf (a word).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ParseTree {
    pub label: String,
    pub children: Vec<ParseTree>,
}

impl ParseTree {
    pub fn leaf(label: impl Into<String>) -> Self {
        ParseTree {
            label: label.into(),
            children: Vec::new(),
        }
    }

    pub fn node(label: impl Into<String>, children: Vec<ParseTree>) -> Self {
        ParseTree {
            label: label.into(),
            children,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// A node whose children are all leaves.
    pub fn is_preterminal(&self) -> bool {
        !self.children.is_empty() && self.children.iter().all(ParseTree::is_leaf)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ParseTree::size).sum::<usize>()
    }

    /// `label -> child labels`, or `None` for a leaf.
    pub fn production(&self) -> Option<String> {
        if self.is_leaf() {
            return None;
        }
        let mut p = self.label.clone();
        p.push_str(" ->");
        for c in &self.children {
            p.push(' ');
            p.push_str(&c.label);
        }
        Some(p)
    }

    /// Parses Penn-style brackets: `(S (CL (TOK word) (TOK other)))`.
    /// A bare atom parses as a single leaf.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lexer = Lexer {
            items: lex(text),
            pos: 0,
        };
        let tree = lexer.tree()?;
        if lexer.pos != lexer.items.len() {
            return Err(parse_error("trailing input after tree"));
        }
        Ok(tree)
    }

    pub fn to_bracketed(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        if self.is_leaf() {
            out.push_str(&self.label);
            return;
        }
        out.push('(');
        out.push_str(&self.label);
        for c in &self.children {
            out.push(' ');
            c.write(out);
        }
        out.push(')');
    }
}

impl core::fmt::Display for ParseTree {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.to_bracketed())
    }
}

impl TryFrom<String> for ParseTree {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        ParseTree::parse(&s)
    }
}

impl From<ParseTree> for String {
    fn from(t: ParseTree) -> Self {
        t.to_bracketed()
    }
}

fn parse_error(message: &str) -> Error {
    Error::Parse {
        locator: "tree".into(),
        message: message.to_string(),
    }
}

#[derive(Debug, PartialEq)]
enum Item {
    Open,
    Close,
    Atom(String),
}

fn lex(text: &str) -> Vec<Item> {
    let mut items = Vec::new();
    let mut atom = String::new();
    for c in text.chars() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if !atom.is_empty() {
                items.push(Item::Atom(core::mem::take(&mut atom)));
            }
            match c {
                '(' => items.push(Item::Open),
                ')' => items.push(Item::Close),
                _ => {}
            }
        } else {
            atom.push(c);
        }
    }
    if !atom.is_empty() {
        items.push(Item::Atom(atom));
    }
    items
}

struct Lexer {
    items: Vec<Item>,
    pos: usize,
}

impl Lexer {
    fn tree(&mut self) -> Result<ParseTree> {
        match self.items.get(self.pos) {
            Some(Item::Atom(a)) => {
                self.pos += 1;
                Ok(ParseTree::leaf(a.clone()))
            }
            Some(Item::Open) => {
                self.pos += 1;
                let label = match self.items.get(self.pos) {
                    Some(Item::Atom(a)) => a.clone(),
                    _ => return Err(parse_error("expected a label after `(`")),
                };
                self.pos += 1;
                let mut children = Vec::new();
                loop {
                    match self.items.get(self.pos) {
                        Some(Item::Close) => {
                            self.pos += 1;
                            break;
                        }
                        Some(_) => children.push(self.tree()?),
                        None => return Err(parse_error("unbalanced brackets")),
                    }
                }
                Ok(ParseTree::node(label, children))
            }
            Some(Item::Close) => Err(parse_error("unexpected `)`")),
            None => Err(parse_error("empty tree")),
        }
    }
}

/// Escapes brackets in a word so it can stand as a leaf.
pub fn leaf_word(lower: &str) -> String {
    match lower {
        "(" => "-LRB-".into(),
        ")" => "-RRB-".into(),
        "[" => "-LSB-".into(),
        "]" => "-RSB-".into(),
        w => w.replace('(', "-LRB-").replace(')', "-RRB-"),
    }
}

/// Fallback tree when no parser output is available:
/// `S` with one `CL` child per clause; clause tokens become `TOK` preterminals,
/// and the candidate's entity tokens are grouped under `SNP` / `PHEN`.
pub fn heuristic_tree(analysis: &SentenceAnalysis, candidate: &CandidatePair) -> ParseTree {
    let (snp, phen) = analysis.entity_tokens(candidate);
    let tok = |i: usize| {
        ParseTree::node(
            "TOK",
            alloc::vec![ParseTree::leaf(leaf_word(&analysis.tokens[i].lower))],
        )
    };
    let mut clauses = Vec::with_capacity(analysis.clauses.len());
    for clause in &analysis.clauses {
        let mut children = Vec::new();
        let mut i = clause.tokens.start;
        while i < clause.tokens.end {
            let group = if snp.contains_index(i) {
                Some(("SNP", snp))
            } else if phen.contains_index(i) {
                Some(("PHEN", phen))
            } else {
                None
            };
            match group {
                Some((label, range)) => {
                    let end = range.end.min(clause.tokens.end);
                    children.push(ParseTree::node(label, (i..end).map(tok).collect()));
                    i = end;
                }
                None => {
                    children.push(tok(i));
                    i += 1;
                }
            }
        }
        clauses.push(ParseTree::node("CL", children));
    }
    ParseTree::node("S", clauses)
}

/// Parses one sidecar line: `<candidate id>\t<bracketed tree>`.
pub fn parse_sidecar_line(line: &str) -> Result<(String, ParseTree)> {
    let (id, tree) = line
        .split_once('\t')
        .ok_or_else(|| parse_error(&format!("expected `id<TAB>tree`, got `{line}`")))?;
    Ok((id.trim().to_string(), ParseTree::parse(tree.trim())?))
}
