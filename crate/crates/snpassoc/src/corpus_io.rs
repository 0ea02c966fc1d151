//! Corpus ingestion (native JSON-lines and XML) and JSON-lines output.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};
use snpassoc_core::corpus::{CandidatePair, Corpus, Document, EntityKind, EntityMention, Sentence, SplitTag};
use snpassoc_core::lexicon::Gazetteer;
use snpassoc_core::textproc::{analyze_raw_sentence, split_sentences};
use snpassoc_core::{Error, Span};

use crate::config::{Config, CorpusFormat};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonDocument {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitTag>,
    pub sentences: Vec<JsonSentence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonSentence {
    pub id: String,
    pub text: String,
    #[serde(default)]
    pub entities: Vec<JsonEntity>,
    #[serde(default)]
    pub pairs: Vec<JsonPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonEntity {
    pub kind: EntityKind,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonPair {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub snp: usize,
    pub phenotype: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<String>,
}

/// Candidate id used when the input gives none.
pub fn candidate_id(doc: &str, sentence: &str, n: usize) -> String {
    format!("{doc}:{sentence}:{n}")
}

fn convert_sentence(doc_id: &str, js: JsonSentence, config: &Config) -> Result<Sentence, Error> {
    let ids: Vec<String> = js
        .pairs
        .iter()
        .enumerate()
        .map(|(n, p)| p.id.clone().unwrap_or_else(|| candidate_id(doc_id, &js.id, n)))
        .collect();
    let mut mentions = Vec::with_capacity(js.entities.len());
    for (i, e) in js.entities.iter().enumerate() {
        let mention = EntityMention::from_text(e.kind, Span::new(e.start, e.end), &js.text).ok_or_else(|| {
            // name the first candidate using this entity when there is one
            let who = js
                .pairs
                .iter()
                .position(|p| p.snp == i || p.phenotype == i)
                .map(|n| ids[n].clone())
                .unwrap_or_else(|| format!("{doc_id}:{} entity {i}", js.id));
            Error::InvalidSpan(who)
        })?;
        mentions.push(mention);
    }
    let mut candidates = Vec::with_capacity(js.pairs.len());
    for (p, id) in js.pairs.iter().zip(ids) {
        let mut c = CandidatePair::new(id, p.snp, p.phenotype);
        c.gold_label = p.label.as_deref().map(|l| config.map_label(l)).transpose()?;
        c.gold_confidence = p.confidence.as_deref().map(|l| config.map_confidence(l)).transpose()?;
        candidates.push(c);
    }
    let sentence = Sentence {
        id: js.id,
        text: js.text,
        mentions,
        candidates,
    };
    sentence.validate()?;
    Ok(sentence)
}

/// Parses the native JSON-lines format; blank lines are skipped.
pub fn read_jsonl(text: &str, config: &Config) -> Result<Corpus, Error> {
    let mut documents = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let locator = || format!("line {}", n + 1);
        let jd: JsonDocument = serde_json::from_str(line).map_err(|e| Error::Parse {
            locator: locator(),
            message: e.to_string(),
        })?;
        let sentences = jd
            .sentences
            .into_iter()
            .map(|s| convert_sentence(&jd.id, s, config))
            .collect::<Result<Vec<_>, _>>()?;
        documents.push(Document {
            id: jd.id,
            sentences,
            split: jd.split.unwrap_or_default(),
        });
    }
    let corpus = Corpus::new(documents);
    corpus.validate()?;
    Ok(corpus)
}

pub fn to_json_document(doc: &Document) -> JsonDocument {
    JsonDocument {
        id: doc.id.clone(),
        split: (doc.split != SplitTag::Unsplit).then_some(doc.split),
        sentences: doc
            .sentences
            .iter()
            .map(|s| JsonSentence {
                id: s.id.clone(),
                text: s.text.clone(),
                entities: s
                    .mentions
                    .iter()
                    .map(|m| JsonEntity {
                        kind: m.kind,
                        start: m.span.start,
                        end: m.span.end,
                    })
                    .collect(),
                pairs: s
                    .candidates
                    .iter()
                    .map(|c| JsonPair {
                        id: Some(c.id.clone()),
                        snp: c.snp,
                        phenotype: c.phenotype,
                        label: c.gold_label.map(|l| l.as_str().to_string()),
                        confidence: c.gold_confidence.map(|l| l.as_str().to_string()),
                    })
                    .collect(),
            })
            .collect(),
    }
}

/// Serializes a corpus to JSON-lines with explicit candidate ids.
pub fn write_jsonl(corpus: &Corpus) -> String {
    let mut out = String::new();
    for doc in &corpus.documents {
        out.push_str(&serde_json::to_string(&to_json_document(doc)).expect("corpus serializes"));
        out.push('\n');
    }
    out
}

fn xml_error(node: roxmltree::Node, doc: &roxmltree::Document, message: String) -> Error {
    let pos = doc.text_pos_at(node.range().start);
    Error::Parse {
        locator: format!("<{}> at line {}, column {}", node.tag_name().name(), pos.row, pos.col),
        message,
    }
}

fn required_attr<'a>(node: roxmltree::Node<'a, 'a>, doc: &roxmltree::Document, name: &str) -> Result<&'a str, Error> {
    node.attribute(name)
        .ok_or_else(|| xml_error(node, doc, format!("missing attribute `{name}`")))
}

fn parse_offset(raw: &str, inclusive: bool) -> Option<Span> {
    let first = raw.split(';').next()?.trim();
    let (a, b) = first.split_once('-')?;
    let start: usize = a.trim().parse().ok()?;
    let end: usize = b.trim().parse().ok()?;
    Some(Span::new(start, if inclusive { end + 1 } else { end }))
}

fn elements<'a, 'i>(node: roxmltree::Node<'a, 'i>, name: &str) -> Vec<roxmltree::Node<'a, 'i>> {
    node.descendants()
        .filter(|n| n.is_element() && n.tag_name().name() == name)
        .collect()
}

/// Reads an XML corpus using the element and attribute names in `config`.
/// Entities whose type is neither an SNP nor a phenotype type are ignored,
/// as are pairs that do not join one SNP with one phenotype.
pub fn read_xml(text: &str, config: &Config) -> Result<Corpus, Error> {
    let xml = roxmltree::Document::parse(text).map_err(|e| Error::Parse {
        locator: format!("line {}, column {}", e.pos().row, e.pos().col),
        message: e.to_string(),
    })?;
    let mut documents = Vec::new();
    let mut doc_nodes = elements(xml.root(), &config.document_element);
    if doc_nodes.is_empty() && xml.root_element().tag_name().name() != config.document_element {
        // a file of bare sentences is one document
        doc_nodes.push(xml.root_element());
    }
    for dn in doc_nodes {
        let doc_id = dn
            .attribute(config.id_attr.as_str())
            .map(str::to_string)
            .unwrap_or_else(|| format!("doc{}", documents.len() + 1));
        let split = match dn.attribute(config.split_attr.as_str()) {
            None => SplitTag::Unsplit,
            Some(s) if s.eq_ignore_ascii_case("train") => SplitTag::Train,
            Some(s) if s.eq_ignore_ascii_case("test") => SplitTag::Test,
            Some(s) => return Err(xml_error(dn, &xml, format!("unknown split `{s}`"))),
        };
        let mut sentences = Vec::new();
        for sn in elements(dn, &config.sentence_element) {
            let sid = required_attr(sn, &xml, &config.id_attr)?.to_string();
            let text = required_attr(sn, &xml, &config.text_attr)?.to_string();
            let mut index: BTreeMap<&str, usize> = BTreeMap::new();
            let mut mentions = Vec::new();
            for en in elements(sn, &config.entity_element) {
                let ty = required_attr(en, &xml, &config.entity_type_attr)?;
                let kind = if config.is_snp_type(ty) {
                    EntityKind::Snp
                } else if config.is_phenotype_type(ty) {
                    EntityKind::Phenotype
                } else {
                    continue;
                };
                let eid = required_attr(en, &xml, &config.id_attr)?;
                let raw = required_attr(en, &xml, &config.offset_attr)?;
                let span = parse_offset(raw, config.offset_end_inclusive)
                    .ok_or_else(|| xml_error(en, &xml, format!("bad offset `{raw}`")))?;
                let mention = EntityMention::from_text(kind, span, &text)
                    .ok_or_else(|| Error::InvalidSpan(format!("{doc_id}:{sid} entity {eid}")))?;
                index.insert(eid, mentions.len());
                mentions.push(mention);
            }
            let mut candidates = Vec::new();
            for pn in elements(sn, &config.pair_element) {
                let e1 = required_attr(pn, &xml, &config.e1_attr)?;
                let e2 = required_attr(pn, &xml, &config.e2_attr)?;
                let (Some(&a), Some(&b)) = (index.get(e1), index.get(e2)) else {
                    continue;
                };
                let (snp, phen) = match (mentions[a].kind, mentions[b].kind) {
                    (EntityKind::Snp, EntityKind::Phenotype) => (a, b),
                    (EntityKind::Phenotype, EntityKind::Snp) => (b, a),
                    _ => continue,
                };
                let id = pn
                    .attribute(config.id_attr.as_str())
                    .map(str::to_string)
                    .unwrap_or_else(|| candidate_id(&doc_id, &sid, candidates.len()));
                let mut c = CandidatePair::new(id, snp, phen);
                c.gold_label = pn
                    .attribute(config.label_attr.as_str())
                    .map(|l| config.map_label(l))
                    .transpose()?;
                c.gold_confidence = pn
                    .attribute(config.confidence_attr.as_str())
                    .filter(|v| !v.trim().is_empty())
                    .map(|l| config.map_confidence(l))
                    .transpose()?;
                candidates.push(c);
            }
            let sentence = Sentence {
                id: sid,
                text,
                mentions,
                candidates,
            };
            sentence.validate()?;
            sentences.push(sentence);
        }
        documents.push(Document {
            id: doc_id,
            sentences,
            split,
        });
    }
    let corpus = Corpus::new(documents);
    corpus.validate()?;
    Ok(corpus)
}

fn format_for(path: &Path, config: &Config) -> CorpusFormat {
    config
        .format
        .unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("xml") => CorpusFormat::Xml,
            _ => CorpusFormat::Jsonl,
        })
}

/// Loads a corpus file and returns it with the raw bytes (for hashing).
pub fn load_corpus(path: &Path, config: &Config) -> anyhow::Result<(Corpus, Vec<u8>)> {
    let bytes = std::fs::read(path).with_context(|| format!("reading corpus {}", path.display()))?;
    let text = std::str::from_utf8(&bytes).with_context(|| format!("corpus {} is not UTF-8", path.display()))?;
    let corpus = match format_for(path, config) {
        CorpusFormat::Jsonl => read_jsonl(text, config),
        CorpusFormat::Xml => read_xml(text, config),
    }
    .with_context(|| format!("loading corpus {}", path.display()))?;
    Ok((corpus, bytes))
}

/// Raw text to documents: blank lines separate documents, sentences are split
/// automatically, and entities come from the rsID pattern and the gazetteer.
/// Documents are `doc1`, `doc2`, ...; sentences `s1`, `s2`, ... within each.
pub fn raw_text_corpus(text: &str, gazetteer: &Gazetteer) -> Corpus {
    let mut documents = Vec::new();
    let mut block = Vec::new();
    let flush = |block: &mut Vec<&str>, documents: &mut Vec<Document>| {
        if block.is_empty() {
            return;
        }
        let body = block.join(" ");
        block.clear();
        let doc_id = format!("doc{}", documents.len() + 1);
        let sentences = split_sentences(&body)
            .into_iter()
            .enumerate()
            .map(|(i, (_, s))| {
                let mut sentence = analyze_raw_sentence(&format!("{doc_id}:s{}", i + 1), &s, gazetteer);
                sentence.id = format!("s{}", i + 1);
                sentence
            })
            .collect();
        documents.push(Document {
            id: doc_id,
            sentences,
            split: SplitTag::Unsplit,
        });
    };
    for line in text.lines() {
        if line.trim().is_empty() {
            flush(&mut block, &mut documents);
        } else {
            block.push(line.trim());
        }
    }
    flush(&mut block, &mut documents);
    Corpus::new(documents)
}
