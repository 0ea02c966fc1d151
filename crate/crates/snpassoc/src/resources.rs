//! Lexicon loading from disk with fallback to the bundled defaults, and
//! content hashes for report provenance.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;
use sha2::{Digest, Sha256};
use snpassoc_core::lexicon::{
    Lexicon, DEFAULT_CONNECTORS, DEFAULT_CUES, DEFAULT_GAZETTEER, DEFAULT_MODALITY, DEFAULT_TRIGGERS,
};
use snpassoc_core::pipeline::Resources;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Optional override path per lexicon.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LexiconPaths {
    pub cues: Option<PathBuf>,
    pub connectors: Option<PathBuf>,
    pub triggers: Option<PathBuf>,
    pub modality: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
}

fn read_or_default(path: Option<&Path>, default: &str) -> anyhow::Result<String> {
    match path {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading lexicon {}", p.display())),
        None => Ok(default.to_string()),
    }
}

fn parse<T: snpassoc_core::lexicon::EntryTag>(
    name: &str,
    path: Option<&Path>,
    text: &str,
) -> anyhow::Result<Lexicon<T>> {
    Lexicon::parse(text).with_context(|| match path {
        Some(p) => format!("parsing {name} lexicon {}", p.display()),
        None => format!("parsing bundled {name} lexicon"),
    })
}

/// Loaded lexicons plus `name → sha256` of each lexicon's text.
pub fn load_resources(paths: &LexiconPaths) -> anyhow::Result<(Resources, BTreeMap<String, String>)> {
    let cues = read_or_default(paths.cues.as_deref(), DEFAULT_CUES)?;
    let connectors = read_or_default(paths.connectors.as_deref(), DEFAULT_CONNECTORS)?;
    let triggers = read_or_default(paths.triggers.as_deref(), DEFAULT_TRIGGERS)?;
    let modality = read_or_default(paths.modality.as_deref(), DEFAULT_MODALITY)?;
    let gazetteer = read_or_default(paths.gazetteer.as_deref(), DEFAULT_GAZETTEER)?;
    let resources = Resources {
        cues: parse("cue", paths.cues.as_deref(), &cues)?,
        connectors: parse("connector", paths.connectors.as_deref(), &connectors)?,
        triggers: parse("trigger", paths.triggers.as_deref(), &triggers)?,
        modality: parse("modality", paths.modality.as_deref(), &modality)?,
        gazetteer: parse("gazetteer", paths.gazetteer.as_deref(), &gazetteer)?,
    };
    let hashes = [
        ("cues", &cues),
        ("connectors", &connectors),
        ("triggers", &triggers),
        ("modality", &modality),
        ("gazetteer", &gazetteer),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), sha256_hex(v.as_bytes())))
    .collect();
    Ok((resources, hashes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_override() {
        let (r, h) = load_resources(&LexiconPaths::default()).unwrap();
        assert!(r.cues.len() > 5);
        assert_eq!(h.len(), 5);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("cues.txt");
        std::fs::write(&p, "# test\nnever\n").unwrap();
        let (r2, h2) = load_resources(&LexiconPaths {
            cues: Some(p),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(r2.cues.len(), 1);
        assert_ne!(h["cues"], h2["cues"]);
        assert_eq!(h["gazetteer"], h2["gazetteer"]);
    }

    #[test]
    fn bad_lexicon_reports_path() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("modality.txt");
        std::fs::write(&p, "may\tsometimes\n").unwrap();
        let err = load_resources(&LexiconPaths {
            modality: Some(p),
            ..Default::default()
        })
        .unwrap_err();
        assert!(format!("{err:#}").contains("modality.txt"));
    }
}
