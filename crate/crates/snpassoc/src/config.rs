//! TOML configuration: corpus ingestion mapping, lexicon paths and
//! hyperparameters. Every key is optional.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;
use snpassoc_core::confidence::ConfidenceLevel;
use snpassoc_core::corpus::GoldLabel;
use snpassoc_core::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    Jsonl,
    Xml,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Corpus format; guessed from the file extension when unset.
    pub format: Option<CorpusFormat>,
    /// Corpus label string → positive / negative / neutral.
    pub label_map: BTreeMap<String, String>,
    /// Corpus confidence string → low / medium / high.
    pub confidence_map: BTreeMap<String, String>,

    pub document_element: String,
    pub sentence_element: String,
    pub entity_element: String,
    pub pair_element: String,
    pub id_attr: String,
    pub text_attr: String,
    /// Entity offsets as `start-end`; the first segment is used when several
    /// are separated by `;`.
    pub offset_attr: String,
    pub offset_end_inclusive: bool,
    pub entity_type_attr: String,
    pub snp_types: Vec<String>,
    pub phenotype_types: Vec<String>,
    pub e1_attr: String,
    pub e2_attr: String,
    pub label_attr: String,
    pub confidence_attr: String,
    /// Attribute on the document element carrying `train` / `test`.
    pub split_attr: String,

    pub cues: Option<PathBuf>,
    pub connectors: Option<PathBuf>,
    pub triggers: Option<PathBuf>,
    pub modality_lexicon: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub trees: Option<PathBuf>,

    pub seed: Option<u64>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    pub tol: Option<f64>,
    pub max_passes: Option<usize>,
    pub lambda: Option<f64>,
    pub n_max: Option<usize>,
    pub window: Option<usize>,
    pub k: Option<usize>,
    pub pvalue_buckets: Option<Vec<f64>>,
    pub merge_high_medium: Option<bool>,
}

impl Default for Config {
    fn default() -> Self {
        let s = |v: &str| v.to_string();
        Config {
            format: None,
            label_map: BTreeMap::new(),
            confidence_map: BTreeMap::new(),
            document_element: s("document"),
            sentence_element: s("sentence"),
            entity_element: s("entity"),
            pair_element: s("pair"),
            id_attr: s("id"),
            text_attr: s("text"),
            offset_attr: s("charOffset"),
            offset_end_inclusive: true,
            entity_type_attr: s("type"),
            snp_types: vec![s("SNP")],
            phenotype_types: vec![s("Phenotype")],
            e1_attr: s("e1"),
            e2_attr: s("e2"),
            label_attr: s("type"),
            confidence_attr: s("confidence"),
            split_attr: s("split"),
            cues: None,
            connectors: None,
            triggers: None,
            modality_lexicon: None,
            gazetteer: None,
            trees: None,
            seed: None,
            c: None,
            tol: None,
            max_passes: None,
            lambda: None,
            n_max: None,
            window: None,
            k: None,
            pvalue_buckets: None,
            merge_high_medium: None,
        }
    }
}

fn lookup<'a>(map: &'a BTreeMap<String, String>, raw: &'a str) -> &'a str {
    map.get(raw)
        .or_else(|| map.iter().find(|(k, _)| k.eq_ignore_ascii_case(raw)).map(|(_, v)| v))
        .map(String::as_str)
        .unwrap_or(raw)
}

impl Config {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut config: Config = toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        // relative lexicon paths are taken relative to the config file
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [
            &mut config.cues,
            &mut config.connectors,
            &mut config.triggers,
            &mut config.modality_lexicon,
            &mut config.gazetteer,
            &mut config.trees,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(config)
    }

    pub fn map_label(&self, raw: &str) -> Result<GoldLabel, Error> {
        let mapped = lookup(&self.label_map, raw.trim());
        mapped
            .to_ascii_lowercase()
            .parse()
            .map_err(|_| Error::UnknownLabel(raw.to_string()))
    }

    pub fn map_confidence(&self, raw: &str) -> Result<ConfidenceLevel, Error> {
        let mapped = lookup(&self.confidence_map, raw.trim());
        mapped.parse().map_err(|_| Error::UnknownLabel(raw.to_string()))
    }

    pub fn is_snp_type(&self, t: &str) -> bool {
        self.snp_types.iter().any(|s| s.eq_ignore_ascii_case(t))
    }

    pub fn is_phenotype_type(&self, t: &str) -> bool {
        self.phenotype_types.iter().any(|s| s.eq_ignore_ascii_case(t))
    }
}
