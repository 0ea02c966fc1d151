//! Versioned JSON model files.

use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use snpassoc_core::confidence::MmsModel;
use snpassoc_core::nnb::NeutralDetector;

pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelFile {
    Neutral { version: u32, detector: NeutralDetector },
    Mms { version: u32, model: MmsModel },
}

impl ModelFile {
    pub fn neutral(detector: NeutralDetector) -> Self {
        ModelFile::Neutral {
            version: MODEL_VERSION,
            detector,
        }
    }

    pub fn mms(model: MmsModel) -> Self {
        ModelFile::Mms {
            version: MODEL_VERSION,
            model,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let mut model: ModelFile = serde_json::from_str(text).context("parsing model file")?;
        let version = match &model {
            ModelFile::Neutral { version, .. } | ModelFile::Mms { version, .. } => *version,
        };
        if version != MODEL_VERSION {
            bail!("model file version {version} is not supported (expected {MODEL_VERSION})");
        }
        match &mut model {
            ModelFile::Neutral { detector, .. } => detector.prepare()?,
            ModelFile::Mms { model, .. } => model.prepare()?,
        }
        Ok(model)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading model {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("loading model {}", path.display()))
    }

    pub fn load_neutral(path: &Path) -> anyhow::Result<NeutralDetector> {
        match Self::load(path)? {
            ModelFile::Neutral { detector, .. } => Ok(detector),
            ModelFile::Mms { .. } => bail!("{} holds a confidence model, not a neutral detector", path.display()),
        }
    }

    pub fn load_mms(path: &Path) -> anyhow::Result<MmsModel> {
        match Self::load(path)? {
            ModelFile::Mms { model, .. } => Ok(model),
            ModelFile::Neutral { .. } => bail!("{} holds a neutral detector, not a confidence model", path.display()),
        }
    }
}
