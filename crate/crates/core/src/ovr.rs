//! One-vs-rest multiclass wrapper around the binary SVM.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{KernelSpec, Payload};
use crate::svm::{smo_train, SmoParams, SvmModel, TrainingSet};

/// Classes are kept in ascending order. With exactly two classes a single
/// binary model is trained whose positive side is the first class, so the
/// prediction matches the binary sign rule; otherwise there is one model per
/// class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OvrModel<L> {
    pub classes: Vec<L>,
    pub models: Vec<SvmModel>,
}

pub fn ovr_train<L: Ord + Clone>(
    payloads: &[Payload],
    labels: &[L],
    kernel_spec: KernelSpec,
    params: &SmoParams,
) -> Result<OvrModel<L>> {
    if payloads.len() != labels.len() {
        return Err(Error::InvalidArgument("payload and label counts differ".into()));
    }
    let classes: Vec<L> = labels.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if classes.len() < 2 {
        return Err(Error::DegenerateTrainingSet(alloc::format!(
            "one-vs-rest needs at least 2 classes, found {}",
            classes.len()
        )));
    }
    let binary_for = |class: &L| -> Result<SvmModel> {
        let ys = labels.iter().map(|l| if l == class { 1 } else { -1 }).collect();
        smo_train(&TrainingSet::new(payloads.to_vec(), ys)?, kernel_spec, params)
    };
    let models = if classes.len() == 2 {
        alloc::vec![binary_for(&classes[0])?]
    } else {
        classes.iter().map(binary_for).collect::<Result<Vec<_>>>()?
    };
    Ok(OvrModel { classes, models })
}

impl<L: Clone> OvrModel<L> {
    /// One score per class, in class order.
    pub fn decision_scores(&self, example: &Payload) -> Result<Vec<f64>> {
        if self.classes.len() == 2 && self.models.len() == 1 {
            let s = self.models[0].decision(example)?;
            return Ok(alloc::vec![s, -s]);
        }
        self.models.iter().map(|m| m.decision(example)).collect()
    }

    /// Argmax of the class scores; ties go to the earliest class.
    pub fn predict(&self, example: &Payload) -> Result<L> {
        let scores = self.decision_scores(example)?;
        let mut best = 0;
        for (i, s) in scores.iter().enumerate().skip(1) {
            if *s > scores[best] {
                best = i;
            }
        }
        Ok(self.classes[best].clone())
    }

    /// Restores kernel caches after deserializing.
    pub fn prepare(&mut self) -> Result<()> {
        self.models.iter_mut().try_for_each(SvmModel::prepare)
    }
}
