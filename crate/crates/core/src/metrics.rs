//! Precision, recall and F1 over id-aligned predictions.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Gold instances of the class.
    pub support: usize,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    /// No predictions of this class; precision reported as 0.
    pub precision_undefined: bool,
    /// No gold instances of this class; recall reported as 0.
    pub recall_undefined: bool,
}

impl ClassMetrics {
    pub fn from_counts(class: &str, tp: usize, fp: usize, fn_: usize) -> Self {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        ClassMetrics {
            class: class.to_string(),
            precision,
            recall,
            f1,
            support: tp + fn_,
            tp,
            fp,
            fn_,
            precision_undefined: tp + fp == 0,
            recall_undefined: tp + fn_ == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub classes: Vec<ClassMetrics>,
    pub macro_f1: f64,
    pub n: usize,
}

impl Metrics {
    pub fn class(&self, name: &str) -> Option<&ClassMetrics> {
        self.classes.iter().find(|c| c.class == name)
    }
}

/// Scores predictions against gold labels, matched by id. Both sides must
/// carry exactly the same ids. Rows follow `classes`.
pub fn score<L: PartialEq>(
    predictions: &[(String, L)],
    gold: &[(String, L)],
    classes: &[(L, &str)],
) -> Result<Metrics> {
    if gold.is_empty() {
        return Err(Error::TooSmall { needed: 1, got: 0 });
    }
    let mut by_id: BTreeMap<&str, &L> = BTreeMap::new();
    for (id, l) in gold {
        if by_id.insert(id, l).is_some() {
            return Err(Error::Alignment(format!("duplicate gold id `{id}`")));
        }
    }
    if predictions.len() != gold.len() {
        return Err(Error::Alignment(format!(
            "{} predictions for {} gold items",
            predictions.len(),
            gold.len()
        )));
    }
    let mut counts = alloc::vec![(0usize, 0usize, 0usize); classes.len()];
    let mut seen = BTreeMap::new();
    for (id, pred) in predictions {
        let g = by_id
            .get(id.as_str())
            .ok_or_else(|| Error::Alignment(format!("prediction `{id}` has no gold label")))?;
        if seen.insert(id.as_str(), ()).is_some() {
            return Err(Error::Alignment(format!("duplicate prediction id `{id}`")));
        }
        for (k, (class, _)) in classes.iter().enumerate() {
            match (pred == class, *g == class) {
                (true, true) => counts[k].0 += 1,
                (true, false) => counts[k].1 += 1,
                (false, true) => counts[k].2 += 1,
                (false, false) => {}
            }
        }
    }
    let rows: Vec<ClassMetrics> = classes
        .iter()
        .zip(counts)
        .map(|((_, name), (tp, fp, fn_))| ClassMetrics::from_counts(name, tp, fp, fn_))
        .collect();
    let macro_f1 = rows.iter().map(|r| r.f1).sum::<f64>() / rows.len().max(1) as f64;
    Ok(Metrics {
        classes: rows,
        macro_f1,
        n: gold.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(labels: &[u8]) -> Vec<(String, u8)> {
        labels.iter().enumerate().map(|(i, l)| (format!("c{i}"), *l)).collect()
    }

    const BIN: [(u8, &str); 2] = [(1, "positive"), (0, "negative")];

    #[test]
    fn formula() {
        // TP=3, FP=1, FN=2
        let gold = ids(&[1, 1, 1, 1, 1, 0, 0]);
        let pred = ids(&[1, 1, 1, 0, 0, 1, 0]);
        let m = score(&pred, &gold, &BIN).unwrap();
        let p = m.class("positive").unwrap();
        assert_eq!((p.tp, p.fp, p.fn_), (3, 1, 2));
        assert_eq!(p.precision, 0.75);
        assert_eq!(p.recall, 0.6);
        assert!((p.f1 - 2.0 * 0.45 / 1.35).abs() < 1e-12);
    }

    #[test]
    fn perfect_and_degenerate() {
        let gold = ids(&[1, 0, 1]);
        let m = score(&gold, &gold, &BIN).unwrap();
        assert_eq!(m.class("positive").unwrap().f1, 1.0);
        let m = score(&ids(&[0, 0, 0]), &gold, &BIN).unwrap();
        let p = m.class("positive").unwrap();
        assert!(p.precision_undefined);
        assert_eq!((p.precision, p.f1), (0.0, 0.0));
    }

    #[test]
    fn alignment_errors() {
        let gold = ids(&[1, 0]);
        let mut pred = ids(&[1, 0]);
        pred[1].0 = "zz".into();
        assert!(matches!(score(&pred, &gold, &BIN), Err(Error::Alignment(_))));
        assert!(matches!(score(&ids(&[1]), &gold, &BIN), Err(Error::Alignment(_))));
        assert!(matches!(score::<u8>(&[], &[], &BIN), Err(Error::TooSmall { .. })));
    }

    #[test]
    fn permutation_invariant() {
        let gold = ids(&[1, 0, 1, 1, 0]);
        let pred = ids(&[1, 1, 0, 1, 0]);
        let mut shuffled = pred.clone();
        shuffled.reverse();
        assert_eq!(
            score(&pred, &gold, &BIN).unwrap(),
            score(&shuffled, &gold, &BIN).unwrap()
        );
    }
}
