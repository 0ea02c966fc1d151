//! Kernel functions over sparse vectors and parse trees.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::tree::ParseTree;

pub const DEFAULT_LAMBDA: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelSpec {
    /// Plain dot product.
    Linear,
    /// Normalized dot product of global-context n-gram vectors.
    GlobalContext,
    /// Normalized dot product of local-context vectors.
    LocalContext,
    /// Normalized Collins–Duffy subtree kernel with decay `lambda`.
    Subtree { lambda: f64 },
}

impl KernelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Linear => "linear",
            KernelSpec::GlobalContext => "global_context",
            KernelSpec::LocalContext => "local_context",
            KernelSpec::Subtree { .. } => "subtree",
        }
    }
}

/// Example payload a kernel operates on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    Sparse(SparseVector),
    Tree(ParseTree),
}

/// `k / sqrt(kaa * kbb)`, zero when either self-similarity is zero.
pub fn normalize(k: f64, kaa: f64, kbb: f64) -> f64 {
    if kaa <= 0.0 || kbb <= 0.0 {
        0.0
    } else {
        k / libm::sqrt(kaa * kbb)
    }
}

pub fn normalized_dot(a: &SparseVector, b: &SparseVector) -> f64 {
    normalize(a.dot(b), a.norm_sq(), b.norm_sq())
}

/// Sum over the three context blocks of per-block dot products, normalized.
/// Blocks occupy disjoint key prefixes, so this is the normalized dot product
/// of the full vectors.
pub fn kernel_global_context(a: &SparseVector, b: &SparseVector) -> f64 {
    normalized_dot(a, b)
}

pub fn kernel_local_context(a: &SparseVector, b: &SparseVector) -> f64 {
    normalized_dot(a, b)
}

/// Tree flattened in post-order with interned production ids.
struct Flat {
    production: Vec<Option<u32>>,
    preterminal: Vec<bool>,
    children: Vec<Vec<usize>>,
}

fn flatten(tree: &ParseTree, interner: &mut BTreeMap<alloc::string::String, u32>, out: &mut Flat) -> usize {
    let kids: Vec<usize> = tree.children.iter().map(|c| flatten(c, interner, out)).collect();
    let production = tree.production().map(|p| {
        let next = interner.len() as u32;
        *interner.entry(p).or_insert(next)
    });
    out.production.push(production);
    out.preterminal.push(tree.is_preterminal());
    out.children.push(kids);
    out.production.len() - 1
}

fn flat(tree: &ParseTree, interner: &mut BTreeMap<alloc::string::String, u32>) -> Flat {
    let mut f = Flat {
        production: Vec::new(),
        preterminal: Vec::new(),
        children: Vec::new(),
    };
    flatten(tree, interner, &mut f);
    f
}

/// Unnormalized Collins–Duffy kernel: the sum over node pairs of
/// Δ(n1, n2), with Δ = 0 for different productions, λ for matching
/// preterminals and λ·Π(1 + Δ(child pairs)) otherwise.
pub fn subtree_raw(a: &ParseTree, b: &ParseTree, lambda: f64) -> f64 {
    let mut interner = BTreeMap::new();
    let fa = flat(a, &mut interner);
    let fb = flat(b, &mut interner);
    let nb = fb.production.len();
    let mut delta = vec![0.0f64; fa.production.len() * nb];
    let mut total = 0.0;
    for i in 0..fa.production.len() {
        let Some(pa) = fa.production[i] else { continue };
        for j in 0..nb {
            if fb.production[j] != Some(pa) {
                continue;
            }
            let d = if fa.preterminal[i] {
                lambda
            } else {
                fa.children[i]
                    .iter()
                    .zip(&fb.children[j])
                    .fold(lambda, |acc, (&ci, &cj)| acc * (1.0 + delta[ci * nb + cj]))
            };
            delta[i * nb + j] = d;
            total += d;
        }
    }
    total
}

pub fn kernel_subtree(a: &ParseTree, b: &ParseTree, lambda: f64) -> f64 {
    normalize(
        subtree_raw(a, b, lambda),
        subtree_raw(a, a, lambda),
        subtree_raw(b, b, lambda),
    )
}

/// Unnormalized kernel value; used with [`self_kernel`] to build normalized
/// Gram matrices without recomputing self-similarities.
pub fn raw(spec: &KernelSpec, a: &Payload, b: &Payload) -> Result<f64> {
    let v = match (spec, a, b) {
        (KernelSpec::Subtree { lambda }, Payload::Tree(x), Payload::Tree(y)) => subtree_raw(x, y, *lambda),
        (KernelSpec::Subtree { .. }, _, _) => return Err(Error::Kernel("subtree kernel needs tree payloads".into())),
        (_, Payload::Sparse(x), Payload::Sparse(y)) => {
            if x.vocab_id != y.vocab_id {
                return Err(Error::Kernel(format!(
                    "vocabulary mismatch ({:016x} vs {:016x})",
                    x.vocab_id, y.vocab_id
                )));
            }
            x.dot(y)
        }
        (spec, _, _) => return Err(Error::Kernel(format!("{} kernel needs sparse payloads", spec.name()))),
    };
    if !v.is_finite() {
        return Err(Error::Kernel("non-finite kernel value".into()));
    }
    Ok(v)
}

pub fn self_kernel(spec: &KernelSpec, a: &Payload) -> Result<f64> {
    raw(spec, a, a)
}

pub fn is_normalized(spec: &KernelSpec) -> bool {
    !matches!(spec, KernelSpec::Linear)
}

/// Kernel value with normalization applied where the spec asks for it.
pub fn evaluate(spec: &KernelSpec, a: &Payload, b: &Payload) -> Result<f64> {
    let k = raw(spec, a, b)?;
    if is_normalized(spec) {
        Ok(normalize(k, self_kernel(spec, a)?, self_kernel(spec, b)?))
    } else {
        Ok(k)
    }
}

/// Row-major Gram matrix of `payloads`.
pub fn gram_matrix(spec: &KernelSpec, payloads: &[Payload]) -> Result<Vec<f64>> {
    let n = payloads.len();
    let selfs = payloads
        .iter()
        .map(|p| self_kernel(spec, p))
        .collect::<Result<Vec<_>>>()?;
    let mut g = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let k = if i == j {
                selfs[i]
            } else {
                raw(spec, &payloads[i], &payloads[j])?
            };
            let k = if is_normalized(spec) {
                normalize(k, selfs[i], selfs[j])
            } else {
                k
            };
            g[i * n + j] = k;
            g[j * n + i] = k;
        }
    }
    Ok(g)
}
