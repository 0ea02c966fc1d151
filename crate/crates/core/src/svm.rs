//! Binary kernel SVM trained with sequential minimal optimization.
//!
//! The solver follows the simplified SMO scheme: sweep over examples that
//! violate the KKT conditions, pair each with a second index drawn from a
//! seeded generator, and solve the two-variable subproblem analytically. When
//! the drawn partner makes no progress the remaining indices are tried in
//! cyclic order from that starting point. Training stops after `max_passes`
//! consecutive sweeps without an update.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::Vocabulary;
use crate::kernel::{gram_matrix, is_normalized, normalize, raw, self_kernel, KernelSpec, Payload};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoParams {
    #[serde(rename = "C")]
    pub c: f64,
    pub tol: f64,
    pub max_passes: usize,
    pub seed: u64,
    /// Hard cap on successful pair updates.
    pub max_updates: usize,
}

impl Default for SmoParams {
    fn default() -> Self {
        SmoParams {
            c: 1.0,
            tol: 1e-3,
            max_passes: 50,
            seed: 0,
            max_updates: 1_000_000,
        }
    }
}

impl SmoParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidArgument(alloc::format!(
                "C must be positive, got {}",
                self.c
            )));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(alloc::format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// Labelled payloads with labels in {+1, -1}.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    pub payloads: Vec<Payload>,
    pub labels: Vec<i8>,
}

impl TrainingSet {
    pub fn new(payloads: Vec<Payload>, labels: Vec<i8>) -> Result<Self> {
        if payloads.len() != labels.len() {
            return Err(Error::InvalidArgument("payload and label counts differ".into()));
        }
        if let Some(bad) = labels.iter().find(|&&y| y != 1 && y != -1) {
            return Err(Error::InvalidArgument(alloc::format!("label {bad} is not ±1")));
        }
        if payloads.is_empty() {
            return Err(Error::DegenerateTrainingSet("no training examples".into()));
        }
        if !labels.contains(&1) || !labels.contains(&-1) {
            return Err(Error::DegenerateTrainingSet("training data has a single class".into()));
        }
        Ok(TrainingSet { payloads, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// A trained model: support payloads with their dual coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub kernel_spec: KernelSpec,
    #[serde(rename = "C")]
    pub c: f64,
    pub bias: f64,
    /// Positions of the support vectors in the training set.
    pub support_indices: Vec<usize>,
    pub alphas: Vec<f64>,
    pub labels: Vec<i8>,
    pub payloads: Vec<Payload>,
    pub vocabulary: Option<Vocabulary>,
    #[serde(skip)]
    sv_self: Vec<f64>,
}

impl SvmModel {
    fn support_self(&self, i: usize) -> Result<f64> {
        match self.sv_self.get(i) {
            Some(v) => Ok(*v),
            None => self_kernel(&self.kernel_spec, &self.payloads[i]),
        }
    }

    /// Caches support-vector self-kernels; call after deserializing.
    pub fn prepare(&mut self) -> Result<()> {
        self.sv_self = self
            .payloads
            .iter()
            .map(|p| self_kernel(&self.kernel_spec, p))
            .collect::<Result<_>>()?;
        Ok(())
    }

    /// Signed score `Σ αᵢ yᵢ K(xᵢ, x) + b`.
    pub fn decision(&self, example: &Payload) -> Result<f64> {
        if let (Some(vocab), Payload::Sparse(x)) = (&self.vocabulary, example) {
            if x.vocab_id != vocab.id() {
                return Err(Error::Kernel("example vectorized with a different vocabulary".into()));
            }
        }
        let normalized = is_normalized(&self.kernel_spec);
        let x_self = if normalized {
            self_kernel(&self.kernel_spec, example)?
        } else {
            0.0
        };
        let mut score = self.bias;
        for i in 0..self.payloads.len() {
            let mut k = raw(&self.kernel_spec, &self.payloads[i], example)?;
            if normalized {
                k = normalize(k, self.support_self(i)?, x_self);
            }
            score += self.alphas[i] * f64::from(self.labels[i]) * k;
        }
        Ok(score)
    }

    /// +1 when the score is ≥ 0, otherwise −1.
    pub fn predict(&self, example: &Payload) -> Result<i8> {
        Ok(if self.decision(example)? >= 0.0 { 1 } else { -1 })
    }

    pub fn n_support(&self) -> usize {
        self.alphas.len()
    }
}

/// Solver output over the full training set.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution {
    pub alphas: Vec<f64>,
    pub bias: f64,
    pub updates: usize,
    /// Dual objective after each successful pair update (first entry is the
    /// starting point, 0).
    pub objective_history: Vec<f64>,
}

/// Dual objective `Σα − ½ ΣΣ αᵢαⱼyᵢyⱼKᵢⱼ`.
pub fn dual_objective(gram: &[f64], labels: &[i8], alphas: &[f64]) -> f64 {
    let n = labels.len();
    let mut quad = 0.0;
    for i in 0..n {
        if alphas[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            quad += alphas[i] * alphas[j] * f64::from(labels[i] * labels[j]) * gram[i * n + j];
        }
    }
    alphas.iter().sum::<f64>() - 0.5 * quad
}

struct Solver<'a> {
    gram: &'a [f64],
    y: Vec<f64>,
    n: usize,
    c: f64,
    alpha: Vec<f64>,
    /// gᵢ = Σⱼ αⱼ yⱼ Kᵢⱼ
    g: Vec<f64>,
    b: f64,
}

const STEP_EPS: f64 = 1e-12;

impl Solver<'_> {
    fn k(&self, i: usize, j: usize) -> f64 {
        self.gram[i * self.n + j]
    }

    fn error(&self, i: usize) -> f64 {
        self.g[i] + self.b - self.y[i]
    }

    fn take_step(&mut self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        let (ai, aj) = (self.alpha[i], self.alpha[j]);
        let (yi, yj) = (self.y[i], self.y[j]);
        let (ei, ej) = (self.error(i), self.error(j));
        let (lo, hi) = if yi != yj {
            ((aj - ai).max(0.0), (self.c + aj - ai).min(self.c))
        } else {
            ((ai + aj - self.c).max(0.0), (ai + aj).min(self.c))
        };
        if hi - lo < STEP_EPS {
            return false;
        }
        let (kii, kjj, kij) = (self.k(i, i), self.k(j, j), self.k(i, j));
        let eta = 2.0 * kij - kii - kjj;
        if eta >= -STEP_EPS {
            return false;
        }
        let mut aj_new = (aj - yj * (ei - ej) / eta).clamp(lo, hi);
        if aj_new < STEP_EPS {
            aj_new = 0.0;
        } else if aj_new > self.c - STEP_EPS {
            aj_new = self.c;
        }
        if (aj_new - aj).abs() < STEP_EPS * (1.0 + aj_new + aj) {
            return false;
        }
        let mut ai_new = ai + yi * yj * (aj - aj_new);
        if ai_new < STEP_EPS {
            ai_new = 0.0;
        } else if ai_new > self.c - STEP_EPS {
            ai_new = self.c;
        }
        let (dai, daj) = (ai_new - ai, aj_new - aj);
        let b1 = self.b - ei - yi * dai * kii - yj * daj * kij;
        let b2 = self.b - ej - yi * dai * kij - yj * daj * kjj;
        self.b = if ai_new > 0.0 && ai_new < self.c {
            b1
        } else if aj_new > 0.0 && aj_new < self.c {
            b2
        } else {
            0.5 * (b1 + b2)
        };
        self.alpha[i] = ai_new;
        self.alpha[j] = aj_new;
        for k in 0..self.n {
            self.g[k] += yi * dai * self.gram[i * self.n + k] + yj * daj * self.gram[j * self.n + k];
        }
        true
    }

    fn violates(&self, i: usize, tol: f64) -> bool {
        let r = self.y[i] * self.error(i);
        (r < -tol && self.alpha[i] < self.c) || (r > tol && self.alpha[i] > 0.0)
    }

    fn objective(&self) -> f64 {
        let quad: f64 = (0..self.n).map(|i| self.alpha[i] * self.y[i] * self.g[i]).sum();
        self.alpha.iter().sum::<f64>() - 0.5 * quad
    }

    fn max_violation(&self, b: f64) -> f64 {
        (0..self.n)
            .map(|i| {
                let margin = self.y[i] * (self.g[i] + b);
                if self.alpha[i] <= 0.0 {
                    (1.0 - margin).max(0.0)
                } else if self.alpha[i] >= self.c {
                    (margin - 1.0).max(0.0)
                } else {
                    (margin - 1.0).abs()
                }
            })
            .fold(0.0, f64::max)
    }

    /// Bias satisfying every KKT condition when such a bias exists (the
    /// midpoint of the feasible interval), otherwise the bias minimizing the
    /// largest violation.
    fn final_bias(&self) -> f64 {
        let mut lower = f64::NEG_INFINITY;
        let mut upper = f64::INFINITY;
        for i in 0..self.n {
            // yᵢ(gᵢ + b) ≥ 1 ⟺ b ≥ t for yᵢ = +1 and b ≤ t for yᵢ = −1
            let t = self.y[i] - self.g[i];
            let free = self.alpha[i] > 0.0 && self.alpha[i] < self.c;
            let at_zero = self.alpha[i] <= 0.0;
            if free || (at_zero == (self.y[i] > 0.0)) {
                lower = lower.max(t);
            }
            if free || (at_zero != (self.y[i] > 0.0)) {
                upper = upper.min(t);
            }
        }
        if lower <= upper {
            return match (lower.is_finite(), upper.is_finite()) {
                (true, true) => 0.5 * (lower + upper),
                (true, false) => lower,
                (false, true) => upper,
                (false, false) => self.b,
            };
        }
        // convex piecewise-linear in b: ternary search between the breakpoints
        let (mut lo, mut hi) = (upper.min(lower), upper.max(lower));
        for _ in 0..200 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if self.max_violation(m1) <= self.max_violation(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let b = 0.5 * (lo + hi);
        if self.max_violation(self.b) < self.max_violation(b) {
            self.b
        } else {
            b
        }
    }
}

/// Solves the SVM dual over a precomputed Gram matrix.
pub fn smo_solve(gram: &[f64], labels: &[i8], params: &SmoParams) -> Result<DualSolution> {
    params.validate()?;
    let n = labels.len();
    if gram.len() != n * n {
        return Err(Error::InvalidArgument("Gram matrix size does not match labels".into()));
    }
    if !labels.contains(&1) || !labels.contains(&-1) {
        return Err(Error::DegenerateTrainingSet("training data has a single class".into()));
    }
    if let Some(bad) = gram.iter().find(|v| !v.is_finite()) {
        return Err(Error::Kernel(alloc::format!("non-finite kernel value {bad}")));
    }
    let mut s = Solver {
        gram,
        y: labels.iter().map(|&y| f64::from(y)).collect(),
        n,
        c: params.c,
        alpha: vec![0.0; n],
        g: vec![0.0; n],
        b: 0.0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut history = vec![0.0];
    let mut updates = 0usize;
    let mut passes = 0usize;
    'outer: while passes < params.max_passes {
        let mut changed = 0usize;
        for i in 0..n {
            if !s.violates(i, params.tol) {
                continue;
            }
            let r = rng.random_range(0..n - 1);
            let start = if r >= i { r + 1 } else { r };
            for step in 0..n {
                let j = (start + step) % n;
                if s.take_step(i, j) {
                    changed += 1;
                    updates += 1;
                    history.push(s.objective());
                    if updates >= params.max_updates {
                        log::warn!("SMO stopped after {updates} updates without converging");
                        break 'outer;
                    }
                    break;
                }
            }
        }
        if changed == 0 {
            passes += 1;
        } else {
            passes = 0;
        }
    }
    let bias = s.final_bias();
    Ok(DualSolution {
        alphas: s.alpha,
        bias,
        updates,
        objective_history: history,
    })
}

/// Trains a model and returns it with the full dual solution.
pub fn smo_train_traced(
    data: &TrainingSet,
    kernel_spec: KernelSpec,
    params: &SmoParams,
) -> Result<(SvmModel, DualSolution)> {
    params.validate()?;
    let gram = gram_matrix(&kernel_spec, &data.payloads)?;
    let solution = smo_solve(&gram, &data.labels, params)?;
    let support_indices: Vec<usize> = (0..data.len()).filter(|&i| solution.alphas[i] > 0.0).collect();
    let mut model = SvmModel {
        kernel_spec,
        c: params.c,
        bias: solution.bias,
        alphas: support_indices.iter().map(|&i| solution.alphas[i]).collect(),
        labels: support_indices.iter().map(|&i| data.labels[i]).collect(),
        payloads: support_indices.iter().map(|&i| data.payloads[i].clone()).collect(),
        support_indices,
        vocabulary: None,
        sv_self: Vec::new(),
    };
    model.prepare()?;
    Ok((model, solution))
}

pub fn smo_train(data: &TrainingSet, kernel_spec: KernelSpec, params: &SmoParams) -> Result<SvmModel> {
    smo_train_traced(data, kernel_spec, params).map(|(m, _)| m)
}

/// Largest KKT violation of a dual solution, measured on `yᵢ f(xᵢ)`.
pub fn max_kkt_violation(gram: &[f64], labels: &[i8], alphas: &[f64], bias: f64, c: f64) -> f64 {
    let n = labels.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let f: f64 = (0..n)
            .map(|j| alphas[j] * f64::from(labels[j]) * gram[i * n + j])
            .sum::<f64>()
            + bias;
        let margin = f64::from(labels[i]) * f;
        let v = if alphas[i] <= 0.0 {
            (1.0 - margin).max(0.0)
        } else if alphas[i] >= c {
            (margin - 1.0).max(0.0)
        } else {
            (margin - 1.0).abs()
        };
        worst = worst.max(v);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::SparseVector;

    fn point(x: &[f64]) -> Payload {
        Payload::Sparse(SparseVector::from_pairs(
            x.iter().enumerate().map(|(i, v)| (i as u32, *v)),
            0,
        ))
    }

    #[test]
    fn two_point_analytic_solution() {
        // Dual: max 2a − ½·a²·(K11 + K22 + 2·K12·1) with a1 = a2 = a, K = x·x'
        // → max 2a − 2a², a = 0.5, w = 1, b = 0.
        let data = TrainingSet::new(alloc::vec![point(&[1.0]), point(&[-1.0])], alloc::vec![1, -1]).unwrap();
        let params = SmoParams {
            c: 10.0,
            ..SmoParams::default()
        };
        let m = smo_train(&data, KernelSpec::Linear, &params).unwrap();
        assert_eq!(m.alphas.len(), 2);
        for a in &m.alphas {
            assert!((a - 0.5).abs() < 1e-9, "{a}");
        }
        assert!(m.bias.abs() < 1e-9);
        assert!((m.decision(&point(&[1.0])).unwrap() - 1.0).abs() < 1e-9);
        assert!((m.decision(&point(&[-1.0])).unwrap() + 1.0).abs() < 1e-9);
        // tie rule
        let zero = m.decision(&point(&[0.0])).unwrap();
        assert!(zero.abs() < 1e-9);
        let mut exact = m.clone();
        exact.bias = 0.0;
        exact.alphas = alloc::vec![0.5, 0.5];
        assert_eq!(exact.decision(&point(&[0.0])).unwrap(), 0.0);
        assert_eq!(exact.predict(&point(&[0.0])).unwrap(), 1);
        // empty vector scores the bias
        assert_eq!(exact.decision(&Payload::Sparse(SparseVector::default())).unwrap(), 0.0);
    }

    #[test]
    fn separable_four_points() {
        let xs = [[2.0, 2.0], [3.0, 1.0], [-1.0, -2.0], [-2.0, 0.5]];
        let ys = [1, 1, -1, -1];
        let data = TrainingSet::new(xs.iter().map(|x| point(x)).collect(), ys.to_vec()).unwrap();
        let m = smo_train(&data, KernelSpec::Linear, &SmoParams::default()).unwrap();
        for (x, y) in xs.iter().zip(ys) {
            assert_eq!(m.predict(&point(x)).unwrap(), y);
        }
        let eq: f64 = m.alphas.iter().zip(&m.labels).map(|(a, y)| a * f64::from(*y)).sum();
        assert!(eq.abs() < 1e-9);
    }

    #[test]
    fn single_class_is_degenerate() {
        let err = TrainingSet::new(alloc::vec![point(&[1.0]), point(&[2.0])], alloc::vec![1, 1]).unwrap_err();
        assert!(matches!(err, Error::DegenerateTrainingSet(_)));
    }

    #[test]
    fn rejects_bad_params() {
        let data = TrainingSet::new(alloc::vec![point(&[1.0]), point(&[-1.0])], alloc::vec![1, -1]).unwrap();
        let p = SmoParams {
            c: 0.0,
            ..SmoParams::default()
        };
        assert!(smo_train(&data, KernelSpec::Linear, &p).is_err());
        let p = SmoParams {
            tol: 0.0,
            ..SmoParams::default()
        };
        assert!(smo_train(&data, KernelSpec::Linear, &p).is_err());
    }

    #[test]
    fn non_finite_kernel_is_an_error() {
        let gram = [1.0, f64::NAN, f64::NAN, 1.0];
        assert!(matches!(
            smo_solve(&gram, &[1, -1], &SmoParams::default()),
            Err(Error::Kernel(_))
        ));
    }

    #[test]
    fn deterministic_for_seed() {
        let xs: Vec<Payload> = (0..12)
            .map(|i| point(&[(i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()]))
            .collect();
        let ys: Vec<i8> = (0..12).map(|i| if i % 3 == 0 { 1 } else { -1 }).collect();
        let data = TrainingSet::new(xs, ys).unwrap();
        let p = SmoParams {
            seed: 9,
            ..SmoParams::default()
        };
        let a = smo_train(&data, KernelSpec::Linear, &p).unwrap();
        let b = smo_train(&data, KernelSpec::Linear, &p).unwrap();
        assert_eq!(a, b);
    }
}
