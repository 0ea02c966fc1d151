//! Independent reference implementations used to check the library.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use snpassoc_core::tree::ParseTree;

/// Truth table for the association rule written straight from its wording:
/// a candidate is not associated when negation scope covers both entities, or
/// covers one entity with the other to its left or right, or when the
/// candidate is neutral. Every other combination is associated.
/// Bits: [both inside, left+inside, right+inside, both left, both right,
/// left+right, neutral].
pub fn nnb_oracle(bits: [bool; 7]) -> bool {
    let covered = [0usize, 1, 2].iter().any(|&i| bits[i]);
    let neutral = bits[6];
    !(covered || neutral)
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

pub fn dual_value(gram: &[f64], y: &[i8], alpha: &[f64]) -> f64 {
    let n = y.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += alpha[i] * alpha[j] * f64::from(y[i]) * f64::from(y[j]) * gram[i * n + j];
        }
    }
    alpha.iter().sum::<f64>() - 0.5 * quad
}

/// Maximum of the SVM dual by exhaustive active-set enumeration: each
/// multiplier is fixed at 0, fixed at C, or free; the free ones solve the
/// stationarity equations together with the equality constraint. The best
/// feasible candidate is the optimum of the concave program.
pub fn dual_oracle(gram: &[f64], y: &[i8], c: f64) -> f64 {
    let n = y.len();
    let mut best = f64::NEG_INFINITY;
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut state = vec![0u8; n];
        let mut k = code;
        for s in state.iter_mut() {
            *s = (k % 3) as u8;
            k /= 3;
        }
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 2).collect();
        let mut alpha: Vec<f64> = state.iter().map(|&s| if s == 1 { c } else { 0.0 }).collect();
        let yf = |i: usize| f64::from(y[i]);
        if free.is_empty() {
            let eq: f64 = (0..n).map(|i| alpha[i] * yf(i)).sum();
            if eq.abs() > 1e-9 {
                continue;
            }
        } else {
            let m = free.len();
            let mut a = vec![vec![0.0; m + 1]; m + 1];
            let mut rhs = vec![0.0; m + 1];
            for (r, &i) in free.iter().enumerate() {
                for (cidx, &j) in free.iter().enumerate() {
                    a[r][cidx] = yf(i) * yf(j) * gram[i * n + j];
                }
                a[r][m] = yf(i);
                rhs[r] = 1.0
                    - (0..n)
                        .filter(|&j| state[j] == 1)
                        .map(|j| yf(i) * yf(j) * gram[i * n + j] * c)
                        .sum::<f64>();
            }
            for (cidx, &j) in free.iter().enumerate() {
                a[m][cidx] = yf(j);
            }
            rhs[m] = -(0..n).filter(|&j| state[j] == 1).map(|j| yf(j) * c).sum::<f64>();
            let Some(x) = solve(a, rhs) else { continue };
            if free.iter().enumerate().any(|(r, _)| x[r] < -1e-9 || x[r] > c + 1e-9) {
                continue;
            }
            for (r, &i) in free.iter().enumerate() {
                alpha[i] = x[r].clamp(0.0, c);
            }
        }
        best = best.max(dual_value(gram, y, &alpha));
    }
    best
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(m: &[f64], n: usize) -> Vec<f64> {
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| m[i * n..(i + 1) * n].to_vec()).collect();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-22 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cos = 1.0 / (t * t + 1.0).sqrt();
                let sin = t * cos;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = cos * akp - sin * akq;
                    a[k][q] = sin * akp + cos * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = cos * apk - sin * aqk;
                    a[q][k] = sin * apk + cos * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// All tree fragments rooted at `t`, as bracketed strings with the number of
/// productions they contain. A fragment keeps the node's whole production and
/// either stops at each child (bare label) or continues into one of the
/// child's own fragments.
fn fragments_at(t: &ParseTree) -> Vec<(String, u32)> {
    if t.is_leaf() {
        return Vec::new();
    }
    let mut partial: Vec<(String, u32)> = vec![(format!("({}", t.label), 1)];
    for child in &t.children {
        let mut options: Vec<(String, u32)> = vec![(child.label.clone(), 0)];
        if !t.is_preterminal() {
            options.extend(fragments_at(child));
        }
        let mut next = Vec::new();
        for (p, n) in &partial {
            for (o, m) in &options {
                next.push((format!("{p} {o}"), n + m));
            }
        }
        partial = next;
    }
    partial.into_iter().map(|(s, n)| (s + ")", n)).collect()
}

/// Multiset of all fragments of a tree with their sizes.
pub fn fragment_bag(t: &ParseTree) -> BTreeMap<String, (u32, f64)> {
    let mut bag = BTreeMap::new();
    fn walk(t: &ParseTree, bag: &mut BTreeMap<String, (u32, f64)>) {
        for (f, n) in fragments_at(t) {
            bag.entry(f).or_insert((n, 0.0)).1 += 1.0;
        }
        for c in &t.children {
            walk(c, bag);
        }
    }
    walk(t, &mut bag);
    bag
}

/// Σ over shared fragments of count_a · count_b · λ^size.
pub fn subtree_oracle(a: &BTreeMap<String, (u32, f64)>, b: &BTreeMap<String, (u32, f64)>, lambda: f64) -> f64 {
    a.iter()
        .filter_map(|(f, (n, ca))| b.get(f).map(|(_, cb)| ca * cb * lambda.powi(*n as i32)))
        .sum()
}

/// Every ordered tree with at most `max_nodes` nodes and labels from `labels`.
pub fn all_trees(max_nodes: usize, labels: &[&str]) -> Vec<ParseTree> {
    // forests[n] = all ordered sequences of trees with n nodes in total
    let mut trees_by_size: Vec<Vec<ParseTree>> = vec![Vec::new(); max_nodes + 1];
    let mut forests: Vec<Vec<Vec<ParseTree>>> = vec![Vec::new(); max_nodes + 1];
    forests[0].push(Vec::new());
    for n in 1..=max_nodes {
        let mut ts = Vec::new();
        for children in &forests[n - 1] {
            for l in labels {
                ts.push(ParseTree::node(*l, children.clone()));
            }
        }
        trees_by_size[n] = ts;
        let mut fs = Vec::new();
        for first in 1..=n {
            for t in &trees_by_size[first] {
                for rest in &forests[n - first] {
                    let mut f = vec![t.clone()];
                    f.extend(rest.iter().cloned());
                    fs.push(f);
                }
            }
        }
        forests[n] = fs;
    }
    trees_by_size.into_iter().flatten().collect()
}
