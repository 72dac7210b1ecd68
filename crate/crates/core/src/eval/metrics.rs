//! Clustering and classification scores.

use std::collections::HashMap;

use super::clustering::dense_ids;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::solver::EmbeddingMatrix;

fn entropy(counts: impl Iterator<Item = usize>, total: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / total;
            -p * p.ln()
        })
        .sum()
}

/// Conditional entropy `H(A | B)` from paired labels.
fn conditional_entropy(a: &[usize], b: &[usize]) -> f64 {
    let total = a.len() as f64;
    let mut joint: HashMap<(usize, usize), usize> = HashMap::new();
    let mut marginal_b: HashMap<usize, usize> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_default() += 1;
        *marginal_b.entry(y).or_default() += 1;
    }
    let mut cells: Vec<_> = joint.into_iter().collect();
    cells.sort_unstable();
    cells
        .into_iter()
        .map(|((_, y), n_xy)| {
            let p = n_xy as f64 / total;
            -p * (n_xy as f64 / marginal_b[&y] as f64).ln()
        })
        .sum()
}

fn label_entropy(labels: &[usize]) -> f64 {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &l in labels {
        *counts.entry(l).or_default() += 1;
    }
    let mut counts: Vec<_> = counts.into_iter().collect();
    counts.sort_unstable();
    entropy(counts.into_iter().map(|(_, c)| c), labels.len() as f64)
}

/// `(homogeneity, completeness)` of a predicted clustering against true
/// classes. A zero entropy denominator scores 1.
pub fn homogeneity_completeness(pred: &[usize], truth: &[usize]) -> Result<(f64, f64)> {
    if pred.len() != truth.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} predictions for {} labels",
            pred.len(),
            truth.len()
        )));
    }
    if pred.is_empty() {
        return Ok((1.0, 1.0));
    }
    // first-appearance ids fix the summation order, so renaming clusters
    // cannot change a single bit of the result
    let pred = dense_ids(pred.iter().copied());
    let truth = dense_ids(truth.iter().copied());
    let (pred, truth) = (&pred[..], &truth[..]);
    let score = |cond: f64, h: f64| {
        if h == 0.0 {
            1.0
        } else {
            (1.0 - cond / h).clamp(0.0, 1.0)
        }
    };
    let homogeneity = score(conditional_entropy(truth, pred), label_entropy(truth));
    let completeness = score(conditional_entropy(pred, truth), label_entropy(pred));
    Ok((homogeneity, completeness))
}

/// Mean silhouette coefficient. Members of singleton clusters score 0.
pub fn silhouette<T: Scalar>(x: &EmbeddingMatrix<T>, pred: &[usize]) -> Result<T> {
    let n = x.n();
    if pred.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} cluster ids for {n} points",
            pred.len()
        )));
    }
    let k = pred.iter().max().map_or(0, |&m| m + 1);
    let mut sizes = vec![0usize; k];
    for &c in pred {
        sizes[c] += 1;
    }
    let present = sizes.iter().filter(|&&s| s > 0).count();
    if present < 2 {
        return Err(Error::InvalidParameter(
            "silhouette needs at least 2 nonempty clusters".into(),
        ));
    }
    let mut total = T::zero();
    let mut sums = vec![T::zero(); k];
    for i in 0..n {
        sums.iter_mut().for_each(|s| *s = T::zero());
        for j in 0..n {
            if i != j {
                sums[pred[j]] += x.dist(i, j);
            }
        }
        let own = pred[i];
        if sizes[own] == 1 {
            continue;
        }
        let a = sums[own] / T::from_usize_lossy(sizes[own] - 1);
        let b = (0..k)
            .filter(|&c| c != own && sizes[c] > 0)
            .map(|c| sums[c] / T::from_usize_lossy(sizes[c]))
            .fold(T::infinity(), T::min);
        let denom = a.max(b);
        if denom > T::zero() {
            total += (b - a) / denom;
        }
    }
    Ok(total / T::from_usize_lossy(n))
}

/// Micro-averaged F1 for single-label prediction, i.e. accuracy.
pub fn micro_f1(pred: &[usize], truth: &[usize]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} predictions for {} labels",
            pred.len(),
            truth.len()
        )));
    }
    if pred.is_empty() {
        return Err(Error::InvalidParameter("micro-F1 of an empty prediction".into()));
    }
    let correct = pred.iter().zip(truth).filter(|(p, t)| p == t).count();
    Ok(correct as f64 / pred.len() as f64)
}
