//! k-fold cross-validated linear classification of embeddings.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::metrics::micro_f1;
use crate::error::{Error, Result};
use crate::labels::LabeledDataset;
use crate::scalar::Scalar;
use crate::solver::EmbeddingMatrix;

/// One-vs-rest linear hinge-loss classifier trained by full-batch
/// subgradient descent with step size `learning_rate / sqrt(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSvmConfig {
    pub regularization: f64,
    pub iterations: usize,
    pub learning_rate: f64,
}

impl Default for LinearSvmConfig {
    fn default() -> Self {
        LinearSvmConfig {
            regularization: 1e-2,
            iterations: 2000,
            learning_rate: 0.1,
        }
    }
}

/// Standardisation plus one `(w, b)` per class.
#[derive(Debug, Clone)]
pub struct LinearSvm<T> {
    mean: Vec<T>,
    scale: Vec<T>,
    weights: Vec<Vec<T>>,
    bias: Vec<T>,
}

impl<T: Scalar> LinearSvm<T> {
    /// `rows` are feature vectors, `labels` class ids in `0..class_count`.
    pub fn fit(rows: &[&[T]], labels: &[usize], class_count: usize, cfg: &LinearSvmConfig) -> Self {
        let m = rows.len();
        let dim = rows.first().map_or(0, |r| r.len());
        let mt = T::from_usize_lossy(m.max(1));
        let mut mean = vec![T::zero(); dim];
        for r in rows {
            for (acc, v) in mean.iter_mut().zip(r.iter()) {
                *acc += *v;
            }
        }
        mean.iter_mut().for_each(|v| *v /= mt);
        let mut scale = vec![T::zero(); dim];
        for r in rows {
            for c in 0..dim {
                let t = r[c] - mean[c];
                scale[c] += t * t;
            }
        }
        for s in scale.iter_mut() {
            let sd = (*s / mt).sqrt();
            *s = if sd > T::zero() { sd } else { T::one() };
        }
        let feats: Vec<Vec<T>> = rows
            .iter()
            .map(|r| (0..dim).map(|c| (r[c] - mean[c]) / scale[c]).collect())
            .collect();

        let lambda = T::from_f64_lossy(cfg.regularization);
        let lr0 = T::from_f64_lossy(cfg.learning_rate);
        let mut weights = Vec::with_capacity(class_count);
        let mut bias = Vec::with_capacity(class_count);
        for class in 0..class_count {
            let y: Vec<T> = labels
                .iter()
                .map(|&l| if l == class { T::one() } else { -T::one() })
                .collect();
            let mut w = vec![T::zero(); dim];
            let mut b = T::zero();
            let mut grad = vec![T::zero(); dim];
            for t in 1..=cfg.iterations {
                for (g, wi) in grad.iter_mut().zip(&w) {
                    *g = lambda * *wi;
                }
                let mut grad_b = T::zero();
                for (f, &yi) in feats.iter().zip(&y) {
                    let margin = yi * (dot(&w, f) + b);
                    if margin < T::one() {
                        for (g, fi) in grad.iter_mut().zip(f) {
                            *g -= yi * *fi / mt;
                        }
                        grad_b -= yi / mt;
                    }
                }
                let lr = lr0 / T::from_usize_lossy(t).sqrt();
                for (wi, g) in w.iter_mut().zip(&grad) {
                    *wi -= lr * *g;
                }
                b -= lr * grad_b;
            }
            weights.push(w);
            bias.push(b);
        }
        LinearSvm {
            mean,
            scale,
            weights,
            bias,
        }
    }

    /// Highest-scoring class; ties go to the smaller id.
    pub fn predict(&self, row: &[T]) -> usize {
        let f: Vec<T> = row
            .iter()
            .zip(self.mean.iter().zip(&self.scale))
            .map(|(v, (m, s))| (*v - *m) / *s)
            .collect();
        let mut best = 0;
        let mut best_score = T::neg_infinity();
        for (c, (w, b)) in self.weights.iter().zip(&self.bias).enumerate() {
            let score = dot(w, &f) + *b;
            if score > best_score {
                best = c;
                best_score = score;
            }
        }
        best
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

/// Seeded fold assignment. Stratified (each class dealt round-robin after a
/// shuffle) unless some class has fewer members than `folds`, in which case
/// all nodes are shuffled and dealt together.
pub fn kfold_assignment(labels: &LabeledDataset, folds: usize, seed: u64) -> (Vec<usize>, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = labels.len();
    let classes = labels.classes();
    let stratified = classes.iter().all(|members| members.len() >= folds);
    let mut fold_of = vec![0; n];
    if stratified {
        let mut next = 0;
        for mut members in classes {
            members.shuffle(&mut rng);
            for u in members {
                fold_of[u] = next % folds;
                next += 1;
            }
        }
    } else {
        log::warn!("a class has fewer than {folds} members; using unstratified folds");
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        for (pos, u) in order.into_iter().enumerate() {
            fold_of[u] = pos % folds;
        }
    }
    (fold_of, stratified)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    /// Accuracy on each held-out fold.
    pub fold_f1: Vec<f64>,
    /// Micro-F1 over all held-out predictions together.
    pub micro_f1: f64,
    pub stratified: bool,
}

impl ClassificationReport {
    pub fn mean_fold_f1(&self) -> f64 {
        self.fold_f1.iter().sum::<f64>() / self.fold_f1.len() as f64
    }
}

pub fn classify_kfold<T: Scalar>(
    x: &EmbeddingMatrix<T>,
    truth: &LabeledDataset,
    folds: usize,
    seed: u64,
) -> Result<ClassificationReport> {
    classify_kfold_with(x, truth, folds, seed, &LinearSvmConfig::default())
}

pub fn classify_kfold_with<T: Scalar>(
    x: &EmbeddingMatrix<T>,
    truth: &LabeledDataset,
    folds: usize,
    seed: u64,
    svm: &LinearSvmConfig,
) -> Result<ClassificationReport> {
    let n = x.n();
    if truth.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} labels for {n} embedded nodes",
            truth.len()
        )));
    }
    if truth.class_count() < 2 {
        return Err(Error::InvalidParameter(
            "classification needs at least 2 classes".into(),
        ));
    }
    if folds < 2 || folds > n {
        return Err(Error::InvalidParameter(format!("fold count {folds} outside 2..={n}")));
    }
    let (fold_of, stratified) = kfold_assignment(truth, folds, seed);
    let labels = truth.labels();
    let mut predicted = vec![0; n];
    let mut fold_f1 = Vec::with_capacity(folds);
    for fold in 0..folds {
        let (test, train): (Vec<usize>, Vec<usize>) = (0..n).partition(|&u| fold_of[u] == fold);
        let rows: Vec<&[T]> = train.iter().map(|&u| x.row(u)).collect();
        let train_labels: Vec<usize> = train.iter().map(|&u| labels[u]).collect();
        let model = LinearSvm::fit(&rows, &train_labels, truth.class_count(), svm);
        let fold_pred: Vec<usize> = test.iter().map(|&u| model.predict(x.row(u))).collect();
        let fold_truth: Vec<usize> = test.iter().map(|&u| labels[u]).collect();
        fold_f1.push(micro_f1(&fold_pred, &fold_truth)?);
        for (&u, p) in test.iter().zip(fold_pred) {
            predicted[u] = p;
        }
    }
    Ok(ClassificationReport {
        fold_f1,
        micro_f1: micro_f1(&predicted, labels)?,
        stratified,
    })
}
