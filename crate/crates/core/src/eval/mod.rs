//! Evaluation protocols: single-linkage clustering scored by homogeneity,
//! completeness and silhouette, and cross-validated linear classification
//! scored by micro-F1.

mod classify;
mod clustering;
mod metrics;

pub use classify::{
    classify_kfold, classify_kfold_with, kfold_assignment, ClassificationReport, LinearSvm, LinearSvmConfig,
};
pub use clustering::{agglomerative_single_linkage, dense_ids, single_linkage_merges, Merge};
pub use metrics::{homogeneity_completeness, micro_f1, silhouette};

use crate::error::Result;
use crate::labels::LabeledDataset;
use crate::scalar::Scalar;
use crate::solver::EmbeddingMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringReport {
    pub homogeneity: f64,
    pub completeness: f64,
    pub silhouette: f64,
    pub predicted: Vec<usize>,
}

/// Single-linkage clustering at the true class count, then all three scores.
pub fn evaluate_clustering<T: Scalar>(x: &EmbeddingMatrix<T>, truth: &LabeledDataset) -> Result<ClusteringReport> {
    let predicted = agglomerative_single_linkage(x, truth.class_count())?;
    let (homogeneity, completeness) = homogeneity_completeness(&predicted, truth.labels())?;
    let silhouette = silhouette(x, &predicted)?.as_f64();
    Ok(ClusteringReport {
        homogeneity,
        completeness,
        silhouette,
        predicted,
    })
}
