//! Repeated generate → embed → cluster runs, averaged.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use role_embed::eval::{evaluate_clustering, homogeneity_completeness, silhouette};
use role_embed::{
    barbell_roles, distance_matrix, embed, gen_barbell, gen_cycle_with_shapes, DistanceConfig, Graph, LabeledDataset,
    ShapesConfig, SolverConfig,
};

/// A synthetic graph family with ground-truth roles.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Barbell { clique: usize, bridge: usize },
    Shapes(ShapesConfig),
}

impl GraphSpec {
    /// The instance for one run; only shape perturbation depends on `seed`.
    pub fn build(&self, seed: u64) -> role_embed::Result<(Graph, LabeledDataset)> {
        match self {
            GraphSpec::Barbell { clique, bridge } => {
                Ok((gen_barbell(*clique, *bridge)?, barbell_roles(*clique, *bridge)?))
            }
            GraphSpec::Shapes(cfg) => gen_cycle_with_shapes(&ShapesConfig { seed, ..cfg.clone() }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Scores {
    pub homogeneity: f64,
    pub completeness: f64,
    pub silhouette: f64,
}

impl Scores {
    fn mean(all: impl Iterator<Item = Scores>) -> Scores {
        let mut sum = Scores::default();
        let mut n = 0.0;
        for s in all {
            sum.homogeneity += s.homogeneity;
            sum.completeness += s.completeness;
            sum.silhouette += s.silhouette;
            n += 1.0;
        }
        Scores {
            homogeneity: sum.homogeneity / n,
            completeness: sum.completeness / n,
            silhouette: sum.silhouette / n,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub seed: u64,
    pub scores: Scores,
    /// The same cluster sizes assigned to nodes at random.
    pub baseline: Scores,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepeatedClustering {
    pub runs: Vec<RunResult>,
    pub mean: Scores,
    pub baseline: Scores,
}

/// Run `r` uses seed `seed + r` for both the perturbation and the solver.
pub fn repeated_clustering(
    spec: &GraphSpec,
    runs: usize,
    seed: u64,
    distance: &DistanceConfig,
    solver: &SolverConfig,
) -> role_embed::Result<RepeatedClustering> {
    if runs == 0 {
        return Err(role_embed::Error::InvalidParameter("runs must be at least 1".into()));
    }
    let results = (0..runs as u64)
        .into_par_iter()
        .map(|r| {
            let run_seed = seed.wrapping_add(r);
            let (g, truth) = spec.build(run_seed)?;
            let d = distance_matrix::<f64>(&g, distance)?;
            let (x, trace) = embed(
                &d,
                &SolverConfig {
                    seed: run_seed,
                    ..solver.clone()
                },
            )?;
            let report = evaluate_clustering(&x, &truth)?;
            let mut shuffled = report.predicted.clone();
            shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(run_seed));
            let (bh, bc) = homogeneity_completeness(&shuffled, truth.labels())?;
            Ok(RunResult {
                seed: run_seed,
                scores: Scores {
                    homogeneity: report.homogeneity,
                    completeness: report.completeness,
                    silhouette: report.silhouette,
                },
                baseline: Scores {
                    homogeneity: bh,
                    completeness: bc,
                    silhouette: silhouette(&x, &shuffled)?,
                },
                iterations: trace.iterations,
            })
        })
        .collect::<role_embed::Result<Vec<_>>>()?;
    Ok(RepeatedClustering {
        mean: Scores::mean(results.iter().map(|r| r.scores)),
        baseline: Scores::mean(results.iter().map(|r| r.baseline)),
        runs: results,
    })
}
