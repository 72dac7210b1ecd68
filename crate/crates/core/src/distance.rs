//! Pairwise structural role distances.
//!
//! The distance between nodes `u` and `v` is the weighted sum over hops
//! `0..=k` of the FastDTW cost between the ordered degree sequences of the
//! nodes exactly that many hops away from each of them.

use rayon::prelude::*;

use crate::dtw::{fast_dtw, DegreeSequence};
use crate::error::{Error, Result};
use crate::graph::{diameter, khop_rings, ordered_degree_sequence, Graph};
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;

/// Per-hop importance weights.
#[derive(Debug, Clone, PartialEq)]
pub enum HopWeights {
    /// The same weight on every hop.
    Uniform(f64),
    /// `w_0..=w_k`; its length fixes `k` when no hop depth is given.
    PerHop(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceConfig {
    /// Hop depth `k`; `None` uses the graph diameter.
    pub hops: Option<usize>,
    pub weights: HopWeights,
    pub fastdtw_radius: usize,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        DistanceConfig {
            hops: None,
            weights: HopWeights::Uniform(1.0),
            fastdtw_radius: 1,
        }
    }
}

impl DistanceConfig {
    /// Fixes `k` and the weight vector for a concrete graph.
    pub fn resolve(&self, g: &Graph) -> Result<ResolvedDistanceConfig> {
        let (k, weights) = match (&self.weights, self.hops) {
            (HopWeights::Uniform(w), hops) => {
                let k = match hops {
                    Some(k) => k,
                    None => diameter(g)?,
                };
                (k, vec![*w; k + 1])
            }
            (HopWeights::PerHop(ws), None) => {
                if ws.is_empty() {
                    return Err(Error::InvalidParameter("empty hop weight list".into()));
                }
                (ws.len() - 1, ws.clone())
            }
            (HopWeights::PerHop(ws), Some(k)) => {
                if ws.len() != k + 1 {
                    return Err(Error::InvalidParameter(format!(
                        "{} hop weights given for k = {k}; expected {}",
                        ws.len(),
                        k + 1
                    )));
                }
                (k, ws.clone())
            }
        };
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidParameter(
                "hop weights must be finite and nonnegative".into(),
            ));
        }
        if !weights.iter().any(|&w| w > 0.0) {
            return Err(Error::InvalidParameter(
                "at least one hop weight must be positive".into(),
            ));
        }
        Ok(ResolvedDistanceConfig {
            k,
            weights,
            radius: self.fastdtw_radius,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedDistanceConfig {
    pub k: usize,
    pub weights: Vec<f64>,
    pub radius: usize,
}

/// Ordered degree sequences of every hop ring around one node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopProfile(Vec<DegreeSequence>);

impl HopProfile {
    pub fn of(g: &Graph, u: usize, k: usize) -> Result<Self> {
        if g.degree(u) == 0 {
            return Err(Error::IsolatedNode { node: u });
        }
        let rings = khop_rings(g, u, k)?;
        rings
            .rings
            .iter()
            .map(|ring| DegreeSequence::new(ordered_degree_sequence(g, ring)))
            .collect::<Result<_>>()
            .map(HopProfile)
    }

    pub fn hops(&self) -> &[DegreeSequence] {
        &self.0
    }
}

/// Cost of a hop where exactly one of the two rings is empty: one more than
/// the largest single-element cost the graph can produce.
pub fn empty_ring_penalty<T: Scalar>(g: &Graph) -> T {
    let d_max = g.max_degree().max(1);
    // pair_cost(1, d_max) + 1
    T::from_usize_lossy(d_max) - T::one() + T::one()
}

/// Weighted hop sum between two precomputed profiles.
pub fn profile_distance<T: Scalar>(
    a: &HopProfile,
    b: &HopProfile,
    cfg: &ResolvedDistanceConfig,
    penalty: T,
) -> Result<T> {
    let mut total = T::zero();
    for (i, &w) in cfg.weights.iter().enumerate() {
        let term = match (a.0[i].is_empty(), b.0[i].is_empty()) {
            (true, true) => T::zero(),
            (false, false) => fast_dtw(&a.0[i], &b.0[i], cfg.radius)?,
            _ => penalty,
        };
        total += T::from_f64_lossy(w) * term;
    }
    Ok(total)
}

/// Structural role distance between two nodes.
pub fn structural_distance<T: Scalar>(g: &Graph, u: usize, v: usize, cfg: &DistanceConfig) -> Result<T> {
    let resolved = cfg.resolve(g)?;
    let pu = HopProfile::of(g, u, resolved.k)?;
    let pv = HopProfile::of(g, v, resolved.k)?;
    profile_distance(&pu, &pv, &resolved, empty_ring_penalty(g))
}

/// Full structural distance matrix. Rows are computed in parallel; each
/// entry is evaluated once, independently, and mirrored, so the result does
/// not depend on the thread schedule.
pub fn distance_matrix<T: Scalar>(g: &Graph, cfg: &DistanceConfig) -> Result<DistanceMatrix<T>> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "distance matrix needs at least 2 nodes, graph has {n}"
        )));
    }
    if let Some(node) = g.isolated_nodes().next() {
        return Err(Error::IsolatedNode { node });
    }
    let resolved = cfg.resolve(g)?;
    let profiles: Vec<HopProfile> = (0..n)
        .into_par_iter()
        .map(|u| HopProfile::of(g, u, resolved.k))
        .collect::<Result<_>>()?;
    let penalty: T = empty_ring_penalty(g);
    let rows: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| profile_distance(&profiles[i], &profiles[j], &resolved, penalty))
                .collect::<Result<Vec<T>>>()
        })
        .collect::<Result<_>>()?;
    DistanceMatrix::from_upper(n, |i, j| rows[i][j - i - 1])
}
