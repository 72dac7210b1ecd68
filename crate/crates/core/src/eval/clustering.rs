use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::solver::EmbeddingMatrix;

/// One agglomeration: the closest cross-cluster point pair `(i, j)`, `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge<T> {
    pub i: usize,
    pub j: usize,
    pub distance: T,
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}

/// The `n - 1` single-linkage merges in order. Candidate pairs are ranked by
/// distance, then by `(i, j)`.
pub fn single_linkage_merges<T: Scalar>(x: &EmbeddingMatrix<T>) -> Vec<Merge<T>> {
    let n = x.n();
    let mut pairs: Vec<Merge<T>> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            pairs.push(Merge {
                i,
                j,
                distance: x.dist(i, j),
            });
        }
    }
    pairs.sort_by(|a, b| {
        a.distance
            .partial_cmp(&b.distance)
            .expect("finite distances")
            .then((a.i, a.j).cmp(&(b.i, b.j)))
    });
    let mut sets = DisjointSet::new(n);
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    for p in pairs {
        if sets.union(p.i, p.j) {
            merges.push(p);
            if merges.len() + 1 == n {
                break;
            }
        }
    }
    merges
}

/// Bottom-up single-linkage clustering stopped at `cluster_count` clusters.
/// Cluster ids are dense and numbered by first appearance in node order.
pub fn agglomerative_single_linkage<T: Scalar>(x: &EmbeddingMatrix<T>, cluster_count: usize) -> Result<Vec<usize>> {
    let n = x.n();
    if cluster_count == 0 || cluster_count > n {
        return Err(Error::InvalidParameter(format!(
            "cluster count {cluster_count} outside 1..={n}"
        )));
    }
    let mut sets = DisjointSet::new(n);
    for m in single_linkage_merges(x).into_iter().take(n - cluster_count) {
        sets.union(m.i, m.j);
    }
    Ok(dense_ids((0..n).map(|u| sets.find(u))))
}

/// Renumbers arbitrary ids to `0..k` in order of first appearance.
pub fn dense_ids(ids: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    ids.into_iter()
        .map(|id| {
            let next = map.len();
            *map.entry(id).or_insert(next)
        })
        .collect()
}
