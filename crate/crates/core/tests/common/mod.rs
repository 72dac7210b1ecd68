//! Naive reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::HashMap;

use role_embed::Graph;

pub const UNREACHABLE: usize = usize::MAX;

/// All-pairs hop counts by Floyd–Warshall.
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut d = vec![vec![UNREACHABLE; n]; n];
    for u in 0..n {
        d[u][u] = 0;
        for &v in g.neighbors(u) {
            d[u][v] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == UNREACHABLE {
                continue;
            }
            for j in 0..n {
                if d[k][j] != UNREACHABLE && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

pub fn oracle_diameter(g: &Graph) -> usize {
    floyd_warshall(g)
        .iter()
        .flat_map(|row| row.iter().copied().filter(|&h| h != UNREACHABLE))
        .max()
        .unwrap_or(0)
}

/// Top-down memoized DTW under `max/min - 1`.
pub fn recursive_dtw(a: &[usize], b: &[usize]) -> f64 {
    fn go(a: &[usize], b: &[usize], i: usize, j: usize, memo: &mut HashMap<(usize, usize), f64>) -> f64 {
        if let Some(&v) = memo.get(&(i, j)) {
            return v;
        }
        let (x, y) = (a[i] as f64, b[j] as f64);
        let here = x.max(y) / x.min(y) - 1.0;
        let best = match (i, j) {
            (0, 0) => 0.0,
            (0, _) => go(a, b, 0, j - 1, memo),
            (_, 0) => go(a, b, i - 1, 0, memo),
            _ => go(a, b, i - 1, j - 1, memo)
                .min(go(a, b, i - 1, j, memo))
                .min(go(a, b, i, j - 1, memo)),
        };
        let v = here + best;
        memo.insert((i, j), v);
        v
    }
    go(a, b, a.len() - 1, b.len() - 1, &mut HashMap::new())
}

pub fn euclid(p: &[f64], q: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 0..p.len() {
        s += (p[k] - q[k]) * (p[k] - q[k]);
    }
    s.sqrt()
}

pub fn naive_stress(x: &[Vec<f64>], d: &[Vec<f64>]) -> f64 {
    let mut s = 0.0;
    for i in 0..x.len() {
        for j in 0..x.len() {
            if i < j {
                let r = euclid(&x[i], &x[j]) - d[i][j];
                s += r * r;
            }
        }
    }
    s
}

/// Single linkage by repeatedly scanning every cluster pair. Returns the
/// merge sequence as `(i, j, distance)` with `(i, j)` the closest point
/// pair, ties going to the smallest `(i, j)`.
pub fn naive_single_linkage(x: &[Vec<f64>]) -> Vec<(usize, usize, f64)> {
    let mut clusters: Vec<Vec<usize>> = (0..x.len()).map(|i| vec![i]).collect();
    let mut merges = Vec::new();
    while clusters.len() > 1 {
        let mut best: Option<(f64, usize, usize, usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                for &p in &clusters[a] {
                    for &q in &clusters[b] {
                        let (i, j) = (p.min(q), p.max(q));
                        let dist = euclid(&x[i], &x[j]);
                        let better = match best {
                            None => true,
                            Some((bd, bi, bj, _, _)) => (dist, i, j) < (bd, bi, bj),
                        };
                        if better {
                            best = Some((dist, i, j, a, b));
                        }
                    }
                }
            }
        }
        let (dist, i, j, a, b) = best.unwrap();
        let moved = clusters.remove(b);
        clusters[a].extend(moved);
        merges.push((i, j, dist));
    }
    merges
}

/// Cluster ids after `n - k` naive merges, numbered by first appearance.
pub fn naive_clusters(x: &[Vec<f64>], k: usize) -> Vec<usize> {
    let n = x.len();
    let mut owner: Vec<usize> = (0..n).collect();
    for (i, j, _) in naive_single_linkage(x).into_iter().take(n - k) {
        let (from, to) = (owner[j], owner[i]);
        for o in owner.iter_mut() {
            if *o == from {
                *o = to;
            }
        }
    }
    let mut seen: Vec<usize> = Vec::new();
    owner
        .iter()
        .map(|o| match seen.iter().position(|s| s == o) {
            Some(p) => p,
            None => {
                seen.push(*o);
                seen.len() - 1
            }
        })
        .collect()
}

pub fn naive_silhouette(x: &[Vec<f64>], pred: &[usize]) -> f64 {
    let n = x.len();
    let mut total = 0.0;
    for i in 0..n {
        let own: Vec<usize> = (0..n).filter(|&j| j != i && pred[j] == pred[i]).collect();
        if own.is_empty() {
            continue;
        }
        let a = own.iter().map(|&j| euclid(&x[i], &x[j])).sum::<f64>() / own.len() as f64;
        let mut b = f64::INFINITY;
        let mut others: Vec<usize> = pred.iter().copied().filter(|&c| c != pred[i]).collect();
        others.sort();
        others.dedup();
        for c in others {
            let members: Vec<usize> = (0..n).filter(|&j| pred[j] == c).collect();
            let m = members.iter().map(|&j| euclid(&x[i], &x[j])).sum::<f64>() / members.len() as f64;
            b = b.min(m);
        }
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    total / n as f64
}

/// Homogeneity and completeness from contingency counts, in bits.
pub fn naive_homogeneity_completeness(pred: &[usize], truth: &[usize]) -> (f64, f64) {
    let n = pred.len() as f64;
    let kc = pred.iter().max().unwrap() + 1;
    let cc = truth.iter().max().unwrap() + 1;
    let mut table = vec![vec![0.0; kc]; cc];
    for (&k, &c) in pred.iter().zip(truth) {
        table[c][k] += 1.0;
    }
    let row: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let col: Vec<f64> = (0..kc).map(|k| table.iter().map(|r| r[k]).sum()).collect();
    let h = |counts: &[f64]| -> f64 {
        counts
            .iter()
            .filter(|&&c| c > 0.0)
            .map(|&c| -(c / n) * (c / n).log2())
            .sum()
    };
    let (h_c, h_k) = (h(&row), h(&col));
    let mut h_c_given_k = 0.0;
    let mut h_k_given_c = 0.0;
    for c in 0..cc {
        for k in 0..kc {
            let v = table[c][k];
            if v > 0.0 {
                h_c_given_k -= (v / n) * (v / col[k]).log2();
                h_k_given_c -= (v / n) * (v / row[c]).log2();
            }
        }
    }
    let hom = if h_c == 0.0 { 1.0 } else { 1.0 - h_c_given_k / h_c };
    let com = if h_k == 0.0 { 1.0 } else { 1.0 - h_k_given_c / h_k };
    (hom.clamp(0.0, 1.0), com.clamp(0.0, 1.0))
}

/// Minimum 1-D stress of a 3-node `d` over the lattice `[-3, 3]^3` with
/// step 0.01. Stress only depends on differences, so node 0 is pinned and
/// the two offsets range over lattice points whose joint span fits in 6.
pub fn lattice_min_stress_3(d: &[Vec<f64>]) -> f64 {
    let steps = 600i64;
    let mut best = f64::INFINITY;
    for a in -steps..=steps {
        for b in -steps..=steps {
            let lo = 0.min(a).min(b);
            let hi = 0.max(a).max(b);
            if hi - lo > steps {
                continue;
            }
            let (x1, x2) = (a as f64 * 0.01, b as f64 * 0.01);
            let s = (x1.abs() - d[0][1]).powi(2) + (x2.abs() - d[0][2]).powi(2) + ((x1 - x2).abs() - d[1][2]).powi(2);
            best = best.min(s);
        }
    }
    best
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300) || a == b
}
