//! Dynamic time warping over degree sequences under the relative degree
//! cost `max(a, b) / min(a, b) - 1`.
//!
//! [`exact_dtw`] is the quadratic dynamic program. [`fast_dtw`] is the
//! multi-resolution approximation: halve both series, solve recursively,
//! project the coarse warping path back up, widen it by `radius` cells and
//! run the dynamic program only inside that window.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ascending sequence of node degrees, every entry at least 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreeSequence(Vec<usize>);

impl DegreeSequence {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        if let Some(&d) = values.iter().find(|&&d| d == 0) {
            return Err(Error::ZeroDegree(d));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter(
                "degree sequence must be sorted ascending".into(),
            ));
        }
        Ok(DegreeSequence(values))
    }

    /// Sorts the input first.
    pub fn from_unsorted(mut values: Vec<usize>) -> Result<Self> {
        values.sort_unstable();
        Self::new(values)
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn as_scalars<T: Scalar>(&self) -> Vec<T> {
        self.0.iter().map(|&d| T::from_usize_lossy(d)).collect()
    }
}

/// Relative degree difference `max(a,b)/min(a,b) - 1`.
pub fn pair_cost<T: Scalar>(a: usize, b: usize) -> Result<T> {
    if a == 0 || b == 0 {
        return Err(Error::ZeroDegree(0));
    }
    Ok(cost(T::from_usize_lossy(a), T::from_usize_lossy(b)))
}

#[inline]
fn cost<T: Scalar>(a: T, b: T) -> T {
    a.max(b) / a.min(b) - T::one()
}

/// Full dynamic-programming DTW. Steps are match, insertion and deletion;
/// the path starts at the first pair and ends at the last pair.
pub fn exact_dtw<T: Scalar>(s1: &DegreeSequence, s2: &DegreeSequence) -> Result<T> {
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::EmptySequence);
    }
    let a: Vec<T> = s1.as_scalars();
    let b: Vec<T> = s2.as_scalars();
    let m = b.len();
    let inf = T::infinity();
    let mut prev = vec![inf; m];
    let mut cur = vec![inf; m];
    for (i, &ai) in a.iter().enumerate() {
        for j in 0..m {
            let c = cost(ai, b[j]);
            cur[j] = if i == 0 && j == 0 {
                c
            } else {
                let diag = if i > 0 && j > 0 { prev[j - 1] } else { inf };
                let up = if i > 0 { prev[j] } else { inf };
                let left = if j > 0 { cur[j - 1] } else { inf };
                c + diag.min(up).min(left)
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[m - 1])
}

/// FastDTW total cost with refinement `radius`.
///
/// Symmetric bit for bit: the two inputs are put in a canonical order
/// before the search, since the windowed refinement is not
/// transpose-invariant.
pub fn fast_dtw<T: Scalar>(s1: &DegreeSequence, s2: &DegreeSequence, radius: usize) -> Result<T> {
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::EmptySequence);
    }
    let (first, second) = match s1.cmp(s2) {
        Ordering::Greater => (s2, s1),
        _ => (s1, s2),
    };
    let a: Vec<T> = first.as_scalars();
    let b: Vec<T> = second.as_scalars();
    Ok(fast_dtw_values(&a, &b, radius).0)
}

/// Inclusive column range `lo..=hi` allowed in each row of the cost matrix.
type Window = Vec<(usize, usize)>;

fn fast_dtw_values<T: Scalar>(a: &[T], b: &[T], radius: usize) -> (T, Vec<(usize, usize)>) {
    let min_size = radius + 2;
    if a.len() < min_size || b.len() < min_size {
        let full: Window = vec![(0, b.len() - 1); a.len()];
        return windowed_dtw(a, b, &full);
    }
    let coarse_a = coarsen(a);
    let coarse_b = coarsen(b);
    let (_, coarse_path) = fast_dtw_values(&coarse_a, &coarse_b, radius);
    let window = expand_window(&coarse_path, a.len(), b.len(), radius);
    windowed_dtw(a, b, &window)
}

/// Averages consecutive pairs; an odd trailing element stays on its own.
fn coarsen<T: Scalar>(s: &[T]) -> Vec<T> {
    let two = T::one() + T::one();
    s.chunks(2)
        .map(|c| match c {
            [x, y] => (*x + *y) / two,
            [x] => *x,
            _ => unreachable!(),
        })
        .collect()
}

/// Widens a coarse path by `radius` coarse cells in every direction, then
/// projects each coarse cell onto its 2x2 block of the fine grid.
fn expand_window(coarse_path: &[(usize, usize)], n: usize, m: usize, radius: usize) -> Window {
    let coarse_rows = n.div_ceil(2);
    let mut coarse_range = vec![(usize::MAX, 0usize); coarse_rows];
    for &(ci, cj) in coarse_path {
        let rows = ci.saturating_sub(radius)..=(ci + radius).min(coarse_rows - 1);
        for r in &mut coarse_range[rows] {
            r.0 = r.0.min(cj.saturating_sub(radius));
            r.1 = r.1.max(cj + radius);
        }
    }
    (0..n)
        .map(|i| {
            let (lo, hi) = coarse_range[i / 2];
            ((2 * lo).min(m - 1), (2 * hi + 1).min(m - 1))
        })
        .collect()
}

/// DTW restricted to `window`, returning the cost and an optimal path.
fn windowed_dtw<T: Scalar>(a: &[T], b: &[T], window: &Window) -> (T, Vec<(usize, usize)>) {
    let inf = T::infinity();
    let mut acc: Vec<Vec<T>> = Vec::with_capacity(a.len());
    let at = |acc: &Vec<Vec<T>>, i: usize, j: usize| -> T {
        let (lo, hi) = window[i];
        if j < lo || j > hi {
            inf
        } else {
            acc[i][j - lo]
        }
    };
    for (i, &ai) in a.iter().enumerate() {
        let (lo, hi) = window[i];
        let mut row = Vec::with_capacity(hi - lo + 1);
        for j in lo..=hi {
            let c = cost(ai, b[j]);
            let v = if i == 0 && j == 0 {
                c
            } else {
                let diag = if i > 0 && j > 0 { at(&acc, i - 1, j - 1) } else { inf };
                let up = if i > 0 { at(&acc, i - 1, j) } else { inf };
                let left = if j > lo { row[j - 1 - lo] } else { inf };
                c + diag.min(up).min(left)
            };
            row.push(v);
        }
        acc.push(row);
    }
    let (n, m) = (a.len(), b.len());
    let total = at(&acc, n - 1, m - 1);

    let mut path = vec![(n - 1, m - 1)];
    let (mut i, mut j) = (n - 1, m - 1);
    while (i, j) != (0, 0) {
        let step = if i == 0 {
            (0, j - 1)
        } else if j == 0 {
            (i - 1, 0)
        } else {
            let diag = at(&acc, i - 1, j - 1);
            let up = at(&acc, i - 1, j);
            let left = at(&acc, i, j - 1);
            if diag <= up && diag <= left {
                (i - 1, j - 1)
            } else if up <= left {
                (i - 1, j)
            } else {
                (i, j - 1)
            }
        };
        (i, j) = step;
        path.push(step);
    }
    path.reverse();
    (total, path)
}
