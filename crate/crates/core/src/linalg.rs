use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::SquareMatrix;
use crate::scalar::Scalar;

const POWER_SEED: u64 = 0x5e_ed0f_e16e;
const MAX_POWER_ITERS: usize = 20_000;

/// Leading `count` eigenpairs of a symmetric matrix, largest eigenvalue
/// first, by power iteration with deflation.
///
/// The matrix is shifted by its Gershgorin radius so the iteration ranks
/// eigenvalues algebraically rather than by magnitude. Each eigenvector is
/// normalised and its largest-magnitude coordinate made positive.
pub fn top_eigenpairs<T: Scalar>(m: &SquareMatrix<T>, count: usize) -> Vec<(T, Vec<T>)> {
    let n = m.n();
    let count = count.min(n);
    let shift = (0..n)
        .map(|i| m.row(i).iter().map(|v| v.abs()).sum::<T>())
        .fold(T::zero(), T::max);
    let tol = T::from_f64_lossy(1e-13).max(T::epsilon() * T::from_f64_lossy(16.0));
    let mut rng = ChaCha8Rng::seed_from_u64(POWER_SEED);
    let mut found: Vec<(T, Vec<T>)> = Vec::with_capacity(count);

    for _ in 0..count {
        let mut v: Vec<T> = (0..n).map(|_| T::from_f64_lossy(rng.gen_range(-1.0..1.0))).collect();
        orthogonalize(&mut v, &found);
        if !normalize(&mut v) {
            break;
        }
        for _ in 0..MAX_POWER_ITERS {
            let mut w = matvec(m, &v);
            for (wi, vi) in w.iter_mut().zip(&v) {
                *wi += shift * *vi;
            }
            orthogonalize(&mut w, &found);
            if !normalize(&mut w) {
                break;
            }
            let delta = w.iter().zip(&v).map(|(a, b)| (*a - *b).abs()).fold(T::zero(), T::max);
            v = w;
            if delta < tol {
                break;
            }
        }
        fix_sign(&mut v);
        let mv = matvec(m, &v);
        let lambda = dot(&v, &mv);
        found.push((lambda, v));
    }
    found
}

pub(crate) fn matvec<T: Scalar>(m: &SquareMatrix<T>, v: &[T]) -> Vec<T> {
    (0..m.n()).map(|i| dot(m.row(i), v)).collect()
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

fn orthogonalize<T: Scalar>(v: &mut [T], basis: &[(T, Vec<T>)]) {
    for (_, u) in basis {
        let p = dot(v, u);
        for (vi, ui) in v.iter_mut().zip(u) {
            *vi -= p * *ui;
        }
    }
}

fn normalize<T: Scalar>(v: &mut [T]) -> bool {
    let norm = dot(v, v).sqrt();
    if !(norm > T::zero()) || !norm.is_finite() {
        return false;
    }
    for x in v.iter_mut() {
        *x /= norm;
    }
    true
}

/// Makes the largest-magnitude coordinate positive (first one on ties).
pub(crate) fn fix_sign<T: Scalar>(v: &mut [T]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|x| *x < T::zero()) {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_with_negative_entry() {
        let m = SquareMatrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, -5.0, 0.0], vec![0.0, 0.0, 3.0]]).unwrap();
        let pairs = top_eigenpairs(&m, 2);
        assert!((pairs[0].0 - 3.0f64).abs() < 1e-9);
        assert!((pairs[1].0 - 1.0).abs() < 1e-9);
        assert!((pairs[0].1[2] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn symmetric_two_by_two() {
        let m = SquareMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let pairs = top_eigenpairs(&m, 2);
        assert!((pairs[0].0 - 3.0f64).abs() < 1e-9);
        assert!((pairs[1].0 - 1.0).abs() < 1e-9);
        let h = 0.5f64.sqrt();
        assert!((pairs[0].1[0] - h).abs() < 1e-6 && (pairs[0].1[1] - h).abs() < 1e-6);
    }
}
