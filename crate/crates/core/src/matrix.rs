use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense row-major `n x n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> SquareMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "row {bad} has {} entries, expected {n}",
                rows[bad].len()
            )));
        }
        Ok(SquareMatrix { n, data: rows.concat() })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        SquareMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// Bitwise symmetry.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, &v| if v.abs() > acc { v.abs() } else { acc })
    }
}

impl<T> Index<(usize, usize)> for SquareMatrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for SquareMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

/// Symmetric, nonnegative matrix of pairwise dissimilarities with a zero
/// diagonal. The triangle inequality is not required.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix<T>(SquareMatrix<T>);

impl<T: Scalar> DistanceMatrix<T> {
    pub fn new(m: SquareMatrix<T>) -> Result<Self> {
        let n = m.n();
        for i in 0..n {
            if m[(i, i)] != T::zero() {
                return Err(Error::InvalidParameter(format!(
                    "distance matrix diagonal entry {i} is {}",
                    m[(i, i)]
                )));
            }
            for j in 0..n {
                let v = m[(i, j)];
                if !v.is_finite() || v < T::zero() {
                    return Err(Error::InvalidParameter(format!(
                        "distance ({i},{j}) = {v} is not a finite nonnegative value"
                    )));
                }
                if v != m[(j, i)] {
                    return Err(Error::InvalidParameter(format!(
                        "distance matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(DistanceMatrix(m))
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        Self::new(SquareMatrix::from_rows(rows)?)
    }

    /// Builds from the strict upper triangle, visited row-major.
    pub fn from_upper(n: usize, mut upper: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut m = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                let v = upper(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self::new(m)
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.0[(i, j)]
    }

    pub fn row(&self, i: usize) -> &[T] {
        self.0.row(i)
    }

    pub fn max_entry(&self) -> T {
        self.0.max_abs()
    }

    pub fn as_matrix(&self) -> &SquareMatrix<T> {
        &self.0
    }

    /// Sum of squared entries over `i < j`.
    pub fn upper_sum_sq(&self) -> T {
        let n = self.n();
        let mut acc = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                let v = self.get(i, j);
                acc += v * v;
            }
        }
        acc
    }
}
