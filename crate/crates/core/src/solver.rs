//! Stress majorization.
//!
//! Minimises `stress(X) = sum_{i<j} (|X_i - X_j| - D_ij)^2` by repeatedly
//! minimising the quadratic majorizer `f^Y(X)` built at the current layout.
//! For unit weights the minimiser has the closed form
//! `X' = L^Y Y / n` (the Guttman transform), which is what
//! [`majorize_step`] computes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::top_eigenpairs;
use crate::matrix::{DistanceMatrix, SquareMatrix};
use crate::scalar::Scalar;

/// `n x d` node coordinates; row `i` is the position of node `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix<T> {
    n: usize,
    d: usize,
    coords: Vec<T>,
}

impl<T: Scalar> EmbeddingMatrix<T> {
    pub fn new(n: usize, d: usize, coords: Vec<T>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("embedding dimension must be >= 1".into()));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("embedding needs at least one row".into()));
        }
        if coords.len() != n * d {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a {n}x{d} embedding",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("embedding coordinates must be finite".into()));
        }
        Ok(EmbeddingMatrix { n, d, coords })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != d) {
            return Err(Error::DimensionMismatch(format!(
                "row {bad} has {} coordinates, expected {d}",
                rows[bad].len()
            )));
        }
        Self::new(rows.len(), d, rows.concat())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.coords.chunks(self.d)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.coords
    }

    /// Euclidean distance between rows `i` and `j`.
    pub fn dist(&self, i: usize, j: usize) -> T {
        euclid(self.row(i), self.row(j))
    }

    /// Adds `offset` to every row.
    pub fn translated(&self, offset: &[T]) -> Self {
        assert_eq!(offset.len(), self.d);
        let coords = self
            .coords
            .chunks(self.d)
            .flat_map(|r| r.iter().zip(offset).map(|(a, b)| *a + *b))
            .collect();
        EmbeddingMatrix {
            n: self.n,
            d: self.d,
            coords,
        }
    }

    fn center(&mut self) {
        let n = T::from_usize_lossy(self.n);
        for c in 0..self.d {
            let mean = (0..self.n).map(|i| self.coords[i * self.d + c]).sum::<T>() / n;
            for i in 0..self.n {
                self.coords[i * self.d + c] -= mean;
            }
        }
    }

    /// True when no two rows are bitwise equal.
    pub fn rows_distinct(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.row(i) != self.row(j)))
    }
}

pub(crate) fn euclid<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let t = *x - *y;
            t * t
        })
        .sum::<T>()
        .sqrt()
}

fn check_rows<T: Scalar>(x: &EmbeddingMatrix<T>, d: &DistanceMatrix<T>) -> Result<()> {
    if x.n() != d.n() {
        return Err(Error::DimensionMismatch(format!(
            "embedding has {} rows, distance matrix has {}",
            x.n(),
            d.n()
        )));
    }
    Ok(())
}

/// Raw stress: squared mismatch between layout and target distances.
pub fn stress<T: Scalar>(x: &EmbeddingMatrix<T>, d: &DistanceMatrix<T>) -> Result<T> {
    check_rows(x, d)?;
    Ok(stress_unchecked(x, d))
}

fn stress_unchecked<T: Scalar>(x: &EmbeddingMatrix<T>, d: &DistanceMatrix<T>) -> T {
    let mut total = T::zero();
    for i in 0..x.n() {
        for j in i + 1..x.n() {
            let r = x.dist(i, j) - d.get(i, j);
            total += r * r;
        }
    }
    total
}

/// `L^Y`: off-diagonal `-D_ij / |Y_i - Y_j|` (zero when the two rows
/// coincide), diagonal set so every row sums to zero.
pub fn weighted_laplacian<T: Scalar>(y: &EmbeddingMatrix<T>, d: &DistanceMatrix<T>) -> Result<SquareMatrix<T>> {
    check_rows(y, d)?;
    Ok(weighted_laplacian_unchecked(y, d))
}

fn weighted_laplacian_unchecked<T: Scalar>(y: &EmbeddingMatrix<T>, d: &DistanceMatrix<T>) -> SquareMatrix<T> {
    let n = y.n();
    let mut l = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let dist = y.dist(i, j);
            let v = if dist > T::zero() {
                -d.get(i, j) / dist
            } else {
                T::zero()
            };
            l[(i, j)] = v;
            l[(j, i)] = v;
        }
    }
    for i in 0..n {
        let off: T = (0..n).filter(|&k| k != i).map(|k| l[(i, k)]).sum();
        l[(i, i)] = -off;
    }
    l
}

/// Majorizer `sum_{i<j} D_ij^2 + tr(X' L X) - 2 tr(X' L^Y Y)` where `L` is the
/// Laplacian of the complete graph. Touches the stress at `X = Y` and lies
/// above it everywhere else.
pub fn surrogate<T: Scalar>(x: &EmbeddingMatrix<T>, y: &EmbeddingMatrix<T>, d: &DistanceMatrix<T>) -> Result<T> {
    check_rows(x, d)?;
    check_rows(y, d)?;
    if x.d() != y.d() {
        return Err(Error::DimensionMismatch(format!(
            "X has dimension {}, Y has dimension {}",
            x.d(),
            y.d()
        )));
    }
    let n = x.n();
    let ly = weighted_laplacian_unchecked(y, d);
    let inner = |a: &[T], b: &[T]| a.iter().zip(b).map(|(p, q)| *p * *q).sum::<T>();
    let n_minus_1 = T::from_usize_lossy(n - 1);
    let mut quad = T::zero();
    let mut cross = T::zero();
    for i in 0..n {
        for j in 0..n {
            let xx = inner(x.row(i), x.row(j));
            quad += if i == j { n_minus_1 * xx } else { -xx };
            cross += ly[(i, j)] * inner(x.row(i), y.row(j));
        }
    }
    let two = T::one() + T::one();
    Ok(d.upper_sum_sq() + quad - two * cross)
}

/// One Guttman transform `X' = L^X X / n`, re-centred to zero column means.
pub fn majorize_step<T: Scalar>(x: &EmbeddingMatrix<T>, d: &DistanceMatrix<T>) -> Result<EmbeddingMatrix<T>> {
    check_rows(x, d)?;
    Ok(majorize_step_unchecked(x, d))
}

fn majorize_step_unchecked<T: Scalar>(x: &EmbeddingMatrix<T>, d: &DistanceMatrix<T>) -> EmbeddingMatrix<T> {
    let (n, dim) = (x.n(), x.d());
    let inv_n = T::one() / T::from_usize_lossy(n);
    let mut coords = vec![T::zero(); n * dim];
    for i in 0..n {
        let xi = x.row(i);
        let out = &mut coords[i * dim..(i + 1) * dim];
        for j in 0..n {
            if i == j {
                continue;
            }
            let xj = x.row(j);
            let dist = euclid(xi, xj);
            if dist > T::zero() {
                let b = d.get(i, j) / dist;
                for c in 0..dim {
                    out[c] += b * (xi[c] - xj[c]);
                }
            }
        }
        for v in out.iter_mut() {
            *v *= inv_n;
        }
    }
    let mut next = EmbeddingMatrix { n, d: dim, coords };
    next.center();
    next
}

/// How `X(0)` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Init {
    /// Classical (Torgerson) scaling of `D`, plus a seeded jitter of
    /// `1e-6 * init_scale * max(D)` per coordinate.
    #[default]
    Classical,
    /// Seeded uniform on `[-init_scale, init_scale]^d`.
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub d: usize,
    /// Relative stress change below which iteration stops.
    pub epsilon: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub init_scale: f64,
    pub init: Init,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            d: 2,
            epsilon: 1e-3,
            max_iters: 1000,
            seed: 0,
            init_scale: 1.0,
            init: Init::Classical,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidParameter("d must be >= 1".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidParameter("epsilon must be > 0".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be >= 1".into()));
        }
        if !(self.init_scale > 0.0) || !self.init_scale.is_finite() {
            return Err(Error::InvalidParameter("init_scale must be a positive number".into()));
        }
        Ok(())
    }
}

/// Stress before the first step and after every step.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverTrace<T> {
    pub stresses: Vec<T>,
    pub iterations: usize,
    pub converged: bool,
}

/// Stress below this counts as an exact realisation.
const ZERO_STRESS: f64 = 1e-30;

/// Runs majorization from a seeded start until the relative stress change
/// drops below `epsilon` or `max_iters` steps have been taken.
pub fn embed<T: Scalar>(d: &DistanceMatrix<T>, cfg: &SolverConfig) -> Result<(EmbeddingMatrix<T>, SolverTrace<T>)> {
    cfg.validate()?;
    if d.n() < 2 {
        return Err(Error::InvalidParameter("need at least 2 points to embed".into()));
    }
    let mut x = initial_layout(d, cfg);
    let mut s = stress_unchecked(&x, d);
    let mut trace = SolverTrace {
        stresses: vec![s],
        iterations: 0,
        converged: false,
    };
    let eps = T::from_f64_lossy(cfg.epsilon);
    let zero = T::from_f64_lossy(ZERO_STRESS);
    while trace.iterations < cfg.max_iters {
        if s < zero {
            trace.converged = true;
            break;
        }
        let next = majorize_step_unchecked(&x, d);
        let s_next = stress_unchecked(&next, d);
        trace.iterations += 1;
        trace.stresses.push(s_next);
        let rel = (s_next - s).abs() / s;
        x = next;
        s = s_next;
        if rel < eps {
            trace.converged = true;
            break;
        }
    }
    if !trace.converged && s < zero {
        trace.converged = true;
    }
    log::debug!(
        "majorization: {} iterations, stress {}, converged {}",
        trace.iterations,
        s,
        trace.converged
    );
    Ok((x, trace))
}

/// Seeded starting layout; never has two equal rows.
pub fn initial_layout<T: Scalar>(d: &DistanceMatrix<T>, cfg: &SolverConfig) -> EmbeddingMatrix<T> {
    let n = d.n();
    let dim = cfg.d;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let scale = T::from_f64_lossy(cfg.init_scale);
    let uniform =
        |rng: &mut ChaCha8Rng, amplitude: T| -> T { T::from_f64_lossy(rng.gen_range(-1.0..=1.0)) * amplitude };

    let classical = match cfg.init {
        Init::Classical => classical_scaling(d, dim),
        Init::Uniform => None,
    };
    let mut x = match classical {
        Some(coords) => {
            let jitter = T::from_f64_lossy(1e-6) * scale * d.max_entry();
            let coords = coords.into_iter().map(|c| c + uniform(&mut rng, jitter)).collect();
            EmbeddingMatrix { n, d: dim, coords }
        }
        None => {
            let coords = (0..n * dim).map(|_| uniform(&mut rng, scale)).collect();
            EmbeddingMatrix { n, d: dim, coords }
        }
    };
    // Coincident rows are vanishingly rare but make L^Y drop a pair.
    let nudge = T::from_f64_lossy(1e-8) * scale;
    while !x.rows_distinct() {
        for v in x.coords.iter_mut() {
            *v += uniform(&mut rng, nudge);
        }
    }
    x
}

/// Torgerson scaling: top eigenvectors of `-J D^2 J / 2` scaled by the
/// square roots of their eigenvalues. `None` when no eigenvalue is
/// positive, e.g. for an all-zero `D`.
fn classical_scaling<T: Scalar>(d: &DistanceMatrix<T>, dim: usize) -> Option<Vec<T>> {
    let n = d.n();
    let nt = T::from_usize_lossy(n);
    let sq = SquareMatrix::from_fn(n, |i, j| {
        let v = d.get(i, j);
        v * v
    });
    let row_mean: Vec<T> = (0..n).map(|i| sq.row(i).iter().copied().sum::<T>() / nt).collect();
    let grand = row_mean.iter().copied().sum::<T>() / nt;
    let half = T::from_f64_lossy(0.5);
    let b = SquareMatrix::from_fn(n, |i, j| -half * (sq[(i, j)] - row_mean[i] - row_mean[j] + grand));
    let pairs = top_eigenpairs(&b, dim);
    let threshold = T::epsilon() * b.max_abs() * nt;
    if pairs.first().is_none_or(|(lambda, _)| *lambda <= threshold) {
        return None;
    }
    let mut coords = vec![T::zero(); n * dim];
    for (c, (lambda, v)) in pairs.iter().enumerate() {
        let s = if *lambda > threshold { lambda.sqrt() } else { T::zero() };
        for i in 0..n {
            coords[i * dim + c] = s * v[i];
        }
    }
    Some(coords)
}
