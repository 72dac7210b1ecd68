mod common;

use common::{lattice_min_stress_3, naive_stress, rel_close};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use role_embed::solver::EmbeddingMatrix;
use role_embed::{
    barbell_roles, distance_matrix, embed, gen_barbell, majorize_step, stress, surrogate, weighted_laplacian,
    DistanceConfig, DistanceMatrix, Init, SolverConfig,
};

fn random_d(rng: &mut ChaCha8Rng, n: usize, hi: f64) -> DistanceMatrix {
    DistanceMatrix::from_upper(n, |_, _| rng.gen_range(0.0..hi)).unwrap()
}

fn random_x(rng: &mut ChaCha8Rng, n: usize, d: usize, hi: f64) -> EmbeddingMatrix<f64> {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.gen_range(-hi..hi)).collect())
        .collect();
    EmbeddingMatrix::from_rows(&rows).unwrap()
}

fn rows_of(x: &EmbeddingMatrix<f64>) -> Vec<Vec<f64>> {
    x.rows().map(<[f64]>::to_vec).collect()
}

fn full(d: &DistanceMatrix) -> Vec<Vec<f64>> {
    (0..d.n()).map(|i| d.row(i).to_vec()).collect()
}

/// Sum of the magnitudes entering the surrogate.
fn stress_scale(x: &EmbeddingMatrix<f64>, d: &DistanceMatrix) -> f64 {
    let mut s = d.upper_sum_sq();
    for i in 0..x.n() {
        for j in i + 1..x.n() {
            s += x.dist(i, j).powi(2);
        }
    }
    s.max(1.0)
}

#[test]
fn surrogate_majorizes_stress() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let n = rng.gen_range(2..=20);
        let dim = rng.gen_range(1..=4);
        let d = random_d(&mut rng, n, 5.0);
        let x = random_x(&mut rng, n, dim, 3.0);
        let y = random_x(&mut rng, n, dim, 3.0);
        let scale = stress_scale(&x, &d);
        let s = stress(&x, &d).unwrap();
        assert!(surrogate(&x, &y, &d).unwrap() >= s - 1e-9 * scale);
        assert!((surrogate(&x, &x, &d).unwrap() - s).abs() <= 1e-9 * scale);
    }
}

#[test]
fn surrogate_with_zero_d_is_spread() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let d = DistanceMatrix::from_upper(6, |_, _| 0.0).unwrap();
    let x = random_x(&mut rng, 6, 2, 1.0);
    let y = random_x(&mut rng, 6, 2, 1.0);
    let spread: f64 = (0..6)
        .flat_map(|i| (i + 1..6).map(move |j| (i, j)))
        .map(|(i, j)| x.dist(i, j).powi(2))
        .sum();
    assert!(rel_close(surrogate(&x, &y, &d).unwrap(), spread, 1e-12));
    assert_eq!(weighted_laplacian(&y, &d).unwrap().max_abs(), 0.0);
}

#[test]
fn laplacian_rows_sum_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let n = rng.gen_range(2..=12);
        let d = random_d(&mut rng, n, 4.0);
        let y = random_x(&mut rng, n, 3, 2.0);
        let l = weighted_laplacian(&y, &d).unwrap();
        assert!(l.is_symmetric());
        for i in 0..n {
            let off: f64 = (0..n).filter(|&j| j != i).map(|j| l[(i, j)]).sum();
            assert_eq!(l[(i, i)], -off);
        }
    }
}

#[test]
fn one_step_never_increases_stress() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let n = rng.gen_range(2..=20);
        let d = random_d(&mut rng, n, 5.0);
        let dim = rng.gen_range(1..=3);
        let x = random_x(&mut rng, n, dim, 3.0);
        let before = stress(&x, &d).unwrap();
        let after = stress(&majorize_step(&x, &d).unwrap(), &d).unwrap();
        assert!(after <= before + 1e-12 * before.max(1.0), "{after} > {before}");
    }
}

#[test]
fn traces_descend() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..500u64 {
        let n = rng.gen_range(2..=30);
        let d = random_d(&mut rng, n, 10.0);
        let init = if case % 2 == 0 { Init::Classical } else { Init::Uniform };
        let cfg = SolverConfig {
            epsilon: 1e-6,
            max_iters: 300,
            seed: case,
            init,
            ..Default::default()
        };
        let (_, trace) = embed(&d, &cfg).unwrap();
        let slack = 1e-12 * trace.stresses[0];
        for w in trace.stresses.windows(2) {
            assert!(w[1] <= w[0] + slack, "case {case}: {} -> {}", w[0], w[1]);
        }
    }
}

#[test]
fn stress_matches_double_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..200 {
        let n = rng.gen_range(2..=30);
        let d = random_d(&mut rng, n, 5.0);
        let dim = rng.gen_range(1..=4);
        let x = random_x(&mut rng, n, dim, 3.0);
        assert!(rel_close(
            stress(&x, &d).unwrap(),
            naive_stress(&rows_of(&x), &full(&d)),
            1e-12
        ));
    }
}

#[test]
fn stress_examples() {
    let d = DistanceMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let exact = EmbeddingMatrix::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
    let collapsed = EmbeddingMatrix::from_rows(&[vec![0.0], vec![0.0]]).unwrap();
    assert_eq!(stress(&exact, &d).unwrap(), 0.0);
    assert_eq!(stress(&collapsed, &d).unwrap(), 1.0);
    let (_, trace) = embed(
        &d,
        &SolverConfig {
            d: 1,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(*trace.stresses.last().unwrap() < 1e-8);
}

#[test]
fn one_dimensional_three_point_lattice() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..20u64 {
        let d = random_d(&mut rng, 3, 2.0);
        let cfg = SolverConfig {
            d: 1,
            epsilon: 1e-9,
            max_iters: 100_000,
            seed: case,
            ..Default::default()
        };
        let (x, _) = embed(&d, &cfg).unwrap();
        let got = stress(&x, &d).unwrap();
        let lattice = lattice_min_stress_3(&full(&d));
        assert!(got <= lattice + 1e-4, "case {case}: {got} vs lattice {lattice}");
    }
}

#[test]
fn barbell_classes_collapse() {
    let g = gen_barbell(10, 11).unwrap();
    let d = distance_matrix::<f64>(&g, &DistanceConfig::default()).unwrap();
    let cfg = SolverConfig {
        epsilon: 1e-9,
        max_iters: 100_000,
        ..Default::default()
    };
    let (x, _) = embed(&d, &cfg).unwrap();
    let tol = 1e-4 * d.max_entry();
    for class in barbell_roles(10, 11).unwrap().classes() {
        for &a in &class {
            for &b in &class {
                assert!(x.dist(a, b) <= tol);
            }
        }
    }
}

#[test]
fn seeds_reproduce_bitwise() {
    let g = gen_barbell(5, 4).unwrap();
    let d = distance_matrix::<f64>(&g, &DistanceConfig::default()).unwrap();
    for init in [Init::Classical, Init::Uniform] {
        let cfg = SolverConfig {
            seed: 42,
            init,
            ..Default::default()
        };
        let (a, ta) = embed(&d, &cfg).unwrap();
        let (b, tb) = embed(&d, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(ta, tb);
    }
}

proptest! {
    #[test]
    fn stress_ignores_translation(
        seed in any::<u64>(),
        n in 2usize..15,
        dim in 1usize..4,
        shift in prop::collection::vec(-100.0f64..100.0, 3),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_d(&mut rng, n, 5.0);
        let x = random_x(&mut rng, n, dim, 3.0);
        let moved = x.translated(&shift[..dim]);
        prop_assert!(rel_close(stress(&x, &d).unwrap(), stress(&moved, &d).unwrap(), 1e-12));
    }
}
