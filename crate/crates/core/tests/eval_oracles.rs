mod common;

use common::{naive_clusters, naive_homogeneity_completeness, naive_silhouette, naive_single_linkage, rel_close};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use role_embed::eval::{
    agglomerative_single_linkage, classify_kfold, evaluate_clustering, homogeneity_completeness, micro_f1, silhouette,
    single_linkage_merges,
};
use role_embed::solver::EmbeddingMatrix;
use role_embed::LabeledDataset;

fn random_points(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..d).map(|_| rng.gen_range(-5.0..5.0)).collect())
        .collect()
}

fn random_labels(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    // every id in 0..k appears at least once
    let mut v: Vec<usize> = (0..n).map(|i| if i < k { i } else { rng.gen_range(0..k) }).collect();
    v.shuffle(rng);
    v
}

#[test]
fn single_linkage_matches_naive_merges() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let n = rng.gen_range(2..=30);
        let dim = rng.gen_range(1..=3);
        let pts = random_points(&mut rng, n, dim);
        let x = EmbeddingMatrix::from_rows(&pts).unwrap();
        let fast = single_linkage_merges(&x);
        let naive = naive_single_linkage(&pts);
        assert_eq!(fast.len(), naive.len());
        for (m, (i, j, dist)) in fast.iter().zip(&naive) {
            assert_eq!((m.i, m.j), (*i, *j));
            assert!(rel_close(m.distance, *dist, 1e-12));
        }
        let k = rng.gen_range(1..=n);
        assert_eq!(agglomerative_single_linkage(&x, k).unwrap(), naive_clusters(&pts, k));
    }
}

#[test]
fn single_linkage_ties_on_a_lattice() {
    // unit grid: every nearest-neighbour distance ties
    let pts: Vec<Vec<f64>> = (0..20).map(|i| vec![(i % 5) as f64, (i / 5) as f64]).collect();
    let x = EmbeddingMatrix::from_rows(&pts).unwrap();
    for k in 1..=20 {
        assert_eq!(agglomerative_single_linkage(&x, k).unwrap(), naive_clusters(&pts, k));
    }
}

#[test]
fn silhouette_matches_naive() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..300 {
        let n = rng.gen_range(2..=30);
        let k = rng.gen_range(2..=n.min(6));
        let pts = random_points(&mut rng, n, 2);
        let pred = random_labels(&mut rng, n, k);
        let x = EmbeddingMatrix::from_rows(&pts).unwrap();
        let got: f64 = silhouette(&x, &pred).unwrap();
        let want = naive_silhouette(&pts, &pred);
        assert!(rel_close(got, want, 1e-12), "{got} vs {want}");
    }
}

#[test]
fn entropies_match_naive() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..500 {
        let n = rng.gen_range(1..=30);
        let (kt, kp) = (rng.gen_range(1..=n.min(5)), rng.gen_range(1..=n.min(7)));
        let truth = random_labels(&mut rng, n, kt);
        let pred = random_labels(&mut rng, n, kp);
        let (h, c) = homogeneity_completeness(&pred, &truth).unwrap();
        let (nh, nc) = naive_homogeneity_completeness(&pred, &truth);
        assert!((h - nh).abs() <= 1e-12 * nh.max(1.0), "{h} vs {nh}");
        assert!((c - nc).abs() <= 1e-12 * nc.max(1.0), "{c} vs {nc}");
    }
}

#[test]
fn entropy_examples() {
    assert_eq!(
        homogeneity_completeness(&[0, 1, 2, 3], &[0, 0, 1, 1]).unwrap(),
        (1.0, 0.5)
    );
    assert_eq!(homogeneity_completeness(&[0, 0, 0, 0], &[0, 0, 1, 1]).unwrap().0, 0.0);
    assert_eq!(homogeneity_completeness(&[1, 1, 0], &[0, 0, 1]).unwrap(), (1.0, 1.0));
}

#[test]
fn silhouette_examples() {
    let two = EmbeddingMatrix::from_rows(&[vec![0.0], vec![0.0], vec![9.0], vec![9.0]]).unwrap();
    assert_eq!(silhouette(&two, &[0, 0, 1, 1]).unwrap(), 1.0);
    let stacked = EmbeddingMatrix::from_rows(&[vec![1.0], vec![1.0], vec![1.0], vec![1.0]]).unwrap();
    assert!(silhouette(&stacked, &[0, 1, 0, 1]).unwrap() <= 0.0);
    assert!(silhouette(&stacked, &[0, 0, 0, 0]).is_err());
}

#[test]
fn collapsed_classes_score_perfectly() {
    let rows: Vec<Vec<f64>> = (0..12).map(|i| vec![(i % 3) as f64 * 10.0, 0.0]).collect();
    let x = EmbeddingMatrix::from_rows(&rows).unwrap();
    let truth = LabeledDataset::from_ids((0..12).map(|i| i % 3).collect()).unwrap();
    let r = evaluate_clustering(&x, &truth).unwrap();
    assert_eq!((r.homogeneity, r.completeness, r.silhouette), (1.0, 1.0, 1.0));
}

#[test]
fn micro_f1_examples() {
    assert_eq!(micro_f1(&[0, 1, 2], &[0, 1, 2]).unwrap(), 1.0);
    assert_eq!(micro_f1(&[1, 2, 0], &[0, 1, 2]).unwrap(), 0.0);
    assert_eq!(micro_f1(&[0, 1, 1, 1], &[0, 1, 1, 0]).unwrap(), 0.75);
    assert!(micro_f1(&[0], &[0, 1]).is_err());
}

#[test]
fn shuffled_labels_classify_at_chance() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let pts = random_points(&mut rng, 200, 2);
    let x = EmbeddingMatrix::from_rows(&pts).unwrap();
    let mut total = 0.0;
    for seed in 0..10u64 {
        let mut labels: Vec<usize> = (0..200).map(|i| i % 4).collect();
        labels.shuffle(&mut ChaCha8Rng::seed_from_u64(100 + seed));
        let truth = LabeledDataset::from_ids(labels).unwrap();
        total += classify_kfold(&x, &truth, 10, seed).unwrap().micro_f1;
    }
    let mean = total / 10.0;
    assert!((mean - 0.25).abs() <= 0.1, "mean micro-F1 {mean}");
}

proptest! {
    #[test]
    fn relabeling_clusters_changes_nothing(
        seed in any::<u64>(),
        n in 3usize..25,
        perm_seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = random_points(&mut rng, n, 2);
        let x = EmbeddingMatrix::from_rows(&pts).unwrap();
        let truth = random_labels(&mut rng, n, 3);
        let pred = random_labels(&mut rng, n, 3);
        let mut perm: Vec<usize> = (0..3).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(perm_seed));
        let renamed: Vec<usize> = pred.iter().map(|&c| perm[c]).collect();
        prop_assert_eq!(
            homogeneity_completeness(&pred, &truth).unwrap(),
            homogeneity_completeness(&renamed, &truth).unwrap()
        );
        let a: f64 = silhouette(&x, &pred).unwrap();
        let b: f64 = silhouette(&x, &renamed).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn homogeneity_and_completeness_are_dual(
        pred in prop::collection::vec(0usize..5, 1..40),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let truth: Vec<usize> = pred.iter().map(|_| rng.gen_range(0..4)).collect();
        let (h, c) = homogeneity_completeness(&pred, &truth).unwrap();
        let (h2, c2) = homogeneity_completeness(&truth, &pred).unwrap();
        prop_assert_eq!(h, c2);
        prop_assert_eq!(c, h2);
    }

    #[test]
    fn metrics_stay_in_range(
        seed in any::<u64>(),
        n in 2usize..30,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = random_points(&mut rng, n, 3);
        let x = EmbeddingMatrix::from_rows(&pts).unwrap();
        let truth = random_labels(&mut rng, n, 2);
        let pred = random_labels(&mut rng, n, 2);
        let (h, c) = homogeneity_completeness(&pred, &truth).unwrap();
        prop_assert!((0.0..=1.0).contains(&h) && (0.0..=1.0).contains(&c));
        let s: f64 = silhouette(&x, &pred).unwrap();
        prop_assert!((-1.0..=1.0).contains(&s));
        let f = micro_f1(&pred, &truth).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
    }
}
