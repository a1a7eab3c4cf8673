mod common;

use common::kendall_tau_b;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use toposcope_core::rankstats::{kendall, rank_scores, spearman, top_k_overlap, top_k_size};
use toposcope_core::synth::rng;

fn permutation(n: usize, seed: u64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|i| i as f64).collect();
    v.shuffle(&mut rng(seed));
    v
}

#[test]
fn spearman_closed_form_on_distinct_scores() {
    for seed in 0..100 {
        let n = 2 + (seed % 150) as usize;
        let x = permutation(n, seed);
        let y = permutation(n, seed + 10_000);
        let (rx, ry) = (rank_scores(&x), rank_scores(&y));
        // rank of a distinct score is its position from the top
        let sum_sq: u64 = (0..n)
            .map(|i| {
                let a = (n as i64 - x[i] as i64) - (n as i64 - y[i] as i64);
                (a * a) as u64
            })
            .sum();
        let nf = n as f64;
        let expected = 1.0 - 6.0 * sum_sq as f64 / (nf * (nf * nf - 1.0));
        assert_eq!(spearman(&rx, &ry).unwrap(), expected);
    }
}

#[test]
fn kendall_matches_pair_count() {
    for seed in 0..100 {
        let mut r = rng(seed);
        let n = r.gen_range(2..=200);
        // few distinct levels force plenty of ties
        let levels = r.gen_range(2..=n.max(3));
        let x: Vec<f64> = (0..n).map(|_| r.gen_range(0..levels) as f64).collect();
        let y: Vec<f64> = (0..n).map(|_| r.gen_range(0..levels) as f64).collect();
        let (rx, ry) = (rank_scores(&x), rank_scores(&y));
        let expected = kendall_tau_b(&rx.frac_rank, &ry.frac_rank);
        let got = kendall(&rx, &ry).unwrap();
        assert!((got - expected).abs() < 1e-12, "seed {seed}: {got} vs {expected}");
    }
}

#[test]
fn identity_and_reversal() {
    for n in [2, 3, 17, 200] {
        let x: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let rev: Vec<f64> = x.iter().map(|v| -v).collect();
        let (r, rr) = (rank_scores(&x), rank_scores(&rev));
        assert_eq!(spearman(&r, &r).unwrap(), 1.0);
        assert_eq!(kendall(&r, &r).unwrap(), 1.0);
        assert_eq!(spearman(&r, &rr).unwrap(), -1.0);
        assert_eq!(kendall(&r, &rr).unwrap(), -1.0);
        assert_eq!(top_k_overlap(&r, &r, 0.05).unwrap(), 100.0);
    }
}

proptest! {
    #[test]
    fn overlap_symmetric_and_bounded(x in proptest::collection::vec(0u8..20, 2..80), seed in any::<u64>(), kf in 0.01f64..=1.0) {
        let xs: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        let ys = permutation(xs.len(), seed);
        let (rx, ry) = (rank_scores(&xs), rank_scores(&ys));
        let a = top_k_overlap(&rx, &ry, kf).unwrap();
        prop_assert_eq!(a, top_k_overlap(&ry, &rx, kf).unwrap());
        prop_assert!((0.0..=100.0).contains(&a));
        prop_assert!(top_k_size(xs.len(), kf) >= 1);
    }

    #[test]
    fn coefficients_symmetric_and_bounded(x in proptest::collection::vec(0u8..6, 2..60), seed in any::<u64>()) {
        let xs: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        let mut ys = xs.clone();
        ys.shuffle(&mut rng(seed));
        let (rx, ry) = (rank_scores(&xs), rank_scores(&ys));
        for f in [spearman, kendall] {
            let a = f(&rx, &ry).unwrap();
            prop_assert_eq!(a, f(&ry, &rx).unwrap());
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&a));
        }
    }

    #[test]
    fn fractional_ranks_sum_to_triangle(x in proptest::collection::vec(0u8..5, 1..100)) {
        let xs: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        let r = rank_scores(&xs);
        let n = xs.len() as f64;
        prop_assert_eq!(r.frac_rank.iter().sum::<f64>(), n * (n + 1.0) / 2.0);
    }
}
