use indep_test::{signed_rank_less, wilcoxon_less, PMode, ScorePair};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Brute-force oracle: enumerate all 2^n sign assignments over the observed
/// |d| multiset (average ranks for ties) and count W+ at or below the
/// observed W+. Independent of the implementation's subset-sum path.
fn oracle_exact(diffs: &[i64]) -> f64 {
    let nonzero: Vec<i64> = diffs.iter().copied().filter(|&d| d != 0).collect();
    let n = nonzero.len();
    if n == 0 {
        return 1.0;
    }
    assert!(n <= 20, "oracle is exponential");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| nonzero[i].unsigned_abs());
    let mut rank = vec![0f64; n];
    let mut at = 0;
    while at < n {
        let mut end = at;
        while end < n && nonzero[order[end]].unsigned_abs() == nonzero[order[at]].unsigned_abs() {
            end += 1;
        }
        let avg = (at + 1 + end) as f64 / 2.0;
        for &i in &order[at..end] {
            rank[i] = avg;
        }
        at = end;
    }
    let observed: f64 = (0..n).filter(|&i| nonzero[i] > 0).map(|i| rank[i]).sum();
    let mut favourable = 0u64;
    for signs in 0u64..1 << n {
        let w: f64 = (0..n).filter(|&i| signs >> i & 1 == 1).map(|i| rank[i]).sum();
        if w <= observed + 1e-9 {
            favourable += 1;
        }
    }
    favourable as f64 / (1u64 << n) as f64
}

fn pairs(raw: &[(u64, u64)]) -> Vec<ScorePair> {
    raw.iter()
        .map(|&(real_errors, ideal_errors)| ScorePair { real_errors, ideal_errors })
        .collect()
}

#[test]
fn five_wins_no_ties_is_one_over_thirty_two() {
    let p = wilcoxon_less(&pairs(&[(0, 10), (1, 12), (2, 14), (3, 16), (4, 18)]));
    assert!((p - 1.0 / 32.0).abs() < 1e-12, "got {p}");
}

#[test]
fn five_losses_give_p_one() {
    let p = wilcoxon_less(&pairs(&[(10, 0), (12, 1), (14, 2), (16, 3), (18, 4)]));
    assert_eq!(p, 1.0);
}

#[test]
fn all_zero_differences_give_p_one() {
    let p = wilcoxon_less(&pairs(&[(5, 5), (7, 7), (9, 9)]));
    assert_eq!(p, 1.0);
}

#[test]
fn exact_mode_matches_brute_force_on_a_fixed_suite() {
    let suite: Vec<Vec<i64>> = vec![
        vec![-1],
        vec![1],
        vec![-1, -1, -1],
        vec![-1, 1, -2, 2, -3],
        vec![-5, -5, -5, 5, 5],          // heavy ties
        vec![-3, -3, 2, 2, 2, -1, 1],    // mixed ties
        vec![0, 0, -4, 3],               // zeros dropped
        vec![-10, 9, -8, 7, -6, 5, -4, 3, -2, 1],
        vec![2, 2, 2, 2, -1],
        vec![-7, -7, -7, -7, -7, -7, -7, -7, -7, -7],
    ];
    for diffs in &suite {
        let got = signed_rank_less(diffs, PMode::Exact);
        let want = oracle_exact(diffs);
        assert!(
            (got - want).abs() < 1e-9,
            "diffs {diffs:?}: impl {got} vs oracle {want}"
        );
    }
    // And random small lists, ties and zeros included.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(1..=10);
        let diffs: Vec<i64> = (0..n).map(|_| rng.gen_range(-4i64..=4)).collect();
        let got = signed_rank_less(&diffs, PMode::Exact);
        let want = oracle_exact(&diffs);
        assert!(
            (got - want).abs() < 1e-9,
            "diffs {diffs:?}: impl {got} vs oracle {want}"
        );
    }
}

#[test]
fn normal_approximation_tracks_exact_for_mid_sizes() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let n = rng.gen_range(12..=25);
        let diffs: Vec<i64> = (0..n)
            .map(|_| loop {
                let d = rng.gen_range(-30i64..=30);
                if d != 0 {
                    break d;
                }
            })
            .collect();
        let exact = signed_rank_less(&diffs, PMode::Exact);
        let normal = signed_rank_less(&diffs, PMode::Normal);
        assert!(
            (exact - normal).abs() <= 0.02,
            "n={n} diffs {diffs:?}: exact {exact} vs normal {normal}"
        );
    }
}

proptest! {
    /// Appending a real-better pair whose margin dominates every existing
    /// difference never weakens the evidence. (Without the domination
    /// condition this can fail: a small appended margin inflates the ranks
    /// of the existing positive differences, e.g. diffs [7,-8,5,7,-8] move
    /// from p=0.375 to p=0.421875 when -1 is appended.)
    #[test]
    fn monotone_evidence_for_dominating_margins(
        base in proptest::collection::vec((0u64..30, 0u64..30), 1..10),
        extra_real in 0u64..10,
        extra_margin in 0u64..20,
    ) {
        let mut list = pairs(&base);
        let before = wilcoxon_less(&list);
        let dominating = extra_margin
            + list.iter().map(|p| p.diff().unsigned_abs()).max().unwrap_or(0)
            + 1;
        list.push(ScorePair {
            real_errors: extra_real,
            ideal_errors: extra_real + dominating,
        });
        let after = wilcoxon_less(&list);
        prop_assert!(
            after <= before + 1e-12,
            "p rose from {} to {} after adding evidence", before, after
        );
    }

    /// p is always a probability and exact mode never returns zero.
    #[test]
    fn p_is_a_probability(raw in proptest::collection::vec((0u64..50, 0u64..50), 1..26)) {
        let p = wilcoxon_less(&pairs(&raw));
        prop_assert!(p > 0.0 && p <= 1.0);
    }
}
