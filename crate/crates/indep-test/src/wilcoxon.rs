//! One-sided Wilcoxon signed-rank test of H1: paired differences are
//! negative (first sample smaller).
//!
//! Zero differences are dropped and tied magnitudes get average ranks. Up to
//! 25 retained pairs the p-value is exact — the null distribution of W+ is
//! enumerated by subset-sum over the (doubled, hence integral) ranks — and
//! beyond that a normal approximation with tie correction and continuity
//! correction is used.

use statrs::distribution::{ContinuousCDF, Normal};

/// Largest retained-pair count for which [`PMode::Auto`] stays exact.
pub const EXACT_LIMIT: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PMode {
    Auto,
    Exact,
    Normal,
}

/// p-value for H1: the differences tend negative. `diffs[i]` is
/// `first[i] - second[i]`. Returns 1.0 when every difference is zero.
pub fn signed_rank_less(diffs: &[i64], mode: PMode) -> f64 {
    let nonzero: Vec<i64> = diffs.iter().copied().filter(|&d| d != 0).collect();
    let n = nonzero.len();
    if n == 0 {
        return 1.0;
    }

    // Doubled average ranks of |d|, so ties stay integral.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| nonzero[i].unsigned_abs());
    let mut doubled_rank = vec![0u64; n];
    let mut at = 0usize;
    while at < n {
        let mut end = at;
        while end < n && nonzero[order[end]].unsigned_abs() == nonzero[order[at]].unsigned_abs() {
            end += 1;
        }
        // 1-based positions at..=end share rank (at+1 + end)/2; doubled.
        let doubled = (at + 1 + end) as u64;
        for &i in &order[at..end] {
            doubled_rank[i] = doubled;
        }
        at = end;
    }

    let w_plus_doubled: u64 = (0..n).filter(|&i| nonzero[i] > 0).map(|i| doubled_rank[i]).sum();

    let exact = match mode {
        PMode::Exact => true,
        PMode::Normal => false,
        PMode::Auto => n <= EXACT_LIMIT,
    };
    if exact {
        exact_p(&doubled_rank, w_plus_doubled)
    } else {
        normal_p(&doubled_rank, w_plus_doubled)
    }
}

/// P(W+ <= observed) by dynamic programming over all 2^n sign assignments.
fn exact_p(doubled_rank: &[u64], observed: u64) -> f64 {
    let total: u64 = doubled_rank.iter().sum();
    let bound = observed.min(total);
    let mut counts = vec![0u64; total as usize + 1];
    counts[0] = 1;
    for &r in doubled_rank {
        let r = r as usize;
        for s in (r..counts.len()).rev() {
            counts[s] += counts[s - r];
        }
    }
    let favourable: u64 = counts[..=bound as usize].iter().sum();
    favourable as f64 / 2f64.powi(doubled_rank.len() as i32)
}

fn normal_p(doubled_rank: &[u64], w_plus_doubled: u64) -> f64 {
    let n = doubled_rank.len() as f64;
    let w = w_plus_doubled as f64 / 2.0;
    let mean = n * (n + 1.0) / 4.0;
    // Tie correction: subtract sum(t^3 - t)/48 over tie groups.
    let mut sorted = doubled_rank.to_vec();
    sorted.sort_unstable();
    let mut tie_term = 0f64;
    let mut at = 0usize;
    while at < sorted.len() {
        let mut end = at;
        while end < sorted.len() && sorted[end] == sorted[at] {
            end += 1;
        }
        let t = (end - at) as f64;
        tie_term += t * t * t - t;
        at = end;
    }
    let variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    let z = (w - mean + 0.5) / variance.sqrt();
    let p = Normal::new(0.0, 1.0).unwrap().cdf(z);
    p.clamp(f64::MIN_POSITIVE, 1.0)
}
