use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use super::HarnessError;

/// Largest combined sample size for which p-values are enumerated exactly.
pub const EXACT_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RankSum {
    /// Mann-Whitney U of the first sample.
    pub u: f64,
    /// `P(U <= observed)` under the null hypothesis: small when the first
    /// sample tends to be lower.
    pub p_one_sided: f64,
    pub exact: bool,
}

fn check(a: &[f64], b: &[f64]) -> Result<(), HarnessError> {
    if a.is_empty() || b.is_empty() {
        return Err(HarnessError::EmptySample);
    }
    if a.iter().chain(b).any(|x| !x.is_finite()) {
        return Err(HarnessError::NonFiniteSample);
    }
    Ok(())
}

/// Midranks (1-based) of the concatenation `a ++ b`, plus the tie groups.
fn midranks(a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let all: Vec<f64> = a.iter().chain(b).copied().collect();
    let mut order: Vec<usize> = (0..all.len()).collect();
    order.sort_by(|&i, &j| all[i].total_cmp(&all[j]));
    let mut ranks = vec![0.0; all.len()];
    let mut ties = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && all[order[end]] == all[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        ties.push(end - start);
        start = end;
    }
    (ranks, ties)
}

fn u_statistic(a: &[f64], b: &[f64]) -> (f64, Vec<usize>) {
    let (ranks, ties) = midranks(a, b);
    let na = a.len() as f64;
    let rank_sum: f64 = ranks[..a.len()].iter().sum();
    (rank_sum - na * (na + 1.0) / 2.0, ties)
}

/// Exact lower-tail p-value by enumerating every assignment of ranks to the
/// first sample. `None` when there are ties or the samples are too large.
pub fn rank_sum_exact(a: &[f64], b: &[f64]) -> Result<Option<f64>, HarnessError> {
    check(a, b)?;
    let (u, ties) = u_statistic(a, b);
    let n = a.len() + b.len();
    if n > EXACT_LIMIT || ties.iter().any(|&t| t > 1) {
        return Ok(None);
    }
    let offset = (a.len() * (a.len() + 1) / 2) as f64;
    let (mut hits, mut total) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != a.len() {
            continue;
        }
        let ranks: u32 = (0..n as u32).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).sum();
        total += 1;
        if f64::from(ranks) - offset <= u {
            hits += 1;
        }
    }
    Ok(Some(hits as f64 / total as f64))
}

/// Lower-tail p-value from the normal approximation with tie and continuity
/// corrections.
pub fn rank_sum_normal(a: &[f64], b: &[f64]) -> Result<f64, HarnessError> {
    check(a, b)?;
    let (u, ties) = u_statistic(a, b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let n = na + nb;
    let tie_term: f64 = ties.iter().map(|&t| (t as f64).powi(3) - t as f64).sum();
    let variance = if n > 1.0 {
        na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)))
    } else {
        0.0
    };
    let mean = na * nb / 2.0;
    if variance <= 0.0 {
        return Ok(if u <= mean { 1.0 } else { 0.0 });
    }
    let z = (u - mean + 0.5) / variance.sqrt();
    Ok(Normal::new(0.0, 1.0).expect("standard normal").cdf(z).min(1.0))
}

/// Mann-Whitney rank-sum test of `a` against `b`, exact for small tie-free
/// samples.
pub fn rank_sum(a: &[f64], b: &[f64]) -> Result<RankSum, HarnessError> {
    check(a, b)?;
    let (u, _) = u_statistic(a, b);
    Ok(match rank_sum_exact(a, b)? {
        Some(p) => RankSum {
            u,
            p_one_sided: p,
            exact: true,
        },
        None => RankSum {
            u,
            p_one_sided: rank_sum_normal(a, b)?,
            exact: false,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // Counts of rank arrangements with each U value, by the usual recurrence.
    fn u_counts(m: usize, n: usize) -> Vec<u64> {
        if m == 0 || n == 0 {
            return vec![1];
        }
        let left = u_counts(m - 1, n);
        let right = u_counts(m, n - 1);
        let mut out = vec![0; m * n + 1];
        for (u, c) in left.iter().enumerate() {
            out[u + n] += c;
        }
        for (u, c) in right.iter().enumerate() {
            out[u] += c;
        }
        out
    }

    fn recurrence_p(m: usize, n: usize, u: f64) -> f64 {
        let counts = u_counts(m, n);
        let total: u64 = counts.iter().sum();
        let below: u64 = counts.iter().enumerate().filter(|(k, _)| *k as f64 <= u).map(|(_, c)| c).sum();
        below as f64 / total as f64
    }

    #[test]
    fn textbook_case() {
        let r = rank_sum(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert_eq!(r.u, 0.0);
        assert!((r.p_one_sided - 1.0 / 6.0).abs() < 1e-15);
        assert!(r.exact);
        let flipped = rank_sum(&[3.0, 4.0], &[1.0, 2.0]).unwrap();
        assert_eq!(flipped.u, 4.0);
        assert_eq!(flipped.p_one_sided, 1.0);
    }

    #[test]
    fn identical_samples_sit_at_the_centre() {
        let a = [3.0, 1.0, 4.0, 1.0, 5.0];
        let r = rank_sum(&a, &a).unwrap();
        assert_eq!(r.u, 12.5);
        assert!(!r.exact);
        assert!(r.p_one_sided > 0.5);
        let flat = rank_sum(&[2.0; 4], &[2.0; 3]).unwrap();
        assert_eq!(flat.u, 6.0);
        assert_eq!(flat.p_one_sided, 1.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(rank_sum(&[], &[1.0]), Err(HarnessError::EmptySample)));
        assert!(matches!(rank_sum(&[1.0], &[]), Err(HarnessError::EmptySample)));
        assert!(matches!(rank_sum(&[f64::NAN], &[1.0]), Err(HarnessError::NonFiniteSample)));
    }

    #[test]
    fn exact_matches_recurrence() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..300 {
            let m = 1 + (rand::Rng::gen_range(&mut rng, 0..6));
            let n = 1 + (rand::Rng::gen_range(&mut rng, 0..6));
            let mut pool: Vec<f64> = (0..m + n).map(|x| x as f64).collect();
            pool.shuffle(&mut rng);
            let (a, b) = pool.split_at(m);
            let r = rank_sum(a, b).unwrap();
            assert!(r.exact);
            assert!((r.p_one_sided - recurrence_p(m, n, r.u)).abs() < 1e-12);
        }
    }

    #[test]
    fn normal_approximation_tracks_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(66);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let mut pool: Vec<f64> = (0..12).map(|x| x as f64 * 1.5).collect();
            pool.shuffle(&mut rng);
            let (a, b) = pool.split_at(6);
            let exact = rank_sum_exact(a, b).unwrap().unwrap();
            worst = worst.max((exact - rank_sum_normal(a, b).unwrap()).abs());
        }
        assert!(worst <= 0.02, "{worst}");
    }

    proptest! {
        #[test]
        fn complementary_and_antisymmetric(
            a in prop::collection::vec(-50i32..50, 1..15),
            b in prop::collection::vec(-50i32..50, 1..15),
        ) {
            let a: Vec<f64> = a.into_iter().map(f64::from).collect();
            let b: Vec<f64> = b.into_iter().map(f64::from).collect();
            let ab = rank_sum(&a, &b).unwrap();
            let ba = rank_sum(&b, &a).unwrap();
            let nm = (a.len() * b.len()) as f64;
            prop_assert!((ab.u + ba.u - nm).abs() < 1e-9);
            prop_assert!((ab.u - nm / 2.0 + (ba.u - nm / 2.0)).abs() < 1e-9);
            prop_assert!((0.0..=1.0).contains(&ab.p_one_sided));
        }
    }
}
