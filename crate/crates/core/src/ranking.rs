//! Rank of the original sample under the tie-broken strict total order.
//!
//! Statistics are compared with `<` refined by a uniformly random
//! permutation `pi` on ties, which makes the order strict and total. The
//! rank of the original sample counts how many statistics it dominates:
//! the sample with the largest statistic gets rank `m`, and a candidate is
//! kept in the confidence region when its rank stays at or below `q`.

use crate::error::{Error, Result};
use crate::hyper::HyperParams;

/// Result of ranking the original sample among `m` statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOutcome {
    /// The statistics `Z^(0), ..., Z^(m-1)`.
    pub z: Vec<f64>,
    /// Tie-breaking permutation that was in force.
    pub pi: Vec<usize>,
    /// Rank of `Z^(0)`, in `1..=m`; rank `m` means it dominated every
    /// alternative under the tie-broken order.
    pub rank: usize,
}

/// The strict total order: `z_k` precedes `z_j` iff `z_k < z_j`, or they
/// are equal and `pi_k < pi_j`. Callers must screen out NaN first.
pub fn tie_broken_less(z_k: f64, z_j: f64, pi_k: usize, pi_j: usize) -> bool {
    debug_assert!(!z_k.is_nan() && !z_j.is_nan());
    debug_assert_ne!(pi_k, pi_j);
    z_k < z_j || (z_k == z_j && pi_k < pi_j)
}

fn check_permutation(pi: &[usize]) -> Result<()> {
    let m = pi.len();
    let mut seen = vec![false; m];
    for &p in pi {
        if p >= m || seen[p] {
            return Err(Error::InvalidPermutation { len: m });
        }
        seen[p] = true;
    }
    Ok(())
}

/// Rank `Z^(0)` among all statistics: `1 + #{ i >= 1 : Z^(i) tie-broken
/// below Z^(0) }`. NaN statistics abort instead of sorting arbitrarily;
/// a silently ordered NaN would corrupt the coverage level.
pub fn rank_original(z: &[f64], pi: &[usize]) -> Result<RankOutcome> {
    if z.is_empty() {
        return Err(Error::SampleCount { m: 0, min: 1 });
    }
    if pi.len() != z.len() {
        return Err(Error::DimensionMismatch {
            expected: z.len(),
            got: pi.len(),
        });
    }
    check_permutation(pi)?;
    for (index, v) in z.iter().enumerate() {
        if v.is_nan() {
            return Err(Error::NonFiniteStatistic { index });
        }
    }
    let rank = 1 + (1..z.len())
        .filter(|&i| tie_broken_less(z[i], z[0], pi[i], pi[0]))
        .count();
    Ok(RankOutcome {
        z: z.to_vec(),
        pi: pi.to_vec(),
        rank,
    })
}

/// Membership in the one-sided region: `rank <= q`.
pub fn region_membership(outcome: &RankOutcome, hp: &HyperParams) -> bool {
    outcome.rank <= hp.q()
}

/// Two-sided form with both hyper-parameters free, used by the harness
/// when exercising the general coverage statement `(q - p + 1) / m`.
pub fn region_membership_general(rank: usize, p: usize, q: usize) -> bool {
    p <= rank && rank <= q
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn strict_numeric_order_dominates() {
        assert!(tie_broken_less(0.2, 0.9, 3, 0));
        assert!(!tie_broken_less(0.9, 0.2, 0, 3));
    }

    #[test]
    fn ties_broken_by_permutation() {
        assert!(!tie_broken_less(0.3, 0.3, 1, 0));
        assert!(tie_broken_less(0.3, 0.3, 0, 1));
    }

    #[test]
    fn rank_counts_dominated_statistics() {
        // one statistic strictly below 0.5, one strictly above
        let outcome = rank_original(&[0.5, 0.2, 0.9], &[0, 1, 2]).unwrap();
        assert_eq!(outcome.rank, 2);
        let other = rank_original(&[0.5, 0.2, 0.9], &[2, 1, 0]).unwrap();
        assert_eq!(other.rank, 2);
    }

    #[test]
    fn pure_tie_decided_by_permutation() {
        // pi ranks the original above the alternative
        assert_eq!(rank_original(&[0.0, 0.0], &[1, 0]).unwrap().rank, 2);
        assert_eq!(rank_original(&[0.0, 0.0], &[0, 1]).unwrap().rank, 1);
    }

    #[test]
    fn singleton_has_rank_one() {
        assert_eq!(rank_original(&[4.2], &[0]).unwrap().rank, 1);
    }

    #[test]
    fn nan_statistic_is_an_error() {
        let err = rank_original(&[0.0, f64::NAN], &[0, 1]).unwrap_err();
        assert!(matches!(err, Error::NonFiniteStatistic { index: 1 }));
    }

    #[test]
    fn invalid_permutation_rejected() {
        assert!(rank_original(&[0.0, 1.0], &[0, 0]).is_err());
        assert!(rank_original(&[0.0, 1.0], &[0, 2]).is_err());
        assert!(rank_original(&[0.0, 1.0], &[0]).is_err());
    }

    #[test]
    fn membership_thresholds() {
        let hp = HyperParams::new(50, 45).unwrap();
        let outcome = rank_original(&vec![0.0; 50], &(0..50).collect::<Vec<_>>()).unwrap();
        // the all-zero tie with identity pi gives rank 1
        assert_eq!(outcome.rank, 1);
        assert!(region_membership(&outcome, &hp));
        assert!(region_membership_general(45, 1, 45));
        assert!(!region_membership_general(50, 1, 49));
        assert!(region_membership_general(1, 1, 1));
    }

    fn perm_strategy(m: usize) -> impl Strategy<Value = Vec<usize>> {
        Just((0..m).collect::<Vec<_>>()).prop_shuffle()
    }

    proptest! {
        // P1: permuting the alternatives (z and pi together) never moves
        // the original sample's rank.
        #[test]
        fn rank_invariant_to_alternative_order(
            z in prop::collection::vec(0.0f64..1.0, 2..12),
            ties in prop::collection::vec(prop::bool::ANY, 2..12),
            seed_perm in prop::collection::vec(any::<u16>(), 12),
        ) {
            let m = z.len().min(ties.len());
            let mut z: Vec<f64> = z[..m].to_vec();
            // inject ties to exercise the pi path
            for i in 1..m {
                if ties[i] {
                    z[i] = z[0];
                }
            }
            let pi: Vec<usize> = {
                let mut idx: Vec<usize> = (0..m).collect();
                idx.sort_by_key(|&i| (seed_perm[i], i));
                idx
            };
            let base = rank_original(&z, &pi).unwrap();

            // rotate the alternatives by one
            let mut z2 = z.clone();
            let mut pi2 = pi.clone();
            z2[1..].rotate_left(1);
            pi2[1..].rotate_left(1);
            let rotated = rank_original(&z2, &pi2).unwrap();
            prop_assert_eq!(base.rank, rotated.rank);
        }

        // P2: with pairwise distinct extended elements, ranking each
        // element against the rest yields m distinct ranks.
        #[test]
        fn all_positions_get_distinct_ranks(
            z in prop::collection::vec(0.0f64..1.0, 2..10),
            ties in prop::collection::vec(prop::bool::ANY, 10),
        ) {
            let m = z.len();
            let mut z = z;
            for i in 1..m {
                if ties[i] {
                    z[i] = z[i - 1];
                }
            }
            let pi: Vec<usize> = (0..m).collect();
            let mut ranks = Vec::with_capacity(m);
            for k in 0..m {
                let mut zk = vec![z[k]];
                let mut pik = vec![pi[k]];
                for j in 0..m {
                    if j != k {
                        zk.push(z[j]);
                        pik.push(pi[j]);
                    }
                }
                ranks.push(rank_original(&zk, &pik).unwrap().rank);
            }
            ranks.sort_unstable();
            let expected: Vec<usize> = (1..=m).collect();
            prop_assert_eq!(ranks, expected);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        // Uniform-rank law: exchangeable statistics plus an independent
        // uniform permutation give a uniform rank. Checked with a
        // chi-square test at m = 10 over 10_000 trials.
        #[test]
        fn rank_is_uniform_for_exchangeable_statistics(master in any::<u64>()) {
            use rand::Rng;
            use crate::rng::SeedSpec;

            let m = 10;
            let trials = 10_000;
            let seed = SeedSpec::new(master);
            let mut counts = vec![0u64; m];
            for t in 0..trials {
                let mut rng = seed.stream("rank-unif-z", t, 0);
                let z: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
                let mut pi: Vec<usize> = (0..m).collect();
                let mut prng = seed.stream("rank-unif-pi", t, 0);
                crate::resampling::shuffle_in_place(&mut pi, &mut prng);
                let outcome = rank_original(&z, &pi).unwrap();
                counts[outcome.rank - 1] += 1;
            }
            let (_stat, p_value) = crate::harness::chi_square_uniform(&counts);
            prop_assert!(p_value > 0.001, "p-value {}", p_value);
        }
    }
}
