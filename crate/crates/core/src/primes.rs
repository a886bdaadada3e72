//! Prime sieving, exact interval queries and the computational check of the
//! two prime-existence bounds the strategies rely on.
//!
//! The two bounds:
//!
//! * at least two primes in `(n/2, n]` for every `n >= 3` except 4, 6 and 10;
//! * at least three primes in `(n/4, n/3]` for every `n` outside
//!   `[1,110] ∪ [116,122] ∪ [124,128] ∪ [172,176]`.
//!
//! Both follow analytically from a prime-gap bound valid for `x >= 3275`
//! (a prime in `(x, x·132/131]`) once `n` passes [`TWO_PRIME_THRESHOLD`] and
//! [`THREE_PRIME_THRESHOLD`] respectively; below those thresholds they are
//! checked here by enumeration.

use num_rational::Ratio;
use serde::Serialize;

use crate::{Error, Result};

/// Start of the range where the prime-gap bound applies.
pub const GAP_BOUND_START: u64 = 3275;
/// Every `x >= GAP_BOUND_START` has a prime in `(x, x * GAP_RATIO_NUM / GAP_RATIO_DEN]`.
pub const GAP_RATIO_NUM: u64 = 132;
pub const GAP_RATIO_DEN: u64 = 131;
/// Beyond this the two-prime bound holds analytically.
pub const TWO_PRIME_THRESHOLD: u64 = 6550;
/// Beyond this the three-prime bound holds analytically.
pub const THREE_PRIME_THRESHOLD: u64 = 13100;
pub const DEFAULT_LIMIT: u64 = 20000;

/// Exact rational interval bound.
pub type Bound = Ratio<u64>;

/// `n / d` as an exact bound.
pub fn frac(n: u64, d: u64) -> Bound {
    Ratio::new(n, d)
}

#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    is_prime: Vec<bool>,
    prefix_count: Vec<u32>,
}

/// Sieve of Eratosthenes over `0..=limit`.
pub fn build_prime_table(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::InvalidArgument(format!("prime table limit {limit} is below 2")));
    }
    let len = limit as usize + 1;
    let mut is_prime = vec![true; len];
    is_prime[0] = false;
    is_prime[1] = false;
    let mut p = 2;
    while p * p < len {
        if is_prime[p] {
            for m in (p * p..len).step_by(p) {
                is_prime[m] = false;
            }
        }
        p += 1;
    }
    let mut prefix_count = Vec::with_capacity(len);
    let mut count = 0u32;
    for &b in &is_prime {
        count += b as u32;
        prefix_count.push(count);
    }
    Ok(PrimeTable { limit, is_prime, prefix_count })
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Panics above the limit; use [`PrimeTable::check`] first for untrusted input.
    pub fn is_prime(&self, k: u64) -> bool {
        self.is_prime[k as usize]
    }

    /// π(k).
    pub fn count_upto(&self, k: u64) -> u32 {
        self.prefix_count[k as usize]
    }

    pub fn check(&self, needed: u64) -> Result<()> {
        if needed > self.limit {
            Err(Error::TableTooSmall { needed, limit: self.limit })
        } else {
            Ok(())
        }
    }

    /// Primes `p` with `lo < p <= hi`, ascending.
    pub fn primes_in_interval(&self, lo_exclusive: Bound, hi_inclusive: Bound) -> Result<Vec<u64>> {
        let hi = hi_inclusive.floor().to_integer();
        self.check(hi)?;
        let first = lo_exclusive.floor().to_integer() + 1;
        Ok((first..=hi).filter(|&p| self.is_prime(p)).collect())
    }

    /// Number of primes in `(lo, hi]` via the prefix counts.
    pub fn count_in_interval(&self, lo_exclusive: Bound, hi_inclusive: Bound) -> Result<u32> {
        let hi = hi_inclusive.floor().to_integer();
        self.check(hi)?;
        let lo = lo_exclusive.floor().to_integer().min(hi);
        Ok(self.prefix_count[hi as usize] - self.prefix_count[lo as usize])
    }

    /// Primes in `(n/2, n]`: the numbers reachable only through 1.
    pub fn large_primes(&self, n: u64) -> Result<Vec<u64>> {
        self.primes_in_interval(frac(n, 2), frac(n, 1))
    }

    /// Primes in `(n/4, n/3]`.
    pub fn third_band_primes(&self, n: u64) -> Result<Vec<u64>> {
        self.primes_in_interval(frac(n, 4), frac(n, 3))
    }
}

pub fn primes_in_interval(table: &PrimeTable, lo_exclusive: Bound, hi_inclusive: Bound) -> Result<Vec<u64>> {
    table.primes_in_interval(lo_exclusive, hi_inclusive)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AppendixBoundsReport {
    /// `n` in `1..=TWO_PRIME_THRESHOLD` with fewer than two primes in `(n/2, n]`.
    pub two_prime_exceptions: Vec<u64>,
    /// `n` in `1..=THREE_PRIME_THRESHOLD` with fewer than three primes in `(n/4, n/3]`.
    pub three_prime_exceptions: Vec<u64>,
    pub checked_up_to: u64,
}

impl AppendixBoundsReport {
    /// Two-prime exceptions from 3 on; 1 and 2 are reported but carry no claim.
    pub fn two_prime_claim_exceptions(&self) -> Vec<u64> {
        self.two_prime_exceptions.iter().copied().filter(|&n| n >= 3).collect()
    }

    /// Three-prime exceptions folded into maximal runs.
    pub fn three_prime_ranges(&self) -> Vec<(u64, u64)> {
        to_ranges(&self.three_prime_exceptions)
    }
}

pub fn to_ranges(values: &[u64]) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::new();
    for &v in values {
        match out.last_mut() {
            Some((_, hi)) if *hi + 1 == v => *hi = v,
            _ => out.push((v, v)),
        }
    }
    out
}

pub fn verify_appendix_bounds(table: &PrimeTable) -> Result<AppendixBoundsReport> {
    table.check(THREE_PRIME_THRESHOLD)?;
    let two_prime_exceptions =
        (1..=TWO_PRIME_THRESHOLD).filter(|&n| table.count_in_interval(frac(n, 2), frac(n, 1)).unwrap() < 2).collect();
    let three_prime_exceptions =
        (1..=THREE_PRIME_THRESHOLD).filter(|&n| table.count_in_interval(frac(n, 4), frac(n, 3)).unwrap() < 3).collect();
    Ok(AppendixBoundsReport { two_prime_exceptions, three_prime_exceptions, checked_up_to: THREE_PRIME_THRESHOLD })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_division(k: u64) -> bool {
        k >= 2 && (2..).take_while(|d| d * d <= k).all(|d| !k.is_multiple_of(d))
    }

    #[test]
    fn small_table() {
        let t = build_prime_table(10).unwrap();
        let primes: Vec<u64> = (0..=10).filter(|&k| t.is_prime(k)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7]);
        assert_eq!(t.count_upto(10), 4);
        assert!(!t.is_prime(0) && !t.is_prime(1) && t.is_prime(2));
    }

    #[test]
    fn limit_below_two_is_rejected() {
        assert!(matches!(build_prime_table(1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn gap_bound_start_is_composite() {
        let t = build_prime_table(GAP_BOUND_START).unwrap();
        assert!(!t.is_prime(3275));
        assert_eq!(3275, 5 * 5 * 131);
    }

    #[test]
    fn prime_count_matches_trial_division_recount() {
        let t = build_prime_table(THREE_PRIME_THRESHOLD).unwrap();
        let recount = (0..=THREE_PRIME_THRESHOLD).filter(|&k| trial_division(k)).count() as u32;
        assert_eq!(t.count_upto(THREE_PRIME_THRESHOLD), recount);
        assert_eq!(recount, 1558);
    }

    #[test]
    fn interval_boundaries_are_exact() {
        let t = build_prime_table(400).unwrap();
        assert_eq!(t.large_primes(8).unwrap(), vec![5, 7]);
        assert_eq!(t.large_primes(2).unwrap(), vec![2]);
        // 3 = 6/2 is excluded by strictness
        assert_eq!(t.large_primes(6).unwrap(), vec![5]);
        assert_eq!(t.large_primes(10).unwrap(), vec![7]);
        let band = t.third_band_primes(200).unwrap();
        assert_eq!(band, vec![53, 59, 61]);
        // 12/3 = 4 is not prime; (3, 4] is empty
        assert!(t.third_band_primes(12).unwrap().is_empty());
        // hi inclusive: 33/3 = 11
        assert_eq!(t.third_band_primes(33).unwrap(), vec![11]);
    }

    #[test]
    fn query_above_limit_fails() {
        let t = build_prime_table(100).unwrap();
        assert_eq!(t.large_primes(101), Err(Error::TableTooSmall { needed: 101, limit: 100 }));
        assert!(verify_appendix_bounds(&t).is_err());
    }

    #[test]
    fn bound_exceptions() {
        let t = build_prime_table(DEFAULT_LIMIT).unwrap();
        let r = verify_appendix_bounds(&t).unwrap();
        assert_eq!(r.two_prime_exceptions, vec![1, 2, 4, 6, 10]);
        assert_eq!(r.two_prime_claim_exceptions(), vec![4, 6, 10]);
        assert_eq!(r.three_prime_ranges(), vec![(1, 110), (116, 122), (124, 128), (172, 176)]);
        for &n in &r.three_prime_exceptions {
            assert!(t.third_band_primes(n).unwrap().len() < 3);
        }
    }

    proptest! {
        #[test]
        fn sieve_agrees_with_trial_division(k in 0u64..=DEFAULT_LIMIT) {
            let t = build_prime_table(DEFAULT_LIMIT).unwrap();
            prop_assert_eq!(t.is_prime(k), trial_division(k));
        }

        #[test]
        fn prefix_count_steps_by_primality(k in 1u64..5000) {
            let t = build_prime_table(5000).unwrap();
            let step = t.count_upto(k) - t.count_upto(k - 1);
            prop_assert_eq!(step == 1, t.is_prime(k));
            prop_assert!(step <= 1);
        }

        #[test]
        fn interval_uses_integer_cross_multiplication(n in 1u64..3000) {
            let t = build_prime_table(3000).unwrap();
            let fast = t.primes_in_interval(frac(n, 4), frac(n, 3)).unwrap();
            let slow: Vec<u64> = (1..=n).filter(|&p| trial_division(p) && 4 * p > n && 3 * p <= n).collect();
            prop_assert_eq!(fast, slow);
        }
    }
}
