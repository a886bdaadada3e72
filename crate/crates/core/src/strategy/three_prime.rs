//! The three-prime tour.
//!
//! With primes `p < q < r` in `(n/4, n/3]`, each has exactly the multiples
//! `2x` and `3x` besides 1. The first player opens `2p` and keeps the
//! opponent on the cycle through 2, 3 and these six products, always taking
//! the product the opponent would need, until the opponent is stuck on `r`'s
//! multiples or forced to 1.

use serde::Serialize;

use super::TablePolicy;
use crate::primes::PrimeTable;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThreePrimePlan {
    pub n: u32,
    pub p: u32,
    pub q: u32,
    pub r: u32,
    pub opening: u32,
    pub policy: TablePolicy,
}

/// The plan built on the three smallest primes of `(n/4, n/3]`, if there are three.
pub fn three_prime_strategy(n: u32, table: &PrimeTable) -> Result<Option<ThreePrimePlan>> {
    let band = table.third_band_primes(u64::from(n))?;
    let &[p, q, r, ..] = band.as_slice() else {
        return Ok(None);
    };
    let (p, q, r) = (p as u32, q as u32, r as u32);
    let mut policy = TablePolicy::new(n, table, Some(2 * p))?;
    policy.replies.insert(p, vec![3 * p]);
    policy.replies.insert(q, vec![2 * q, 3 * q]);
    policy.replies.insert(r, vec![2 * r, 3 * r]);
    policy.replies.insert(2, vec![2 * q, 2 * r]);
    policy.replies.insert(3, vec![3 * q, 3 * r]);
    Ok(Some(ThreePrimePlan { n, p, q, r, opening: 2 * p, policy }))
}
