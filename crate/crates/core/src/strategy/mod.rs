//! Constructive first-player strategies and the simulator that proves them.

mod scripts;
mod simulate;
mod three_prime;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::Position;
use crate::primes::PrimeTable;
use crate::Result;

pub use scripts::{
    builtin_two_prime_scripts, parse_scripts, script_to_policy, script_to_policy_unchecked, TwoPrimeScript, SCRIPTS_TEXT,
};
pub use simulate::{simulate_strategy, Policy, Simulation, SimulationOutcome};
pub use three_prime::{three_prime_strategy, ThreePrimePlan};

/// A policy given as a table: each opponent number maps to candidate replies,
/// the first unused one is played. The opponent's 1 is answered with the
/// smallest unused prime above `n/2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TablePolicy {
    pub opening: Option<u32>,
    pub replies: BTreeMap<u32, Vec<u32>>,
    pub large_primes: Vec<u32>,
}

impl TablePolicy {
    pub fn new(n: u32, table: &PrimeTable, opening: Option<u32>) -> Result<Self> {
        let large_primes = table.large_primes(u64::from(n))?.into_iter().map(|p| p as u32).collect();
        Ok(Self { opening, replies: BTreeMap::new(), large_primes })
    }
}

impl Policy for TablePolicy {
    fn opening(&self) -> Option<u32> {
        self.opening
    }

    fn reply(&self, p: &Position) -> Option<u32> {
        let x = p.current()?;
        let unused = |k: &&u32| p.remaining().contains(**k);
        if x == 1 {
            return self.large_primes.iter().find(unused).copied();
        }
        self.replies.get(&x)?.iter().find(unused).copied()
    }
}

/// Opening prime of the big-prime trap for play without the even rule:
/// open with a prime above `n/2`, the opponent must take 1, answer with
/// another such prime.
pub fn elementary_strategy(n: u32, table: &PrimeTable) -> Result<Option<u32>> {
    let large = table.large_primes(u64::from(n))?;
    Ok(if large.len() >= 2 { Some(large[0] as u32) } else { None })
}

pub fn elementary_policy(n: u32, table: &PrimeTable) -> Result<Option<TablePolicy>> {
    match elementary_strategy(n, table)? {
        Some(p) => Ok(Some(TablePolicy::new(n, table, Some(p))?)),
        None => Ok(None),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LinkKind {
    /// `n` is a prime of at least 5.
    PrimeTop,
    /// `n = 2p` for a prime `p` of at least 3.
    TwicePrime,
}

/// `n` has the same result as `n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EquivalenceLink {
    pub n: u32,
    pub kind: LinkKind,
    pub equivalent_to: u32,
}

pub fn equivalent_predecessor(n: u32, table: &PrimeTable) -> Result<Option<EquivalenceLink>> {
    if n < 5 {
        return Ok(None);
    }
    table.check(u64::from(n))?;
    let kind = if table.is_prime(u64::from(n)) {
        LinkKind::PrimeTop
    } else if n.is_multiple_of(2) && table.is_prime(u64::from(n / 2)) {
        LinkKind::TwicePrime
    } else {
        return Ok(None);
    };
    Ok(Some(EquivalenceLink { n, kind, equivalent_to: n - 1 }))
}

/// Numbers in `119..=limit` covered by neither the three-prime strategy nor a
/// built-in script.
pub fn coverage_gaps(limit: u32, table: &PrimeTable) -> Result<Vec<u32>> {
    let scripts = builtin_two_prime_scripts()?;
    let mut gaps = Vec::new();
    for n in 119..=limit {
        let scripted = scripts.iter().any(|s| s.n_low <= n && n <= s.n_high);
        if !scripted && three_prime_strategy(n, table)?.is_none() {
            gaps.push(n);
        }
    }
    Ok(gaps)
}
