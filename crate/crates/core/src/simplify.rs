//! Result-preserving reductions of positions.
//!
//! * [`strip_trivial`] drops 1 and the primes above `n/2` from the start
//!   position. Nobody enters 1 voluntarily while a large prime is left, so
//!   these vertices only end the game.
//! * [`prune_unreachable`] keeps the component of the current number.
//! * [`prune_pendant_pairs`] removes a vertex `v` whose single remaining
//!   neighbour is `u`, together with `u`: whoever enters `u` is answered with
//!   `v` and is stuck. The pair is kept when `v` touches the current number
//!   (the mover could enter `v` directly) or when `u` is the mover's only
//!   option.
//!
//! The solver applies unreachable pruning, then pendant pairs to a fixpoint,
//! then unreachable pruning again.

use serde::Serialize;

use crate::bits::{adjacency_rows, with_width, Bits, MAX_BITS_N};
use crate::graph::{DivisorGraph, Position};
use crate::primes::PrimeTable;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplifiedStart {
    pub n: u32,
    /// Ascending playable core, a subset of `2..=n`.
    pub kept: Vec<u32>,
    pub stripped_primes: Vec<u32>,
    pub stripped_one: bool,
    pub removed_count: u32,
}

pub fn strip_trivial(n: u32, table: &PrimeTable) -> Result<SimplifiedStart> {
    if n < 2 {
        return Err(Error::NothingToStrip(n));
    }
    let stripped_primes: Vec<u32> = table.large_primes(n as u64)?.into_iter().map(|p| p as u32).collect();
    let kept = (2..=n).filter(|k| stripped_primes.binary_search(k).is_err()).collect();
    Ok(SimplifiedStart { n, kept, removed_count: 1 + stripped_primes.len() as u32, stripped_primes, stripped_one: true })
}

/// Which reductions to run at a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Reductions {
    pub unreachable: bool,
    pub pendants: bool,
}

/// Vertices of `r` connected to `c` through `r`.
#[inline]
pub(crate) fn component<const W: usize>(adj: &[Bits<W>], c: u32, r: Bits<W>) -> Bits<W> {
    let mut seen = adj[c as usize].and(&r);
    let mut frontier = seen;
    while !frontier.is_empty() {
        let mut next = Bits::EMPTY;
        for v in frontier.iter() {
            next.or_assign(&adj[v as usize]);
        }
        frontier = next.and(&r).and_not(&seen);
        seen.or_assign(&frontier);
    }
    seen
}

/// Removes pendant pairs to a fixpoint. Returns the reduced set and whether
/// anything was removed.
#[inline]
pub(crate) fn pendant_fixpoint<const W: usize>(adj: &[Bits<W>], c: u32, mut r: Bits<W>) -> (Bits<W>, bool) {
    let around_c = &adj[c as usize];
    let mut removed_any = false;
    loop {
        let mut changed = false;
        for v in r.iter() {
            if !r.contains(v) || around_c.contains(v) {
                continue;
            }
            let nv = adj[v as usize].and(&r);
            if nv.count() != 1 {
                continue;
            }
            let u = nv.first().unwrap();
            let options = around_c.and(&r);
            if options.count() == 1 && options.contains(u) {
                continue;
            }
            r.remove(u);
            r.remove(v);
            changed = true;
        }
        if !changed {
            return (r, removed_any);
        }
        removed_any = true;
    }
}

#[inline]
pub(crate) fn reduce<const W: usize>(adj: &[Bits<W>], c: u32, r: Bits<W>, red: Reductions) -> Bits<W> {
    let mut r = r;
    if red.unreachable {
        r = component(adj, c, r);
    }
    if red.pendants {
        let (reduced, removed) = pendant_fixpoint(adj, c, r);
        r = reduced;
        if removed && red.unreachable {
            r = component(adj, c, r);
        }
    }
    r
}

fn apply_reduction(g: &DivisorGraph, p: &Position, red: Reductions) -> Result<Position> {
    let c = p.current().ok_or(Error::NotApplicable)?;
    let n = g.n();
    with_width!(n, W => {
        let adj = adjacency_rows::<W>(g);
        let r = reduce(&adj, c, Bits::<W>::from_numset(p.remaining()), red);
        Position::from_parts(n, r.to_numset(n), Some(c), p.even_rule())
    }, else Err(Error::TooLarge { n, max: MAX_BITS_N }))
}

/// Restricts `remaining` to what the current number can still reach.
pub fn prune_unreachable(g: &DivisorGraph, p: &Position) -> Result<Position> {
    apply_reduction(g, p, Reductions { unreachable: true, pendants: false })
}

/// Removes pendant pairs to a fixpoint, without unreachable pruning.
pub fn prune_pendant_pairs(g: &DivisorGraph, p: &Position) -> Result<Position> {
    apply_reduction(g, p, Reductions { unreachable: false, pendants: true })
}

/// The full per-node reduction the solver uses.
pub fn simplify_position(g: &DivisorGraph, p: &Position) -> Result<Position> {
    apply_reduction(g, p, Reductions { unreachable: true, pendants: true })
}
