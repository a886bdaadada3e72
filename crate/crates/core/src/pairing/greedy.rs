//! Greedy construction of pairing certificates.
//!
//! After the forced pairs, the vertex of smallest degree is paired with its
//! largest free neighbour, ties going to the smallest vertex. Leftovers are
//! joined by short alternating paths; when that fails the greedy pass is
//! rerun with randomized tie-breaks.

use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::SeedableRng;

use super::{close_forced, core_numbers, PairingCertificate};
use crate::graph::{build_graph, DivisorGraph};
use crate::numset::NumSet;
use crate::Result;

const MAX_PATH_PAIRS: usize = 8;
const RESTARTS: u64 = 32;

/// Endpoint of an alternating search: outer vertex, vertex reached from it,
/// and the parent links of the search tree.
type PathEnd = (u32, u32, Vec<(u32, u32)>);

struct Matching<'g> {
    g: &'g DivisorGraph,
    active: NumSet,
    partner: Vec<u32>,
}

impl Matching<'_> {
    fn free(&self) -> Vec<u32> {
        self.active.iter().filter(|&v| self.partner[v as usize] == 0).collect()
    }

    fn join(&mut self, a: u32, b: u32) {
        self.partner[a as usize] = b;
        self.partner[b as usize] = a;
    }

    /// Breadth-first alternating search from the free vertex `root`. Returns
    /// the first outer vertex accepted by `goal` with the path's parent links.
    fn alternate(&self, root: u32, mut goal: impl FnMut(u32, u32) -> bool) -> Option<PathEnd> {
        let n = self.partner.len();
        // parent[z] = (outer vertex before, matched vertex y with partner z)
        let mut parent = vec![(0u32, 0u32); n];
        let mut seen = vec![false; n];
        seen[root as usize] = true;
        let mut frontier = vec![root];
        for _ in 0..MAX_PATH_PAIRS {
            let mut next = Vec::new();
            for &x in &frontier {
                for &y in self.g.neighbors(x) {
                    if !self.active.contains(y) || seen[y as usize] {
                        continue;
                    }
                    if goal(x, y) {
                        return Some((x, y, parent));
                    }
                    let z = self.partner[y as usize];
                    if z == 0 || seen[z as usize] {
                        continue;
                    }
                    seen[y as usize] = true;
                    seen[z as usize] = true;
                    parent[z as usize] = (x, y);
                    next.push(z);
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        None
    }

    /// Re-pairs along the path ending at outer vertex `x`, back to `root`.
    fn flip(&mut self, root: u32, mut x: u32, parent: &[(u32, u32)]) {
        while x != root {
            let (px, y) = parent[x as usize];
            self.join(px, y);
            x = px;
        }
    }

    /// Joins two free vertices through an augmenting path.
    fn augment(&mut self) -> bool {
        let free = self.free();
        for &a in &free {
            let partner = &self.partner;
            let found = self.alternate(a, |_, y| y != a && partner[y as usize] == 0);
            if let Some((x, b, parent)) = found {
                self.partner[a as usize] = 0;
                self.flip(a, x, &parent);
                self.join(x, b);
                return true;
            }
        }
        false
    }

    /// Moves the single free vertex to an even number along an even-length
    /// alternating path.
    fn shift_to_even(&mut self, root: u32) -> Option<u32> {
        let partner = &self.partner;
        let (x, y, parent) = self.alternate(root, |_, y| {
            let z = partner[y as usize];
            z != 0 && z.is_multiple_of(2)
        })?;
        let z = self.partner[y as usize];
        self.flip(root, x, &parent);
        self.join(x, y);
        self.partner[z as usize] = 0;
        Some(z)
    }
}

fn greedy_pass(m: &mut Matching, rng: Option<&mut StdRng>) {
    let mut rng = rng;
    let mut left: NumSet = m.active.clone();
    loop {
        let degree = |v: u32| m.g.neighbors(v).iter().filter(|&&u| left.contains(u)).count();
        let Some(min) = left.iter().map(degree).min() else { break };
        let ties: Vec<u32> = left.iter().filter(|&v| degree(v) == min).collect();
        let v = match rng.as_deref_mut() {
            Some(r) => *ties.choose(r).unwrap(),
            None => ties[0],
        };
        left.remove(v);
        let options: Vec<u32> = m.g.neighbors(v).iter().copied().filter(|&u| left.contains(u)).collect();
        let u = match (rng.as_deref_mut(), options.last()) {
            (_, None) => continue,
            (Some(r), Some(_)) => *options.choose(r).unwrap(),
            (None, Some(&u)) => u,
        };
        left.remove(u);
        m.join(v, u);
    }
}

/// Builds a certificate for `n >= 4`, or `None` when no pairing is found.
pub fn greedy_pairing(n: u32) -> Result<Option<PairingCertificate>> {
    if n < 4 {
        return Ok(None);
    }
    let g = build_graph(n)?;
    let mut residual = NumSet::from_iter_n(n, core_numbers(n)?);
    let (forced, isolated) = close_forced(&g, &mut residual, |_, _| 0);
    let spare = residual.len() % 2;
    for attempt in 0..=RESTARTS {
        let mut m = Matching { g: &g, active: residual.clone(), partner: vec![0; n as usize + 1] };
        let mut rng = (attempt > 0).then(|| StdRng::seed_from_u64(attempt));
        greedy_pass(&mut m, rng.as_mut());
        while m.free().len() > spare && m.augment() {}
        let free = m.free();
        if free.len() != spare {
            continue;
        }
        let first_move = match free.first() {
            Some(&v) if v % 2 == 1 => match m.shift_to_even(v) {
                Some(z) => Some(z),
                None => continue,
            },
            other => other.copied(),
        };
        let mut pairs: Vec<(u32, u32)> = forced.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        pairs.extend(m.active.iter().filter(|&v| m.partner[v as usize] > v).map(|v| (v, m.partner[v as usize])));
        return Ok(Some(PairingCertificate { n, pairs, first_move, excluded: isolated }));
    }
    Ok(None)
}
