//! The game model: divisor graph, positions and legal moves.
//!
//! A position is a non-revisiting walk on the divisor graph of `1..=n`: the
//! remaining numbers are the unvisited vertices and the current number is the
//! walker. Nothing here treats 1 or the primes specially.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::numset::NumSet;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct DivisorGraph {
    n: u32,
    adjacency: Vec<Vec<u32>>,
}

pub fn build_graph(n: u32) -> Result<DivisorGraph> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut adjacency = vec![Vec::new(); n as usize + 1];
    for d in 1..=n {
        for m in (2 * d..=n).step_by(d as usize) {
            adjacency[d as usize].push(m);
            adjacency[m as usize].push(d);
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    Ok(DivisorGraph { n, adjacency })
}

impl DivisorGraph {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Sorted divisors and multiples of `v` in `1..=n`, excluding `v`.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adjacency[v as usize]
    }

    pub fn adjacent(&self, a: u32, b: u32) -> bool {
        a != b && (a.is_multiple_of(b) || b.is_multiple_of(a))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn legal_moves(&self, p: &Position) -> Vec<u32> {
        debug_assert_eq!(p.n, self.n);
        match p.current {
            None => p.remaining.iter().filter(|&k| !p.even_rule || k % 2 == 0).collect(),
            Some(c) => self.neighbors(c).iter().copied().filter(|&k| p.remaining.contains(k)).collect(),
        }
    }

    pub fn export(&self, p: &Position) -> GraphDocument {
        let legal = NumSet::from_iter_n(self.n, self.legal_moves(p));
        let nodes = (1..=self.n)
            .map(|k| NodeDoc {
                number: k,
                remaining: p.remaining.contains(k),
                used: !p.remaining.contains(k),
                current: p.current == Some(k),
                legal: legal.contains(k),
            })
            .collect();
        let edges = (1..=self.n).flat_map(|a| self.neighbors(a).iter().filter(move |&&b| b > a).map(move |&b| [a, b])).collect();
        GraphDocument { n: self.n, nodes, edges }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Position {
    n: u32,
    remaining: NumSet,
    current: Option<u32>,
    even_rule: bool,
}

pub fn initial_position(n: u32, even_rule: bool) -> Result<Position> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(Position { n, remaining: NumSet::full(n), current: None, even_rule })
}

impl Position {
    /// Builds an arbitrary position; `current` must not be in `remaining`.
    pub fn from_parts(n: u32, remaining: NumSet, current: Option<u32>, even_rule: bool) -> Result<Self> {
        if remaining.universe() != n {
            return Err(Error::InvalidArgument("remaining set has the wrong universe".into()));
        }
        if let Some(c) = current {
            if c == 0 || c > n || remaining.contains(c) {
                return Err(Error::InvalidArgument(format!("current {c} must be in 1..={n} and already used")));
            }
        }
        Ok(Self { n, remaining, current, even_rule })
    }

    /// Replays `moves` from the initial position.
    pub fn from_moves(n: u32, even_rule: bool, moves: &[u32]) -> Result<Self> {
        moves.iter().try_fold(initial_position(n, even_rule)?, |p, &m| p.apply_move(m))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn remaining(&self) -> &NumSet {
        &self.remaining
    }

    pub fn current(&self) -> Option<u32> {
        self.current
    }

    pub fn even_rule(&self) -> bool {
        self.even_rule
    }

    pub fn is_legal(&self, m: u32) -> bool {
        if !self.remaining.contains(m) {
            return false;
        }
        match self.current {
            None => !self.even_rule || m.is_multiple_of(2),
            Some(c) => c % m == 0 || m.is_multiple_of(c),
        }
    }

    /// Returns the successor position; `self` is left untouched.
    pub fn apply_move(&self, m: u32) -> Result<Position> {
        if !self.is_legal(m) {
            return Err(Error::IllegalMove(m));
        }
        let mut next = self.clone();
        next.remaining.remove(m);
        next.current = Some(m);
        Ok(next)
    }

    /// Number of moves played so far.
    pub fn plies(&self) -> usize {
        self.n as usize - self.remaining.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub number: u32,
    pub remaining: bool,
    pub used: bool,
    pub current: bool,
    pub legal: bool,
}

/// Serializable snapshot of a position on its divisor graph. Edges are listed
/// once, as `[smaller, larger]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub n: u32,
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<[u32; 2]>,
}

impl GraphDocument {
    pub fn to_dot(&self) -> String {
        let mut out = format!("graph jg{} {{\n", self.n);
        for node in &self.nodes {
            let style = if node.current {
                "style=filled, fillcolor=gold"
            } else if node.used {
                "style=filled, fillcolor=gray70"
            } else if node.legal {
                "color=forestgreen, penwidth=2"
            } else {
                "color=black"
            };
            let _ = writeln!(out, "  {} [{}];", node.number, style);
        }
        for [a, b] in &self.edges {
            let _ = writeln!(out, "  {a} -- {b};");
        }
        out.push_str("}\n");
        out
    }
}
