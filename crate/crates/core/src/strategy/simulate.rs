use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::graph::{build_graph, initial_position, DivisorGraph, Position};
use crate::numset::NumSet;
use crate::Result;

/// A deterministic strategy for one side of the game.
pub trait Policy {
    /// The policy's first move when it starts the game, `None` when it answers.
    fn opening(&self) -> Option<u32>;

    /// The reply in `p`, where the opponent has just moved to `p.current()`.
    /// `None` means the policy has nothing to say, which counts as a failure.
    fn reply(&self, p: &Position) -> Option<u32>;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SimulationOutcome {
    /// The policy wins every line.
    Verified,
    /// A line (starting from the first move) after which the policy has no
    /// legal reply.
    Counterexample(Vec<u32>),
    BudgetExhausted,
}

impl SimulationOutcome {
    pub fn is_verified(&self) -> bool {
        matches!(self, SimulationOutcome::Verified)
    }
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub outcome: SimulationOutcome,
    /// Opponent-to-move states expanded.
    pub states: u64,
    /// Numbers played in at least one explored line.
    pub touched: NumSet,
}

enum Stop {
    Counterexample(Vec<u32>),
    Budget,
}

struct Search<'a, P: Policy + ?Sized> {
    policy: &'a P,
    graph: DivisorGraph,
    done: FxHashSet<Position>,
    states: u64,
    budget: u64,
    touched: NumSet,
    line: Vec<u32>,
}

impl<P: Policy + ?Sized> Search<'_, P> {
    /// Explores every opponent move from `p`; the opponent is to move.
    fn explore(&mut self, p: &Position) -> std::result::Result<(), Stop> {
        if self.done.contains(p) {
            return Ok(());
        }
        if self.states >= self.budget {
            return Err(Stop::Budget);
        }
        self.states += 1;
        for m in self.graph.legal_moves(p) {
            let q = p.apply_move(m).expect("legal move");
            self.line.push(m);
            self.touched.insert(m);
            let reply = self.policy.reply(&q).filter(|&r| q.is_legal(r));
            let Some(r) = reply else {
                return Err(Stop::Counterexample(self.line.clone()));
            };
            self.line.push(r);
            self.touched.insert(r);
            self.explore(&q.apply_move(r).expect("checked reply"))?;
            self.line.truncate(self.line.len() - 2);
        }
        self.done.insert(p.clone());
        Ok(())
    }
}

/// Plays `policy` against every possible opponent on `1..=n`.
pub fn simulate_strategy<P: Policy + ?Sized>(policy: &P, n: u32, even_rule: bool, budget: Option<u64>) -> Result<Simulation> {
    let graph = build_graph(n)?;
    let start = initial_position(n, even_rule)?;
    let mut search = Search {
        policy,
        graph,
        done: FxHashSet::default(),
        states: 0,
        budget: budget.unwrap_or(u64::MAX),
        touched: NumSet::empty(n),
        line: Vec::new(),
    };
    let result = match policy.opening() {
        Some(m) if start.is_legal(m) => {
            search.line.push(m);
            search.touched.insert(m);
            search.explore(&start.apply_move(m).expect("checked opening"))
        }
        Some(m) => Err(Stop::Counterexample(vec![m])),
        None => search.explore(&start),
    };
    let outcome = match result {
        Ok(()) => SimulationOutcome::Verified,
        Err(Stop::Counterexample(line)) => SimulationOutcome::Counterexample(line),
        Err(Stop::Budget) => SimulationOutcome::BudgetExhausted,
    };
    Ok(Simulation { outcome, states: search.states, touched: search.touched })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Opens 2 and then always plays the smallest legal number.
    struct Smallest;

    impl Policy for Smallest {
        fn opening(&self) -> Option<u32> {
            Some(2)
        }

        fn reply(&self, p: &Position) -> Option<u32> {
            let c = p.current()?;
            p.remaining().iter().find(|&k| k % c == 0 || c % k == 0)
        }
    }

    #[test]
    fn smallest_move_policy() {
        // n = 3: 2, then the opponent must play 1, we answer 3
        let s = simulate_strategy(&Smallest, 3, true, None).unwrap();
        assert_eq!(s.outcome, SimulationOutcome::Verified);
        // n = 2: 2, 1 and we are stuck
        let s = simulate_strategy(&Smallest, 2, true, None).unwrap();
        assert_eq!(s.outcome, SimulationOutcome::Counterexample(vec![2, 1]));
    }

    #[test]
    fn illegal_opening_is_a_counterexample() {
        struct Odd;
        impl Policy for Odd {
            fn opening(&self) -> Option<u32> {
                Some(3)
            }
            fn reply(&self, _: &Position) -> Option<u32> {
                None
            }
        }
        let s = simulate_strategy(&Odd, 5, true, None).unwrap();
        assert_eq!(s.outcome, SimulationOutcome::Counterexample(vec![3]));
    }

    #[test]
    fn budget_is_reported() {
        let s = simulate_strategy(&Smallest, 30, true, Some(1)).unwrap();
        assert!(matches!(s.outcome, SimulationOutcome::BudgetExhausted | SimulationOutcome::Counterexample(_)));
        assert!(s.states <= 1);
    }
}
