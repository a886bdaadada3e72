//! Move selection for the play service.
//!
//! Up to the exact threshold every move is checked against the solver; above
//! it the engine follows the evidence behind the classification and falls
//! back to a budgeted search, then to a mobility heuristic.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use juniper_core::pairing::PairResponder;
use juniper_core::strategy::{script_to_policy, three_prime_strategy};
use juniper_core::{
    build_graph, ClassificationReport, Classifier, DivisorGraph, Effort, Evidence, GameVerdict, Outcome, Policy, Position,
    Result, Solver,
};

#[derive(Debug, Clone)]
pub struct EngineConfig {
    /// Largest n a game may use.
    pub max_n: u32,
    /// Largest n for which every engine move is solver-checked.
    pub exact_threshold: u32,
    /// Node budget for searches above the exact threshold.
    pub search_budget: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self { max_n: 300, exact_threshold: 48, search_budget: 2_000_000 }
    }
}

type SharedPolicy = Arc<dyn Policy + Send + Sync>;

/// Classification of `n` and the strategy its evidence describes.
pub struct Plan {
    pub report: ClassificationReport,
    policy: Option<SharedPolicy>,
}

impl Plan {
    /// The evidence strategy when it plays the given side.
    fn policy_for(&self, first: bool) -> Option<&SharedPolicy> {
        self.policy.as_ref().filter(|p| p.opening().is_some() == first)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Hint {
    pub best_move: Option<u32>,
    /// Whether the player to move wins with best play; `None` when unknown.
    pub won: Option<bool>,
    /// True when `won` comes from an exact search or a proved strategy.
    pub exact: bool,
}

pub struct Engine {
    config: EngineConfig,
    classifier: Classifier,
    graphs: Mutex<HashMap<u32, Arc<DivisorGraph>>>,
    solvers: Mutex<HashMap<u32, Arc<Mutex<Solver>>>>,
    plans: Mutex<HashMap<u32, Arc<Plan>>>,
}

impl Engine {
    pub fn new(config: EngineConfig) -> Result<Self> {
        let classifier = Classifier::new(config.max_n.max(2))?;
        Ok(Self { config, classifier, graphs: Mutex::default(), solvers: Mutex::default(), plans: Mutex::default() })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn graph(&self, n: u32) -> Result<Arc<DivisorGraph>> {
        if let Some(g) = self.graphs.lock().unwrap().get(&n) {
            return Ok(g.clone());
        }
        let g = Arc::new(build_graph(n)?);
        Ok(self.graphs.lock().unwrap().entry(n).or_insert(g).clone())
    }

    fn solver(&self, n: u32) -> Result<Arc<Mutex<Solver>>> {
        if let Some(s) = self.solvers.lock().unwrap().get(&n) {
            return Ok(s.clone());
        }
        let s = Arc::new(Mutex::new(Solver::new(&*self.graph(n)?)?));
        Ok(self.solvers.lock().unwrap().entry(n).or_insert(s).clone())
    }

    pub fn classify(&self, n: u32) -> Result<ClassificationReport> {
        Ok(self.plan(n)?.report.clone())
    }

    pub fn plan(&self, n: u32) -> Result<Arc<Plan>> {
        if let Some(p) = self.plans.lock().unwrap().get(&n) {
            return Ok(p.clone());
        }
        let report = self.classifier.classify(n, Effort::Verified)?;
        let policy = if report.verified { self.policy_from(&report)? } else { None };
        let plan = Arc::new(Plan { report, policy });
        Ok(self.plans.lock().unwrap().entry(n).or_insert(plan).clone())
    }

    fn policy_from(&self, report: &ClassificationReport) -> Result<Option<SharedPolicy>> {
        let n = report.n;
        Ok(match &report.evidence {
            Evidence::ThreePrime { .. } => {
                three_prime_strategy(n, self.classifier.prime_table())?.map(|plan| Arc::new(plan.policy) as SharedPolicy)
            }
            Evidence::TwoPrime(script) => Some(Arc::new(script_to_policy(script, n)?)),
            Evidence::Certificate { certificate, .. } => Some(Arc::new(PairResponder::new(certificate)?)),
            _ => None,
        })
    }

    /// True when the moves of the side that moved first (or second) in
    /// `history` are exactly what `policy` prescribes.
    fn followed(policy: &dyn Policy, n: u32, history: &[u32], first: bool) -> Result<bool> {
        let mut p = juniper_core::initial_position(n, true)?;
        for (i, &m) in history.iter().enumerate() {
            if (i % 2 == 0) == first {
                let prescribed = if p.current().is_none() { policy.opening() } else { policy.reply(&p) };
                if prescribed != Some(m) {
                    return Ok(false);
                }
            }
            p = p.apply_move(m)?;
        }
        Ok(true)
    }

    /// The evidence move for the player to move, when they are the side the
    /// evidence wins for and have followed it so far.
    fn evidence_move(&self, n: u32, history: &[u32], p: &Position) -> Result<Option<u32>> {
        let first = history.len().is_multiple_of(2);
        let plan = self.plan(n)?;
        let Some(policy) = plan.policy_for(first) else { return Ok(None) };
        if !Self::followed(policy.as_ref(), n, history, first)? {
            return Ok(None);
        }
        let m = if p.current().is_none() { policy.opening() } else { policy.reply(p) };
        Ok(m.filter(|&m| p.is_legal(m)))
    }

    /// Solver evaluations of every move when the search finishes.
    fn exact_children(&self, p: &Position, budget: Option<u64>) -> Result<Option<Vec<(u32, bool)>>> {
        let solver = self.solver(p.n())?;
        let mut solver = solver.lock().unwrap();
        Ok(solver
            .move_evaluations(p, budget)
            .map(|children| children.into_iter().map(|(m, e)| (m, e.verdict == GameVerdict::Loss)).collect()))
    }

    fn solver_move(&self, p: &Position, budget: Option<u64>) -> Result<Option<Option<u32>>> {
        let solver = self.solver(p.n())?;
        let mut solver = solver.lock().unwrap();
        Ok(solver.try_best_move(p, budget).ok())
    }

    /// Leaves the opponent the fewest replies; ties go to the smaller number.
    fn mobility_move(&self, p: &Position) -> Result<Option<u32>> {
        let g = self.graph(p.n())?;
        let mut best: Option<(usize, u32)> = None;
        for m in g.legal_moves(p) {
            let replies = g.legal_moves(&p.apply_move(m)?).len();
            if best.is_none_or(|b| (replies, m) < b) {
                best = Some((replies, m));
            }
        }
        Ok(best.map(|(_, m)| m))
    }

    /// The engine's move in the game reached by `history`, `None` when the
    /// player to move has no legal move.
    pub fn choose(&self, n: u32, history: &[u32]) -> Result<Option<u32>> {
        Ok(self.advise(n, history)?.best_move)
    }

    pub fn hint(&self, n: u32, history: &[u32]) -> Result<Hint> {
        self.advise(n, history)
    }

    fn advise(&self, n: u32, history: &[u32]) -> Result<Hint> {
        let p = Position::from_moves(n, true, history)?;
        let g = self.graph(n)?;
        if g.legal_moves(&p).is_empty() {
            return Ok(Hint { best_move: None, won: Some(false), exact: true });
        }
        let evidence = self.evidence_move(n, history, &p)?;
        if n <= self.config.exact_threshold {
            let children = self.exact_children(&p, None)?.expect("unbudgeted search finishes");
            let won = children.iter().any(|&(_, wins)| wins);
            let confirmed = evidence.filter(|m| children.iter().any(|&(c, wins)| c == *m && wins));
            let best_move = match confirmed {
                Some(m) => Some(m),
                None => self.solver_move(&p, None)?.flatten(),
            };
            return Ok(Hint { best_move, won: Some(won), exact: true });
        }
        if evidence.is_some() {
            return Ok(Hint { best_move: evidence, won: Some(true), exact: true });
        }
        if history.is_empty() {
            let first_wins = self.plan(n)?.report.verdict == Some(Outcome::G);
            let searched = if first_wins { self.solver_move(&p, Some(self.config.search_budget))?.flatten() } else { None };
            let best_move = match searched {
                Some(m) => Some(m),
                None => self.mobility_move(&p)?,
            };
            return Ok(Hint { best_move, won: Some(first_wins), exact: true });
        }
        if let Some(children) = self.exact_children(&p, Some(self.config.search_budget))? {
            let won = children.iter().any(|&(_, wins)| wins);
            let best_move = self.solver_move(&p, None)?.flatten();
            return Ok(Hint { best_move, won: Some(won), exact: true });
        }
        Ok(Hint { best_move: self.mobility_move(&p)?, won: None, exact: false })
    }
}
