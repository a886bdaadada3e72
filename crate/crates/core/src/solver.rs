//! Memoized negamax over game positions.
//!
//! Every node is reduced (unreachable pruning, pendant pairs) before the memo
//! lookup, so positions that reduce to the same core share one entry. Each
//! entry also stores a play length used to rank moves for [`Solver::best_move`]:
//! for a won node the length of the winning line found, for a lost node the
//! longest resistance over all replies. Lengths are measured in the reduced
//! game and serve only as a tie-breaking heuristic.

use std::time::{Duration, Instant};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::bits::{adjacency_rows, with_width, Bits, MAX_BITS_N};
use crate::graph::{build_graph, initial_position, DivisorGraph, Position};
use crate::simplify::{reduce, Reductions};
use crate::{Error, Result};

/// Value of a position for the player to move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GameVerdict {
    Win,
    Loss,
}

impl GameVerdict {
    pub fn is_win(self) -> bool {
        self == GameVerdict::Win
    }
}

/// Result of a whole game: `G` when the first player wins, `P` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    G,
    P,
}

impl Outcome {
    pub fn from_first_player(v: GameVerdict) -> Self {
        match v {
            GameVerdict::Win => Outcome::G,
            GameVerdict::Loss => Outcome::P,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Outcome::G => 'G',
            Outcome::P => 'P',
        }
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub prune_unreachable: bool,
    pub prune_pendants: bool,
    pub memoize: bool,
    /// Try replies with the fewest onward moves first.
    pub move_ordering: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { prune_unreachable: true, prune_pendants: true, memoize: true, move_ordering: true }
    }
}

impl SolverConfig {
    /// Plain negamax with every optimization switched off.
    pub fn plain() -> Self {
        Self { prune_unreachable: false, prune_pendants: false, memoize: false, move_ordering: false }
    }

    fn reductions(&self) -> Reductions {
        Reductions { unreachable: self.prune_unreachable, pendants: self.prune_pendants }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub memo_hits: u64,
    /// Entries added during this call.
    pub memo_entries: u64,
    pub elapsed: Duration,
    pub budget_exhausted: bool,
}

/// Verdict plus the heuristic play length described in the module docs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluation {
    pub verdict: GameVerdict,
    pub length: u32,
}

#[derive(Clone, Copy)]
struct Entry {
    win: bool,
    length: u32,
}

impl From<Entry> for Evaluation {
    fn from(e: Entry) -> Self {
        let verdict = if e.win { GameVerdict::Win } else { GameVerdict::Loss };
        Evaluation { verdict, length: e.length }
    }
}

struct Engine<const W: usize> {
    adj: Vec<Bits<W>>,
    config: SolverConfig,
    memo: FxHashMap<(Bits<W>, u32), Entry>,
    nodes: u64,
    hits: u64,
    inserted: u64,
    budget: u64,
}

impl<const W: usize> Engine<W> {
    fn new(g: &DivisorGraph, config: SolverConfig) -> Self {
        Self { adj: adjacency_rows(g), config, memo: FxHashMap::default(), nodes: 0, hits: 0, inserted: 0, budget: u64::MAX }
    }

    fn start(&mut self, budget: Option<u64>) {
        self.nodes = 0;
        self.hits = 0;
        self.inserted = 0;
        self.budget = budget.unwrap_or(u64::MAX);
    }

    /// Mover stands on `c`; `r` excludes `c`. `None` means the budget ran out.
    fn eval(&mut self, c: u32, r: Bits<W>) -> Option<Entry> {
        let r = reduce(&self.adj, c, r, self.config.reductions());
        let moves = self.adj[c as usize].and(&r);
        if moves.is_empty() {
            return Some(Entry { win: false, length: 0 });
        }
        if self.config.memoize {
            if let Some(&e) = self.memo.get(&(r, c)) {
                self.hits += 1;
                return Some(e);
            }
        }
        if self.nodes >= self.budget {
            return None;
        }
        self.nodes += 1;
        let entry = self.expand(moves, r)?;
        if self.config.memoize {
            self.memo.insert((r, c), entry);
            self.inserted += 1;
        }
        Some(entry)
    }

    fn expand(&mut self, moves: Bits<W>, r: Bits<W>) -> Option<Entry> {
        if self.config.move_ordering {
            if moves.iter().any(|v| self.adj[v as usize].count_and(&r) == 0) {
                return Some(Entry { win: true, length: 1 });
            }
            let mut order: Vec<u64> =
                moves.iter().map(|v| (u64::from(self.adj[v as usize].count_and(&r)) << 32) | u64::from(v)).collect();
            order.sort_unstable();
            self.scan(order.into_iter().map(|k| k as u32), r)
        } else {
            self.scan(moves.iter(), r)
        }
    }

    fn scan(&mut self, moves: impl Iterator<Item = u32>, r: Bits<W>) -> Option<Entry> {
        let mut longest = 0;
        for v in moves {
            let child = self.eval(v, r.without(v))?;
            if !child.win {
                return Some(Entry { win: true, length: child.length + 1 });
            }
            longest = longest.max(child.length + 1);
        }
        Some(Entry { win: false, length: longest })
    }

    /// Evaluations of every legal move from `p`, in ascending move order.
    fn children(&mut self, p: &Position, moves: &[u32]) -> Option<Vec<(u32, Entry)>> {
        let r = Bits::<W>::from_numset(p.remaining());
        moves.iter().map(|&m| self.eval(m, r.without(m)).map(|e| (m, e))).collect()
    }

    fn root(&mut self, p: &Position, moves: &[u32]) -> Option<Entry> {
        match p.current() {
            Some(c) => self.eval(c, Bits::from_numset(p.remaining())),
            None => self.scan(moves.iter().copied(), Bits::from_numset(p.remaining())),
        }
    }

    fn stats(&self, started: Instant, exhausted: bool) -> SearchStats {
        SearchStats {
            nodes_expanded: self.nodes,
            memo_hits: self.hits,
            memo_entries: self.inserted,
            elapsed: started.elapsed(),
            budget_exhausted: exhausted,
        }
    }
}

enum Backend {
    W1(Engine<1>),
    W2(Engine<2>),
    W4(Engine<4>),
    W8(Engine<8>),
    W16(Engine<16>),
}

macro_rules! wrap {
    ($($w:literal => $variant:ident),*) => {
        $(impl From<Engine<$w>> for Backend {
            fn from(e: Engine<$w>) -> Self {
                Backend::$variant(e)
            }
        })*
    };
}
wrap!(1 => W1, 2 => W2, 4 => W4, 8 => W8, 16 => W16);

macro_rules! dispatch {
    ($backend:expr, $e:ident => $body:expr) => {
        match $backend {
            Backend::W1($e) => $body,
            Backend::W2($e) => $body,
            Backend::W4($e) => $body,
            Backend::W8($e) => $body,
            Backend::W16($e) => $body,
        }
    };
}

/// A solver bound to one graph. The memo table survives between calls, so
/// repeated queries on the same game get cheaper.
pub struct Solver {
    graph: DivisorGraph,
    backend: Backend,
    last_stats: SearchStats,
}

impl Solver {
    pub fn new(g: &DivisorGraph) -> Result<Self> {
        Self::with_config(g, SolverConfig::default())
    }

    pub fn with_config(g: &DivisorGraph, config: SolverConfig) -> Result<Self> {
        let n = g.n();
        let backend = with_width!(n, W => Backend::from(Engine::<W>::new(g, config)),
            else return Err(Error::TooLarge { n, max: MAX_BITS_N }));
        Ok(Self { graph: g.clone(), backend, last_stats: SearchStats::default() })
    }

    pub fn graph(&self) -> &DivisorGraph {
        &self.graph
    }

    /// Statistics of the most recent call.
    pub fn last_stats(&self) -> &SearchStats {
        &self.last_stats
    }

    pub fn memo_len(&self) -> usize {
        dispatch!(&self.backend, e => e.memo.len())
    }

    pub fn clear(&mut self) {
        dispatch!(&mut self.backend, e => e.memo.clear())
    }

    /// Exact value and play length of `p`, or `None` when the node budget runs out.
    pub fn evaluate(&mut self, p: &Position, budget: Option<u64>) -> Option<Evaluation> {
        let started = Instant::now();
        let moves = self.graph.legal_moves(p);
        let (res, stats) = dispatch!(&mut self.backend, e => {
            e.start(budget);
            let res = e.root(p, &moves);
            (res, e.stats(started, res.is_none()))
        });
        self.last_stats = stats;
        res.map(Evaluation::from)
    }

    pub fn solve(&mut self, p: &Position, budget: Option<u64>) -> (Option<GameVerdict>, SearchStats) {
        let v = self.evaluate(p, budget).map(|e| e.verdict);
        (v, self.last_stats.clone())
    }

    /// Evaluations (for the opponent) after each legal move, ascending by move.
    pub fn move_evaluations(&mut self, p: &Position, budget: Option<u64>) -> Option<Vec<(u32, Evaluation)>> {
        let started = Instant::now();
        let moves = self.graph.legal_moves(p);
        let (res, stats) = dispatch!(&mut self.backend, e => {
            e.start(budget);
            let res = e.children(p, &moves);
            let stats = e.stats(started, res.is_none());
            (res, stats)
        });
        self.last_stats = stats;
        res.map(|v| v.into_iter().map(|(m, e)| (m, e.into())).collect())
    }

    /// Budgeted [`Solver::best_move`]; `Err` when the budget runs out.
    pub fn try_best_move(&mut self, p: &Position, budget: Option<u64>) -> std::result::Result<Option<u32>, SearchStats> {
        let Some(children) = self.move_evaluations(p, budget) else {
            return Err(self.last_stats.clone());
        };
        Ok(pick(&children))
    }

    /// In a won position the quickest winning move; otherwise the move with
    /// the longest resistance. Ties go to the smaller number.
    pub fn best_move(&mut self, p: &Position) -> Option<u32> {
        self.try_best_move(p, None).expect("unbudgeted search always finishes")
    }

    /// The game from `p` with both sides playing [`Solver::best_move`].
    pub fn principal_line_from(&mut self, p: &Position) -> Vec<u32> {
        let mut line = Vec::new();
        let mut p = p.clone();
        while let Some(m) = self.best_move(&p) {
            line.push(m);
            p = p.apply_move(m).expect("best move is legal");
        }
        line
    }
}

fn pick(children: &[(u32, Evaluation)]) -> Option<u32> {
    let winning = children.iter().filter(|(_, e)| e.verdict == GameVerdict::Loss).min_by_key(|(m, e)| (e.length, *m));
    if let Some(&(m, _)) = winning {
        return Some(m);
    }
    children.iter().max_by_key(|(m, e)| (e.length, std::cmp::Reverse(*m))).map(|&(m, _)| m)
}

pub fn solve_position(g: &DivisorGraph, p: &Position, budget: Option<u64>) -> Result<(Option<GameVerdict>, SearchStats)> {
    Ok(Solver::new(g)?.solve(p, budget))
}

pub fn best_move(g: &DivisorGraph, p: &Position) -> Result<Option<u32>> {
    Ok(Solver::new(g)?.best_move(p))
}

/// `G` or `P` for the game on `1..=n` with an even first move.
pub fn solve_initial(n: u32) -> Result<Outcome> {
    solve_initial_budgeted(n, None)?.ok_or_else(|| unreachable!())
}

/// As [`solve_initial`], `Ok(None)` when the budget runs out.
pub fn solve_initial_budgeted(n: u32, budget: Option<u64>) -> Result<Option<Outcome>> {
    if n < 2 {
        return Err(Error::UndefinedGame(n));
    }
    let g = build_graph(n)?;
    let p = initial_position(n, true)?;
    Ok(Solver::new(&g)?.solve(&p, budget).0.map(Outcome::from_first_player))
}

/// A full game from the start where both sides play [`Solver::best_move`].
pub fn principal_line(n: u32) -> Result<Vec<u32>> {
    if n < 2 {
        return Err(Error::UndefinedGame(n));
    }
    let g = build_graph(n)?;
    Ok(Solver::new(&g)?.principal_line_from(&initial_position(n, true)?))
}
