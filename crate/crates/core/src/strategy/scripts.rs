//! Two-prime cycle scripts.
//!
//! A script is a list of chains written `[x0 y1 x2 y3 ...]`. Even positions
//! hold numbers the opponent is driven to, odd positions the first player's
//! replies. The first player opens with the first chain's first reply and
//! answers an opponent number with an unused neighbouring reply in the latest
//! chain that still has one, so the last chain acts as the closing tail.
//!
//! With `a` the largest and `b` the smallest reply, a script is meant to hold
//! for `n` in `[a, 2b - 1]`: every reply exists from `a` on, and no reply
//! gains a new multiple before `2b`.

use serde::Serialize;

use super::TablePolicy;
use crate::primes::build_prime_table;
use crate::{Error, Result};

pub const SCRIPTS_TEXT: &str = include_str!("../../data/scripts.txt");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoPrimeScript {
    pub n_low: u32,
    pub n_high: u32,
    pub chains: Vec<Vec<u32>>,
    /// Largest reply.
    pub a: u32,
    /// Smallest reply.
    pub b: u32,
}

impl TwoPrimeScript {
    pub fn replies(&self) -> impl Iterator<Item = u32> + '_ {
        self.chains.iter().flat_map(|c| c.iter().skip(1).step_by(2).copied())
    }

    pub fn opening(&self) -> u32 {
        self.chains[0][1]
    }

    pub fn contains(&self, n: u32) -> bool {
        self.n_low <= n && n <= self.n_high
    }

    pub fn render(&self) -> String {
        let chains: String = self
            .chains
            .iter()
            .map(|c| {
                let items: Vec<String> = c.iter().map(u32::to_string).collect();
                format!("[{}]", items.join(" "))
            })
            .collect();
        format!("{} {} : {}", self.n_low, self.n_high, chains)
    }
}

fn parse_line(line: &str, line_no: usize) -> Result<TwoPrimeScript> {
    let err = |msg: String| Error::Parse { line: line_no, msg };
    let (head, body) = line.split_once(':').ok_or_else(|| err("missing ':'".into()))?;
    let bounds: Vec<u32> =
        head.split_whitespace().map(|t| t.parse().map_err(|_| err(format!("bad bound {t:?}")))).collect::<Result<_>>()?;
    let &[n_low, n_high] = bounds.as_slice() else {
        return Err(err("expected two bounds".into()));
    };
    let mut chains = Vec::new();
    let mut marked = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        let inner = rest.strip_prefix('[').ok_or_else(|| err("expected '['".into()))?;
        let (chain, tail) = inner.split_once(']').ok_or_else(|| err("unclosed '['".into()))?;
        let mut numbers = Vec::new();
        for tok in chain.split_whitespace() {
            let bare = tok.trim_matches('*');
            let k: u32 = bare.parse().map_err(|_| err(format!("bad number {tok:?}")))?;
            if bare.len() != tok.len() {
                marked.push(k);
            }
            numbers.push(k);
        }
        if numbers.len() < 2 {
            return Err(err("chains need at least two numbers".into()));
        }
        chains.push(numbers);
        rest = tail.trim_start();
    }
    if chains.is_empty() {
        return Err(err("no chains".into()));
    }
    let mut s = TwoPrimeScript { n_low, n_high, chains, a: 0, b: 0 };
    s.a = s.replies().max().unwrap();
    s.b = s.replies().min().unwrap();
    if s.a != n_low || 2 * s.b - 1 != n_high {
        return Err(err(format!("interval [{n_low}, {n_high}] does not match replies a = {}, b = {}", s.a, s.b)));
    }
    if let Some(k) = s.chains.iter().flatten().find(|&&k| k > n_low) {
        return Err(err(format!("{k} exceeds the interval start")));
    }
    if !marked.is_empty() {
        marked.sort_unstable();
        marked.dedup();
        let mut expect = vec![s.b, s.a];
        expect.dedup();
        if marked != expect {
            return Err(err(format!("marked numbers {marked:?} are not a and b")));
        }
    }
    Ok(s)
}

/// Parses one script per line; `#` starts a comment line.
pub fn parse_scripts(text: &str) -> Result<Vec<TwoPrimeScript>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_line(l, i + 1))
        .collect()
}

pub fn builtin_two_prime_scripts() -> Result<Vec<TwoPrimeScript>> {
    parse_scripts(SCRIPTS_TEXT)
}

pub fn script_to_policy(s: &TwoPrimeScript, n: u32) -> Result<TablePolicy> {
    if !s.contains(n) {
        return Err(Error::OutOfInterval { n, low: s.n_low, high: s.n_high });
    }
    script_to_policy_unchecked(s, n)
}

/// The script's policy for any `n`, including outside its interval.
pub fn script_to_policy_unchecked(s: &TwoPrimeScript, n: u32) -> Result<TablePolicy> {
    if let Some(&k) = s.chains.iter().flatten().find(|&&k| k > n) {
        return Err(Error::InvalidArgument(format!("script uses {k}, above n = {n}")));
    }
    let table = build_prime_table(u64::from(n.max(2)))?;
    let mut policy = TablePolicy::new(n, &table, Some(s.opening()))?;
    for chain in s.chains.iter().rev() {
        for (i, &x) in chain.iter().enumerate().step_by(2) {
            let choices = policy.replies.entry(x).or_default();
            choices.extend(chain.get(i + 1));
            if i > 0 {
                choices.push(chain[i - 1]);
            }
        }
    }
    Ok(policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Position;
    use crate::strategy::{simulate_strategy, Policy, SimulationOutcome};

    #[test]
    fn builtin_intervals() {
        let scripts = builtin_two_prime_scripts().unwrap();
        let intervals: Vec<(u32, u32)> = scripts.iter().map(|s| (s.n_low, s.n_high)).collect();
        assert_eq!(
            intervals,
            vec![(39, 41), (57, 65), (65, 67), (69, 69), (87, 91), (93, 101), (95, 109), (119, 123), (123, 129), (161, 185)]
        );
        let first = &scripts[0];
        assert_eq!((first.a, first.b, first.opening()), (39, 21, 22));
        assert_eq!((scripts[9].a, scripts[9].b), (161, 93));
    }

    #[test]
    fn render_drops_markers_only() {
        let s = &builtin_two_prime_scripts().unwrap()[0];
        assert_eq!(s.render(), "39 41 : [2 22 11 33 3][2 26 13 39 3][3 21 7 35 5 25]");
        assert_eq!(parse_scripts(&s.render()).unwrap()[0], *s);
    }

    #[test]
    fn inconsistent_scripts_are_rejected() {
        assert!(parse_scripts("39 43 : [2 22 11 33 3][2 26 13 39 3][3 21 7 35 5 25]").is_err());
        assert!(parse_scripts("39 41 : [2 22 11 33 3][2 26 13 *39* 3][3 21 *7* 35 5 25]").is_err());
        assert!(parse_scripts("39 41 [2 22]").is_err());
    }

    #[test]
    fn forty_replies() {
        let s = &builtin_two_prime_scripts().unwrap()[0];
        let policy = script_to_policy(s, 40).unwrap();
        let p = Position::from_moves(40, true, &[22, 11]).unwrap();
        assert_eq!(policy.reply(&p), Some(33));
        let p = Position::from_moves(40, true, &[22, 2, 26, 13, 39, 3]).unwrap();
        assert_eq!(policy.reply(&p), Some(21));
        assert!(matches!(script_to_policy(s, 42), Err(Error::OutOfInterval { n: 42, .. })));
    }

    #[test]
    fn forty_wins_and_forty_two_escapes() {
        let s = &builtin_two_prime_scripts().unwrap()[0];
        let sim = simulate_strategy(&script_to_policy(s, 40).unwrap(), 40, true, None).unwrap();
        assert_eq!(sim.outcome, SimulationOutcome::Verified);
        let sim = simulate_strategy(&script_to_policy_unchecked(s, 42).unwrap(), 42, true, None).unwrap();
        let SimulationOutcome::Counterexample(line) = sim.outcome else { panic!("42 should escape") };
        assert!(line.contains(&21) && line.last() == Some(&42), "{line:?}");
    }
}
