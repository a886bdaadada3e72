//! Classification of whole games, each verdict backed by evidence.
//!
//! Methods are tried in order: a scripted strategy (three-prime, then
//! two-prime), a link to `n - 1`, a pairing certificate (shipped corpus, then
//! greedy), the parity rule (fast mode only) and finally the solver.
//! Scripts come first so that scripted values are reported as such even when
//! a link would also apply.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::MAX_BITS_N;
use crate::pairing::{
    builtin_corpus, greedy_pairing, predict_by_parity, validate_certificate, verify_pairing_strategy, PairingCertificate,
    ParityPrediction,
};
use crate::primes::{build_prime_table, PrimeTable};
use crate::solver::{solve_initial_budgeted, Outcome};
use crate::strategy::{
    builtin_two_prime_scripts, equivalent_predecessor, script_to_policy, simulate_strategy, three_prime_strategy,
    EquivalenceLink, TwoPrimeScript,
};
use crate::{Error, Result};

/// The published results, one line per `n`, then a closing `120+` line.
pub const REFERENCE_TABLE: &str = include_str!("../data/results.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Effort {
    /// Cheap evidence; links and parity predictions stay unproved.
    Fast,
    /// Every piece of evidence is re-proved.
    Verified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Solver,
    EquivalenceLink,
    ThreePrimeScript,
    TwoPrimeScript,
    PairingCertificate,
    ParityRule,
}

impl Method {
    pub fn is_scripted(self) -> bool {
        matches!(self, Method::ThreePrimeScript | Method::TwoPrimeScript)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertificateSource {
    Greedy,
    Corpus,
}

#[derive(Debug, Clone, Serialize)]
pub enum Evidence {
    None,
    Solver,
    Link(EquivalenceLink),
    ThreePrime { p: u32, q: u32, r: u32, opening: u32 },
    TwoPrime(TwoPrimeScript),
    Certificate { certificate: PairingCertificate, source: CertificateSource },
    Parity(ParityPrediction),
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub n: u32,
    /// `None` for `n = 1`, where no even first move exists, and for an
    /// unresolved search.
    pub verdict: Option<Outcome>,
    pub method: Option<Method>,
    pub evidence: Evidence,
    pub verified: bool,
}

impl ClassificationReport {
    /// Cell as printed in the published table: `-`, `|`, `G`, `P`, with
    /// `green` after scripted values.
    pub fn table_cell(&self) -> String {
        match (self.verdict, self.method) {
            (None, _) => "-".into(),
            (_, Some(Method::EquivalenceLink)) => "|".into(),
            (Some(v), Some(m)) if m.is_scripted() => format!("{v} green"),
            (Some(v), _) => v.to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClassifierConfig {
    /// Node budget of the solver fallback.
    pub solver_budget: u64,
    /// State budget of strategy and certificate simulations.
    pub simulation_budget: u64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self { solver_budget: 200_000_000, simulation_budget: 5_000_000 }
    }
}

pub struct Classifier {
    table: PrimeTable,
    scripts: Vec<TwoPrimeScript>,
    corpus: Vec<PairingCertificate>,
    config: ClassifierConfig,
}

impl Classifier {
    /// Handles `n` up to `max_n`.
    pub fn new(max_n: u32) -> Result<Self> {
        Self::with_config(max_n, ClassifierConfig::default(), builtin_corpus()?)
    }

    pub fn with_config(max_n: u32, config: ClassifierConfig, corpus: Vec<PairingCertificate>) -> Result<Self> {
        Ok(Self { table: build_prime_table(u64::from(max_n.max(2)))?, scripts: builtin_two_prime_scripts()?, corpus, config })
    }

    pub fn prime_table(&self) -> &PrimeTable {
        &self.table
    }

    pub fn scripts(&self) -> &[TwoPrimeScript] {
        &self.scripts
    }

    pub fn corpus(&self) -> &[PairingCertificate] {
        &self.corpus
    }

    pub fn script_for(&self, n: u32) -> Option<&TwoPrimeScript> {
        self.scripts.iter().find(|s| s.contains(n))
    }

    /// True when a scripted strategy exists for `n`.
    pub fn is_scripted(&self, n: u32) -> Result<bool> {
        Ok(self.script_for(n).is_some() || three_prime_strategy(n, &self.table)?.is_some())
    }

    /// The parity prediction with its applicability settled.
    pub fn parity(&self, n: u32) -> Result<ParityPrediction> {
        let mut p = predict_by_parity(n)?;
        p.applicable = !self.is_scripted(n)?;
        Ok(p)
    }

    pub fn classify(&self, n: u32, effort: Effort) -> Result<ClassificationReport> {
        self.table.check(u64::from(n))?;
        let report =
            |verdict, method, evidence, verified| ClassificationReport { n, verdict, method: Some(method), evidence, verified };
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if n == 1 {
            return Ok(ClassificationReport { n, verdict: None, method: None, evidence: Evidence::None, verified: true });
        }
        let verify = effort == Effort::Verified;
        let budget = Some(self.config.simulation_budget);

        if let Some(plan) = three_prime_strategy(n, &self.table)? {
            let verified = verify && simulate_strategy(&plan.policy, n, true, budget)?.outcome.is_verified();
            let ev = Evidence::ThreePrime { p: plan.p, q: plan.q, r: plan.r, opening: plan.opening };
            return Ok(report(Some(Outcome::G), Method::ThreePrimeScript, ev, verified));
        }
        if let Some(script) = self.script_for(n) {
            let verified = verify && simulate_strategy(&script_to_policy(script, n)?, n, true, budget)?.outcome.is_verified();
            return Ok(report(Some(Outcome::G), Method::TwoPrimeScript, Evidence::TwoPrime(script.clone()), verified));
        }
        if let Some(link) = equivalent_predecessor(n, &self.table)? {
            let base = self.classify(link.equivalent_to, effort)?;
            let verified = verify && base.verified;
            return Ok(report(base.verdict, Method::EquivalenceLink, Evidence::Link(link), verified));
        }
        if let Some(r) = self.by_certificate(n, verify)? {
            return Ok(r);
        }
        if effort == Effort::Fast && n >= 4 {
            let p = self.parity(n)?;
            return Ok(report(Some(p.predicted), Method::ParityRule, Evidence::Parity(p), false));
        }
        if n > MAX_BITS_N {
            return Err(Error::TooLarge { n, max: MAX_BITS_N });
        }
        let verdict = solve_initial_budgeted(n, Some(self.config.solver_budget))?;
        Ok(report(verdict, Method::Solver, Evidence::Solver, verdict.is_some()))
    }

    fn by_certificate(&self, n: u32, verify: bool) -> Result<Option<ClassificationReport>> {
        let corpus = self.corpus.iter().filter(|c| c.n == n).map(|c| Ok((c.clone(), CertificateSource::Corpus)));
        let greedy = std::iter::once_with(|| greedy_pairing(n))
            .filter_map(|r| r.transpose())
            .map(|r| r.map(|c| (c, CertificateSource::Greedy)));
        for candidate in corpus.chain(greedy) {
            let (cert, source) = candidate?;
            if !cert.even_opening() || validate_certificate(&cert).is_err() {
                continue;
            }
            let proof = verify_pairing_strategy(&cert, Some(self.config.simulation_budget))?;
            if !proof.outcome.is_verified() {
                continue;
            }
            return Ok(Some(ClassificationReport {
                n,
                verdict: Some(cert.claim()),
                method: Some(Method::PairingCertificate),
                evidence: Evidence::Certificate { certificate: cert, source },
                verified: verify,
            }));
        }
        Ok(None)
    }
}

/// Reports for `1..=max_n`, computed in parallel.
pub fn full_table(max_n: u32, effort: Effort) -> Result<Vec<ClassificationReport>> {
    let classifier = Classifier::new(max_n)?;
    classify_range(&classifier, 1, max_n, effort)
}

pub fn classify_range(c: &Classifier, from: u32, to: u32, effort: Effort) -> Result<Vec<ClassificationReport>> {
    (from..=to).into_par_iter().map(|n| c.classify(n, effort)).collect()
}

fn method_name(m: Option<Method>) -> &'static str {
    match m {
        None => "-",
        Some(Method::Solver) => "solver",
        Some(Method::EquivalenceLink) => "link",
        Some(Method::ThreePrimeScript) => "three-prime",
        Some(Method::TwoPrimeScript) => "two-prime",
        Some(Method::PairingCertificate) => "certificate",
        Some(Method::ParityRule) => "parity",
    }
}

/// Aligned text table.
pub fn render_table(reports: &[ClassificationReport]) -> String {
    let mut out = format!("{:>5}  {:<8} {:<8} {:<12} {}\n", "n", "cell", "result", "method", "verified");
    for r in reports {
        let verdict = r.verdict.map_or("-".to_string(), |v| v.to_string());
        let verified = if r.verified { "yes" } else { "no" };
        let _ = writeln!(out, "{:>5}  {:<8} {:<8} {:<12} {verified}", r.n, r.table_cell(), verdict, method_name(r.method));
    }
    out
}

/// Expected cell for `n` in the published table.
pub fn reference_cell(n: u32) -> Option<String> {
    for line in REFERENCE_TABLE.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let (key, cell) = line.split_once(' ')?;
        let matches = match key.strip_suffix('+') {
            Some(from) => from.parse::<u32>().is_ok_and(|f| n >= f),
            None => key.parse::<u32>().is_ok_and(|k| k == n),
        };
        if matches {
            return Some(cell.trim().to_string());
        }
    }
    None
}

/// Rows whose rendered cell differs from the published table.
pub fn reference_diff(reports: &[ClassificationReport]) -> Vec<String> {
    reports
        .iter()
        .filter_map(|r| {
            let want = reference_cell(r.n)?;
            let got = r.table_cell();
            (got != want).then(|| format!("n = {}: expected {want:?}, got {got:?}", r.n))
        })
        .collect()
}
