//! Subcommand implementations. Each returns the process exit code.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context};
use juniper_core::classify::{reference_diff, render_table};
use juniper_core::pairing::{
    builtin_corpus, greedy_pairing, parse_appendix, render_certificate, validate_certificate, verify_pairing_strategy,
    ProofMethod,
};
use juniper_core::primes::{build_prime_table, verify_appendix_bounds, DEFAULT_LIMIT};
use juniper_core::strategy::{
    builtin_two_prime_scripts, elementary_policy, script_to_policy, simulate_strategy, three_prime_strategy,
};
use juniper_core::{
    build_graph, full_table, initial_position, Effort, Outcome, PairingCertificate, Position, SimulationOutcome, Solver,
};
use serde::Serialize;

use crate::engine::{Engine, EngineConfig};
use crate::server::{router, AppState};

pub const OK: u8 = 0;
pub const FAILED: u8 = 1;

#[derive(Serialize)]
struct TableRecord {
    n: u32,
    verdict: Option<String>,
    cell: String,
    method: Option<String>,
    verified: bool,
}

pub fn table(max_n: u32, verified: bool, json: bool) -> anyhow::Result<u8> {
    if max_n < 2 {
        bail!("--max-n must be at least 2");
    }
    let effort = if verified { Effort::Verified } else { Effort::Fast };
    let rows = full_table(max_n, effort)?;
    if json {
        for r in &rows {
            let rec = TableRecord {
                n: r.n,
                verdict: r.verdict.map(|v| v.to_string()),
                cell: r.table_cell(),
                method: r.method.map(|m| format!("{m:?}")),
                verified: r.verified,
            };
            println!("{}", serde_json::to_string(&rec)?);
        }
    } else {
        print!("{}", render_table(&rows));
    }
    let diff = reference_diff(&rows);
    for d in &diff {
        eprintln!("mismatch: {d}");
    }
    let unproved: Vec<u32> = rows.iter().filter(|r| verified && !r.verified).map(|r| r.n).collect();
    if !unproved.is_empty() {
        eprintln!("unverified rows: {unproved:?}");
    }
    Ok(if diff.is_empty() && unproved.is_empty() { OK } else { FAILED })
}

pub fn solve(n: u32, even_rule: bool, budget: Option<u64>, stats: bool) -> anyhow::Result<u8> {
    if n < 2 {
        bail!("n must be at least 2");
    }
    let g = build_graph(n)?;
    let mut solver = Solver::new(&g)?;
    let (verdict, s) = solver.solve(&initial_position(n, even_rule)?, budget);
    match verdict {
        Some(v) => println!("{}", Outcome::from_first_player(v)),
        None => println!("unknown (budget exhausted)"),
    }
    if stats {
        println!(
            "nodes {}  memo hits {}  memo entries {}  time {:.3}s",
            s.nodes_expanded,
            s.memo_hits,
            s.memo_entries,
            s.elapsed.as_secs_f64()
        );
    }
    Ok(if verdict.is_some() { OK } else { FAILED })
}

fn describe_proof(cert: &PairingCertificate, budget: u64) -> anyhow::Result<(bool, String)> {
    let v = verify_pairing_strategy(cert, Some(budget))?;
    let how = match v.method {
        ProofMethod::Reachability => "closure".to_string(),
        ProofMethod::Search => format!("search, {} states", v.states),
    };
    Ok(match v.outcome {
        SimulationOutcome::Verified => (true, format!("Verified ({how})")),
        SimulationOutcome::BudgetExhausted => (false, format!("BudgetExhausted ({how})")),
        SimulationOutcome::Counterexample(line) => (false, format!("Counterexample {line:?}")),
    })
}

fn report_certificate(cert: &PairingCertificate, simulate: bool, budget: u64) -> anyhow::Result<bool> {
    let mut ok = true;
    let validity = match validate_certificate(cert) {
        Ok(()) => "valid".to_string(),
        Err(fault) => {
            ok = false;
            format!("invalid: {fault:?}")
        }
    };
    let mut line = format!("{:>4}  {}  {validity}", cert.n, cert.claim());
    if !cert.even_opening() {
        line.push_str("  odd opening");
    }
    if simulate {
        let (proved, text) = describe_proof(cert, budget)?;
        ok &= proved;
        line.push_str("  ");
        line.push_str(&text);
    }
    println!("{line}");
    Ok(ok)
}

pub fn pairing_for(n: u32, simulate: bool, budget: u64) -> anyhow::Result<u8> {
    let corpus = builtin_corpus()?;
    let cert = match corpus.into_iter().find(|c| c.n == n) {
        Some(c) => c,
        None => greedy_pairing(n)?.with_context(|| format!("no pairing certificate found for n = {n}"))?,
    };
    println!("{}", render_certificate(&cert));
    Ok(if report_certificate(&cert, simulate, budget)? { OK } else { FAILED })
}

pub fn pairing_corpus(path: &Path, simulate: bool, budget: u64) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let certs = parse_appendix(&text).with_context(|| format!("cannot parse {}", path.display()))?;
    let mut failures = 0;
    for cert in &certs {
        if !report_certificate(cert, simulate, budget)? {
            failures += 1;
        }
    }
    println!("{} entries, {failures} failed", certs.len());
    Ok(if failures == 0 { OK } else { FAILED })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum StrategyKind {
    Elementary,
    ThreePrime,
    Script,
}

pub fn strategy(n: u32, kind: Option<StrategyKind>, budget: u64) -> anyhow::Result<u8> {
    let table = build_prime_table(u64::from(n.max(2)))?;
    let scripts = builtin_two_prime_scripts()?;
    let kind = match kind {
        Some(k) => k,
        None if three_prime_strategy(n, &table)?.is_some() => StrategyKind::ThreePrime,
        None if scripts.iter().any(|s| s.contains(n)) => StrategyKind::Script,
        None => StrategyKind::Elementary,
    };
    let started = Instant::now();
    let sim = match kind {
        StrategyKind::ThreePrime => {
            let Some(plan) = three_prime_strategy(n, &table)? else {
                println!("no three-prime strategy for n = {n}");
                return Ok(FAILED);
            };
            println!("three-prime strategy p = {}, q = {}, r = {}, opening {}", plan.p, plan.q, plan.r, plan.opening);
            simulate_strategy(&plan.policy, n, true, Some(budget))?
        }
        StrategyKind::Script => {
            let Some(script) = scripts.iter().find(|s| s.contains(n)) else {
                println!("no two-prime script covers n = {n}");
                return Ok(FAILED);
            };
            println!("two-prime script for [{}, {}], opening {}", script.n_low, script.n_high, script.opening());
            println!("{}", script.render());
            simulate_strategy(&script_to_policy(script, n)?, n, true, Some(budget))?
        }
        StrategyKind::Elementary => {
            let Some(policy) = elementary_policy(n, &table)? else {
                println!("fewer than two primes in (n/2, n] for n = {n}");
                return Ok(FAILED);
            };
            println!("elementary strategy without the even rule, opening {}", policy.opening.unwrap_or_default());
            simulate_strategy(&policy, n, false, Some(budget))?
        }
    };
    let elapsed = started.elapsed().as_secs_f64();
    println!("{:?} after {} states in {elapsed:.3}s", sim.outcome, sim.states);
    Ok(if sim.outcome.is_verified() { OK } else { FAILED })
}

pub fn check_bounds() -> anyhow::Result<u8> {
    let table = build_prime_table(DEFAULT_LIMIT)?;
    let report = verify_appendix_bounds(&table)?;
    let two = report.two_prime_claim_exceptions();
    let three = report.three_prime_ranges();
    println!("fewer than two primes in (n/2, n], 3 <= n <= 6550: {two:?}");
    let ranges: Vec<String> = three.iter().map(|(a, b)| format!("[{a},{b}]")).collect();
    println!("fewer than three primes in (n/4, n/3], n <= {}: {}", report.checked_up_to, ranges.join(" "));
    let expected_three = [(1, 110), (116, 122), (124, 128), (172, 176)];
    Ok(if two == [4, 6, 10] && three == expected_three { OK } else { FAILED })
}

pub fn graph(n: u32, moves: &[u32], dot: bool) -> anyhow::Result<u8> {
    let g = build_graph(n)?;
    let p = Position::from_moves(n, true, moves)?;
    let doc = g.export(&p);
    if dot {
        print!("{}", doc.to_dot());
    } else {
        println!("{}", serde_json::to_string_pretty(&doc)?);
    }
    Ok(OK)
}

pub struct ServeOptions {
    pub host: String,
    pub port: u16,
    pub history_dir: Option<std::path::PathBuf>,
    pub capacity: usize,
    pub engine: EngineConfig,
}

pub fn serve(opts: ServeOptions) -> anyhow::Result<u8> {
    if let Some(dir) = &opts.history_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let engine = Arc::new(Engine::new(opts.engine)?);
    let state = Arc::new(AppState::new(engine, opts.capacity, opts.history_dir));
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind((opts.host.as_str(), opts.port)).await?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, router(state)).await?;
        Ok::<_, anyhow::Error>(())
    })?;
    Ok(OK)
}
