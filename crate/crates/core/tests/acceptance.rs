//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use juniper_core::classify::{classify_range, reference_cell, reference_diff, Classifier};
use juniper_core::pairing::{
    builtin_corpus, predict_by_parity, validate_certificate, verify_pairing_strategy, PairResponder, ProofMethod,
};
use juniper_core::primes::{build_prime_table, verify_appendix_bounds, DEFAULT_LIMIT};
use juniper_core::strategy::{
    builtin_two_prime_scripts, elementary_strategy, equivalent_predecessor, script_to_policy, script_to_policy_unchecked,
    simulate_strategy, three_prime_strategy, Policy, SimulationOutcome,
};
use juniper_core::{
    build_graph, initial_position, solve_initial, Effort, GameVerdict, Method, Outcome, Position, Solver, SolverConfig,
};
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Resolves `|` cells of the reference table to the verdict they repeat.
fn reference_verdict(n: u32) -> Option<Outcome> {
    let mut k = n;
    loop {
        let cell = reference_cell(k)?;
        match cell.split_whitespace().next()? {
            "G" => return Some(Outcome::G),
            "P" => return Some(Outcome::P),
            "|" => k -= 1,
            _ => return None,
        }
    }
}

fn table_regression() -> Check {
    let c = Classifier::new(48).map_err(|e| e.to_string())?;
    let rows = classify_range(&c, 1, 48, Effort::Verified).map_err(|e| e.to_string())?;
    let diff = reference_diff(&rows[1..]);
    ensure(diff.is_empty(), || format!("diffs: {diff:?}"))?;
    let unproved: Vec<u32> = rows.iter().filter(|r| !r.verified).map(|r| r.n).collect();
    ensure(unproved.is_empty(), || format!("unverified rows {unproved:?}"))?;
    for n in 2..=48 {
        let solved = solve_initial(n).map_err(|e| e.to_string())?;
        ensure(Some(solved) == reference_verdict(n), || format!("solver gives {solved} at n = {n}"))?;
    }
    Ok("n = 2..48 zero diffs, all rows verified, solver agrees".into())
}

fn extended_table() -> Check {
    let c = Classifier::new(118).map_err(|e| e.to_string())?;
    let rows = classify_range(&c, 49, 118, Effort::Verified).map_err(|e| e.to_string())?;
    let diff = reference_diff(&rows);
    ensure(diff.is_empty(), || format!("diffs: {diff:?}"))?;
    for r in &rows {
        ensure(r.verified, || format!("n = {} not verified", r.n))?;
        ensure(!matches!(r.method, Some(Method::Solver | Method::ParityRule) | None), || {
            format!("n = {} settled by {:?}", r.n, r.method)
        })?;
    }
    let corpus = builtin_corpus().map_err(|e| e.to_string())?;
    let mut heavy = Vec::new();
    for n in [110, 116, 117] {
        let cert = corpus.iter().find(|c| c.n == n).ok_or(format!("no corpus entry for {n}"))?;
        validate_certificate(cert).map_err(|f| format!("n = {n}: {f:?}"))?;
        let v = verify_pairing_strategy(cert, Some(5_000_000)).map_err(|e| e.to_string())?;
        ensure(v.outcome.is_verified(), || format!("n = {n}: {:?}", v.outcome))?;
        let responder = PairResponder::new(cert).map_err(|e| e.to_string())?;
        let sim = simulate_strategy(&responder, n, true, Some(1_000_000)).map_err(|e| e.to_string())?;
        let status = match sim.outcome {
            SimulationOutcome::Verified => format!("simulation pass in {} states", sim.states),
            SimulationOutcome::BudgetExhausted => "simulation BudgetExhausted".into(),
            SimulationOutcome::Counterexample(line) => return Err(format!("n = {n} refuted by {line:?}")),
        };
        heavy.push(format!("{n} {} closure proof, {status}", cert.claim()));
    }
    Ok(format!("n = 49..118 zero diffs via links/scripts/certificates; {}", heavy.join(", ")))
}

fn corpus_check() -> Check {
    let corpus = builtin_corpus().map_err(|e| e.to_string())?;
    ensure(corpus.len() >= 40, || format!("only {} entries", corpus.len()))?;
    let mut by_search = 0;
    for cert in &corpus {
        validate_certificate(cert).map_err(|f| format!("n = {}: {f:?}", cert.n))?;
        ensure(Some(cert.claim()) == reference_verdict(cert.n), || format!("n = {} claims {}", cert.n, cert.claim()))?;
        if cert.n <= 56 {
            let v = verify_pairing_strategy(cert, None).map_err(|e| e.to_string())?;
            ensure(v.outcome.is_verified(), || format!("n = {}: {:?}", cert.n, v.outcome))?;
            by_search += usize::from(v.method == ProofMethod::Search);
        }
    }
    Ok(format!("{} entries validate, n <= 56 verified ({by_search} by search)", corpus.len()))
}

fn prime_bounds() -> Check {
    let t = build_prime_table(DEFAULT_LIMIT).map_err(|e| e.to_string())?;
    let report = verify_appendix_bounds(&t).map_err(|e| e.to_string())?;
    let two = report.two_prime_claim_exceptions();
    ensure(two == [4, 6, 10], || format!("two-prime exceptions {two:?}"))?;
    let three = report.three_prime_ranges();
    ensure(three == [(1, 110), (116, 122), (124, 128), (172, 176)], || format!("three-prime ranges {three:?}"))?;
    Ok(format!("two-prime {two:?}, three-prime {three:?}"))
}

/// Replays the opponent's half of `line` and checks the policy's half.
fn follows(policy: &dyn Policy, n: u32, line: &[u32]) -> bool {
    if policy.opening() != Some(line[0]) {
        return false;
    }
    let mut p = initial_position(n, true).unwrap().apply_move(line[0]).unwrap();
    for step in line[1..].chunks(2) {
        p = p.apply_move(step[0]).unwrap();
        if let Some(&answer) = step.get(1) {
            if policy.reply(&p) != Some(answer) {
                return false;
            }
            p = p.apply_move(answer).unwrap();
        }
    }
    true
}

fn three_prime() -> Check {
    let t = build_prime_table(300).map_err(|e| e.to_string())?;
    let mut count = 0;
    for n in 1..=300 {
        if let Some(plan) = three_prime_strategy(n, &t).map_err(|e| e.to_string())? {
            let s = simulate_strategy(&plan.policy, n, true, None).map_err(|e| e.to_string())?;
            ensure(s.outcome.is_verified(), || format!("n = {n}: {:?}", s.outcome))?;
            count += 1;
        }
    }
    let plan = three_prime_strategy(200, &t).map_err(|e| e.to_string())?.ok_or("no plan for 200")?;
    let lines: [&[u32]; 2] = [&[106, 2, 118, 59, 177, 3, 183, 61, 122], &[106, 53, 159, 3, 177, 59, 118, 2, 122, 61, 183]];
    for line in lines {
        ensure(follows(&plan.policy, 200, line), || format!("n = 200 deviates from {line:?}"))?;
    }
    Ok(format!("{count} values of n <= 300 verified, n = 200 lines reproduced"))
}

fn two_prime_scripts() -> Check {
    let scripts = builtin_two_prime_scripts().map_err(|e| e.to_string())?;
    ensure(scripts.len() == 10, || format!("{} scripts", scripts.len()))?;
    let mut checked = 0;
    for s in &scripts {
        for n in (s.n_low..=s.n_high).filter(|&n| n <= 129 || n == 161 || n == 185) {
            let policy = script_to_policy(s, n).map_err(|e| e.to_string())?;
            let sim = simulate_strategy(&policy, n, true, None).map_err(|e| e.to_string())?;
            ensure(sim.outcome.is_verified(), || format!("[{},{}] at n = {n}: {:?}", s.n_low, s.n_high, sim.outcome))?;
            checked += 1;
        }
    }
    for n in [161, 185] {
        ensure(scripts.iter().any(|s| s.contains(n)), || format!("no script covers {n}"))?;
    }
    let s = scripts.iter().find(|s| (s.n_low, s.n_high) == (39, 41)).ok_or("no [39,41] script")?;
    let sim = simulate_strategy(&script_to_policy_unchecked(s, 42).map_err(|e| e.to_string())?, 42, true, None)
        .map_err(|e| e.to_string())?;
    match sim.outcome {
        SimulationOutcome::Counterexample(line) if line.contains(&21) => {
            Ok(format!("{checked} (script, n) pairs verified; n = 42 refuted by {line:?}"))
        }
        other => Err(format!("n = 42 gave {other:?}")),
    }
}

fn equivalence_lemmas() -> Check {
    let t = build_prime_table(48).map_err(|e| e.to_string())?;
    let mut linked = Vec::new();
    for n in 2..=48 {
        if let Some(link) = equivalent_predecessor(n, &t).map_err(|e| e.to_string())? {
            let (a, b) =
                (solve_initial(n).map_err(|e| e.to_string())?, solve_initial(link.equivalent_to).map_err(|e| e.to_string())?);
            ensure(a == b, || format!("n = {n} gives {a}, n - 1 gives {b}"))?;
            linked.push(n);
        }
    }
    Ok(format!("{} linked n agree: {linked:?}", linked.len()))
}

fn elementary() -> Check {
    let t = build_prime_table(30).map_err(|e| e.to_string())?;
    for n in (3..=30).filter(|n| ![4, 6, 10].contains(n)) {
        let m = elementary_strategy(n, &t).map_err(|e| e.to_string())?.ok_or(format!("no opening at {n}"))?;
        let g = build_graph(n).map_err(|e| e.to_string())?;
        let after = initial_position(n, false).and_then(|p| p.apply_move(m)).map_err(|e| e.to_string())?;
        let (v, _) = Solver::new(&g).map_err(|e| e.to_string())?.solve(&after, None);
        ensure(v == Some(GameVerdict::Loss), || format!("n = {n}: opening {m} leaves {v:?}"))?;
    }
    Ok("openings win for n = 3..30 except 4, 6, 10".into())
}

fn reachable_positions(n: u32) -> Vec<Position> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut stack = vec![initial_position(n, true).unwrap()];
    let g = build_graph(n).unwrap();
    while let Some(p) = stack.pop() {
        if !seen.insert((p.remaining().to_bit_string(), p.current())) {
            continue;
        }
        for m in g.legal_moves(&p) {
            stack.push(p.apply_move(m).unwrap());
        }
        out.push(p);
    }
    out
}

fn simplification() -> Check {
    let mut exhaustive = 0;
    for n in 2..=12 {
        let g = build_graph(n).map_err(|e| e.to_string())?;
        let mut fast = Solver::new(&g).map_err(|e| e.to_string())?;
        let mut plain = Solver::with_config(&g, SolverConfig::plain()).map_err(|e| e.to_string())?;
        for p in reachable_positions(n) {
            let (a, b) = (fast.solve(&p, None).0, plain.solve(&p, None).0);
            ensure(a == b, || format!("n = {n}, {p:?}: {a:?} vs {b:?}"))?;
            exhaustive += 1;
        }
    }
    let mut rng = StdRng::seed_from_u64(2024);
    let graphs: Vec<_> = (2..=20).map(|n| build_graph(n).unwrap()).collect();
    let mut solvers: Vec<_> =
        graphs.iter().map(|g| (Solver::new(g).unwrap(), Solver::with_config(g, SolverConfig::plain()).unwrap())).collect();
    for _ in 0..10_000 {
        let i = rng.random_range(0..graphs.len());
        let g = &graphs[i];
        let mut p = initial_position(g.n(), true).unwrap();
        let depth = rng.random_range(0..=g.n() as usize);
        for _ in 0..depth {
            let Some(&m) = g.legal_moves(&p).choose(&mut rng) else { break };
            p = p.apply_move(m).unwrap();
        }
        let (fast, plain) = &mut solvers[i];
        let (a, b) = (fast.solve(&p, None).0, plain.solve(&p, None).0);
        ensure(a == b, || format!("{p:?}: {a:?} vs {b:?}"))?;
    }
    Ok(format!("{exhaustive} reachable positions (n <= 12) and 10000 random positions (n <= 20) agree"))
}

fn parity_rule() -> Check {
    let c = Classifier::new(118).map_err(|e| e.to_string())?;
    let mut flips = Vec::new();
    let mut applicable = 0;
    for n in 4..=118 {
        let p = c.parity(n).map_err(|e| e.to_string())?;
        ensure(
            p == predict_by_parity(n).map(|q| juniper_core::ParityPrediction { applicable: p.applicable, ..q }).unwrap(),
            || format!("inconsistent prediction at {n}"),
        )?;
        if !p.applicable {
            continue;
        }
        applicable += 1;
        let actual = c.classify(n, Effort::Verified).map_err(|e| e.to_string())?.verdict;
        ensure(actual == Some(p.predicted), || format!("n = {n}: predicted {} but {actual:?}", p.predicted))?;
        if p.exception_applied {
            flips.push(n);
        }
    }
    ensure(flips == [49, 92], || format!("flips at {flips:?}"))?;
    Ok(format!("{applicable} applicable n agree, flips at {flips:?}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("table regression 2..48", table_regression),
        ("extended table 49..118", extended_table),
        ("certificate corpus", corpus_check),
        ("prime bounds", prime_bounds),
        ("three-prime strategy", three_prime),
        ("two-prime scripts", two_prime_scripts),
        ("equivalence links", equivalence_lemmas),
        ("elementary strategy without even rule", elementary),
        ("simplification soundness", simplification),
        ("parity rule", parity_rule),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS  {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    println!("{} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
