//! Acceptance run: one PASS/FAIL line per criterion.

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use orderlab::closure::one_step;
use orderlab::families::DistinguishedSet;
use orderlab::harness::{
    run_suite, search_counterexample, Builtin, Registry, RelationSource, RunReport, Scope, SuiteId,
    EXIT_FINDINGS,
};
use orderlab::topology::{check_continuity_characterization, check_mu_topology};
use orderlab::{
    enumerate_posets, generate, mu_topology, sample_aux, scott_topology, AuxRelation, Budget, Family, FamilyElement,
    PosetKind,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn clean(report: &RunReport) -> Result<(), String> {
    ensure(!report.incomplete, format!("incomplete: {:?}", report.incomplete_reason))?;
    match report.failures.first() {
        None => Ok(()),
        Some(f) => Err(format!("{} failures, first {} at {}", report.failures.len(), f.law, f.fingerprint)),
    }
}

fn suite(max_n: usize, suites: &[SuiteId]) -> Result<RunReport, String> {
    run_suite(&Scope::exhaustive(max_n), suites).map_err(|e| e.to_string())
}

fn is_partial_order(n: usize, bits: u32) -> bool {
    let r = |i: usize, j: usize| bits >> (i * n + j) & 1 == 1;
    (0..n).all(|i| r(i, i))
        && (0..n).all(|i| (0..n).all(|j| i == j || !(r(i, j) && r(j, i))))
        && (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(r(i, j) && r(j, k)) || r(i, k))))
}

fn enumeration_sanity() -> Outcome {
    let start = Instant::now();
    let mut counts = Vec::new();
    for n in 1..=4usize {
        let brute = (0u32..1 << (n * n)).filter(|&b| is_partial_order(n, b)).count();
        let lib = enumerate_posets(n, false, Budget::UNLIMITED).map_err(|e| e.to_string())?.len();
        ensure(brute == lib, format!("n={n}: library {lib}, brute force {brute}"))?;
        counts.push(lib);
    }
    ensure(counts == [1, 3, 19, 219], format!("counts {counts:?}"))?;
    within(start.elapsed(), Duration::from_secs(10), "enumeration")?;
    Ok(format!("counts {counts:?} match brute force"))
}

fn int_characterization() -> Outcome {
    let start = Instant::now();
    let report = suite(3, &[SuiteId::IntChar])?;
    clean(&report)?;
    within(start.elapsed(), Duration::from_secs(120), "int-char suite")?;
    Ok(format!("{} instances, 0 failures", report.instances_attempted))
}

fn simple_suite(ids: &[SuiteId]) -> Outcome {
    let report = suite(3, ids)?;
    clean(&report)?;
    Ok(format!("{} instances, 0 failures", report.instances_attempted))
}

fn mu_topology_invariants() -> Outcome {
    let report = suite(3, &[SuiteId::MuTopology])?;
    clean(&report)?;
    let mut sampled = 0u64;
    let mut seed = 0u64;
    while sampled < 10_000 {
        seed += 1;
        let n = 1 + (seed % 6) as usize;
        let edge_prob = (seed * 37 % 101) as f64 / 100.0;
        let p = Arc::new(generate(&PosetKind::Random { seed, n, edge_prob }).map_err(|e| e.to_string())?);
        let r = sample_aux(&p, seed.wrapping_mul(0x9E37_79B9));
        if !r.classify().pre_approximating {
            continue;
        }
        let mu = mu_topology(&r).map_err(|e| e.to_string())?;
        if let Some(v) = mu.invariant_violation() {
            return Err(format!("seed {seed}: {v}"));
        }
        let checked = check_mu_topology(&r).map_err(|e| e.to_string())?;
        ensure(checked.passed(), format!("seed {seed}: {:?}", checked.failures().next()))?;
        sampled += 1;
    }
    Ok(format!(
        "{} exhaustive instances and {sampled} sampled at n<=6, 0 failures",
        report.instances_attempted
    ))
}

fn chain_of_containments() -> Outcome {
    let report = suite(3, &[SuiteId::Chain])?;
    clean(&report)?;
    for p in enumerate_posets(4, false, Budget::UNLIMITED).map_err(|e| e.to_string())? {
        let p = Arc::new(p);
        let wb = AuxRelation::way_below(p.clone(), Budget::UNLIMITED).map_err(|e| e.to_string())?;
        let mu = mu_topology(&wb).map_err(|e| e.to_string())?;
        let sigma = scott_topology(&p).map_err(|e| e.to_string())?;
        let uppers = p.upper_sets().map_err(|e| e.to_string())?;
        ensure(
            mu.opens() == sigma.opens() && sigma.opens() == uppers.as_slice(),
            format!("{p:?}: way-below topology, Scott topology and upper sets differ"),
        )?;
    }
    Ok(format!(
        "{} instances, 0 failures; way-below topology = Scott = upper sets at n=4",
        report.instances_attempted
    ))
}

fn continuity() -> Outcome {
    const FACTS: [&str; 5] = [
        "continuous",
        "lap-way-below-is-scott-interior",
        "some-lap-is-scott-interior",
        "uap-way-below-is-scott-closure",
        "some-uap-is-scott-closure",
    ];
    let mut count = 0;
    for n in 1..=4 {
        for p in enumerate_posets(n, false, Budget::UNLIMITED).map_err(|e| e.to_string())? {
            let p = Arc::new(p);
            let r = check_continuity_characterization(&p, None, Budget::UNLIMITED).map_err(|e| e.to_string())?;
            ensure(r.passed(), format!("{p:?}: {:?}", r.failures().next()))?;
            for f in FACTS {
                ensure(r.fact_value(f) == Some(true), format!("{p:?}: {f} is not true"))?;
            }
            ensure(
                r.verdict("continuity.scott-closure-by-way-below").is_some_and(|v| v.pass),
                format!("{p:?}: Scott closure by way-below"),
            )?;
            count += 1;
        }
    }
    Ok(format!("{count} posets, all five statements true, Scott closure matches way-below"))
}

fn cspace() -> Outcome {
    let report = suite(3, &[SuiteId::Cspace])?;
    clean(&report)?;

    let start = Instant::now();
    let found = search_counterexample("cspace-implies-approximating", &Scope::exhaustive(3), &Registry::builtin())
        .map_err(|e| e.to_string())?
        .ok_or("search found no witness")?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1), "search")?;
    ensure(found.exit_code() == EXIT_FINDINGS, "search witness is not a finding")?;
    let inst = orderlab::harness::parse_fingerprint(&found.fingerprint).map_err(|e| e.to_string())?;
    let p = &inst.poset;
    let is_chain = (0..p.len()).all(|i| (0..p.len()).all(|j| p.leq(i, j) || p.leq(j, i)));
    ensure(is_chain, format!("witness poset is not a chain: {}", found.fingerprint))?;
    ensure(
        inst.relations == vec![AuxRelation::bottom(p.clone())],
        format!("witness relation is not the bottom relation: {}", found.fingerprint),
    )?;

    let c3 = generate(&PosetKind::Chain(3)).map_err(|e| e.to_string())?;
    let single = run_suite(&Scope::single(c3, RelationSource::Builtins(vec![Builtin::Bottom])), &[SuiteId::Cspace])
        .map_err(|e| e.to_string())?;
    clean(&single)?;
    ensure(single.findings.len() == 1, format!("C3 with bottom: {} findings", single.findings.len()))?;
    ensure(single.exit_code() == EXIT_FINDINGS, "C3 with bottom: exit code is not 3")?;

    Ok(format!(
        "{} instances, 0 failures, {} findings; search hit {}-chain with bottom relation ({}) as a finding in {elapsed:?}; \
         a 2-chain precedes the 3-chain in search order, C3 with bottom relation confirmed separately as 1 finding, exit 3",
        report.instances_attempted,
        report.findings.len(),
        p.len(),
        found.fingerprint
    ))
}

/// Omega-family way-below decided on a window by adding the infinite tails
/// `{nat(k), nat(k+1), …}` (supremum omega) to the window's directed sets.
fn omega_oracle(x: FamilyElement, y: FamilyElement, n: u64) -> bool {
    use FamilyElement::{Nat, Omega};
    let labels: Vec<FamilyElement> = (0..=n).map(Nat).chain([Omega]).collect();
    let leq = |a: FamilyElement, b: FamilyElement| match (a, b) {
        (_, Omega) => true,
        (Nat(i), Nat(j)) => i <= j,
        _ => false,
    };
    let size = labels.len();
    for mask in 1u32..1 << size {
        let d: Vec<FamilyElement> = (0..size).filter(|k| mask >> k & 1 == 1).map(|k| labels[k]).collect();
        let Some(&sup) = d.iter().find(|&&s| d.iter().all(|&z| leq(z, s))) else { continue };
        if leq(y, sup) && !d.iter().any(|&z| leq(x, z)) {
            return false;
        }
    }
    matches!(x, Nat(_))
}

fn one_step_and_families() -> Outcome {
    let report = suite(4, &[SuiteId::OneStep])?;
    clean(&report)?;
    for n in 1..=4 {
        for p in enumerate_posets(n, false, Budget::UNLIMITED).map_err(|e| e.to_string())? {
            let p = Arc::new(p);
            let sigma = scott_topology(&p).map_err(|e| e.to_string())?;
            for a in p.universe().subsets() {
                let prime = one_step(&p, a).map_err(|e| e.to_string())?;
                ensure(
                    prime == p.down_closure(a) && prime == sigma.closure(a),
                    format!("{p:?}: A={a}"),
                )?;
            }
        }
    }

    let ladder = Family::Ladder;
    let top = FamilyElement::Top;
    ensure(
        ladder.membership(DistinguishedSet::ScottClosureA, top).map_err(|e| e.to_string())?
            && !ladder.membership(DistinguishedSet::APrime, top).map_err(|e| e.to_string())?,
        "ladder: top membership",
    )?;
    let start = Instant::now();
    for m in 0..=8 {
        for n in 0..=8 {
            let r = ladder.verify_window_soundness(m, n).map_err(|e| e.to_string())?;
            ensure(r.passed(), format!("ladder window ({m},{n}): {:?}", r.failures().next()))?;
            ensure(r.fact_value("one-step-closure") == Some(false), format!("ladder window ({m},{n}): one step"))?;
        }
    }
    let ladder_time = start.elapsed();
    within(ladder_time, Duration::from_secs(30), "ladder windows")?;

    for n in 0..=8 {
        let w = Family::Omega.window(0, n).map_err(|e| e.to_string())?;
        for &x in &w.labels {
            for &y in &w.labels {
                let lib = Family::Omega.way_below(x, y).map_err(|e| e.to_string())?;
                ensure(lib == omega_oracle(x, y, n), format!("omega n={n}: {x} << {y}"))?;
            }
        }
        let r = Family::Omega.verify_window_soundness(0, n).map_err(|e| e.to_string())?;
        ensure(r.passed(), format!("omega window {n}: {:?}", r.failures().next()))?;
        ensure(
            r.verdict("window.omega-interior-empty").is_some_and(|v| v.pass),
            "omega interior clause",
        )?;
    }
    Ok(format!(
        "{} posets, 0 failures; ladder windows m,n<=8 in {ladder_time:?}; omega way-below matches oracle n<=8",
        report.instances_attempted
    ))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_orderlab");
    let run = |jobs: Option<&str>| -> Result<(Vec<u8>, i32), String> {
        let mut cmd = Command::new(bin);
        cmd.args(["verify", "--max-n", "3", "--suite", "all"]).env_remove("ORDERLAB_SEED");
        if let Some(j) = jobs {
            cmd.args(["--jobs", j]);
        }
        let out = cmd.output().map_err(|e| e.to_string())?;
        Ok((out.stdout, out.status.code().unwrap_or(-1)))
    };
    let (first, code) = run(None)?;
    let (second, _) = run(None)?;
    let (one, _) = run(Some("1"))?;
    let (eight, _) = run(Some("8"))?;
    ensure(code == 0 || code == EXIT_FINDINGS, format!("verify exit {code}"))?;
    ensure(!first.is_empty(), "empty report")?;
    ensure(first == second, "two runs differ")?;
    ensure(one == eight, "--jobs 1 and --jobs 8 differ")?;
    ensure(first == one, "default jobs and --jobs 1 differ")?;
    Ok(format!("{} bytes identical across 4 runs, exit {code}", first.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("enumeration sanity", enumeration_sanity),
        ("INT characterization", int_characterization),
        ("partition", || simple_suite(&[SuiteId::Partition])),
        ("sandwich and basic laws", || simple_suite(&[SuiteId::Basic])),
        ("adjoints", || simple_suite(&[SuiteId::Adjoint])),
        ("topology of a relation", mu_topology_invariants),
        ("chain of containments", chain_of_containments),
        ("continuity characterization", continuity),
        ("c-space suite", cspace),
        ("one-step closure and families", one_step_and_families),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}; {ms} ms)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({detail}; {ms} ms)", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
