//! Campaign runner: law suites over `(poset × relation × subset)` scopes,
//! counterexample search, and byte-deterministic run reports.
//!
//! Work items are laid out in scope order before anything runs, evaluated in
//! parallel, and merged back in that order, so the number of worker threads never
//! changes the output.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::approx::{check_adjoints, check_algebra, check_basic_laws, check_int_equivalences, check_partition_scope, SubsetScope};
use crate::auxrel::{enumerate_aux, sample_aux, AuxRelation};
use crate::budget::Budget;
use crate::closure::{check_one_step_theorems, has_one_step_closure};
use crate::error::Error;
use crate::generate::{enumerate_posets, generate, PosetKind};
use crate::io::PosetJson;
use crate::poset::{Poset, RelationMode};
use crate::report::{Report, Witness};
use crate::set::ElementSet;
use crate::topology::{
    check_chain_of_containments_scope, check_continuity_characterization, check_cspace_theorems,
    check_interior_closure_laws, check_mu_inaccessibility, check_mu_topology, check_scott_coincidence, mu_topology,
    opens_completely_distributive, UpsetMode,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteId {
    IntChar,
    Partition,
    Basic,
    Adjoint,
    Algebra,
    Chain,
    Continuity,
    Cspace,
    MuTopology,
    OneStep,
}

impl SuiteId {
    pub const ALL: [SuiteId; 10] = [
        SuiteId::IntChar,
        SuiteId::Partition,
        SuiteId::Basic,
        SuiteId::Adjoint,
        SuiteId::Algebra,
        SuiteId::Chain,
        SuiteId::Continuity,
        SuiteId::Cspace,
        SuiteId::MuTopology,
        SuiteId::OneStep,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteId::IntChar => "int-char",
            SuiteId::Partition => "partition",
            SuiteId::Basic => "basic",
            SuiteId::Adjoint => "adjoint",
            SuiteId::Algebra => "algebra",
            SuiteId::Chain => "chain",
            SuiteId::Continuity => "continuity",
            SuiteId::Cspace => "cspace",
            SuiteId::MuTopology => "mu-topology",
            SuiteId::OneStep => "one-step",
        }
    }

    /// Comma-separated ids, or `all`. Sorted and deduplicated.
    pub fn parse_list(text: &str) -> Result<Vec<SuiteId>, Error> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if part == "all" {
                out.extend(SuiteId::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        if out.is_empty() {
            return Err(Error::Parse("no suite given".into()));
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    fn of_law(law: &str) -> Result<SuiteId, Error> {
        law.split('.').next().unwrap_or_default().parse()
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    /// Also accepts `sec5` for `one-step`.
    fn from_str(s: &str) -> Result<Self, Error> {
        if s == "sec5" {
            return Ok(SuiteId::OneStep);
        }
        SuiteId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Leq,
    WayBelow,
    Bottom,
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "leq" => Ok(Builtin::Leq),
            "way-below" => Ok(Builtin::WayBelow),
            "bottom" => Ok(Builtin::Bottom),
            other => Err(Error::Parse(format!("unknown builtin relation {other:?}"))),
        }
    }
}

impl Builtin {
    pub fn build(&self, p: &Arc<Poset>) -> Result<AuxRelation, Error> {
        match self {
            Builtin::Leq => Ok(AuxRelation::leq(p.clone())),
            Builtin::WayBelow => AuxRelation::way_below(p.clone(), Budget::UNLIMITED),
            Builtin::Bottom => Ok(AuxRelation::bottom(p.clone())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PosetSource {
    /// Every poset with `1..=max_n` elements, labelled or one per isomorphism class.
    Enumerate { max_n: usize, up_to_iso: bool },
    Kinds(Vec<PosetKind>),
    Posets(Vec<Poset>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum RelationSource {
    Enumerate,
    Sample { count: usize, seed: u64 },
    Builtins(Vec<Builtin>),
    /// Pair lists, each validated against every poset in scope.
    Explicit(Vec<Vec<(usize, usize)>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scope {
    pub posets: PosetSource,
    pub relations: RelationSource,
    pub subsets: SubsetScope,
    pub instance_cap: Option<u64>,
    pub time_cap: Option<Duration>,
    pub seed: u64,
    /// Record wall-clock time in the report. Off by default so reports stay
    /// byte-identical across runs.
    pub record_elapsed: bool,
}

impl Scope {
    /// All labelled posets up to `max_n`, all their auxiliary relations, all subsets.
    pub fn exhaustive(max_n: usize) -> Scope {
        Scope {
            posets: PosetSource::Enumerate { max_n, up_to_iso: false },
            relations: RelationSource::Enumerate,
            subsets: SubsetScope::All,
            instance_cap: None,
            time_cap: None,
            seed: 0,
            record_elapsed: false,
        }
    }

    pub fn single(p: Poset, relations: RelationSource) -> Scope {
        Scope {
            posets: PosetSource::Posets(vec![p]),
            relations,
            ..Scope::exhaustive(1)
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.instance_cap == Some(0) {
            return Err(Error::BadParameters("instance cap must be positive".into()));
        }
        if self.time_cap == Some(Duration::ZERO) {
            return Err(Error::BadParameters("time cap must be positive".into()));
        }
        if let RelationSource::Sample { count: 0, .. } = self.relations {
            return Err(Error::BadParameters("sample count must be positive".into()));
        }
        if let SubsetScope::Sampled { count: 0, .. } = self.subsets {
            return Err(Error::BadParameters("subset sample count must be positive".into()));
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        let posets = match &self.posets {
            PosetSource::Enumerate { max_n, up_to_iso } => {
                format!("{} posets n<={max_n}", if *up_to_iso { "unlabelled" } else { "labelled" })
            }
            PosetSource::Kinds(k) => format!("{} generated posets", k.len()),
            PosetSource::Posets(p) => format!("{} given posets", p.len()),
        };
        let relations = match &self.relations {
            RelationSource::Enumerate => "all auxiliary relations".to_string(),
            RelationSource::Sample { count, seed } => format!("{count} sampled relations (seed {seed})"),
            RelationSource::Builtins(b) => format!("builtins {b:?}").to_lowercase(),
            RelationSource::Explicit(r) => format!("{} given relations", r.len()),
        };
        format!("{posets}; {relations}; {}", self.subsets.describe())
    }

    fn resolve_posets(&self) -> Result<Vec<Arc<Poset>>, Error> {
        let list = match &self.posets {
            PosetSource::Enumerate { max_n, up_to_iso } => {
                let mut out = Vec::new();
                for n in 1..=*max_n {
                    out.extend(enumerate_posets(n, *up_to_iso, Budget::UNLIMITED)?);
                }
                out
            }
            PosetSource::Kinds(kinds) => kinds.iter().map(generate).collect::<Result<_, _>>()?,
            PosetSource::Posets(p) => p.clone(),
        };
        Ok(list.into_iter().map(Arc::new).collect())
    }

    fn resolve_relations(&self, index: usize, p: &Arc<Poset>) -> Result<Vec<AuxRelation>, Error> {
        match &self.relations {
            RelationSource::Enumerate => enumerate_aux(p, Budget::UNLIMITED),
            RelationSource::Sample { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                let mut out: Vec<AuxRelation> = Vec::new();
                for _ in 0..*count {
                    let r = sample_aux(p, rng.gen());
                    if !out.contains(&r) {
                        out.push(r);
                    }
                }
                Ok(out)
            }
            RelationSource::Builtins(b) => b.iter().map(|b| b.build(p)).collect(),
            RelationSource::Explicit(lists) => lists.iter().map(|pairs| AuxRelation::validate(p.clone(), pairs)).collect(),
        }
    }
}

fn hex_rows(rows: &[u128]) -> String {
    rows.iter().map(|r| format!("{r:x}")).collect::<Vec<_>>().join("-")
}

fn parse_hex_rows(text: &str) -> Result<Vec<u128>, Error> {
    text.split('-')
        .map(|r| u128::from_str_radix(r, 16).map_err(|_| Error::Parse(format!("bad fingerprint row {r:?}"))))
        .collect()
}

/// `n.poset-rows.relation-rows.subsets`, all hex. Relations are joined with `+`
/// (`none` for poset-level checks) and subsets with `-` (`all` for none).
pub fn fingerprint(p: &Poset, relations: &[&AuxRelation], subsets: &[ElementSet]) -> String {
    let rels = if relations.is_empty() {
        "none".to_string()
    } else {
        relations.iter().map(|r| hex_rows(r.below_rows())).collect::<Vec<_>>().join("+")
    };
    let sets = if subsets.is_empty() {
        "all".to_string()
    } else {
        subsets.iter().map(|s| format!("{:x}", s.bits())).collect::<Vec<_>>().join("-")
    };
    format!("{:x}.{}.{rels}.{sets}", p.len(), hex_rows(p.up_rows()))
}

/// A decoded fingerprint.
#[derive(Debug, Clone)]
pub struct Instance {
    pub poset: Arc<Poset>,
    pub relations: Vec<AuxRelation>,
    pub subsets: Vec<ElementSet>,
}

pub fn parse_fingerprint(text: &str) -> Result<Instance, Error> {
    let parts: Vec<&str> = text.trim().split('.').collect();
    let [n, rows, rels, sets] = parts.as_slice() else {
        return Err(Error::Parse(format!("fingerprint {text:?} does not have four fields")));
    };
    let n = usize::from_str_radix(n, 16).map_err(|_| Error::Parse(format!("bad element count {n:?}")))?;
    if n == 0 || n > crate::poset::MAX_ELEMENTS {
        return Err(Error::Parse(format!("element count {n} out of range")));
    }
    let rows = parse_hex_rows(rows)?;
    if rows.len() != n {
        return Err(Error::Parse(format!("fingerprint has {} rows for {n} elements", rows.len())));
    }
    let mut pairs = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        pairs.extend((0..n).filter(|&j| row >> j & 1 == 1).map(|j| (i, j)));
    }
    let poset = Arc::new(Poset::validate(n, &pairs, RelationMode::FullOrder)?);
    let relations = if *rels == "none" {
        Vec::new()
    } else {
        rels.split('+')
            .map(|r| {
                let below = parse_hex_rows(r)?;
                let pairs: Vec<(usize, usize)> = below
                    .iter()
                    .enumerate()
                    .flat_map(|(j, &b)| (0..n).filter(move |&i| b >> i & 1 == 1).map(move |i| (i, j)))
                    .collect();
                AuxRelation::validate(poset.clone(), &pairs)
            })
            .collect::<Result<_, _>>()?
    };
    let subsets = if *sets == "all" {
        Vec::new()
    } else {
        sets.split('-')
            .map(|s| {
                let bits = u128::from_str_radix(s, 16).map_err(|_| Error::Parse(format!("bad subset {s:?}")))?;
                ElementSet::from_bits(n, bits)
            })
            .collect::<Result<_, _>>()?
    };
    Ok(Instance {
        poset,
        relations,
        subsets,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailureRecord {
    pub law: String,
    pub fingerprint: String,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FindingRecord {
    pub law: String,
    /// Further laws with findings on the same instance.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub also: Vec<String>,
    pub fingerprint: String,
    pub finding: String,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub version: String,
    pub suites: Vec<SuiteId>,
    pub scope: String,
    pub seed: u64,
    pub instances_attempted: u64,
    pub instances_passed: u64,
    pub failures: Vec<FailureRecord>,
    pub findings: Vec<FindingRecord>,
    pub incomplete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub incomplete_reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILURES: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FINDINGS: i32 = 3;

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if !self.failures.is_empty() {
            EXIT_FAILURES
        } else if !self.findings.is_empty() {
            EXIT_FINDINGS
        } else {
            EXIT_PASS
        }
    }

    pub fn to_json(&self) -> String {
        crate::io::to_json(self)
    }
}

/// One unit of work, by index into the resolved scope.
#[derive(Debug, Clone, Copy)]
enum Work {
    Poset { poset: usize, suite: SuiteId },
    Relation { poset: usize, rel: usize, suite: SuiteId },
    Pair { poset: usize, r1: usize, r2: usize },
}

struct Resolved {
    posets: Vec<Arc<Poset>>,
    relations: Vec<Vec<AuxRelation>>,
}

fn applies(suite: SuiteId, r: &AuxRelation) -> bool {
    match suite {
        SuiteId::Chain => r.classify().approximating,
        SuiteId::Cspace | SuiteId::MuTopology => r.classify().pre_approximating,
        _ => true,
    }
}

fn layout(resolved: &Resolved, suites: &[SuiteId]) -> Vec<Work> {
    let mut items = Vec::new();
    for (pi, rels) in resolved.relations.iter().enumerate() {
        for &suite in suites {
            match suite {
                SuiteId::Continuity | SuiteId::OneStep => items.push(Work::Poset { poset: pi, suite }),
                SuiteId::Algebra => {
                    for r1 in 0..rels.len() {
                        for r2 in r1..rels.len() {
                            items.push(Work::Pair { poset: pi, r1, r2 });
                        }
                    }
                }
                _ => {
                    if suite == SuiteId::Chain {
                        items.push(Work::Poset { poset: pi, suite });
                    }
                    for (ri, r) in rels.iter().enumerate() {
                        if applies(suite, r) {
                            items.push(Work::Relation { poset: pi, rel: ri, suite });
                        }
                    }
                }
            }
        }
    }
    items
}

/// Runs one suite on one instance. `relations` holds zero (poset-level), one, or
/// two (algebra) relations.
pub fn run_instance(suite: SuiteId, p: &Arc<Poset>, relations: &[&AuxRelation], subsets: &SubsetScope) -> Result<Report, Error> {
    match (suite, relations) {
        (SuiteId::Continuity, []) => check_continuity_characterization(p, None, Budget::UNLIMITED),
        (SuiteId::OneStep, []) => check_one_step_theorems(p),
        (SuiteId::Chain, []) => check_scott_coincidence(p),
        (SuiteId::Algebra, [r1, r2]) => check_algebra(r1, r2, subsets),
        (SuiteId::IntChar, [r]) => check_int_equivalences(r),
        (SuiteId::Partition, [r]) => Ok(check_partition_scope(r, subsets)),
        (SuiteId::Basic, [r]) => Ok(check_basic_laws(r, subsets)),
        (SuiteId::Adjoint, [r]) => check_adjoints(r),
        (SuiteId::Chain, [r]) => check_chain_of_containments_scope(r, subsets),
        (SuiteId::Cspace, [r]) => check_cspace_theorems(r),
        (SuiteId::MuTopology, [r]) => {
            let mut report = check_mu_topology(r)?;
            report.merge(check_mu_inaccessibility(r)?);
            report.merge(check_interior_closure_laws(&mu_topology(r)?, subsets));
            Ok(report)
        }
        (suite, rels) => Err(Error::BadParameters(format!(
            "suite {suite} does not take {} relation(s)",
            rels.len()
        ))),
    }
}

enum Outcome {
    Skipped,
    Done {
        base: (usize, Vec<(usize, usize)>),
        result: Result<Report, Error>,
    },
}

fn witness_sets(witnesses: &[Witness]) -> Vec<ElementSet> {
    let mut out = Vec::new();
    for w in witnesses {
        match w {
            Witness::Set { set } => out.push(*set),
            Witness::SetPair { a, b } => out.extend([*a, *b]),
            _ => {}
        }
    }
    out
}

pub fn run_suite(scope: &Scope, suites: &[SuiteId]) -> Result<RunReport, Error> {
    run_suite_with_jobs(scope, suites, None)
}

/// Like [`run_suite`] on a pool of `jobs` threads (`None`: available parallelism).
pub fn run_suite_with_jobs(scope: &Scope, suites: &[SuiteId], jobs: Option<usize>) -> Result<RunReport, Error> {
    scope.validate()?;
    let start = Instant::now();
    let mut suites = suites.to_vec();
    suites.sort_unstable();
    suites.dedup();

    let posets = scope.resolve_posets()?;
    let relations = posets
        .iter()
        .enumerate()
        .map(|(i, p)| scope.resolve_relations(i, p))
        .collect::<Result<Vec<_>, _>>()?;
    let resolved = Resolved { posets, relations };
    let mut items = layout(&resolved, &suites);
    let mut incomplete_reason = None;
    if let Some(cap) = scope.instance_cap {
        if items.len() as u64 > cap {
            items.truncate(cap as usize);
            incomplete_reason = Some(format!("instance cap {cap} reached"));
        }
    }

    let run = |work: &Work| -> Outcome {
        if scope.time_cap.is_some_and(|cap| start.elapsed() > cap) {
            return Outcome::Skipped;
        }
        let (pi, suite, rels): (usize, SuiteId, Vec<usize>) = match *work {
            Work::Poset { poset, suite } => (poset, suite, vec![]),
            Work::Relation { poset, rel, suite } => (poset, suite, vec![rel]),
            Work::Pair { poset, r1, r2 } => (poset, SuiteId::Algebra, vec![r1, r2]),
        };
        let p = &resolved.posets[pi];
        let rs: Vec<&AuxRelation> = rels.iter().map(|&k| &resolved.relations[pi][k]).collect();
        Outcome::Done {
            base: (pi, rels.iter().map(|&k| (pi, k)).collect()),
            result: run_instance(suite, p, &rs, &scope.subsets),
        }
    };
    let outcomes: Vec<Outcome> = match jobs {
        Some(1) => items.iter().map(run).collect(),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::BadParameters(format!("thread pool: {e}")))?
            .install(|| items.par_iter().map(run).collect()),
        None => items.par_iter().map(run).collect(),
    };

    let mut report = RunReport {
        schema: SCHEMA_VERSION,
        version: env!("CARGO_PKG_VERSION").to_string(),
        suites: suites.clone(),
        scope: scope.describe(),
        seed: scope.seed,
        instances_attempted: 0,
        instances_passed: 0,
        failures: Vec::new(),
        findings: Vec::new(),
        incomplete: false,
        incomplete_reason: None,
        elapsed_ms: None,
    };
    for outcome in outcomes {
        let Outcome::Done { base: (pi, rels), result } = outcome else {
            incomplete_reason.get_or_insert_with(|| "time cap reached".to_string());
            continue;
        };
        report.instances_attempted += 1;
        let p = &resolved.posets[pi];
        let rs: Vec<&AuxRelation> = rels.iter().map(|&(pi, k)| &resolved.relations[pi][k]).collect();
        match result {
            Ok(r) => {
                if r.passed() {
                    report.instances_passed += 1;
                }
                let mut instance_finding: Option<FindingRecord> = None;
                for v in r.verdicts {
                    let fp = fingerprint(p, &rs, &witness_sets(&v.witnesses));
                    if !v.pass {
                        report.failures.push(FailureRecord {
                            law: v.law,
                            fingerprint: fp,
                            witnesses: v.witnesses,
                        });
                    } else if let Some(finding) = v.finding {
                        match &mut instance_finding {
                            None => {
                                instance_finding = Some(FindingRecord {
                                    law: v.law,
                                    also: Vec::new(),
                                    fingerprint: fp,
                                    finding,
                                    witnesses: v.witnesses,
                                })
                            }
                            Some(record) => {
                                record.also.push(v.law);
                                record.finding = format!("{}; {finding}", record.finding);
                            }
                        }
                    }
                }
                report.findings.extend(instance_finding);
            }
            Err(e) => {
                incomplete_reason.get_or_insert_with(|| format!("{} at {}", e, fingerprint(p, &rs, &[])));
            }
        }
    }
    report.incomplete = incomplete_reason.is_some();
    report.incomplete_reason = incomplete_reason;
    if scope.record_elapsed {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// Re-runs the check behind `law` on the instance named by `fingerprint`, alone,
/// and returns its verdict.
pub fn replay(fingerprint: &str, law: &str) -> Result<crate::report::Verdict, Error> {
    let inst = parse_fingerprint(fingerprint)?;
    let suite = SuiteId::of_law(law)?;
    let subsets = if inst.subsets.is_empty() {
        SubsetScope::All
    } else {
        SubsetScope::Explicit(inst.subsets.clone())
    };
    let rels: Vec<&AuxRelation> = inst.relations.iter().collect();
    let report = run_instance(suite, &inst.poset, &rels, &subsets)?;
    report
        .verdicts
        .into_iter()
        .find(|v| v.law == law)
        .ok_or_else(|| Error::Parse(format!("law {law:?} is not checked on this instance")))
}

/// Whether a property witness contradicts a theorem or records an observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Severity {
    Finding,
    Failure,
}

/// A searchable property: `check` returns witnesses when the instance is a counterexample.
pub trait Property: Send + Sync {
    /// Evaluated once per relation if true, once per poset otherwise.
    fn needs_relation(&self) -> bool;
    fn severity(&self) -> Severity;
    fn check(&self, p: &Arc<Poset>, r: Option<&AuxRelation>) -> Result<Option<Vec<Witness>>, Error>;
}

type CheckFn = dyn Fn(&Arc<Poset>, Option<&AuxRelation>) -> Result<Option<Vec<Witness>>, Error> + Send + Sync;

/// A [`Property`] from a closure.
pub struct FnProperty {
    pub needs_relation: bool,
    pub severity: Severity,
    pub check: Box<CheckFn>,
}

impl Property for FnProperty {
    fn needs_relation(&self) -> bool {
        self.needs_relation
    }

    fn severity(&self) -> Severity {
        self.severity
    }

    fn check(&self, p: &Arc<Poset>, r: Option<&AuxRelation>) -> Result<Option<Vec<Witness>>, Error> {
        (self.check)(p, r)
    }
}

#[derive(Clone, Default)]
pub struct Registry {
    properties: BTreeMap<String, Arc<dyn Property>>,
}

fn relation_note(r: &AuxRelation) -> Witness {
    Witness::note(format!("relation {r}"))
}

impl Registry {
    /// `cspace-implies-approximating`, `cdl-implies-approximating`,
    /// `one-step-without-continuity` and `int-equivalence-break`.
    pub fn builtin() -> Registry {
        let mut reg = Registry::default();
        reg.register_fn("cspace-implies-approximating", true, Severity::Finding, |_, r| {
            let r = r.expect("relation property");
            let class = r.classify();
            if !class.pre_approximating || class.approximating {
                return Ok(None);
            }
            let mu = mu_topology(r)?;
            Ok(mu.is_c_space(UpsetMode::Specialization).holds.then(|| {
                let mut w = vec![relation_note(r), Witness::note(format!("opens {}", serde_json::to_string(mu.opens()).expect("sets serialize")))];
                w.extend(class.approx_witness.map(|x| Witness::Element { x }));
                w
            }))
        });
        reg.register_fn("cdl-implies-approximating", true, Severity::Finding, |_, r| {
            let r = r.expect("relation property");
            let class = r.classify();
            if !class.pre_approximating || !class.has_int || class.approximating {
                return Ok(None);
            }
            let mu = mu_topology(r)?;
            Ok(opens_completely_distributive(&mu)?.then(|| {
                let mut w = vec![relation_note(r)];
                w.extend(class.approx_witness.map(|x| Witness::Element { x }));
                w
            }))
        });
        reg.register_fn("one-step-without-continuity", false, Severity::Finding, |p, _| {
            let continuous = AuxRelation::way_below(p.clone(), Budget::UNLIMITED)?.classify().approximating;
            if continuous {
                return Ok(None);
            }
            Ok(has_one_step_closure(p)?.holds.then(|| vec![Witness::note("one-step closure without continuity")]))
        });
        reg.register_fn("int-equivalence-break", true, Severity::Failure, |_, r| {
            let r = r.expect("relation property");
            let report = check_int_equivalences(r)?;
            let witnesses = report.failures().next().map(|v| v.witnesses.clone());
            Ok(witnesses)
        });
        reg
    }

    pub fn register(&mut self, name: impl Into<String>, property: Arc<dyn Property>) {
        self.properties.insert(name.into(), property);
    }

    pub fn register_fn<F>(&mut self, name: &str, needs_relation: bool, severity: Severity, check: F)
    where
        F: Fn(&Arc<Poset>, Option<&AuxRelation>) -> Result<Option<Vec<Witness>>, Error> + Send + Sync + 'static,
    {
        self.register(
            name,
            Arc::new(FnProperty {
                needs_relation,
                severity,
                check: Box::new(check),
            }),
        );
    }

    pub fn get(&self, name: &str) -> Option<&Arc<dyn Property>> {
        self.properties.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.properties.keys().map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub property: String,
    pub severity: Severity,
    pub fingerprint: String,
    pub poset: PosetJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<Vec<[usize; 2]>>,
    pub witnesses: Vec<Witness>,
}

impl Counterexample {
    pub fn exit_code(&self) -> i32 {
        match self.severity {
            Severity::Finding => EXIT_FINDINGS,
            Severity::Failure => EXIT_FAILURES,
        }
    }
}

/// First counterexample to `property` in scope order, or `None` if the scope is exhausted.
pub fn search_counterexample(property: &str, scope: &Scope, registry: &Registry) -> Result<Option<Counterexample>, Error> {
    scope.validate()?;
    let prop = registry
        .get(property)
        .ok_or_else(|| Error::BadParameters(format!("unknown property {property:?}")))?;
    let start = Instant::now();
    let mut checked: u64 = 0;
    let mut tick = || -> Result<(), Error> {
        checked += 1;
        if let Some(cap) = scope.instance_cap {
            if checked > cap {
                return Err(Error::budget("search instances", cap));
            }
        }
        if let Some(cap) = scope.time_cap {
            if start.elapsed() > cap {
                return Err(Error::budget("search wall time (ms)", cap.as_millis() as u64));
            }
        }
        Ok(())
    };
    let found = |p: &Arc<Poset>, r: Option<&AuxRelation>, witnesses: Vec<Witness>| Counterexample {
        property: property.to_string(),
        severity: prop.severity(),
        fingerprint: fingerprint(p, &r.into_iter().collect::<Vec<_>>(), &[]),
        poset: PosetJson::from(p.as_ref()),
        relation: r.map(|r| r.pairs().into_iter().map(|(i, j)| [i, j]).collect()),
        witnesses,
    };
    for (pi, p) in scope.resolve_posets()?.iter().enumerate() {
        if prop.needs_relation() {
            for r in scope.resolve_relations(pi, p)? {
                tick()?;
                if let Some(w) = prop.check(p, Some(&r))? {
                    return Ok(Some(found(p, Some(&r), w)));
                }
            }
        } else {
            tick()?;
            if let Some(w) = prop.check(p, None)? {
                return Ok(Some(found(p, None, w)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> Poset {
        generate(&PosetKind::Chain(3)).unwrap()
    }

    #[test]
    fn suite_ids_parse() {
        assert_eq!(SuiteId::parse_list("all").unwrap().len(), 10);
        assert_eq!(
            SuiteId::parse_list("partition,int-char,partition").unwrap(),
            vec![SuiteId::IntChar, SuiteId::Partition]
        );
        assert!(SuiteId::parse_list("nope").is_err());
        assert_eq!(SuiteId::of_law("one-step.sandwich").unwrap(), SuiteId::OneStep);
    }

    #[test]
    fn exhaustive_int_char_and_partition() {
        let rep = run_suite(&Scope::exhaustive(3), &[SuiteId::IntChar, SuiteId::Partition]).unwrap();
        assert_eq!(rep.exit_code(), EXIT_PASS, "{:?}", rep.failures);
        assert!(rep.instances_attempted > 0);
        assert_eq!(rep.instances_attempted, rep.instances_passed);
    }

    #[test]
    fn bottom_relation_on_c3_gives_one_finding() {
        let scope = Scope::single(c3(), RelationSource::Builtins(vec![Builtin::Bottom]));
        let rep = run_suite(&scope, &[SuiteId::Cspace]).unwrap();
        assert!(rep.failures.is_empty());
        assert_eq!(rep.findings.len(), 1);
        assert_eq!(rep.findings[0].law, "cspace.cspace-implies-approximating");
        assert_eq!(rep.exit_code(), EXIT_FINDINGS);
        let v = replay(&rep.findings[0].fingerprint, &rep.findings[0].law).unwrap();
        assert!(v.pass && v.finding.is_some());
    }

    #[test]
    fn empty_scope_passes() {
        let scope = Scope {
            posets: PosetSource::Posets(vec![]),
            ..Scope::exhaustive(1)
        };
        let rep = run_suite(&scope, &SuiteId::ALL).unwrap();
        assert_eq!(rep.instances_attempted, 0);
        assert_eq!(rep.exit_code(), EXIT_PASS);
    }

    #[test]
    fn jobs_do_not_change_output() {
        let scope = Scope::exhaustive(3);
        let a = run_suite_with_jobs(&scope, &SuiteId::ALL, Some(1)).unwrap();
        let b = run_suite_with_jobs(&scope, &SuiteId::ALL, Some(4)).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn fingerprint_round_trip() {
        let p = Arc::new(c3());
        let r = AuxRelation::bottom(p.clone());
        let s = ElementSet::from_indices(3, [1, 2]).unwrap();
        let fp = fingerprint(&p, &[&r], &[s]);
        assert_eq!(fp, "3.7-6-4.1-1-1.6");
        let inst = parse_fingerprint(&fp).unwrap();
        assert_eq!(*inst.poset, *p);
        assert_eq!(inst.relations, vec![r]);
        assert_eq!(inst.subsets, vec![s]);
        assert!(parse_fingerprint("3.7-6.none.all").is_err());
        assert!(parse_fingerprint("zz").is_err());
    }

    #[test]
    fn replay_reproduces_a_planted_failure() {
        // A fingerprint whose relation breaks the interpolation equivalence cannot
        // exist, so replay a passing law and check it stays passing.
        let p = Arc::new(c3());
        let r = AuxRelation::validate(p.clone(), &[(0, 0), (0, 1), (0, 2), (1, 2)]).unwrap();
        let fp = fingerprint(&p, &[&r], &[]);
        assert!(replay(&fp, "int-char.equivalence").unwrap().pass);
        assert!(replay(&fp, "no-such.law").is_err());
    }

    #[test]
    fn search_examples() {
        let reg = Registry::builtin();
        assert!(search_counterexample("int-equivalence-break", &Scope::exhaustive(3), &reg)
            .unwrap()
            .is_none());
        let scope = Scope {
            relations: RelationSource::Builtins(vec![]),
            ..Scope::exhaustive(4)
        };
        assert!(search_counterexample("one-step-without-continuity", &scope, &reg).unwrap().is_none());
        let hit = search_counterexample("cspace-implies-approximating", &Scope::exhaustive(3), &reg)
            .unwrap()
            .unwrap();
        assert_eq!(hit.exit_code(), EXIT_FINDINGS);
        assert!(search_counterexample("nope", &Scope::exhaustive(1), &reg).is_err());
    }

    #[test]
    fn user_registered_property() {
        let mut reg = Registry::builtin();
        reg.register_fn("has-three-elements", false, Severity::Finding, |p, _| {
            Ok((p.len() == 3).then(Vec::new))
        });
        let hit = search_counterexample("has-three-elements", &Scope::exhaustive(3), &reg)
            .unwrap()
            .unwrap();
        assert_eq!(hit.poset.n, 3);
        assert!(reg.names().any(|n| n == "has-three-elements"));
    }

    #[test]
    fn caps() {
        let scope = Scope {
            instance_cap: Some(5),
            ..Scope::exhaustive(3)
        };
        let rep = run_suite(&scope, &[SuiteId::Basic]).unwrap();
        assert!(rep.incomplete);
        assert_eq!(rep.instances_attempted, 5);
        assert!(matches!(
            search_counterexample("int-equivalence-break", &scope, &Registry::builtin()),
            Err(Error::BudgetExceeded { .. })
        ));
        let bad = Scope {
            instance_cap: Some(0),
            ..Scope::exhaustive(3)
        };
        assert!(bad.validate().is_err());
    }
}
