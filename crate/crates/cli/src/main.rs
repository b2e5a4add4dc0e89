use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use orderlab::closure::{has_one_step_closure, is_meet_continuous, one_step};
use orderlab::families::DistinguishedSet;
use orderlab::harness::{
    run_instance, run_suite_with_jobs, search_counterexample, PosetSource, Registry, RelationSource, Scope, SuiteId,
    EXIT_FAILURES, EXIT_FINDINGS, EXIT_PASS, EXIT_USAGE,
};
use orderlab::io::{export_dot, export_family_dot, pairs_to_json, poset_to_json, PosetJson};
use orderlab::{
    enumerate_aux, enumerate_posets, generate, mu_topology, scott_topology, AuxRelation, Budget, ElementSet, Family,
    Poset, PosetKind, Report, SubsetScope, Topology, UpsetMode,
};

mod input;

#[derive(Parser)]
#[command(name = "orderlab", version, about = "Approximation operators and topologies on finite posets")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    output: Option<Format>,

    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[arg(long, global = true, env = "ORDERLAB_SEED", default_value_t = 0)]
    seed: u64,

    /// Print wall time on stderr; `verify` also records it as `elapsed_ms`.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Build, validate and draw posets.
    #[command(subcommand)]
    Poset(PosetCmd),
    /// Auxiliary relations.
    #[command(subcommand)]
    Aux(AuxCmd),
    /// Lower and upper approximations.
    #[command(subcommand)]
    Approx(ApproxCmd),
    /// Scott and μ topologies, interiors and closures.
    #[command(subcommand)]
    Topology(TopologyCmd),
    /// One-step closure and meet continuity.
    #[command(subcommand)]
    Closure(ClosureCmd),
    /// Symbolic infinite posets.
    Family(FamilyArgs),
    /// Run suites on one poset and its given relations.
    Check(CheckArgs),
    /// Find the first counterexample to a property.
    Search(SearchArgs),
    /// Run suites over every poset up to a size.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct PosetArg {
    /// Poset JSON file.
    #[arg(long)]
    poset: PathBuf,
}

#[derive(Args)]
struct RelArg {
    /// `builtin:leq`, `builtin:way-below`, `builtin:bottom`, `file:PATH` or PATH.
    #[arg(long)]
    rel: String,
}

#[derive(Subcommand)]
enum PosetCmd {
    /// Check a poset file.
    Validate(PosetArg),
    /// Generate a poset of a given shape.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Element count; the rank for `boolean`.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Edge probability for `random`.
        #[arg(long, default_value_t = 0.3)]
        p: f64,
    },
    /// Every poset on n elements.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        up_to_iso: bool,
    },
    /// Hasse diagram in DOT.
    Hasse {
        #[command(flatten)]
        poset: PosetArg,
        /// Fill these elements.
        #[arg(long)]
        shade: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Chain,
    Antichain,
    Diamond,
    Boolean,
    Random,
}

#[derive(Subcommand)]
enum AuxCmd {
    /// Check the auxiliary-relation axioms.
    Validate {
        #[command(flatten)]
        poset: PosetArg,
        #[command(flatten)]
        rel: RelArg,
    },
    /// Smallest auxiliary relation containing the pairs in FILE.
    Close {
        #[command(flatten)]
        poset: PosetArg,
        #[arg(long, value_name = "FILE")]
        from: PathBuf,
    },
    /// Approximating, interpolating and related classes.
    Classify {
        #[command(flatten)]
        poset: PosetArg,
        #[command(flatten)]
        rel: RelArg,
    },
    /// The way-below relation.
    WayBelow(PosetArg),
    /// Every auxiliary relation on the poset.
    Enumerate(PosetArg),
}

#[derive(Args)]
struct SetArgs {
    #[command(flatten)]
    poset: PosetArg,
    #[command(flatten)]
    rel: RelArg,
    /// Comma-separated element indices.
    #[arg(long, allow_hyphen_values = true)]
    set: String,
}

#[derive(Subcommand)]
enum ApproxCmd {
    /// Lower approximation of a set.
    Lap(SetArgs),
    /// Upper approximation of a set.
    Uap(SetArgs),
    /// Lower adjoint of `uap` on a lower set, or upper adjoint of `lap` on an upper set.
    Adjoint {
        #[command(flatten)]
        args: SetArgs,
        #[arg(long, value_enum)]
        of: Operator,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Operator {
    Uap,
    Lap,
}

#[derive(Args)]
struct TopologyArgs {
    #[command(flatten)]
    poset: PosetArg,
    /// Use the topology of this relation instead of the Scott topology.
    #[arg(long)]
    rel: Option<String>,
}

#[derive(Subcommand)]
enum TopologyCmd {
    /// Opens of the μ topology of a relation.
    Mu {
        #[command(flatten)]
        poset: PosetArg,
        #[command(flatten)]
        rel: RelArg,
        /// Same as `--output dot`.
        #[arg(long)]
        dot: bool,
    },
    /// Scott opens.
    Scott {
        #[command(flatten)]
        poset: PosetArg,
        #[arg(long)]
        dot: bool,
    },
    /// Largest open inside a set.
    Interior {
        #[command(flatten)]
        topology: TopologyArgs,
        #[arg(long)]
        set: String,
    },
    /// Smallest closed set containing a set.
    Closure {
        #[command(flatten)]
        topology: TopologyArgs,
        #[arg(long)]
        set: String,
    },
    /// Whether the topology is a c-space.
    Cspace {
        #[command(flatten)]
        topology: TopologyArgs,
        #[arg(long, value_enum, default_value_t = Upset::Specialization)]
        upset: Upset,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Upset {
    Specialization,
    Underlying,
}

#[derive(Subcommand)]
enum ClosureCmd {
    /// Compare the Scott closure with the one-step closure.
    OneStep {
        #[command(flatten)]
        poset: PosetArg,
        #[arg(long)]
        set: Option<String>,
    },
    /// Whether the poset is meet-continuous.
    MeetContinuous(PosetArg),
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(value_enum)]
    family: FamilyName,
    #[command(subcommand)]
    action: FamilyCmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Ladder,
    Omega,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Whether X ≤ Y.
    Order { x: String, y: String },
    /// Whether X is in a distinguished set: A, downA, Aprime or scott_closure_A.
    Member {
        #[arg(long)]
        set: String,
        x: String,
    },
    /// Whether X is way below Y.
    Wb { x: String, y: String },
    /// The finite window up to indices M and N, as a poset.
    Window {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
    },
    /// Check a finite window against the family's structure.
    Verify {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        /// Verify every window up to (M, N).
        #[arg(long)]
        sweep: bool,
    },
}

#[derive(Args)]
struct CheckArgs {
    /// Comma-separated suite ids, or `all`.
    #[arg(long)]
    suite: String,
    #[command(flatten)]
    poset: PosetArg,
    /// Relation to check; give two for `algebra`.
    #[arg(long)]
    rel: Vec<String>,
    /// Restrict subset-ranging laws to these sets.
    #[arg(long)]
    set: Vec<String>,
}

#[derive(Args)]
struct ScopeArgs {
    #[arg(long, default_value_t = 3)]
    max_n: usize,
    /// One poset per isomorphism class instead of every labelling.
    #[arg(long)]
    up_to_iso: bool,
    /// Sample this many relations per poset instead of enumerating them.
    #[arg(long)]
    sample_relations: Option<usize>,
    #[arg(long)]
    instance_cap: Option<u64>,
    #[arg(long)]
    time_cap_ms: Option<u64>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, required_unless_present = "list")]
    property: Option<String>,
    /// List the registered properties.
    #[arg(long)]
    list: bool,
    #[command(flatten)]
    scope: ScopeArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[command(flatten)]
    scope: ScopeArgs,
    /// Sample this many subsets per instance instead of all of them.
    #[arg(long)]
    sample_subsets: Option<usize>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
}

struct Output {
    format: Option<Format>,
    out: Option<PathBuf>,
    command: &'static str,
}

impl Output {
    fn format(&self, default: Format, allowed: &[Format]) -> Result<Format> {
        let f = self.format.unwrap_or(default);
        if !allowed.contains(&f) {
            let name = f.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
            bail!("--output {name}: not supported by `{}`", self.command);
        }
        Ok(f)
    }

    fn emit(&self, text: &str) -> Result<()> {
        let mut text = text.to_string();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("--out {}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn compact<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("value serializes")
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    orderlab::io::to_json(value)
}

fn emit_set(out: &Output, s: ElementSet) -> Result<()> {
    match out.format(Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => out.emit(&compact(&s)),
        _ => out.emit(&s.to_string()),
    }
}

fn emit_bool(out: &Output, b: bool) -> Result<()> {
    out.format(Format::Text, &[Format::Text, Format::Json])?;
    out.emit(if b { "true" } else { "false" })
}

fn emit_opens(out: &Output, name: &str, t: &Topology, dot: bool) -> Result<()> {
    let default = if dot { Format::Dot } else { Format::Json };
    match out.format(default, &[Format::Json, Format::Text, Format::Dot])? {
        Format::Dot => out.emit(&export_family_dot(name, t.opens())),
        Format::Text => out.emit(&t.opens().iter().map(|s| format!("{{{s}}}")).collect::<Vec<_>>().join("\n")),
        Format::Json => out.emit(&compact(&t.opens())),
    }
}

fn emit_report(out: &Output, report: &Report) -> Result<i32> {
    match out.format(Format::Json, &[Format::Json, Format::Text])? {
        Format::Text => {
            let mut lines = Vec::new();
            for f in &report.facts {
                lines.push(format!("fact {} = {}", f.name, f.value));
            }
            for v in &report.verdicts {
                let status = match (v.pass, &v.finding) {
                    (false, _) => "FAIL".to_string(),
                    (true, Some(f)) => format!("FINDING ({f})"),
                    (true, None) => "ok".to_string(),
                };
                lines.push(format!("{} {status}", v.law));
            }
            out.emit(&lines.join("\n"))?;
        }
        _ => out.emit(&pretty(report))?,
    }
    Ok(report_code(report))
}

fn report_code(report: &Report) -> i32 {
    if !report.passed() {
        EXIT_FAILURES
    } else if report.findings().next().is_some() {
        EXIT_FINDINGS
    } else {
        EXIT_PASS
    }
}

fn topology_for(args: &TopologyArgs) -> Result<(Arc<Poset>, Topology)> {
    let p = input::poset(&args.poset.poset)?;
    let t = match &args.rel {
        Some(arg) => mu_topology(&input::relation(&p, arg)?).with_context(|| format!("--rel {arg}"))?,
        None => scott_topology(&p).with_context(|| args.poset.poset.display().to_string())?,
    };
    Ok((p, t))
}

fn poset_cmd(cmd: PosetCmd, out: &Output, seed: u64) -> Result<i32> {
    match cmd {
        PosetCmd::Validate(a) => {
            let p = input::poset(&a.poset)?;
            match out.format(Format::Text, &[Format::Text, Format::Json])? {
                Format::Json => out.emit(&compact(&json!({"valid": true, "n": p.len(), "covers": p.covers()})))?,
                _ => out.emit(&format!("valid: {} elements, {} covers", p.len(), p.covers().len()))?,
            }
        }
        PosetCmd::Gen { kind, n, p: edge_prob } => {
            let kind = match kind {
                Kind::Chain => PosetKind::Chain(n),
                Kind::Antichain => PosetKind::Antichain(n),
                Kind::Diamond => PosetKind::Diamond,
                Kind::Boolean => PosetKind::Boolean(u32::try_from(n).context("--n")?),
                Kind::Random => PosetKind::Random { seed, n, edge_prob },
            };
            let p = generate(&kind).context("--kind/--n")?;
            match out.format(Format::Json, &[Format::Json, Format::Dot])? {
                Format::Dot => out.emit(&export_dot(&p, None))?,
                _ => out.emit(&poset_to_json(&p))?,
            }
        }
        PosetCmd::Enumerate { n, up_to_iso } => {
            let all = enumerate_posets(n, up_to_iso, Budget::UNLIMITED).context("--n")?;
            match out.format(Format::Json, &[Format::Json, Format::Text])? {
                Format::Text => out.emit(&all.len().to_string())?,
                _ => {
                    let docs: Vec<PosetJson> = all.iter().map(PosetJson::from).collect();
                    let lines: Vec<String> = docs.iter().map(compact).collect();
                    out.emit(&format!("[\n{}\n]", lines.join(",\n")))?
                }
            }
        }
        PosetCmd::Hasse { poset, shade } => {
            let p = input::poset(&poset.poset)?;
            let shade = shade.map(|s| input::set(&p, &s, "--shade")).transpose()?;
            match out.format(Format::Dot, &[Format::Dot, Format::Json])? {
                Format::Json => out.emit(&compact(&p.covers()))?,
                _ => out.emit(&export_dot(&p, shade))?,
            }
        }
    }
    Ok(EXIT_PASS)
}

fn aux_cmd(cmd: AuxCmd, out: &Output) -> Result<i32> {
    let emit_pairs = |r: &AuxRelation| -> Result<()> {
        out.format(Format::Json, &[Format::Json])?;
        out.emit(&pairs_to_json(&r.pairs()))
    };
    match cmd {
        AuxCmd::Validate { poset, rel } => {
            let p = input::poset(&poset.poset)?;
            let r = input::relation(&p, &rel.rel)?;
            match out.format(Format::Text, &[Format::Text, Format::Json])? {
                Format::Json => out.emit(&compact(&json!({"valid": true, "pairs": r.pairs()})))?,
                _ => out.emit(&format!("valid: {} pairs", r.pairs().len()))?,
            }
        }
        AuxCmd::Close { poset, from } => {
            let p = input::poset(&poset.poset)?;
            let seed = input::pairs(&from)?;
            let r = AuxRelation::closure(p, &seed).with_context(|| from.display().to_string())?;
            emit_pairs(&r)?;
        }
        AuxCmd::Classify { poset, rel } => {
            let p = input::poset(&poset.poset)?;
            let class = input::relation(&p, &rel.rel)?.classify();
            out.format(Format::Json, &[Format::Json])?;
            out.emit(&pretty(&class))?;
        }
        AuxCmd::WayBelow(a) => {
            let p = input::poset(&a.poset)?;
            let wb = AuxRelation::way_below(p, Budget::UNLIMITED).with_context(|| a.poset.display().to_string())?;
            emit_pairs(&wb)?;
        }
        AuxCmd::Enumerate(a) => {
            let p = input::poset(&a.poset)?;
            let all = enumerate_aux(&p, Budget::UNLIMITED).with_context(|| a.poset.display().to_string())?;
            match out.format(Format::Json, &[Format::Json, Format::Text])? {
                Format::Text => out.emit(&all.len().to_string())?,
                _ => {
                    let lines: Vec<String> = all.iter().map(|r| compact(&r.pairs())).collect();
                    out.emit(&format!("[\n{}\n]", lines.join(",\n")))?
                }
            }
        }
    }
    Ok(EXIT_PASS)
}

fn approx_cmd(cmd: ApproxCmd, out: &Output) -> Result<i32> {
    let load = |a: &SetArgs| -> Result<(AuxRelation, ElementSet)> {
        let p = input::poset(&a.poset.poset)?;
        let r = input::relation(&p, &a.rel.rel)?;
        let s = input::set(&p, &a.set, "--set")?;
        Ok((r, s))
    };
    let result = match cmd {
        ApproxCmd::Lap(a) => {
            let (r, s) = load(&a)?;
            r.lap(s)
        }
        ApproxCmd::Uap(a) => {
            let (r, s) = load(&a)?;
            r.uap(s)
        }
        ApproxCmd::Adjoint { args, of } => {
            let (r, s) = load(&args)?;
            match of {
                Operator::Uap => r.uap_lower_adjoint(s),
                Operator::Lap => r.lap_upper_adjoint(s),
            }
            .with_context(|| format!("--set {:?}", args.set))?
        }
    };
    emit_set(out, result)?;
    Ok(EXIT_PASS)
}

fn topology_cmd(cmd: TopologyCmd, out: &Output) -> Result<i32> {
    match cmd {
        TopologyCmd::Mu { poset, rel, dot } => {
            let p = input::poset(&poset.poset)?;
            let r = input::relation(&p, &rel.rel)?;
            let mu = mu_topology(&r).with_context(|| format!("--rel {}", rel.rel))?;
            emit_opens(out, "mu", &mu, dot)?;
        }
        TopologyCmd::Scott { poset, dot } => {
            let p = input::poset(&poset.poset)?;
            let sigma = scott_topology(&p).with_context(|| poset.poset.display().to_string())?;
            emit_opens(out, "scott", &sigma, dot)?;
        }
        TopologyCmd::Interior { topology, set } => {
            let (p, t) = topology_for(&topology)?;
            emit_set(out, t.interior(input::set(&p, &set, "--set")?))?;
        }
        TopologyCmd::Closure { topology, set } => {
            let (p, t) = topology_for(&topology)?;
            emit_set(out, t.closure(input::set(&p, &set, "--set")?))?;
        }
        TopologyCmd::Cspace { topology, upset } => {
            let (_, t) = topology_for(&topology)?;
            let mode = match upset {
                Upset::Specialization => UpsetMode::Specialization,
                Upset::Underlying => UpsetMode::Underlying,
            };
            let c = t.is_c_space(mode);
            match out.format(Format::Json, &[Format::Json, Format::Text])? {
                Format::Text => out.emit(if c.holds { "true" } else { "false" })?,
                _ => {
                    let witness = c.witness.map(|(x, open)| json!({"x": x, "open": open}));
                    out.emit(&compact(&json!({"holds": c.holds, "witness": witness})))?
                }
            }
        }
    }
    Ok(EXIT_PASS)
}

fn closure_cmd(cmd: ClosureCmd, out: &Output) -> Result<i32> {
    match cmd {
        ClosureCmd::OneStep { poset, set } => {
            let p = input::poset(&poset.poset)?;
            match set {
                Some(s) => {
                    let a = input::set(&p, &s, "--set")?;
                    emit_set(out, one_step(&p, a).with_context(|| poset.poset.display().to_string())?)?;
                }
                None => {
                    let r = has_one_step_closure(&p).with_context(|| poset.poset.display().to_string())?;
                    match out.format(Format::Text, &[Format::Text, Format::Json])? {
                        Format::Json => out.emit(&compact(&json!({
                            "holds": r.holds,
                            "witness": r.witness,
                            "scott_closed_form": r.scott_closed_form,
                            "scott_closed_witness": r.scott_closed_witness,
                        })))?,
                        _ => out.emit(if r.holds { "true" } else { "false" })?,
                    }
                }
            }
        }
        ClosureCmd::MeetContinuous(a) => {
            let p = input::poset(&a.poset)?;
            let (holds, witness) = is_meet_continuous(&p).with_context(|| a.poset.display().to_string())?;
            match out.format(Format::Text, &[Format::Text, Format::Json])? {
                Format::Json => {
                    let witness = witness.map(|(d, x)| json!({"directed": d, "x": x}));
                    out.emit(&compact(&json!({"holds": holds, "witness": witness})))?
                }
                _ => out.emit(if holds { "true" } else { "false" })?,
            }
        }
    }
    Ok(EXIT_PASS)
}

fn family_cmd(args: FamilyArgs, out: &Output) -> Result<i32> {
    let family = match args.family {
        FamilyName::Ladder => Family::Ladder,
        FamilyName::Omega => Family::Omega,
    };
    match args.action {
        FamilyCmd::Order { x, y } => {
            let (x, y) = (input::term(family, &x)?, input::term(family, &y)?);
            emit_bool(out, family.order(x, y)?)?;
        }
        FamilyCmd::Member { set, x } => {
            let which: DistinguishedSet = set.parse().context("--set")?;
            emit_bool(out, family.membership(which, input::term(family, &x)?)?)?;
        }
        FamilyCmd::Wb { x, y } => {
            let (x, y) = (input::term(family, &x)?, input::term(family, &y)?);
            emit_bool(out, family.way_below(x, y)?)?;
        }
        FamilyCmd::Window { m, n } => {
            let w = family.window(m, n).context("--m/--n")?;
            match out.format(Format::Json, &[Format::Json, Format::Dot])? {
                Format::Dot => out.emit(&export_dot(&w.poset, None))?,
                _ => out.emit(&poset_to_json(&w.poset))?,
            }
        }
        FamilyCmd::Verify { m, n, sweep } => {
            if !sweep {
                let report = family.verify_window_soundness(m, n).context("--m/--n")?;
                return emit_report(out, &report);
            }
            let mut merged = Report::new(format!("{family} windows up to ({m}, {n})"), "every window");
            for i in 0..=m {
                for j in 0..=n {
                    let mut r = family.verify_window_soundness(i, j).context("--m/--n")?;
                    for v in &mut r.verdicts {
                        v.scope = format!("window ({i}, {j}): {}", v.scope);
                    }
                    merged.merge(r);
                }
            }
            return emit_report(out, &merged);
        }
    }
    Ok(EXIT_PASS)
}

fn check_cmd(args: CheckArgs, out: &Output) -> Result<i32> {
    let suites = SuiteId::parse_list(&args.suite).context("--suite")?;
    let p = input::poset(&args.poset.poset)?;
    let rels: Vec<AuxRelation> = args.rel.iter().map(|s| input::relation(&p, s)).collect::<Result<_>>()?;
    let subsets = if args.set.is_empty() {
        SubsetScope::All
    } else {
        SubsetScope::Explicit(args.set.iter().map(|s| input::set(&p, s, "--set")).collect::<Result<_>>()?)
    };
    let explicit = suites.len() == 1;
    let mut report = Report::new(args.poset.poset.display().to_string(), subsets.describe());
    for suite in suites {
        let runs: Vec<Vec<&AuxRelation>> = match suite {
            SuiteId::Continuity | SuiteId::OneStep => vec![vec![]],
            SuiteId::Algebra => match rels.as_slice() {
                [r1, r2] => vec![vec![r1, r2]],
                _ if explicit => bail!("--rel: suite algebra needs exactly two relations"),
                _ => vec![],
            },
            SuiteId::Chain if rels.is_empty() => vec![vec![]],
            _ => {
                if rels.is_empty() && explicit {
                    bail!("--rel: suite {suite} needs a relation");
                }
                rels.iter().map(|r| vec![r]).collect()
            }
        };
        for run in runs {
            let applies = match (suite, run.as_slice()) {
                (SuiteId::Chain, [r]) => r.classify().approximating,
                (SuiteId::Cspace | SuiteId::MuTopology, [r]) => r.classify().pre_approximating,
                _ => true,
            };
            if !applies {
                if explicit {
                    let why = if suite == SuiteId::Chain { "approximating" } else { "pre-approximating" };
                    bail!("--rel: suite {suite} needs a {why} relation");
                }
                report.fact(format!("{suite}.applies"), false);
                continue;
            }
            let r = run_instance(suite, &p, &run, &subsets).with_context(|| format!("suite {suite}"))?;
            report.merge(r);
        }
    }
    emit_report(out, &report)
}

fn scope_from(args: &ScopeArgs, seed: u64) -> Scope {
    let mut scope = Scope::exhaustive(args.max_n);
    scope.posets = PosetSource::Enumerate {
        max_n: args.max_n,
        up_to_iso: args.up_to_iso,
    };
    if let Some(count) = args.sample_relations {
        scope.relations = RelationSource::Sample { count, seed };
    }
    scope.instance_cap = args.instance_cap;
    scope.time_cap = args.time_cap_ms.map(Duration::from_millis);
    scope.seed = seed;
    scope
}

fn search_cmd(args: SearchArgs, out: &Output, seed: u64) -> Result<i32> {
    let registry = Registry::builtin();
    if args.list {
        out.emit(&registry.names().collect::<Vec<_>>().join("\n"))?;
        return Ok(EXIT_PASS);
    }
    let property = args.property.as_deref().unwrap_or_default();
    if registry.get(property).is_none() {
        bail!("--property {property}: unknown property");
    }
    let scope = scope_from(&args.scope, seed);
    let found = search_counterexample(property, &scope, &registry).context("search")?;
    out.format(Format::Json, &[Format::Json])?;
    out.emit(&pretty(&found))?;
    Ok(found.map_or(EXIT_PASS, |c| c.exit_code()))
}

fn verify_cmd(args: VerifyArgs, out: &Output, seed: u64, timing: bool) -> Result<i32> {
    let suites = SuiteId::parse_list(&args.suite).context("--suite")?;
    if args.jobs == Some(0) {
        bail!("--jobs: must be positive");
    }
    let mut scope = scope_from(&args.scope, seed);
    if let Some(count) = args.sample_subsets {
        scope.subsets = SubsetScope::Sampled { count, seed };
    }
    scope.record_elapsed = timing;
    let report = run_suite_with_jobs(&scope, &suites, args.jobs).context("verify")?;
    match out.format(Format::Json, &[Format::Json, Format::Text])? {
        Format::Text => out.emit(&format!(
            "{} instances, {} passed, {} failures, {} findings{}",
            report.instances_attempted,
            report.instances_passed,
            report.failures.len(),
            report.findings.len(),
            if report.incomplete { " (incomplete)" } else { "" }
        ))?,
        _ => out.emit(&report.to_json())?,
    }
    Ok(report.exit_code())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Poset(_) => "poset",
        Command::Aux(_) => "aux",
        Command::Approx(_) => "approx",
        Command::Topology(_) => "topology",
        Command::Closure(_) => "closure",
        Command::Family(_) => "family",
        Command::Check(_) => "check",
        Command::Search(_) => "search",
        Command::Verify(_) => "verify",
    }
}

fn run(cli: Cli) -> Result<i32> {
    let out = Output {
        format: cli.output,
        out: cli.out,
        command: command_name(&cli.command),
    };
    let seed = cli.seed;
    match cli.command {
        Command::Poset(c) => poset_cmd(c, &out, seed),
        Command::Aux(c) => aux_cmd(c, &out),
        Command::Approx(c) => approx_cmd(c, &out),
        Command::Topology(c) => topology_cmd(c, &out),
        Command::Closure(c) => closure_cmd(c, &out),
        Command::Family(a) => family_cmd(a, &out),
        Command::Check(a) => check_cmd(a, &out),
        Command::Search(a) => search_cmd(a, &out, seed),
        Command::Verify(a) => verify_cmd(a, &out, seed, cli.timing),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let line: Vec<&str> = rendered
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("orderlab: {}", line.join(" ").trim_start_matches("error: "));
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let timing = cli.timing;
    let start = Instant::now();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("orderlab: {}", format!("{e:#}").replace('\n', " "));
            EXIT_USAGE
        }
    };
    if timing {
        eprintln!("elapsed: {} ms", start.elapsed().as_millis());
    }
    ExitCode::from(code as u8)
}
