//! Finite topologies on posets: the topology `μ≺` of `≺`-open sets, the Scott
//! topology, interior and closure, the specialization order, and c-space checks.

use std::sync::Arc;

use serde::Serialize;

use crate::approx::SubsetScope;
use crate::auxrel::{enumerate_aux, AuxRelation};
use crate::budget::Budget;
use crate::error::Error;
use crate::poset::Poset;
use crate::report::{first_bad, ApproxReport, Report, Verdict, Witness};
use crate::set::ElementSet;

/// Largest open family accepted by [`opens_completely_distributive`].
pub const MAX_DISTRIBUTIVITY_OPENS: usize = 1 << 16;

/// A topology stored as its sorted list of open sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    poset: Arc<Poset>,
    opens: Vec<ElementSet>,
}

/// Which order `↑y` is taken in when testing the c-space condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum UpsetMode {
    #[default]
    Specialization,
    Underlying,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialization {
    /// `up[x]` = every `y` with `x ≤_τ y`.
    pub up: Vec<ElementSet>,
    pub t0: bool,
}

impl Specialization {
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    /// True when `≤_τ` is exactly the order of `p`.
    pub fn matches(&self, p: &Poset) -> bool {
        (0..p.len()).all(|x| self.up[x] == p.up_of(x))
    }
}

/// Outcome of a c-space test: a failing point and open neighbourhood, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CSpace {
    pub holds: bool,
    pub witness: Option<(usize, ElementSet)>,
}

impl Topology {
    /// Builds a topology, rejecting families that are not closed under finite
    /// unions and intersections or miss `∅` or the whole space.
    pub fn new(poset: Arc<Poset>, opens: Vec<ElementSet>) -> Result<Topology, Error> {
        let t = Topology::from_opens(poset, opens);
        match t.invariant_violation() {
            Some(msg) => Err(Error::NotATopology(msg)),
            None => Ok(t),
        }
    }

    fn from_opens(poset: Arc<Poset>, mut opens: Vec<ElementSet>) -> Topology {
        opens.sort_unstable();
        opens.dedup();
        Topology { poset, opens }
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn opens(&self) -> &[ElementSet] {
        &self.opens
    }

    pub fn is_open(&self, s: ElementSet) -> bool {
        self.opens.binary_search(&s).is_ok()
    }

    /// First violated topology axiom, described in words.
    pub fn invariant_violation(&self) -> Option<String> {
        let p = &self.poset;
        if !self.is_open(p.empty_set()) {
            return Some("empty set is not open".into());
        }
        if !self.is_open(p.universe()) {
            return Some("whole space is not open".into());
        }
        for (k, &a) in self.opens.iter().enumerate() {
            for &b in &self.opens[k + 1..] {
                if !self.is_open(a & b) {
                    return Some(format!("intersection of {{{a}}} and {{{b}}} is not open"));
                }
                if !self.is_open(a | b) {
                    return Some(format!("union of {{{a}}} and {{{b}}} is not open"));
                }
            }
        }
        None
    }

    /// Union of the opens inside `a`.
    pub fn interior(&self, a: ElementSet) -> ElementSet {
        self.opens
            .iter()
            .filter(|o| o.is_subset(&a))
            .fold(self.poset.empty_set(), |acc, &o| acc | o)
    }

    /// Complement of the interior of the complement.
    pub fn closure(&self, a: ElementSet) -> ElementSet {
        !self.interior(!a)
    }

    pub fn specialization_order(&self) -> Specialization {
        let n = self.poset.len();
        let up: Vec<ElementSet> = (0..n)
            .map(|x| {
                let mut row = self.poset.universe();
                for o in self.opens.iter().filter(|o| o.contains(x)) {
                    row = row & *o;
                }
                row
            })
            .collect();
        let t0 = (0..n).all(|x| (0..n).all(|y| x == y || !(up[x].contains(y) && up[y].contains(x))));
        Specialization { up, t0 }
    }

    /// For every open `U` and `x ∈ U` there is `y ∈ U` with `x ∈ int(↑y)`.
    pub fn is_c_space(&self, mode: UpsetMode) -> CSpace {
        let up: Vec<ElementSet> = match mode {
            UpsetMode::Specialization => self.specialization_order().up,
            UpsetMode::Underlying => (0..self.poset.len()).map(|y| self.poset.up_of(y)).collect(),
        };
        let interiors: Vec<ElementSet> = up.iter().map(|&u| self.interior(u)).collect();
        for &open in &self.opens {
            for x in open.iter() {
                if !open.iter().any(|y| interiors[y].contains(x)) {
                    return CSpace {
                        holds: false,
                        witness: Some((x, open)),
                    };
                }
            }
        }
        CSpace {
            holds: true,
            witness: None,
        }
    }
}

/// The `≺`-open sets: upper sets `U` with `lap(U) = U`.
pub fn mu_topology(r: &AuxRelation) -> Result<Topology, Error> {
    if let Some(x) = r.classify().pre_witness {
        return Err(Error::NotPreApproximating(x));
    }
    let opens = r
        .poset()
        .upper_sets()?
        .into_iter()
        .filter(|&u| r.lap(u) == u)
        .collect();
    Ok(Topology::from_opens(r.poset().clone(), opens))
}

/// Directed subsets that have a supremum, paired with it.
fn directed_with_sups(p: &Poset, budget: Budget) -> Result<Vec<(ElementSet, usize)>, Error> {
    Ok(p.enumerate_directed_subsets(budget)?
        .into_iter()
        .filter_map(|d| p.supremum(d).map(|s| (d, s)))
        .collect())
}

fn inaccessible(u: ElementSet, directed: &[(ElementSet, usize)]) -> bool {
    directed.iter().all(|&(d, s)| !u.contains(s) || d.intersects(&u))
}

/// Upper, and every directed set whose supremum lies in `u` meets `u`.
pub fn is_scott_open(p: &Poset, u: ElementSet) -> Result<bool, Error> {
    if !p.is_upper(u) {
        return Ok(false);
    }
    Ok(inaccessible(u, &directed_with_sups(p, Budget::UNLIMITED)?))
}

pub fn scott_topology(p: &Arc<Poset>) -> Result<Topology, Error> {
    scott_topology_within(p, Budget::UNLIMITED)
}

pub fn scott_topology_within(p: &Arc<Poset>, budget: Budget) -> Result<Topology, Error> {
    let directed = directed_with_sups(p, budget)?;
    let opens = p
        .enumerate_upper_sets(budget)?
        .into_iter()
        .filter(|&u| inaccessible(u, &directed))
        .collect();
    Ok(Topology::from_opens(p.clone(), opens))
}

/// On a finite lattice complete distributivity is distributivity. Meets and joins
/// are taken in the inclusion order of the open family itself.
pub fn opens_completely_distributive(t: &Topology) -> Result<bool, Error> {
    let opens = t.opens();
    if opens.len() > MAX_DISTRIBUTIVITY_OPENS {
        return Err(Error::budget("opens for the distributivity check", MAX_DISTRIBUTIVITY_OPENS as u64));
    }
    let k = opens.len();
    let index = |s: ElementSet| opens.binary_search(&s).ok();
    let mut join = vec![vec![0usize; k]; k];
    let mut meet = vec![vec![0usize; k]; k];
    for a in 0..k {
        for b in 0..k {
            let lo = opens[a] & opens[b];
            let hi = opens[a] | opens[b];
            let greatest_below = opens
                .iter()
                .copied()
                .filter(|o| o.is_subset(&lo))
                .fold(t.poset().empty_set(), |acc, o| acc | o);
            let least_above = opens
                .iter()
                .copied()
                .filter(|o| hi.is_subset(o))
                .fold(t.poset().universe(), |acc, o| acc & o);
            match (index(greatest_below), index(least_above)) {
                (Some(m), Some(j)) => {
                    meet[a][b] = m;
                    join[a][b] = j;
                }
                _ => return Ok(false),
            }
        }
    }
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `int(int A) = int A`, `cl(cl A) = cl A`, `int(A ∩ B) = int A ∩ int B`, and
/// `X ∖ cl(A) = int(X ∖ A)`.
pub fn check_interior_closure_laws(t: &Topology, scope: &SubsetScope) -> Report {
    let sets = scope.sets(t.poset().len());
    let sd = scope.describe();
    let mut report = Report::new("topology", sd.clone());
    let idem = first_bad(sets.iter().copied(), |a| {
        (t.interior(t.interior(a)) != t.interior(a) || t.closure(t.closure(a)) != t.closure(a)).then(|| Witness::set(a))
    });
    report.push(Verdict::from_witness("mu-topology.interior-closure-idempotent", &sd, idem));
    let meets = sets.iter().find_map(|&a| {
        sets.iter()
            .find(|&&b| t.interior(a & b) != (t.interior(a) & t.interior(b)))
            .map(|&b| vec![Witness::SetPair { a, b }])
    });
    report.push(Verdict::from_witness("mu-topology.interior-of-intersection", format!("pairs of {sd}"), meets));
    let duality = first_bad(sets.iter().copied(), |a| (!t.closure(a) != t.interior(!a)).then(|| Witness::set(a)));
    report.push(Verdict::from_witness("mu-topology.complement-duality", &sd, duality));
    report
}

fn require_pre(r: &AuxRelation) -> Result<(), Error> {
    match r.classify().pre_witness {
        Some(x) => Err(Error::NotPreApproximating(x)),
        None => Ok(()),
    }
}

fn require_approx(r: &AuxRelation) -> Result<(), Error> {
    match r.classify().approx_witness {
        Some(x) => Err(Error::NotApproximating(x)),
        None => Ok(()),
    }
}

/// `μ≺` satisfies the topology axioms; for approximating `≺` it is finer than the
/// Scott topology and its specialization order is the order of the poset.
pub fn check_mu_topology(r: &AuxRelation) -> Result<ApproxReport, Error> {
    let mu = mu_topology(r)?;
    let mut report = Report::new(format!("relation {r}"), "opens of μ");
    report.push(Verdict::from_witness(
        "mu-topology.axioms",
        "opens of μ",
        mu.invariant_violation().map(|m| vec![Witness::note(m)]),
    ));
    if r.classify().approximating {
        let sigma = scott_topology(r.poset())?;
        let coarser = sigma.opens().iter().copied().find(|&o| !mu.is_open(o));
        report.push(Verdict::from_witness(
            "mu-topology.finer-than-scott",
            "Scott opens",
            coarser.map(|o| vec![Witness::set(o)]),
        ));
        let specialization = mu.specialization_order();
        report.push(Verdict::from_witness(
            "mu-topology.specialization-is-order",
            "all elements",
            (0..r.len())
                .find(|&x| specialization.up[x] != r.poset().up_of(x))
                .map(|x| vec![Witness::Element { x }]),
        ));
    }
    Ok(report)
}

/// On a finite poset `μ≪`, the Scott topology and the upper sets coincide, and each
/// `≪`-open set is Scott open.
pub fn check_scott_coincidence(p: &Arc<Poset>) -> Result<ApproxReport, Error> {
    let wb = AuxRelation::way_below(p.clone(), Budget::UNLIMITED)?;
    let mu = mu_topology(&wb)?;
    let sigma = scott_topology(p)?;
    let uppers = p.upper_sets()?;
    let mut report = Report::new("poset", "opens");
    let witness = |a: &[ElementSet], b: &[ElementSet]| {
        a.iter()
            .find(|s| !b.contains(s))
            .or_else(|| b.iter().find(|s| !a.contains(s)))
            .map(|&s| vec![Witness::set(s)])
    };
    report.push(Verdict::from_witness("chain.way-below-topology-is-scott", "opens", witness(mu.opens(), sigma.opens())));
    report.push(Verdict::from_witness("chain.scott-is-upper-sets", "opens", witness(sigma.opens(), &uppers)));
    let not_scott = uppers.iter().copied().find(|&u| wb.lap(u) == u && !sigma.is_open(u));
    report.push(Verdict::from_witness(
        "chain.way-below-open-is-scott-open",
        "upper sets",
        not_scott.map(|u| vec![Witness::set(u)]),
    ));
    Ok(report)
}

/// For approximating `≺`:
/// `int_σ(A) ⊆ int_μ(A) ⊆ lap(A) ⊆ A ⊆ uap(A) ⊆ cl_μ(A) ⊆ cl_σ(A)`, each link a
/// separate verdict, plus the two inner links checked on their own.
pub fn check_chain_of_containments(r: &AuxRelation, a: ElementSet) -> Result<ApproxReport, Error> {
    check_chain_of_containments_scope(r, &SubsetScope::Explicit(vec![a]))
}

pub fn check_chain_of_containments_scope(r: &AuxRelation, scope: &SubsetScope) -> Result<ApproxReport, Error> {
    require_approx(r)?;
    let p = r.poset();
    let mu = mu_topology(r)?;
    let sigma = scott_topology(p)?;
    let sets = scope.sets(p.len());
    let sd = scope.describe();
    let mut report = Report::new(format!("relation {r}"), sd.clone());
    type Link<'a> = (&'static str, Box<dyn Fn(ElementSet) -> (ElementSet, ElementSet) + 'a>);
    let links: Vec<Link> = vec![
        ("chain.scott-interior-in-mu-interior", Box::new(|a| (sigma.interior(a), mu.interior(a)))),
        ("chain.mu-interior-in-lap", Box::new(|a| (mu.interior(a), r.lap(a)))),
        ("chain.lap-in-set", Box::new(|a| (r.lap(a), a))),
        ("chain.set-in-uap", Box::new(|a| (a, r.uap(a)))),
        ("chain.uap-in-mu-closure", Box::new(|a| (r.uap(a), mu.closure(a)))),
        ("chain.mu-closure-in-scott-closure", Box::new(|a| (mu.closure(a), sigma.closure(a)))),
    ];
    for (law, link) in &links {
        let bad = first_bad(sets.iter().copied(), |a| {
            let (lo, hi) = link(a);
            (!lo.is_subset(&hi)).then_some(Witness::SetPair { a, b: lo })
        });
        report.push(Verdict::from_witness(*law, &sd, bad));
    }
    // Same two links, without the approximating hypothesis on the operators.
    let interior_lemma = first_bad(sets.iter().copied(), |a| (!mu.interior(a).is_subset(&r.lap(a))).then(|| Witness::set(a)));
    report.push(Verdict::from_witness("chain.lemma-interior", &sd, interior_lemma));
    let closure_lemma = first_bad(sets.iter().copied(), |a| (!r.uap(a).is_subset(&mu.closure(a))).then(|| Witness::set(a)));
    report.push(Verdict::from_witness("chain.lemma-closure", &sd, closure_lemma));
    Ok(report)
}

/// Whether some approximating relation in `candidates` satisfies `ok`.
fn exists_approximating<'a>(
    candidates: impl IntoIterator<Item = &'a AuxRelation>,
    ok: impl Fn(&AuxRelation) -> bool,
) -> bool {
    candidates
        .into_iter()
        .any(|r| r.classify().approximating && ok(r))
}

/// The five statements characterizing continuity, their agreement, and the
/// Scott-closed-set test `x ∈ cl_σ(A) ⟺ ⇊x ⊆ ↓A`.
///
/// The existential statements try `≪` first and only enumerate `Aux(P)` when it
/// does not already witness them. If `given` is supplied, whether it witnesses
/// them is recorded as a separate fact.
pub fn check_continuity_characterization(
    p: &Arc<Poset>,
    given: Option<&AuxRelation>,
    budget: Budget,
) -> Result<ApproxReport, Error> {
    let wb = AuxRelation::way_below(p.clone(), budget)?;
    let sigma = scott_topology_within(p, budget)?;
    let uppers = p.enumerate_upper_sets(budget)?;
    let lowers = p.enumerate_lower_sets(budget)?;
    let mut report = Report::new("poset", "upper and lower sets");

    let lap_is_interior = |r: &AuxRelation| uppers.iter().all(|&a| r.lap(a) == sigma.interior(a));
    let uap_is_closure = |r: &AuxRelation| lowers.iter().all(|&a| r.uap(a) == sigma.closure(a));

    let continuous = wb.classify().approximating;
    let s2 = lap_is_interior(&wb);
    let s4 = uap_is_closure(&wb);
    let mut pool: Option<Vec<AuxRelation>> = None;
    let mut exists = |test: &dyn Fn(&AuxRelation) -> bool| -> Result<bool, Error> {
        if exists_approximating([&wb], test) {
            return Ok(true);
        }
        if pool.is_none() {
            pool = Some(enumerate_aux(p, budget)?);
        }
        Ok(exists_approximating(pool.as_ref().unwrap(), test))
    };
    let s3 = exists(&lap_is_interior)?;
    let s5 = exists(&uap_is_closure)?;

    let statements = [
        ("continuous", continuous),
        ("lap-way-below-is-scott-interior", s2),
        ("some-lap-is-scott-interior", s3),
        ("uap-way-below-is-scott-closure", s4),
        ("some-uap-is-scott-closure", s5),
    ];
    for (name, value) in statements {
        report.fact(name, value);
    }
    if let Some(r) = given {
        let approx = r.classify().approximating;
        report.fact("given-relation-lap-witness", approx && lap_is_interior(r));
        report.fact("given-relation-uap-witness", approx && uap_is_closure(r));
    }
    let agree = statements.iter().all(|&(_, v)| v == continuous);
    report.push(Verdict::from_witness(
        "continuity.equivalence",
        "five statements",
        (!agree).then(|| {
            vec![Witness::note(
                statements
                    .iter()
                    .map(|(n, v)| format!("{n}={v}"))
                    .collect::<Vec<_>>()
                    .join(" "),
            )]
        }),
    ));

    let subsets = if p.len() <= crate::poset::MAX_SUBSET_SCAN {
        SubsetScope::All.sets(p.len())
    } else {
        return Err(Error::UniverseTooLarge {
            n: p.len(),
            cap: crate::poset::MAX_SUBSET_SCAN,
        });
    };
    let by_way_below = first_bad(subsets, |a| {
        let cl = sigma.closure(a);
        let down = p.down_closure(a);
        (0..p.len())
            .find(|&x| cl.contains(x) != wb.section_below(x).is_subset(&down))
            .map(|x| Witness::SetPair {
                a,
                b: ElementSet::singleton(p.len(), x),
            })
    });
    report.push(Verdict::from_witness("continuity.scott-closure-by-way-below", "all subsets", by_way_below));
    Ok(report)
}

/// c-space theorems for a pre-approximating relation.
///
/// Asserted: interpolation makes `μ≺` a c-space in both up-set modes, with the
/// sets `s≻(x)` open and forming a base; interpolation plus approximation makes the
/// open lattice completely distributive; the poset is continuous exactly when its
/// Scott topology is a c-space.
///
/// Reported as findings when they disagree: c-space implies approximating, and
/// (under interpolation) complete distributivity implies approximating.
pub fn check_cspace_theorems(r: &AuxRelation) -> Result<ApproxReport, Error> {
    require_pre(r)?;
    let p = r.poset();
    let class = r.classify();
    let mu = mu_topology(r)?;
    let specialization = mu.is_c_space(UpsetMode::Specialization);
    let under = mu.is_c_space(UpsetMode::Underlying);
    let mut report = Report::new(format!("relation {r}"), "opens of μ");
    report.fact("int", class.has_int);
    report.fact("approximating", class.approximating);
    report.fact("c-space-specialization", specialization.holds);
    report.fact("c-space-underlying", under.holds);

    let bad = specialization.holds && !class.approximating;
    report.push(
        Verdict::from_witness("cspace.cspace-implies-approximating", "opens of μ", bad.then(|| approx_witnesses(r, &class)))
            .into_finding("μ is a c-space but ≺ is not approximating"),
    );

    let nbhd = |c: CSpace| c.witness.map(|(x, open)| vec![Witness::Neighbourhood { x, open }]);
    if class.has_int {
        report.push(Verdict::from_witness("cspace.int-implies-cspace-specialization", "opens of μ", nbhd(specialization)));
        report.push(Verdict::from_witness("cspace.int-implies-cspace-underlying", "opens of μ", nbhd(under)));

        let not_open = (0..p.len()).find(|&x| !mu.is_open(r.section_above(x)));
        report.push(Verdict::from_witness(
            "cspace.upper-sections-open",
            "all elements",
            not_open.map(|x| vec![Witness::Element { x }]),
        ));
        let not_covered = mu.opens().iter().copied().find(|&u| {
            let union = (0..p.len())
                .map(|x| r.section_above(x))
                .filter(|s| s.is_subset(&u))
                .fold(p.empty_set(), |acc, s| acc | s);
            union != u
        });
        report.push(Verdict::from_witness(
            "cspace.upper-sections-base",
            "opens of μ",
            not_covered.map(|u| vec![Witness::set(u)]),
        ));

        let cd = opens_completely_distributive(&mu)?;
        report.fact("completely-distributive", cd);
        if class.approximating {
            report.push(Verdict::from_witness(
                "cspace.approximating-implies-completely-distributive",
                "opens of μ",
                (!cd).then(|| vec![Witness::note("open lattice is not distributive")]),
            ));
        }
        let bad = cd && !class.approximating;
        report.push(
            Verdict::from_witness(
                "cspace.cdl-implies-approximating",
                "opens of μ",
                bad.then(|| approx_witnesses(r, &class)),
            )
            .into_finding("open lattice is completely distributive and ≺ interpolates, but ≺ is not approximating"),
        );
    }

    let sigma = scott_topology(p)?;
    let continuous = AuxRelation::way_below(p.clone(), Budget::UNLIMITED)?.classify().approximating;
    let scott_cspace = sigma.is_c_space(UpsetMode::Specialization).holds;
    report.push(Verdict::from_witness(
        "cspace.continuous-iff-scott-cspace",
        "poset",
        (continuous != scott_cspace).then(|| {
            vec![Witness::note(format!("continuous={continuous} scott-c-space={scott_cspace}"))]
        }),
    ));
    Ok(report)
}

fn approx_witnesses(r: &AuxRelation, class: &crate::auxrel::AuxClass) -> Vec<Witness> {
    let mut w = vec![Witness::note(format!("relation {r}"))];
    if let Some(x) = class.approx_witness {
        w.push(Witness::Element { x });
    }
    w
}

/// `U ∈ μ≺` implies `U` is upper and meets `s≺(x)` whenever `⋁s≺(x) ∈ U`; for
/// approximating `≺` the converse holds on every upper set.
pub fn check_mu_inaccessibility(r: &AuxRelation) -> Result<ApproxReport, Error> {
    require_pre(r)?;
    let p = r.poset();
    let mu = mu_topology(r)?;
    let sups: Vec<Option<usize>> = (0..p.len()).map(|x| p.supremum(r.section_below(x))).collect();
    let clause = |u: ElementSet| {
        p.is_upper(u)
            && (0..p.len()).all(|x| match sups[x] {
                Some(s) if u.contains(s) => r.section_below(x).intersects(&u),
                _ => true,
            })
    };
    let mut report = Report::new(format!("relation {r}"), "upper sets");
    let forward = mu.opens().iter().copied().find(|&u| !clause(u));
    report.push(Verdict::from_witness(
        "mu-topology.open-is-inaccessible",
        "opens of μ",
        forward.map(|u| vec![Witness::set(u)]),
    ));
    if r.classify().approximating {
        let backward = p.upper_sets()?.into_iter().find(|&u| clause(u) && !mu.is_open(u));
        report.push(Verdict::from_witness(
            "mu-topology.inaccessible-is-open",
            "upper sets",
            backward.map(|u| vec![Witness::set(u)]),
        ));
    }
    Ok(report)
}
