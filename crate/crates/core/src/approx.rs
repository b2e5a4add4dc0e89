//! Lower and upper approximations induced by an auxiliary relation.
//!
//! For `≺ ∈ Aux(P)` and `A ⊆ P`:
//!
//! * `lap(A) = {x ∈ A : s≺(x) ∩ A ≠ ∅}` (the lower approximation `A^{↓≺}`),
//! * `uap(A) = {x : s≺(x) ⊆ ↓A}` (the upper approximation `A^{↑≺}`).
//!
//! The checkers in this module evaluate the laws these operators obey over a
//! whole scope of subsets and return a [`Report`]. Every failing verdict carries
//! the first offending subset in ascending bit order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::auxrel::AuxRelation;
use crate::error::Error;
use crate::report::{first_bad, ApproxReport, Report, Verdict, Witness};
use crate::set::{full_mask, ElementSet};

impl AuxRelation {
    /// Lower approximation `{x ∈ A : s≺(x) ∩ A ≠ ∅}`.
    pub fn lap(&self, a: ElementSet) -> ElementSet {
        let bits = a
            .iter()
            .filter(|&x| self.section_below(x).intersects(&a))
            .fold(0u128, |acc, x| acc | 1u128 << x);
        ElementSet::raw(self.len(), bits)
    }

    /// Upper approximation `{x : s≺(x) ⊆ ↓A}`.
    pub fn uap(&self, a: ElementSet) -> ElementSet {
        let down = self.poset().down_closure(a);
        let bits = (0..self.len())
            .filter(|&x| self.section_below(x).is_subset(&down))
            .fold(0u128, |acc, x| acc | 1u128 << x);
        ElementSet::raw(self.len(), bits)
    }

    /// `{x : ∃y ∈ A. y ≺ x}`. Equals [`lap`](Self::lap) on upper sets; may exceed `A` otherwise.
    pub fn lap_exists(&self, a: ElementSet) -> ElementSet {
        let bits = (0..self.len())
            .filter(|&x| self.section_below(x).intersects(&a))
            .fold(0u128, |acc, x| acc | 1u128 << x);
        ElementSet::raw(self.len(), bits)
    }

    /// Lower adjoint of `uap` on the lattice of lower sets:
    /// `g(B) = ⋂{A lower : B ⊆ uap(A)}`.
    pub fn uap_lower_adjoint(&self, b: ElementSet) -> Result<ElementSet, Error> {
        let p = self.poset();
        if !p.is_lower(b) {
            return Err(Error::NotLower(b));
        }
        let mut meet = p.universe();
        for a in p.lower_sets()? {
            if b.is_subset(&self.uap(a)) {
                meet = meet & a;
            }
        }
        Ok(meet)
    }

    /// Upper adjoint of `lap` on the lattice of upper sets:
    /// `h(B) = ⋃{A upper : lap(A) ⊆ B}`.
    pub fn lap_upper_adjoint(&self, b: ElementSet) -> Result<ElementSet, Error> {
        let p = self.poset();
        if !p.is_upper(b) {
            return Err(Error::NotUpper(b));
        }
        let mut join = p.empty_set();
        for a in p.upper_sets()? {
            if self.lap(a).is_subset(&b) {
                join = join | a;
            }
        }
        Ok(join)
    }
}

/// Which subsets `A` a checker quantifies over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsetScope {
    All,
    Sampled { count: usize, seed: u64 },
    Explicit(Vec<ElementSet>),
}

impl SubsetScope {
    /// The subsets, ascending and deduplicated.
    pub fn sets(&self, n: usize) -> Vec<ElementSet> {
        let mut out: Vec<ElementSet> = match self {
            SubsetScope::All => ElementSet::full(n).subsets().collect(),
            SubsetScope::Sampled { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..*count)
                    .map(|_| ElementSet::raw(n, rng.gen::<u128>() & full_mask(n)))
                    .collect()
            }
            SubsetScope::Explicit(sets) => sets.clone(),
        };
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn describe(&self) -> String {
        match self {
            SubsetScope::All => "all subsets".to_string(),
            SubsetScope::Sampled { count, seed } => format!("{count} sampled subsets (seed {seed})"),
            SubsetScope::Explicit(sets) => format!("{} given subsets", sets.len()),
        }
    }
}

/// Partition law for one subset: `lap(A) ∪ uap(P∖A) = P`, and the two parts are
/// disjoint when `A` is upper.
pub fn check_partition(r: &AuxRelation, a: ElementSet) -> ApproxReport {
    check_partition_scope(r, &SubsetScope::Explicit(vec![a]))
}

pub fn check_partition_scope(r: &AuxRelation, scope: &SubsetScope) -> ApproxReport {
    let p = r.poset();
    let sets = scope.sets(p.len());
    let mut report = Report::new(format!("relation {r}"), scope.describe());
    let union = first_bad(sets.iter().copied(), |a| {
        let covered = r.lap(a) | r.uap(!a);
        (!covered.is_full()).then_some(Witness::SetPair { a, b: covered })
    });
    report.push(Verdict::from_witness("partition.union", scope.describe(), union));
    let disjoint = first_bad(sets.iter().copied().filter(|&a| p.is_upper(a)), |a| {
        let overlap = r.lap(a) & r.uap(!a);
        (!overlap.is_empty()).then_some(Witness::SetPair { a, b: overlap })
    });
    report.push(Verdict::from_witness(
        "partition.disjoint",
        format!("upper sets of {}", scope.describe()),
        disjoint,
    ));
    report
}

/// Single-relation laws: the sandwich `lap(A) ⊆ A ⊆ uap(A)`, `uap(A) = uap(↓A)`,
/// closure of `uap` in lower sets and of `lap` in upper sets, the membership
/// characterization of `lap`, `(↑a)^{↓≺} = s≻(a)`, the constant values at `∅` and
/// `P`, and the three-way whole-space equivalence.
pub fn check_basic_laws(r: &AuxRelation, scope: &SubsetScope) -> ApproxReport {
    let p = r.poset();
    let n = p.len();
    let sets = scope.sets(n);
    let sd = scope.describe();
    let mut report = Report::new(format!("relation {r}"), sd.clone());

    let sandwich = first_bad(sets.iter().copied(), |a| {
        let (lo, hi) = (r.lap(a), r.uap(a));
        (!(lo.is_subset(&a) && a.is_subset(&hi))).then(|| Witness::set(a))
    });
    report.push(Verdict::from_witness("basic.sandwich", &sd, sandwich));

    let down_invariant = first_bad(sets.iter().copied(), |a| {
        (r.uap(a) != r.uap(p.down_closure(a))).then(|| Witness::set(a))
    });
    report.push(Verdict::from_witness("basic.uap-of-down-closure", &sd, down_invariant));

    let uap_lower = first_bad(sets.iter().copied(), |a| (!p.is_lower(r.uap(a))).then(|| Witness::set(a)));
    report.push(Verdict::from_witness("basic.uap-is-lower", &sd, uap_lower));

    let lap_upper = first_bad(sets.iter().copied().filter(|&a| p.is_upper(a)), |a| {
        (!p.is_upper(r.lap(a))).then(|| Witness::set(a))
    });
    report.push(Verdict::from_witness("basic.lap-of-upper-is-upper", format!("upper sets of {sd}"), lap_upper));

    // Set-builder definition against the existential form, element by element.
    let membership = first_bad(sets.iter().copied(), |a| {
        let lap = r.lap(a);
        let bad = (0..n).find(|&x| {
            let exists = a.iter().any(|y| r.relates(y, x));
            lap.contains(x) != (a.contains(x) && exists)
        });
        bad.map(|_| Witness::set(a))
    });
    report.push(Verdict::from_witness("basic.lap-membership", &sd, membership));

    let principal = (0..n).find(|&a| r.lap(p.up_of(a)) != r.section_above(a));
    report.push(Verdict::from_witness(
        "basic.lap-of-principal-up",
        "all elements",
        principal.map(|x| vec![Witness::Element { x }]),
    ));

    let ends = r.lap(p.empty_set()).is_empty() && r.uap(p.universe()).is_full();
    report.push(Verdict::from_witness(
        "basic.empty-and-whole",
        "lap(∅), uap(P)",
        (!ends).then(|| vec![Witness::note("lap(∅) ≠ ∅ or uap(P) ≠ P")]),
    ));

    let sections_nonempty = (0..n).all(|x| !r.section_below(x).is_empty());
    let uap_empty = r.uap(p.empty_set()).is_empty();
    let lap_whole = r.lap(p.universe()).is_full();
    report.fact("sections-nonempty", sections_nonempty);
    report.fact("uap-empty-is-empty", uap_empty);
    report.fact("lap-whole-is-whole", lap_whole);
    let agree = sections_nonempty == uap_empty && uap_empty == lap_whole;
    report.push(Verdict::from_witness(
        "basic.whole-space-equivalence",
        "three statements",
        (!agree).then(|| {
            vec![Witness::note(format!(
                "sections nonempty={sections_nonempty}, uap(∅)=∅ {uap_empty}, lap(P)=P {lap_whole}"
            ))]
        }),
    ));
    report
}

/// Galois laws for both adjoint pairs, quantified over the full lattices:
/// `B ⊆ uap(A) ⟺ g(B) ⊆ A` on lower sets and `lap(A) ⊆ B ⟺ A ⊆ h(B)` on upper sets.
pub fn check_adjoints(r: &AuxRelation) -> Result<ApproxReport, Error> {
    let p = r.poset();
    let lowers = p.lower_sets()?;
    let uppers = p.upper_sets()?;
    let mut report = Report::new(format!("relation {r}"), "lattices of lower and upper sets");

    let mut lower_bad = None;
    'lower: for &b in &lowers {
        let g = r.uap_lower_adjoint(b)?;
        if !p.is_lower(g) {
            lower_bad = Some(vec![Witness::SetPair { a: b, b: g }]);
            break;
        }
        for &a in &lowers {
            if b.is_subset(&r.uap(a)) != g.is_subset(&a) {
                lower_bad = Some(vec![Witness::SetPair { a, b }]);
                break 'lower;
            }
        }
    }
    report.push(Verdict::from_witness("adjoint.uap-lower-adjoint", "L(P) × L(P)", lower_bad));

    let mut upper_bad = None;
    'upper: for &b in &uppers {
        let h = r.lap_upper_adjoint(b)?;
        if !p.is_upper(h) {
            upper_bad = Some(vec![Witness::SetPair { a: b, b: h }]);
            break;
        }
        for &a in &uppers {
            if r.lap(a).is_subset(&b) != a.is_subset(&h) {
                upper_bad = Some(vec![Witness::SetPair { a, b }]);
                break 'upper;
            }
        }
    }
    report.push(Verdict::from_witness("adjoint.lap-upper-adjoint", "U(P) × U(P)", upper_bad));
    Ok(report)
}

/// Monotone, and sends the lattice into itself.
fn monotone_self_map(
    lattice: &[ElementSet],
    member: impl Fn(ElementSet) -> bool,
    f: impl Fn(ElementSet) -> ElementSet,
) -> Option<Witness> {
    for &a in lattice {
        if !member(f(a)) {
            return Some(Witness::set(a));
        }
        for &b in lattice {
            if a.is_subset(&b) && !f(a).is_subset(&f(b)) {
                return Some(Witness::SetPair { a, b });
            }
        }
    }
    None
}

/// Evaluates the five statements that characterize the interpolation property
/// and asserts that they agree:
///
/// 1. `≺` interpolates;
/// 2. `lap` is idempotent on upper sets;
/// 3. `lap` is a kernel operator on `U(P)`;
/// 4. `uap` is idempotent on lower sets;
/// 5. `uap` is a closure operator on `L(P)`.
pub fn check_int_equivalences(r: &AuxRelation) -> Result<ApproxReport, Error> {
    let p = r.poset();
    let uppers = p.upper_sets()?;
    let lowers = p.lower_sets()?;
    let mut report = Report::new(format!("relation {r}"), "lattices of lower and upper sets");

    let class = r.classify();
    let int_witness = class.int_witness.map(|(x, y)| Witness::Pair { x, y });

    let lap_idem = uppers.iter().copied().find(|&a| r.lap(r.lap(a)) != r.lap(a)).map(Witness::set);

    let lap_kernel = monotone_self_map(&uppers, |s| p.is_upper(s), |a| r.lap(a))
        .or_else(|| uppers.iter().copied().find(|&a| !r.lap(a).is_subset(&a)).map(Witness::set))
        .or_else(|| lap_idem.clone());

    let uap_idem = lowers.iter().copied().find(|&b| r.uap(r.uap(b)) != r.uap(b)).map(Witness::set);

    let uap_closure = monotone_self_map(&lowers, |s| p.is_lower(s), |b| r.uap(b))
        .or_else(|| lowers.iter().copied().find(|&b| !b.is_subset(&r.uap(b))).map(Witness::set))
        .or_else(|| uap_idem.clone());

    let statements = [
        ("int", int_witness),
        ("lap-idempotent-on-upper", lap_idem),
        ("lap-kernel-on-upper", lap_kernel),
        ("uap-idempotent-on-lower", uap_idem),
        ("uap-closure-on-lower", uap_closure),
    ];
    for (name, witness) in &statements {
        report.fact(*name, witness.is_none());
    }
    let first = statements[0].1.is_none();
    let agree = statements.iter().all(|(_, w)| w.is_none() == first);
    let verdict = if agree {
        Verdict::pass("int-char.equivalence", "five statements")
    } else {
        let mut witnesses = vec![Witness::note(
            statements
                .iter()
                .map(|(name, w)| format!("{name}={}", w.is_none()))
                .collect::<Vec<_>>()
                .join(" "),
        )];
        witnesses.extend(statements.iter().filter_map(|(_, w)| w.clone()));
        Verdict::fail("int-char.equivalence", "five statements", witnesses)
    };
    report.push(verdict);
    Ok(report)
}

/// Laws relating two relations on the same poset: monotonicity in `Aux(P)`,
/// `uap₁ ∩ uap₂ = uap_{≺₁∪≺₂}`, `lap₁ ∪ lap₂ = lap_{≺₁∪≺₂}`, and for filtered `A`,
/// `lap₁ ∩ lap₂ = lap_{≺₁∩≺₂}`. Also the preservation laws for each relation:
/// `uap` preserves intersections of lower sets and `lap` unions of upper sets
/// (pairs and the empty family).
pub fn check_algebra(r1: &AuxRelation, r2: &AuxRelation, scope: &SubsetScope) -> Result<ApproxReport, Error> {
    let join = r1.union(r2)?;
    let meet = r1.intersection(r2)?;
    let p = r1.poset();
    let sets = scope.sets(p.len());
    let sd = scope.describe();
    let mut report = Report::new(format!("relations {r1} and {r2}"), sd.clone());

    let mut comparable: Vec<(&AuxRelation, &AuxRelation)> = vec![(&meet, r1), (&meet, r2), (r1, &join), (r2, &join)];
    if r1.is_subrelation(r2) {
        comparable.push((r1, r2));
    }
    if r2.is_subrelation(r1) {
        comparable.push((r2, r1));
    }
    let monotone = first_bad(sets.iter().copied(), |a| {
        comparable
            .iter()
            .any(|(small, big)| !small.lap(a).is_subset(&big.lap(a)) || !big.uap(a).is_subset(&small.uap(a)))
            .then(|| Witness::set(a))
    });
    report.push(Verdict::from_witness("algebra.monotone-in-relation", &sd, monotone));

    let uap_union = first_bad(sets.iter().copied(), |a| {
        ((r1.uap(a) & r2.uap(a)) != join.uap(a)).then(|| Witness::set(a))
    });
    report.push(Verdict::from_witness("algebra.uap-of-union", &sd, uap_union));

    let lap_union = first_bad(sets.iter().copied(), |a| {
        ((r1.lap(a) | r2.lap(a)) != join.lap(a)).then(|| Witness::set(a))
    });
    report.push(Verdict::from_witness("algebra.lap-of-union", &sd, lap_union));

    let lap_meet = first_bad(sets.iter().copied().filter(|&a| p.is_filtered(a)), |a| {
        ((r1.lap(a) & r2.lap(a)) != meet.lap(a)).then(|| Witness::set(a))
    });
    report.push(Verdict::from_witness(
        "algebra.lap-of-intersection-filtered",
        format!("filtered sets of {sd}"),
        lap_meet,
    ));

    let lowers = p.lower_sets()?;
    let uppers = p.upper_sets()?;
    let mut preserve_meets = None;
    let mut preserve_joins = None;
    for r in [r1, r2] {
        if preserve_meets.is_none() {
            preserve_meets = (!r.uap(p.universe()).is_full())
                .then(|| vec![Witness::note("empty intersection: uap(P) ≠ P")])
                .or_else(|| {
                    lowers.iter().find_map(|&a| {
                        lowers
                            .iter()
                            .find(|&&b| r.uap(a & b) != (r.uap(a) & r.uap(b)))
                            .map(|&b| vec![Witness::SetPair { a, b }])
                    })
                });
        }
        if preserve_joins.is_none() {
            preserve_joins = (!r.lap(p.empty_set()).is_empty())
                .then(|| vec![Witness::note("empty union: lap(∅) ≠ ∅")])
                .or_else(|| {
                    uppers.iter().find_map(|&a| {
                        uppers
                            .iter()
                            .find(|&&b| r.lap(a | b) != (r.lap(a) | r.lap(b)))
                            .map(|&b| vec![Witness::SetPair { a, b }])
                    })
                });
        }
    }
    report.push(Verdict::from_witness("algebra.uap-preserves-intersections", "L(P) pairs", preserve_meets));
    report.push(Verdict::from_witness("algebra.lap-preserves-unions", "U(P) pairs", preserve_joins));
    Ok(report)
}
