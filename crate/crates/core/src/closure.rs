//! The one-step operator `A′`, one-step closure and meet-continuity.
//!
//! `A′` is the set of suprema of directed subsets of `↓A`. It is computed by
//! quantifying over those subsets, never by the finite shortcut `A′ = ↓A`, so the
//! checks below exercise the definition rather than a restatement of it.

use std::sync::Arc;

use crate::auxrel::AuxRelation;
use crate::budget::Budget;
use crate::error::Error;
use crate::poset::{Poset, MAX_SUBSET_SCAN};
use crate::report::{ClosureReport, Report, Tier, Verdict, Witness};
use crate::set::ElementSet;
use crate::topology::{scott_topology_within, Topology};

/// `{x : x = ⋁D for some directed D ⊆ ↓A}`.
pub fn one_step(p: &Poset, a: ElementSet) -> Result<ElementSet, Error> {
    one_step_within(p, a, Budget::UNLIMITED)
}

pub fn one_step_within(p: &Poset, a: ElementSet, budget: Budget) -> Result<ElementSet, Error> {
    let down = p.down_closure(a);
    let mut out = p.empty_set();
    for d in p.directed_subsets_within(down, budget)? {
        if let Some(s) = p.supremum(d) {
            out = out.with(s);
        }
    }
    Ok(out)
}

/// Outcome of [`has_one_step_closure`]: the verdict of each of the two
/// equivalent forms, with the first subset on which each fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneStep {
    /// `A′ = cl_σ(A)` for every `A`.
    pub holds: bool,
    pub witness: Option<ElementSet>,
    /// `A′` is Scott closed for every `A`.
    pub scott_closed_form: bool,
    pub scott_closed_witness: Option<ElementSet>,
}

fn all_subsets(p: &Poset) -> Result<impl Iterator<Item = ElementSet>, Error> {
    if p.len() > MAX_SUBSET_SCAN {
        return Err(Error::UniverseTooLarge {
            n: p.len(),
            cap: MAX_SUBSET_SCAN,
        });
    }
    Ok(p.universe().subsets())
}

fn is_scott_closed(sigma: &Topology, a: ElementSet) -> bool {
    sigma.is_open(!a)
}

pub fn has_one_step_closure(p: &Arc<Poset>) -> Result<OneStep, Error> {
    has_one_step_closure_within(p, Budget::UNLIMITED)
}

pub fn has_one_step_closure_within(p: &Arc<Poset>, budget: Budget) -> Result<OneStep, Error> {
    let sigma = scott_topology_within(p, budget)?;
    let mut witness = None;
    let mut scott_closed_witness = None;
    for a in all_subsets(p)? {
        let prime = one_step_within(p, a, budget)?;
        if witness.is_none() && prime != sigma.closure(a) {
            witness = Some(a);
        }
        if scott_closed_witness.is_none() && !is_scott_closed(&sigma, prime) {
            scott_closed_witness = Some(a);
        }
        if witness.is_some() && scott_closed_witness.is_some() {
            break;
        }
    }
    Ok(OneStep {
        holds: witness.is_none(),
        witness,
        scott_closed_form: scott_closed_witness.is_none(),
        scott_closed_witness,
    })
}

/// For every directed `D` with a supremum and every `x ≤ ⋁D`,
/// `x ∈ cl_σ(↓D ∩ ↓x)`. Returns the first failing `(D, x)`.
pub fn is_meet_continuous(p: &Arc<Poset>) -> Result<(bool, Option<(ElementSet, usize)>), Error> {
    is_meet_continuous_within(p, Budget::UNLIMITED)
}

pub fn is_meet_continuous_within(
    p: &Arc<Poset>,
    budget: Budget,
) -> Result<(bool, Option<(ElementSet, usize)>), Error> {
    let sigma = scott_topology_within(p, budget)?;
    for d in p.enumerate_directed_subsets(budget)? {
        let Some(s) = p.supremum(d) else { continue };
        for x in p.down_of(s).iter() {
            let meet = p.down_closure(d) & p.down_of(x);
            if !sigma.closure(meet).contains(x) {
                return Ok((false, Some((d, x))));
            }
        }
    }
    Ok((true, None))
}

/// Properties of `A′` for every subset, and the three theorems whose hypotheses
/// (continuity, one-step closure) always hold on finite posets.
pub fn check_one_step_theorems(p: &Arc<Poset>) -> Result<ClosureReport, Error> {
    check_one_step_theorems_within(p, Budget::UNLIMITED)
}

pub fn check_one_step_theorems_within(p: &Arc<Poset>, budget: Budget) -> Result<ClosureReport, Error> {
    let sigma = scott_topology_within(p, budget)?;
    let wb = AuxRelation::way_below(p.clone(), budget)?;
    let primes: Vec<(ElementSet, ElementSet)> = all_subsets(p)?
        .map(|a| one_step_within(p, a, budget).map(|prime| (a, prime)))
        .collect::<Result<_, _>>()?;
    let mut report = Report::new("poset", "all subsets");

    let sandwich = primes
        .iter()
        .find(|&&(a, prime)| {
            let down = p.down_closure(a);
            !(a.is_subset(&down) && down.is_subset(&prime) && prime.is_subset(&sigma.closure(a)))
        })
        .map(|&(a, prime)| vec![Witness::SetPair { a, b: prime }]);
    report.push(Verdict::from_witness("one-step.sandwich", "all subsets", sandwich).with_tier(Tier::Discriminating));

    let below_uap = primes
        .iter()
        .find(|(a, prime)| !prime.is_subset(&wb.uap(*a)))
        .map(|&(a, prime)| vec![Witness::SetPair { a, b: prime }]);
    report.push(
        Verdict::from_witness("one-step.one-step-in-way-below-uap", "all subsets", below_uap).with_tier(Tier::Discriminating),
    );

    let fixpoint = primes
        .iter()
        .find(|(a, prime)| (prime == a) != is_scott_closed(&sigma, *a))
        .map(|&(a, prime)| vec![Witness::SetPair { a, b: prime }]);
    report.push(
        Verdict::from_witness("one-step.fixpoint-iff-scott-closed", "all subsets", fixpoint).with_tier(Tier::Discriminating),
    );

    let finite = primes
        .iter()
        .find(|(a, prime)| *prime != p.down_closure(*a))
        .map(|&(a, prime)| vec![Witness::SetPair { a, b: prime }]);
    report.push(Verdict::from_witness("one-step.finite-one-step-is-down-closure", "all subsets", finite).with_tier(Tier::FiniteTrivial));

    let one = has_one_step_closure_within(p, budget)?;
    report.fact("one-step-closure", one.holds);
    report.push(
        Verdict::from_witness(
            "one-step.one-step-forms-agree",
            "all subsets",
            (one.holds != one.scott_closed_form).then(|| {
                one.witness
                    .or(one.scott_closed_witness)
                    .map(Witness::set)
                    .into_iter()
                    .collect()
            }),
        )
        .with_tier(Tier::Discriminating),
    );

    let continuous = wb.classify().approximating;
    report.fact("continuous", continuous);
    report.push(
        Verdict::from_witness(
            "one-step.continuous-implies-one-step",
            "poset",
            (continuous && !one.holds).then(|| one.witness.map(Witness::set).into_iter().collect()),
        )
        .with_tier(Tier::FiniteTrivial),
    );

    let (meet_continuous, mc_witness) = is_meet_continuous_within(p, budget)?;
    report.fact("meet-continuous", meet_continuous);
    report.push(
        Verdict::from_witness(
            "one-step.one-step-implies-meet-continuous",
            "poset",
            (one.holds && !meet_continuous).then(|| {
                mc_witness
                    .map(|(d, x)| Witness::note(format!("directed {{{d}}}, x = {x}")))
                    .into_iter()
                    .collect()
            }),
        )
        .with_tier(Tier::FiniteTrivial),
    );

    let interior_bad = (0..p.len()).find(|&x| sigma.interior(p.up_of(x)) != wb.section_above(x));
    report.push(
        Verdict::from_witness(
            "one-step.one-step-implies-interior-of-up-is-way-above",
            "all elements",
            (one.holds && interior_bad.is_some()).then(|| vec![Witness::Element { x: interior_bad.unwrap() }]),
        )
        .with_tier(Tier::FiniteTrivial),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, PosetKind};

    fn set(n: usize, xs: &[usize]) -> ElementSet {
        ElementSet::from_indices(n, xs.iter().copied()).unwrap()
    }

    fn poset(kind: PosetKind) -> Arc<Poset> {
        Arc::new(generate(&kind).unwrap())
    }

    #[test]
    fn one_step_examples() {
        let d4 = poset(PosetKind::Diamond);
        assert_eq!(one_step(&d4, set(4, &[1, 2])).unwrap(), set(4, &[0, 1, 2]));
        assert!(one_step(&d4, d4.empty_set()).unwrap().is_empty());
        let c3 = poset(PosetKind::Chain(3));
        assert!(one_step(&c3, set(3, &[2])).unwrap().is_full());
    }

    #[test]
    fn one_step_closure_examples() {
        for kind in [PosetKind::Chain(1), PosetKind::Diamond, PosetKind::Antichain(3)] {
            let p = poset(kind);
            let r = has_one_step_closure(&p).unwrap();
            assert!(r.holds && r.scott_closed_form);
        }
        let d4 = poset(PosetKind::Diamond);
        for a in d4.universe().subsets() {
            assert_eq!(one_step(&d4, a).unwrap(), d4.down_closure(a));
        }
    }

    #[test]
    fn meet_continuity_examples() {
        for kind in [PosetKind::Chain(3), PosetKind::Antichain(3), PosetKind::Boolean(3)] {
            assert_eq!(is_meet_continuous(&poset(kind)).unwrap(), (true, None));
        }
    }

    #[test]
    fn one_step_theorem_examples() {
        let d4 = poset(PosetKind::Diamond);
        let rep = check_one_step_theorems(&d4).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.verdicts.iter().all(|v| v.tier.is_some()));
        let c3 = poset(PosetKind::Chain(3));
        let a = set(3, &[1]);
        let sigma = crate::topology::scott_topology(&c3).unwrap();
        assert_eq!(one_step(&c3, a).unwrap(), set(3, &[0, 1]));
        assert_eq!(sigma.closure(a), set(3, &[0, 1]));
        assert!(!sigma.is_open(!a));
        assert!(check_one_step_theorems(&c3).unwrap().passed());
    }

    #[test]
    fn budget_is_enforced() {
        let b = poset(PosetKind::Boolean(3));
        assert!(matches!(
            one_step_within(&b, b.universe(), Budget::new(3)),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
