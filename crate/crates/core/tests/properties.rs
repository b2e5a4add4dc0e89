use std::sync::Arc;

use orderlab::approx::{check_basic_laws, check_partition};
use orderlab::harness::{fingerprint, parse_fingerprint};
use orderlab::topology::check_interior_closure_laws;
use orderlab::{generate, mu_topology, sample_aux, AuxRelation, ElementSet, Poset, PosetKind, SubsetScope};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = (Arc<Poset>, AuxRelation, u128)> {
    (1usize..=7, any::<u64>(), 0.0f64..=1.0, any::<u64>(), any::<u128>()).prop_map(|(n, seed, prob, rseed, bits)| {
        let p = Arc::new(
            generate(&PosetKind::Random {
                seed,
                n,
                edge_prob: prob,
            })
            .unwrap(),
        );
        let r = sample_aux(&p, rseed);
        (p, r, bits & ((1u128 << n) - 1))
    })
}

proptest! {
    #[test]
    fn sampled_relations_satisfy_the_axioms((_p, r, _bits) in instance()) {
        prop_assert!(r.check_axioms().is_ok());
        prop_assert!(r.is_subrelation(&AuxRelation::leq(r.poset().clone())));
        prop_assert!(AuxRelation::bottom(r.poset().clone()).is_subrelation(&r));
    }

    #[test]
    fn lap_splits_its_argument((p, r, bits) in instance()) {
        let a = ElementSet::from_bits(p.len(), bits).unwrap();
        let lap = r.lap(a);
        prop_assert!(lap.is_subset(&a));
        prop_assert_eq!(lap | (a - lap), a);
        prop_assert!(check_partition(&r, a).passed());
    }

    #[test]
    fn operator_shapes((p, r, bits) in instance()) {
        let a = ElementSet::from_bits(p.len(), bits).unwrap();
        prop_assert!(p.is_lower(r.uap(a)));
        prop_assert_eq!(r.uap(a), r.uap(p.down_closure(a)));
        let up = p.up_closure(a);
        prop_assert!(p.is_upper(r.lap(up)));
        let down = p.down_closure(a);
        prop_assert!(r.lap(down).is_subset(&down) && down.is_subset(&r.uap(down)));
    }

    #[test]
    fn operators_are_monotone((p, r, bits) in instance(), extra in any::<u128>()) {
        let a = ElementSet::from_bits(p.len(), bits).unwrap();
        let b = a | ElementSet::from_bits(p.len(), extra & ((1u128 << p.len()) - 1)).unwrap();
        prop_assert!(r.lap(a).is_subset(&r.lap(b)));
        prop_assert!(r.uap(a).is_subset(&r.uap(b)));
        let leq = AuxRelation::leq(p.clone());
        prop_assert!(r.lap(a).is_subset(&leq.lap(a)));
        prop_assert!(leq.uap(a).is_subset(&r.uap(a)));
    }

    #[test]
    fn basic_laws_hold_on_samples((_p, r, _bits) in instance(), seed in any::<u64>()) {
        let report = check_basic_laws(&r, &SubsetScope::Sampled { count: 16, seed });
        prop_assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn mu_is_a_topology_with_dual_closure((p, r, _bits) in instance()) {
        prop_assume!(r.classify().pre_approximating && p.len() <= 6);
        let mu = mu_topology(&r).unwrap();
        prop_assert!(mu.invariant_violation().is_none());
        prop_assert!(check_interior_closure_laws(&mu, &SubsetScope::All).passed());
    }

    #[test]
    fn fingerprints_round_trip((p, r, bits) in instance()) {
        let a = ElementSet::from_bits(p.len(), bits).unwrap();
        let fp = fingerprint(&p, &[&r], &[a]);
        let back = parse_fingerprint(&fp).unwrap();
        prop_assert_eq!(&*back.poset, &*p);
        prop_assert_eq!(&back.relations, &vec![r.clone()]);
        prop_assert_eq!(back.subsets, vec![a]);
        prop_assert_eq!(fingerprint(&back.poset, &[&back.relations[0]], &[a]), fp);
    }
}
