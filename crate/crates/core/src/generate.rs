//! Named posets, seeded random posets, and exhaustive enumeration of small posets.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::Budget;
use crate::error::Error;
use crate::poset::{relabel_rows, Poset, RelationMode};

/// Size cap for generated posets.
pub const MAX_GENERATED: usize = 24;
pub const MAX_BOOLEAN_RANK: u32 = 5;
pub const MAX_LABELED_ENUMERATION: usize = 5;
pub const MAX_ISO_ENUMERATION: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub enum PosetKind {
    Chain(usize),
    Antichain(usize),
    /// `0 < 1, 2 < 3`.
    Diamond,
    /// Subsets of a `k`-element set under inclusion; element `i` is the subset with bit mask `i`.
    Boolean(u32),
    /// Random DAG on index-increasing edges, then transitive closure.
    Random { seed: u64, n: usize, edge_prob: f64 },
    Explicit {
        n: usize,
        pairs: Vec<(usize, usize)>,
        mode: RelationMode,
    },
}

fn check_n(n: usize) -> Result<(), Error> {
    if n == 0 || n > MAX_GENERATED {
        return Err(Error::BadParameters(format!(
            "element count {n} outside 1..={MAX_GENERATED}"
        )));
    }
    Ok(())
}

pub fn generate(kind: &PosetKind) -> Result<Poset, Error> {
    match kind {
        PosetKind::Chain(n) => {
            check_n(*n)?;
            let covers: Vec<_> = (1..*n).map(|i| (i - 1, i)).collect();
            Poset::validate(*n, &covers, RelationMode::Covers)
        }
        PosetKind::Antichain(n) => {
            check_n(*n)?;
            Poset::validate(*n, &[], RelationMode::Covers)
        }
        PosetKind::Diamond => Poset::validate(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], RelationMode::Covers),
        PosetKind::Boolean(k) => {
            if *k > MAX_BOOLEAN_RANK {
                return Err(Error::BadParameters(format!(
                    "boolean rank {k} exceeds {MAX_BOOLEAN_RANK}"
                )));
            }
            let n = 1usize << k;
            let mut pairs = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i & j == i {
                        pairs.push((i, j));
                    }
                }
            }
            Poset::validate(n, &pairs, RelationMode::FullOrder)
        }
        PosetKind::Random { seed, n, edge_prob } => {
            check_n(*n)?;
            if !(0.0..=1.0).contains(edge_prob) {
                return Err(Error::BadParameters(format!(
                    "edge probability {edge_prob} outside [0, 1]"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut edges = Vec::new();
            for i in 0..*n {
                for j in i + 1..*n {
                    if rng.gen_bool(*edge_prob) {
                        edges.push((i, j));
                    }
                }
            }
            Poset::validate(*n, &edges, RelationMode::Covers)
        }
        PosetKind::Explicit { n, pairs, mode } => {
            check_n(*n)?;
            Poset::validate(*n, pairs, *mode)
        }
    }
}

/// Every poset on `0..n` whose order is contained in the index order, i.e. whose
/// identity labelling is a linear extension. Each isomorphism class has at least
/// one such representative.
fn naturally_labeled_rows(n: usize) -> Vec<Vec<u128>> {
    // down[k] = strict down-set of k, built element by element; the strict down-set
    // of a new element must be a lower set of the poset built so far.
    fn extend(n: usize, down: &mut Vec<u128>, out: &mut Vec<Vec<u128>>) {
        let k = down.len();
        if k == n {
            let mut up = vec![0u128; n];
            for (j, d) in down.iter().enumerate() {
                up[j] |= 1u128 << j;
                let mut bits = *d;
                while bits != 0 {
                    let i = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    up[i] |= 1u128 << j;
                }
            }
            out.push(up);
            return;
        }
        let prefix = (1u128 << k) - 1;
        let mut sub: u128 = 0;
        loop {
            let is_lower = {
                let mut bits = sub;
                let mut ok = true;
                while bits != 0 {
                    let i = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if down[i] & !sub != 0 {
                        ok = false;
                        break;
                    }
                }
                ok
            };
            if is_lower {
                down.push(sub);
                extend(n, down, out);
                down.pop();
            }
            sub = sub.wrapping_sub(prefix) & prefix;
            if sub == 0 {
                break;
            }
        }
    }
    let mut out = Vec::new();
    extend(n, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Calls `visit` with every permutation of `0..n` (Heap's algorithm).
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Lexicographically least row matrix over all relabellings.
pub fn canonical_rows(p: &Poset) -> Vec<u128> {
    let mut best: Option<Vec<u128>> = None;
    for_each_permutation(p.len(), |perm| {
        let rows = relabel_rows(p.up_rows(), perm);
        if best.as_ref().is_none_or(|b| rows < *b) {
            best = Some(rows);
        }
    });
    best.unwrap_or_default()
}

pub fn canonical_form(p: &Poset) -> Poset {
    Poset::from_up_rows(canonical_rows(p))
}

/// All posets on `n` elements.
///
/// Labelled mode emits every labelled poset once; iso mode emits one canonical
/// representative per isomorphism class. Both are sorted by row matrix.
pub fn enumerate_posets(n: usize, up_to_iso: bool, budget: Budget) -> Result<Vec<Poset>, Error> {
    let cap = if up_to_iso {
        MAX_ISO_ENUMERATION
    } else {
        MAX_LABELED_ENUMERATION
    };
    if n == 0 || n > cap {
        return Err(Error::BadParameters(format!(
            "poset enumeration supports 1..={cap} elements in {} mode, got {n}",
            if up_to_iso { "iso" } else { "labelled" }
        )));
    }
    let natural = naturally_labeled_rows(n);
    let mut seen: BTreeSet<Vec<u128>> = BTreeSet::new();
    for rows in &natural {
        if up_to_iso {
            seen.insert(canonical_rows(&Poset::from_up_rows(rows.clone())));
        } else {
            for_each_permutation(n, |perm| {
                seen.insert(relabel_rows(rows, perm));
            });
        }
        budget.check(seen.len() as u64, "posets")?;
    }
    Ok(seen.into_iter().map(Poset::from_up_rows).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_kinds() {
        let c3 = generate(&PosetKind::Chain(3)).unwrap();
        assert_eq!(c3.covers(), vec![(0, 1), (1, 2)]);
        assert_eq!(generate(&PosetKind::Boolean(2)).unwrap(), generate(&PosetKind::Diamond).unwrap());
        assert_eq!(generate(&PosetKind::Boolean(3)).unwrap().covers().len(), 12);
        assert!(generate(&PosetKind::Antichain(3)).unwrap().covers().is_empty());
    }

    #[test]
    fn parameter_bounds() {
        assert!(matches!(generate(&PosetKind::Boolean(6)), Err(Error::BadParameters(_))));
        assert!(matches!(generate(&PosetKind::Chain(0)), Err(Error::BadParameters(_))));
        assert!(matches!(generate(&PosetKind::Chain(25)), Err(Error::BadParameters(_))));
        assert!(matches!(
            generate(&PosetKind::Random {
                seed: 1,
                n: 3,
                edge_prob: 1.5
            }),
            Err(Error::BadParameters(_))
        ));
    }

    #[test]
    fn random_is_seed_deterministic() {
        let kind = PosetKind::Random {
            seed: 7,
            n: 5,
            edge_prob: 0.3,
        };
        assert_eq!(generate(&kind).unwrap(), generate(&kind).unwrap());
    }

    #[test]
    fn natural_labelings_count() {
        // 1, 2, 7, 40, 357 naturally labelled posets.
        let counts: Vec<usize> = (1..=5).map(|n| naturally_labeled_rows(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 7, 40, 357]);
    }

    #[test]
    fn iso_class_counts() {
        let counts: Vec<usize> = (1..=6)
            .map(|n| enumerate_posets(n, true, Budget::UNLIMITED).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 2, 5, 16, 63, 318]);
    }

    #[test]
    fn enumeration_bounds() {
        assert!(enumerate_posets(6, false, Budget::UNLIMITED).is_err());
        assert!(enumerate_posets(7, true, Budget::UNLIMITED).is_err());
        assert!(matches!(
            enumerate_posets(4, false, Budget::new(10)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn permutations_visit_all() {
        let mut seen = BTreeSet::new();
        for_each_permutation(4, |p| {
            seen.insert(p.to_vec());
        });
        assert_eq!(seen.len(), 24);
    }
}
