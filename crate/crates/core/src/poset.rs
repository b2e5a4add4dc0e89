//! Finite posets stored as bit rows.
//!
//! Element `i` owns two masks: `up[i] = {j : i ≤ j}` and `down[i] = {j : j ≤ i}`.
//! Every order-theoretic primitive below is a handful of mask operations over
//! those rows.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, OrderAxiom};
use crate::set::{full_mask, ElementSet, MAX_UNIVERSE};

/// Largest poset the crate represents.
pub const MAX_ELEMENTS: usize = MAX_UNIVERSE;
/// Largest poset on which the full subset lattice is scanned (upper sets, lower sets).
pub const MAX_SUBSET_SCAN: usize = 24;
/// Largest set whose directed subsets are enumerated.
pub const MAX_DIRECTED_SCAN: usize = 20;

/// How a list of pairs describes an order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationMode {
    /// The pairs are the whole order and must satisfy the axioms as given.
    FullOrder,
    /// The pairs generate the order by reflexive-transitive closure.
    Covers,
}

#[derive(Clone)]
pub struct Poset {
    n: usize,
    up: Vec<u128>,
    down: Vec<u128>,
    labels: Option<Vec<String>>,
}

/// Equality compares the order only; labels are presentation.
impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.up == other.up
    }
}

impl Eq for Poset {}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset(n={}, covers={:?})", self.n, self.covers())
    }
}

fn transpose(n: usize, rows: &[u128]) -> Vec<u128> {
    let mut cols = vec![0u128; n];
    for (i, row) in rows.iter().enumerate() {
        let mut bits = *row;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            cols[j] |= 1u128 << i;
        }
    }
    cols
}

fn check_size(n: usize) -> Result<(), Error> {
    if n == 0 {
        return Err(Error::BadParameters("a poset needs at least one element".into()));
    }
    if n > MAX_ELEMENTS {
        return Err(Error::UniverseTooLarge {
            n,
            cap: MAX_ELEMENTS,
        });
    }
    Ok(())
}

impl Poset {
    /// Validates a relation given as index pairs `(i, j)` meaning `i ≤ j`.
    ///
    /// In [`RelationMode::FullOrder`] the axioms are checked on the pairs as given
    /// (in the order reflexivity, antisymmetry, transitivity). In
    /// [`RelationMode::Covers`] the reflexive-transitive closure is taken first and
    /// only antisymmetry can fail.
    pub fn validate(n: usize, pairs: &[(usize, usize)], mode: RelationMode) -> Result<Poset, Error> {
        check_size(n)?;
        let mut up = vec![0u128; n];
        for &(i, j) in pairs {
            for index in [i, j] {
                if index >= n {
                    return Err(Error::IndexOutOfRange { index, n });
                }
            }
            up[i] |= 1u128 << j;
        }
        match mode {
            RelationMode::FullOrder => {
                if let Some(i) = (0..n).find(|&i| up[i] >> i & 1 == 0) {
                    return Err(Error::OrderAxiom {
                        axiom: OrderAxiom::Reflexivity,
                        witness: (i, i),
                    });
                }
                check_antisymmetry(n, &up)?;
                for i in 0..n {
                    for j in ElementSet::raw(n, up[i]).iter() {
                        let missing = up[j] & !up[i];
                        if missing != 0 {
                            return Err(Error::OrderAxiom {
                                axiom: OrderAxiom::Transitivity,
                                witness: (i, missing.trailing_zeros() as usize),
                            });
                        }
                    }
                }
            }
            RelationMode::Covers => {
                for (i, row) in up.iter_mut().enumerate() {
                    *row |= 1u128 << i;
                }
                // Warshall on bit rows.
                for k in 0..n {
                    let row_k = up[k];
                    for row in up.iter_mut() {
                        if *row >> k & 1 == 1 {
                            *row |= row_k;
                        }
                    }
                }
                check_antisymmetry(n, &up)?;
            }
        }
        Ok(Poset::from_up_rows(up))
    }

    /// Builds a poset from rows already known to be a partial order.
    pub(crate) fn from_up_rows(up: Vec<u128>) -> Poset {
        let n = up.len();
        let down = transpose(n, &up);
        Poset {
            n,
            up,
            down,
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Poset, Error> {
        if labels.len() != self.n {
            return Err(Error::BadParameters(format!(
                "{} labels given for {} elements",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of element `i`: its label, or the index.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(labels) => labels[i].clone(),
            None => i.to_string(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false; posets are non-empty.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// The `up` rows, exposed for fingerprints and canonical forms.
    pub fn up_rows(&self) -> &[u128] {
        &self.up
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i] >> j & 1 == 1
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn universe(&self) -> ElementSet {
        ElementSet::full(self.n)
    }

    pub fn empty_set(&self) -> ElementSet {
        ElementSet::empty(self.n)
    }

    /// `↑x`.
    #[inline]
    pub fn up_of(&self, x: usize) -> ElementSet {
        ElementSet::raw(self.n, self.up[x])
    }

    /// `↓x`.
    #[inline]
    pub fn down_of(&self, x: usize) -> ElementSet {
        ElementSet::raw(self.n, self.down[x])
    }

    pub fn up_closure(&self, s: ElementSet) -> ElementSet {
        let bits = s.iter().fold(0u128, |acc, i| acc | self.up[i]);
        ElementSet::raw(self.n, bits)
    }

    pub fn down_closure(&self, s: ElementSet) -> ElementSet {
        let bits = s.iter().fold(0u128, |acc, i| acc | self.down[i]);
        ElementSet::raw(self.n, bits)
    }

    pub fn is_upper(&self, s: ElementSet) -> bool {
        let bits = s.bits();
        s.iter().all(|i| self.up[i] & !bits == 0)
    }

    pub fn is_lower(&self, s: ElementSet) -> bool {
        let bits = s.bits();
        s.iter().all(|i| self.down[i] & !bits == 0)
    }

    /// Non-empty and every pair has an upper bound inside the set. On finite sets
    /// the pairwise condition is equivalent to the finite-subset one.
    pub fn is_directed(&self, s: ElementSet) -> bool {
        let bits = s.bits();
        if bits == 0 {
            return false;
        }
        for a in s.iter() {
            for b in ElementSet::raw(self.n, bits >> a >> 1 << a << 1).iter() {
                if self.up[a] & self.up[b] & bits == 0 {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_filtered(&self, s: ElementSet) -> bool {
        let bits = s.bits();
        if bits == 0 {
            return false;
        }
        for a in s.iter() {
            for b in ElementSet::raw(self.n, bits >> a >> 1 << a << 1).iter() {
                if self.down[a] & self.down[b] & bits == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// All common upper bounds of `s` (the universe when `s` is empty).
    pub fn upper_bounds(&self, s: ElementSet) -> ElementSet {
        let bits = s.iter().fold(full_mask(self.n), |acc, i| acc & self.up[i]);
        ElementSet::raw(self.n, bits)
    }

    pub fn lower_bounds(&self, s: ElementSet) -> ElementSet {
        let bits = s.iter().fold(full_mask(self.n), |acc, i| acc & self.down[i]);
        ElementSet::raw(self.n, bits)
    }

    /// Least element of a set, if it has one.
    pub fn least_of(&self, s: ElementSet) -> Option<usize> {
        s.iter().find(|&u| s.bits() & !self.up[u] == 0)
    }

    pub fn greatest_of(&self, s: ElementSet) -> Option<usize> {
        s.iter().find(|&u| s.bits() & !self.down[u] == 0)
    }

    /// Least upper bound. `None` for the empty set and when no least upper bound exists.
    pub fn supremum(&self, s: ElementSet) -> Option<usize> {
        if s.is_empty() {
            return None;
        }
        self.least_of(self.upper_bounds(s))
    }

    pub fn infimum(&self, s: ElementSet) -> Option<usize> {
        if s.is_empty() {
            return None;
        }
        self.greatest_of(self.lower_bounds(s))
    }

    pub fn bottom(&self) -> Option<usize> {
        self.least_of(self.universe())
    }

    pub fn top(&self) -> Option<usize> {
        self.greatest_of(self.universe())
    }

    fn scan_subsets(
        &self,
        budget: Budget,
        what: &str,
        keep: impl Fn(ElementSet) -> bool,
    ) -> Result<Vec<ElementSet>, Error> {
        if self.n > MAX_SUBSET_SCAN {
            return Err(Error::UniverseTooLarge {
                n: self.n,
                cap: MAX_SUBSET_SCAN,
            });
        }
        let mut out = Vec::new();
        for s in self.universe().subsets() {
            if keep(s) {
                out.push(s);
                budget.check(out.len() as u64, what)?;
            }
        }
        Ok(out)
    }

    /// Upper sets in ascending bit order.
    pub fn enumerate_upper_sets(&self, budget: Budget) -> Result<Vec<ElementSet>, Error> {
        self.scan_subsets(budget, "upper sets", |s| self.is_upper(s))
    }

    pub fn enumerate_lower_sets(&self, budget: Budget) -> Result<Vec<ElementSet>, Error> {
        self.scan_subsets(budget, "lower sets", |s| self.is_lower(s))
    }

    pub fn upper_sets(&self) -> Result<Vec<ElementSet>, Error> {
        self.enumerate_upper_sets(Budget::UNLIMITED)
    }

    pub fn lower_sets(&self) -> Result<Vec<ElementSet>, Error> {
        self.enumerate_lower_sets(Budget::UNLIMITED)
    }

    /// Directed subsets of the whole poset, ascending bit order.
    pub fn enumerate_directed_subsets(&self, budget: Budget) -> Result<Vec<ElementSet>, Error> {
        self.directed_subsets_within(self.universe(), budget)
    }

    /// Directed subsets of `within`, ascending bit order.
    pub fn directed_subsets_within(
        &self,
        within: ElementSet,
        budget: Budget,
    ) -> Result<Vec<ElementSet>, Error> {
        if within.len() > MAX_DIRECTED_SCAN {
            return Err(Error::UniverseTooLarge {
                n: within.len(),
                cap: MAX_DIRECTED_SCAN,
            });
        }
        let mut out = Vec::new();
        for s in within.subsets() {
            if self.is_directed(s) {
                out.push(s);
                budget.check(out.len() as u64, "directed subsets")?;
            }
        }
        Ok(out)
    }

    /// Cover pairs `(i, j)`: `i < j` with nothing strictly between. Sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            let strict = self.up[i] & !(1u128 << i);
            let mut above = 0u128;
            for k in ElementSet::raw(self.n, strict).iter() {
                above |= self.up[k] & !(1u128 << k);
            }
            for j in ElementSet::raw(self.n, strict & !above).iter() {
                out.push((i, j));
            }
        }
        out
    }

    /// All pairs `(i, j)` with `i ≤ j`, sorted.
    pub fn order_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| self.up_of(i).iter().map(move |j| (i, j)))
            .collect()
    }

    /// The poset with element `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Poset {
        Poset::from_up_rows(relabel_rows(&self.up, perm))
    }
}

fn check_antisymmetry(n: usize, up: &[u128]) -> Result<(), Error> {
    for i in 0..n {
        for j in i + 1..n {
            if up[i] >> j & 1 == 1 && up[j] >> i & 1 == 1 {
                return Err(Error::OrderAxiom {
                    axiom: OrderAxiom::Antisymmetry,
                    witness: (i, j),
                });
            }
        }
    }
    Ok(())
}

pub(crate) fn relabel_rows(rows: &[u128], perm: &[usize]) -> Vec<u128> {
    let mut out = vec![0u128; rows.len()];
    for (i, row) in rows.iter().enumerate() {
        let mut bits = *row;
        let mut mapped = 0u128;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            mapped |= 1u128 << perm[j];
        }
        out[perm[i]] = mapped;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> ElementSet {
        ElementSet::from_indices(n, xs.iter().copied()).unwrap()
    }

    fn c3() -> Poset {
        Poset::validate(3, &[(0, 1), (1, 2)], RelationMode::Covers).unwrap()
    }

    fn d4() -> Poset {
        Poset::validate(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], RelationMode::Covers).unwrap()
    }

    #[test]
    fn full_order_chain() {
        let pairs = [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)];
        let p = Poset::validate(3, &pairs, RelationMode::FullOrder).unwrap();
        assert_eq!(p, c3());
    }

    #[test]
    fn full_order_rejects_two_cycle() {
        let pairs = [(0, 0), (1, 1), (0, 1), (1, 0)];
        assert_eq!(
            Poset::validate(2, &pairs, RelationMode::FullOrder),
            Err(Error::OrderAxiom {
                axiom: OrderAxiom::Antisymmetry,
                witness: (0, 1)
            })
        );
    }

    #[test]
    fn full_order_reports_reflexivity_and_transitivity() {
        assert_eq!(
            Poset::validate(2, &[(0, 0)], RelationMode::FullOrder),
            Err(Error::OrderAxiom {
                axiom: OrderAxiom::Reflexivity,
                witness: (1, 1)
            })
        );
        let pairs = [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)];
        assert_eq!(
            Poset::validate(3, &pairs, RelationMode::FullOrder),
            Err(Error::OrderAxiom {
                axiom: OrderAxiom::Transitivity,
                witness: (0, 2)
            })
        );
    }

    #[test]
    fn index_and_size_errors() {
        assert_eq!(
            Poset::validate(2, &[(0, 2)], RelationMode::Covers),
            Err(Error::IndexOutOfRange { index: 2, n: 2 })
        );
        assert!(matches!(
            Poset::validate(0, &[], RelationMode::Covers),
            Err(Error::BadParameters(_))
        ));
        assert!(matches!(
            Poset::validate(129, &[], RelationMode::Covers),
            Err(Error::UniverseTooLarge { .. })
        ));
    }

    #[test]
    fn covers_mode_adds_transitive_pair() {
        let p = c3();
        assert!(p.leq(0, 2));
        assert!(!p.leq(2, 0));
        assert!(matches!(
            Poset::validate(3, &[(0, 1), (1, 2), (2, 0)], RelationMode::Covers),
            Err(Error::OrderAxiom {
                axiom: OrderAxiom::Antisymmetry,
                ..
            })
        ));
    }

    #[test]
    fn closures() {
        let p = c3();
        assert_eq!(p.up_closure(set(3, &[0])), p.universe());
        assert_eq!(d4().up_closure(set(4, &[1])), set(4, &[1, 3]));
        assert!(p.up_closure(p.empty_set()).is_empty());
        assert_eq!(p.down_closure(set(3, &[1])), set(3, &[0, 1]));
    }

    #[test]
    fn directedness() {
        assert!(c3().is_directed(set(3, &[0, 1])));
        assert!(!d4().is_directed(set(4, &[1, 2])));
        assert!(!c3().is_directed(ElementSet::empty(3)));
        assert!(d4().is_filtered(set(4, &[0, 1, 2])));
        assert!(!d4().is_filtered(set(4, &[1, 2])));
    }

    #[test]
    fn suprema() {
        assert_eq!(d4().supremum(set(4, &[1, 2])), Some(3));
        assert_eq!(c3().supremum(set(3, &[1])), Some(1));
        let anti = Poset::validate(2, &[], RelationMode::Covers).unwrap();
        assert_eq!(anti.supremum(set(2, &[0, 1])), None);
        assert_eq!(c3().supremum(ElementSet::empty(3)), None);
        assert_eq!(d4().infimum(set(4, &[1, 2])), Some(0));
        assert_eq!(d4().bottom(), Some(0));
        assert_eq!(anti.top(), None);
    }

    #[test]
    fn upper_set_counts() {
        let ups = c3().upper_sets().unwrap();
        let expected: Vec<_> = [vec![], vec![2], vec![1, 2], vec![0, 1, 2]]
            .iter()
            .map(|v| set(3, v))
            .collect();
        assert_eq!(ups, expected);
        assert_eq!(d4().upper_sets().unwrap().len(), 6);
        let anti = Poset::validate(2, &[], RelationMode::Covers).unwrap();
        assert_eq!(anti.upper_sets().unwrap().len(), 4);
        assert!(matches!(
            d4().enumerate_upper_sets(Budget::new(3)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn hasse_covers() {
        assert_eq!(c3().covers(), vec![(0, 1), (1, 2)]);
        assert_eq!(d4().covers().len(), 4);
        let anti = Poset::validate(3, &[], RelationMode::Covers).unwrap();
        assert!(anti.covers().is_empty());
    }

    #[test]
    fn relabel_reverses_chain() {
        let p = c3().relabel(&[2, 1, 0]);
        assert!(p.leq(2, 0));
        assert!(p.leq(1, 0));
    }
}
