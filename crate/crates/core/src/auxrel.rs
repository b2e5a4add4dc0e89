//! Auxiliary relations on a finite poset.
//!
//! A relation `≺` is stored by column: row `j` is the section `s≺(j) = {i : i ≺ j}`,
//! because every operator downstream consumes sections. The upper section
//! `s≻(x) = {y : x ≺ y}` is a transpose, computed on demand.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{AuxAxiom, Error};
use crate::poset::{Poset, MAX_DIRECTED_SCAN};
use crate::set::ElementSet;

/// Largest number of `≤`-pairs whose subsets `enumerate_aux` will scan.
pub const MAX_AUX_SCAN_PAIRS: usize = 24;

#[derive(Clone)]
pub struct AuxRelation {
    poset: Arc<Poset>,
    below: Vec<u128>,
}

impl PartialEq for AuxRelation {
    fn eq(&self, other: &Self) -> bool {
        self.below == other.below && (Arc::ptr_eq(&self.poset, &other.poset) || self.poset == other.poset)
    }
}

impl Eq for AuxRelation {}

impl fmt::Debug for AuxRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AuxRelation{:?}", self.pairs())
    }
}

impl fmt::Display for AuxRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (i, j)) in self.pairs().into_iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "({i},{j})")?;
        }
        f.write_str("}")
    }
}

/// Classification of an auxiliary relation, with a witness for each failed flag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuxClass {
    pub pre_approximating: bool,
    pub approximating: bool,
    pub has_int: bool,
    /// Element whose lower section is not directed.
    pub pre_witness: Option<usize>,
    /// Element whose lower section is not directed or does not have it as supremum.
    pub approx_witness: Option<usize>,
    /// Pair `x ≺ z` with nothing strictly interpolating.
    pub int_witness: Option<(usize, usize)>,
}

fn rows_from_pairs(poset: &Poset, pairs: &[(usize, usize)]) -> Result<Vec<u128>, Error> {
    let n = poset.len();
    let mut below = vec![0u128; n];
    for &(i, j) in pairs {
        for index in [i, j] {
            if index >= n {
                return Err(Error::IndexOutOfRange { index, n });
            }
        }
        below[j] |= 1u128 << i;
    }
    Ok(below)
}

/// First violated axiom, scanning axioms in numeric order.
fn axiom_violation(poset: &Poset, below: &[u128]) -> Option<(AuxAxiom, (usize, usize))> {
    let n = poset.len();
    for (j, row) in below.iter().enumerate() {
        let stray = *row & !poset.down_of(j).bits();
        if stray != 0 {
            return Some((AuxAxiom::BelowOrder, (stray.trailing_zeros() as usize, j)));
        }
    }
    for y in 0..n {
        for x in ElementSet::raw(n, below[y]).iter() {
            for z in poset.up_of(y).iter() {
                let missing = poset.down_of(x).bits() & !below[z];
                if missing != 0 {
                    return Some((AuxAxiom::Saturation, (missing.trailing_zeros() as usize, z)));
                }
            }
        }
    }
    if let Some(b) = poset.bottom() {
        if let Some(x) = (0..n).find(|&x| below[x] >> b & 1 == 0) {
            return Some((AuxAxiom::Bottom, (b, x)));
        }
    }
    None
}

/// Smallest auxiliary relation containing the rows: bottom column, then
/// `↓x × ↑y` for every related pair. One pass is already closed under axiom 2.
fn close_rows(poset: &Poset, seed: &[u128]) -> Vec<u128> {
    let n = poset.len();
    let mut below = vec![0u128; n];
    if let Some(b) = poset.bottom() {
        for row in below.iter_mut() {
            *row |= 1u128 << b;
        }
    }
    for (y, &row) in seed.iter().enumerate().take(n) {
        for x in ElementSet::raw(n, row).iter() {
            let d = poset.down_of(x).bits();
            for z in poset.up_of(y).iter() {
                below[z] |= d;
            }
        }
    }
    below
}

impl AuxRelation {
    /// Checks the three axioms on the pairs `(i, j)` meaning `i ≺ j`.
    pub fn validate(poset: Arc<Poset>, pairs: &[(usize, usize)]) -> Result<AuxRelation, Error> {
        let below = rows_from_pairs(&poset, pairs)?;
        if let Some((axiom, witness)) = axiom_violation(&poset, &below) {
            return Err(Error::AuxAxiom { axiom, witness });
        }
        Ok(AuxRelation { poset, below })
    }

    /// The smallest auxiliary relation containing `seed`.
    pub fn closure(poset: Arc<Poset>, seed: &[(usize, usize)]) -> Result<AuxRelation, Error> {
        let rows = rows_from_pairs(&poset, seed)?;
        for &(i, j) in seed {
            if !poset.leq(i, j) {
                return Err(Error::SeedViolatesOrder((i, j)));
            }
        }
        let below = close_rows(&poset, &rows);
        Ok(AuxRelation { poset, below })
    }

    /// The order itself, the top of `Aux(P)`.
    pub fn leq(poset: Arc<Poset>) -> AuxRelation {
        let below = (0..poset.len()).map(|j| poset.down_of(j).bits()).collect();
        AuxRelation { poset, below }
    }

    /// The least auxiliary relation: `⊥ ≺ x` for all `x` when `⊥` exists, empty otherwise.
    pub fn bottom(poset: Arc<Poset>) -> AuxRelation {
        let seed = vec![0u128; poset.len()];
        let below = close_rows(&poset, &seed);
        AuxRelation { poset, below }
    }

    /// The way-below relation, straight from its definition: `x ≪ y` iff every
    /// directed `D` with `⋁D ≥ y` meets `↑x`.
    pub fn way_below(poset: Arc<Poset>, budget: Budget) -> Result<AuxRelation, Error> {
        let n = poset.len();
        if n > MAX_DIRECTED_SCAN {
            return Err(Error::UniverseTooLarge {
                n,
                cap: MAX_DIRECTED_SCAN,
            });
        }
        let mut below = vec![poset.universe().bits(); n];
        for d in poset.enumerate_directed_subsets(budget)? {
            if let Some(sup) = poset.supremum(d) {
                let allowed = poset.down_closure(d).bits();
                for y in poset.down_of(sup).iter() {
                    below[y] &= allowed;
                }
            }
        }
        Ok(AuxRelation { poset, below })
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.below.iter().all(|r| *r == 0)
    }

    /// `x ≺ y`.
    #[inline]
    pub fn relates(&self, x: usize, y: usize) -> bool {
        self.below[y] >> x & 1 == 1
    }

    /// `s≺(x) = {y : y ≺ x}`.
    #[inline]
    pub fn section_below(&self, x: usize) -> ElementSet {
        ElementSet::raw(self.len(), self.below[x])
    }

    /// `s≻(x) = {y : x ≺ y}`.
    pub fn section_above(&self, x: usize) -> ElementSet {
        let bits = (0..self.len())
            .filter(|&y| self.relates(x, y))
            .fold(0u128, |acc, y| acc | 1u128 << y);
        ElementSet::raw(self.len(), bits)
    }

    pub fn below_rows(&self) -> &[u128] {
        &self.below
    }

    /// Sorted pairs `(i, j)` with `i ≺ j`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.len())
            .flat_map(|j| self.section_below(j).iter().map(move |i| (i, j)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Re-checks the axioms; `Ok` for every relation built through this module.
    pub fn check_axioms(&self) -> Result<(), Error> {
        match axiom_violation(&self.poset, &self.below) {
            Some((axiom, witness)) => Err(Error::AuxAxiom { axiom, witness }),
            None => Ok(()),
        }
    }

    pub fn is_subrelation(&self, other: &AuxRelation) -> bool {
        self.below.iter().zip(&other.below).all(|(a, b)| a & !b == 0)
    }

    fn same_poset(&self, other: &AuxRelation) -> Result<(), Error> {
        if Arc::ptr_eq(&self.poset, &other.poset) || self.poset == other.poset {
            Ok(())
        } else {
            Err(Error::PosetMismatch)
        }
    }

    pub fn union(&self, other: &AuxRelation) -> Result<AuxRelation, Error> {
        self.same_poset(other)?;
        let below = self.below.iter().zip(&other.below).map(|(a, b)| a | b).collect();
        Ok(AuxRelation {
            poset: self.poset.clone(),
            below,
        })
    }

    pub fn intersection(&self, other: &AuxRelation) -> Result<AuxRelation, Error> {
        self.same_poset(other)?;
        let below = self.below.iter().zip(&other.below).map(|(a, b)| a & b).collect();
        Ok(AuxRelation {
            poset: self.poset.clone(),
            below,
        })
    }

    pub fn classify(&self) -> AuxClass {
        let n = self.len();
        let p = &self.poset;
        let pre_witness = (0..n).find(|&x| !p.is_directed(self.section_below(x)));
        let approx_witness =
            (0..n).find(|&x| !p.is_directed(self.section_below(x)) || p.supremum(self.section_below(x)) != Some(x));
        let above: Vec<ElementSet> = (0..n).map(|x| self.section_above(x)).collect();
        let mut int_witness = None;
        'outer: for z in 0..n {
            for x in self.section_below(z).iter() {
                if !above[x].intersects(&self.section_below(z)) {
                    int_witness = Some((x, z));
                    break 'outer;
                }
            }
        }
        AuxClass {
            pre_approximating: pre_witness.is_none(),
            approximating: approx_witness.is_none(),
            has_int: int_witness.is_none(),
            pre_witness,
            approx_witness,
            int_witness,
        }
    }
}

/// Every auxiliary relation on `poset`: subsets of the `≤`-pairs that equal their
/// own closure, in ascending subset order over the sorted `≤`-pairs.
pub fn enumerate_aux(poset: &Arc<Poset>, budget: Budget) -> Result<Vec<AuxRelation>, Error> {
    let pairs = poset.order_pairs();
    if pairs.len() > MAX_AUX_SCAN_PAIRS {
        return Err(Error::budget(
            format!("{} order pairs to scan for auxiliary relations", pairs.len()),
            MAX_AUX_SCAN_PAIRS as u64,
        ));
    }
    let n = poset.len();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut rows = vec![0u128; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                rows[j] |= 1u128 << i;
            }
        }
        if close_rows(poset, &rows) == rows {
            out.push(AuxRelation {
                poset: poset.clone(),
                below: rows,
            });
            budget.check(out.len() as u64, "auxiliary relations")?;
        }
    }
    Ok(out)
}

/// Closure of a seeded random subset of the `≤`-pairs. The keep probability is
/// itself drawn first so samples spread between the bottom relation and `≤`.
pub fn sample_aux(poset: &Arc<Poset>, seed: u64) -> AuxRelation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let keep: f64 = rng.gen();
    let mut rows = vec![0u128; poset.len()];
    for (i, j) in poset.order_pairs() {
        if rng.gen_bool(keep) {
            rows[j] |= 1u128 << i;
        }
    }
    let below = close_rows(poset, &rows);
    AuxRelation {
        poset: poset.clone(),
        below,
    }
}
