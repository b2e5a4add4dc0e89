//! Symbolic infinite posets with decidable order, and finite windows into them.
//!
//! Two built-in families:
//!
//! * `ladder`: columns `a(i,0) < a(i,1) < …`, one per `i`, whose suprema form the
//!   chain `b(0) < b(1) < …`, all below `top`. With `A = {a(i,j)}` the Scott
//!   closure of `A` is everything, yet `top` is not the supremum of any directed
//!   subset of `↓A`: the closure takes two steps.
//! * `omega`: `nat(0) < nat(1) < … < omega`, where `omega` is not compact.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::auxrel::AuxRelation;
use crate::budget::Budget;
use crate::closure::one_step;
use crate::error::Error;
use crate::poset::{Poset, RelationMode, MAX_DIRECTED_SCAN, MAX_ELEMENTS};
use crate::report::{ClosureReport, Report, Verdict, Witness};
use crate::set::ElementSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyElement {
    A(u64, u64),
    B(u64),
    Top,
    Nat(u64),
    Omega,
}

impl FamilyElement {
    fn max_index(&self) -> u64 {
        match *self {
            FamilyElement::A(i, j) => i.max(j),
            FamilyElement::B(i) | FamilyElement::Nat(i) => i,
            FamilyElement::Top | FamilyElement::Omega => 0,
        }
    }
}

impl fmt::Display for FamilyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyElement::A(i, j) => write!(f, "a({i},{j})"),
            FamilyElement::B(i) => write!(f, "b({i})"),
            FamilyElement::Top => f.write_str("top"),
            FamilyElement::Nat(k) => write!(f, "nat({k})"),
            FamilyElement::Omega => f.write_str("omega"),
        }
    }
}

impl Serialize for FamilyElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for FamilyElement {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self, Error> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("bad family term {text:?}"));
        let args = |prefix: &str| -> Result<Vec<u64>, Error> {
            let inner = t
                .strip_prefix(prefix)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(bad)?;
            inner.split(',').map(|x| x.parse().map_err(|_| bad())).collect()
        };
        match t.as_str() {
            "top" => return Ok(FamilyElement::Top),
            "omega" => return Ok(FamilyElement::Omega),
            _ => {}
        }
        match t.split('(').next() {
            Some("a") => match args("a")?.as_slice() {
                [i, j] => Ok(FamilyElement::A(*i, *j)),
                _ => Err(bad()),
            },
            Some("b") => match args("b")?.as_slice() {
                [i] => Ok(FamilyElement::B(*i)),
                _ => Err(bad()),
            },
            Some("nat") => match args("nat")?.as_slice() {
                [k] => Ok(FamilyElement::Nat(*k)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Ladder,
    Omega,
}

/// Distinguished subsets of a family, all defined from `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistinguishedSet {
    A,
    DownA,
    APrime,
    ScottClosureA,
}

impl FromStr for DistinguishedSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "A" => Ok(DistinguishedSet::A),
            "downA" => Ok(DistinguishedSet::DownA),
            "Aprime" => Ok(DistinguishedSet::APrime),
            "scott_closure_A" => Ok(DistinguishedSet::ScottClosureA),
            other => Err(Error::UnknownSet(other.to_string())),
        }
    }
}

/// A chain named by the family together with its supremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclaredChain {
    /// `a(i,0) < a(i,1) < …` with supremum `b(i)`.
    Column(u64),
    /// `b(0) < b(1) < …` with supremum `top`.
    BTier,
    /// `nat(0) < nat(1) < …` with supremum `omega`.
    Naturals,
}

impl DeclaredChain {
    pub fn member(&self, k: u64) -> FamilyElement {
        match *self {
            DeclaredChain::Column(i) => FamilyElement::A(i, k),
            DeclaredChain::BTier => FamilyElement::B(k),
            DeclaredChain::Naturals => FamilyElement::Nat(k),
        }
    }

    pub fn supremum(&self) -> FamilyElement {
        match *self {
            DeclaredChain::Column(i) => FamilyElement::B(i),
            DeclaredChain::BTier => FamilyElement::Top,
            DeclaredChain::Naturals => FamilyElement::Omega,
        }
    }
}

impl fmt::Display for DeclaredChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}, ... (sup {})", self.member(0), self.member(1), self.supremum())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "ladder" => Ok(Family::Ladder),
            "omega" => Ok(Family::Omega),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Ladder => "ladder",
            Family::Omega => "omega",
        })
    }
}

/// A finite window: a poset whose element `k` stands for `labels[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub family: Family,
    pub m: u64,
    pub n: u64,
    pub poset: Arc<Poset>,
    pub labels: Vec<FamilyElement>,
}

impl Window {
    pub fn index_of(&self, x: FamilyElement) -> Option<usize> {
        self.labels.iter().position(|&l| l == x)
    }

    pub fn set_where(&self, pred: impl Fn(FamilyElement) -> bool) -> ElementSet {
        let idx = self.labels.iter().enumerate().filter(|(_, &l)| pred(l)).map(|(k, _)| k);
        ElementSet::from_indices(self.labels.len(), idx).expect("window indices are in range")
    }

    pub fn terms(&self, s: ElementSet) -> Vec<FamilyElement> {
        s.iter().map(|k| self.labels[k]).collect()
    }
}

impl Family {
    pub fn belongs(&self, x: FamilyElement) -> bool {
        matches!(
            (self, x),
            (Family::Ladder, FamilyElement::A(..) | FamilyElement::B(_) | FamilyElement::Top)
                | (Family::Omega, FamilyElement::Nat(_) | FamilyElement::Omega)
        )
    }

    fn check(&self, x: FamilyElement) -> Result<(), Error> {
        if self.belongs(x) {
            Ok(())
        } else {
            Err(Error::ForeignElement {
                element: x.to_string(),
                family: self.to_string(),
            })
        }
    }

    pub fn order(&self, x: FamilyElement, y: FamilyElement) -> Result<bool, Error> {
        self.check(x)?;
        self.check(y)?;
        use FamilyElement::*;
        Ok(match (x, y) {
            (_, Top) => true,
            (A(i, j), A(k, l)) => i == k && j <= l,
            (A(i, _), B(k)) => i <= k,
            (B(i), B(k)) => i <= k,
            (Nat(j), Nat(k)) => j <= k,
            (_, Omega) => true,
            _ => false,
        })
    }

    pub fn membership(&self, set: DistinguishedSet, x: FamilyElement) -> Result<bool, Error> {
        self.check(x)?;
        use DistinguishedSet as D;
        use FamilyElement as E;
        Ok(match (set, x) {
            (D::A | D::DownA, E::A(..) | E::Nat(_)) => true,
            (D::A | D::DownA, _) => false,
            (D::APrime, E::Top) => false,
            (D::APrime, _) => true,
            (D::ScottClosureA, _) => true,
        })
    }

    /// Way-below on the omega family. The ladder's way-below relation is not
    /// analysed and returns [`Error::Unsupported`].
    pub fn way_below(&self, x: FamilyElement, y: FamilyElement) -> Result<bool, Error> {
        if *self == Family::Ladder {
            return Err(Error::Unsupported("way-below".into(), self.to_string()));
        }
        self.check(x)?;
        self.check(y)?;
        use FamilyElement::*;
        Ok(match (x, y) {
            (Nat(j), Nat(k)) => j <= k,
            (Nat(_), Omega) => true,
            _ => false,
        })
    }

    /// Declared chains that have at least one member in the `(m, n)` window.
    pub fn declared_chains(&self, m: u64) -> Vec<DeclaredChain> {
        match self {
            Family::Ladder => (0..=m).map(DeclaredChain::Column).chain([DeclaredChain::BTier]).collect(),
            Family::Omega => vec![DeclaredChain::Naturals],
        }
    }

    /// Whether `u` bounds every member of `chain`. The order rules only compare
    /// indices, so members past every index in sight behave like the last one checked.
    pub fn bounds_chain(&self, chain: DeclaredChain, u: FamilyElement, horizon: u64) -> Result<bool, Error> {
        let limit = horizon.max(u.max_index()) + 1;
        for k in 0..=limit {
            if !self.order(chain.member(k), u)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Window elements, in index order: ladder `a(i,j)` row-major for `i ≤ m, j ≤ n`,
    /// then `b(0..=m)`, then `top`; omega `nat(0..=n)`, then `omega`.
    pub fn window_labels(&self, m: u64, n: u64) -> Vec<FamilyElement> {
        match self {
            Family::Ladder => {
                let mut out = Vec::new();
                for i in 0..=m {
                    for j in 0..=n {
                        out.push(FamilyElement::A(i, j));
                    }
                }
                out.extend((0..=m).map(FamilyElement::B));
                out.push(FamilyElement::Top);
                out
            }
            Family::Omega => (0..=n).map(FamilyElement::Nat).chain([FamilyElement::Omega]).collect(),
        }
    }

    pub fn window_size(&self, m: u64, n: u64) -> u128 {
        let (m, n) = (m as u128, n as u128);
        match self {
            Family::Ladder => (m + 1) * (n + 1) + (m + 1) + 1,
            Family::Omega => n + 2,
        }
    }

    pub fn window(&self, m: u64, n: u64) -> Result<Window, Error> {
        let size = self.window_size(m, n);
        if size > MAX_ELEMENTS as u128 {
            return Err(Error::WindowTooLarge {
                size: usize::try_from(size).unwrap_or(usize::MAX),
                cap: MAX_ELEMENTS,
            });
        }
        let labels = self.window_labels(m, n);
        let poset = self.window_poset(&labels)?;
        Ok(Window {
            family: *self,
            m,
            n,
            poset: Arc::new(poset),
            labels,
        })
    }

    fn window_poset(&self, labels: &[FamilyElement]) -> Result<Poset, Error> {
        let mut pairs = Vec::new();
        for (a, &x) in labels.iter().enumerate() {
            for (b, &y) in labels.iter().enumerate() {
                if self.order(x, y)? {
                    pairs.push((a, b));
                }
            }
        }
        Poset::validate(labels.len(), &pairs, RelationMode::FullOrder)?
            .with_labels(labels.iter().map(|l| l.to_string()).collect())
    }

    /// Checks a window against the family's declared structure. See the module
    /// documentation for what each family is expected to exhibit.
    pub fn verify_window_soundness(&self, m: u64, n: u64) -> Result<ClosureReport, Error> {
        let w = self.window(m, n)?;
        let p = &w.poset;
        let size = w.labels.len();
        let horizon = m.max(n);
        let mut report = Report::new(format!("{self} window ({m}, {n})"), format!("{size} window elements"));

        let axioms = Poset::validate(size, &p.order_pairs(), RelationMode::FullOrder).err();
        report.push(Verdict::from_witness(
            "window.order-axioms",
            "window order",
            axioms.map(|e| vec![Witness::note(e.to_string())]),
        ));

        let mut embed = None;
        let mut sorted = w.labels.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != size {
            embed = Some(vec![Witness::note("labelling is not injective")]);
        }
        'embed: for x in 0..size {
            for y in 0..size {
                if p.leq(x, y) != self.order(w.labels[x], w.labels[y])? {
                    embed = Some(vec![Witness::Pair { x, y }]);
                    break 'embed;
                }
            }
        }
        report.push(Verdict::from_witness("window.embedding", "window pairs", embed));

        let chains = self.declared_chains(m);
        let mut sup_bad = None;
        'sups: for chain in &chains {
            let s = chain.supremum();
            if !self.bounds_chain(*chain, s, horizon)? {
                sup_bad = Some(vec![Witness::note(format!("{s} does not bound {chain}"))]);
                break;
            }
            for &u in &w.labels {
                if self.bounds_chain(*chain, u, horizon)? && !self.order(s, u)? {
                    sup_bad = Some(vec![Witness::note(format!("{u} bounds {chain} but is not above {s}"))]);
                    break 'sups;
                }
            }
        }
        report.push(Verdict::from_witness("window.declared-suprema", "declared chains", sup_bad));

        // A, ↓A and A′ on the window, with A′ = finite one-step part plus the
        // declared suprema of chains lying in ↓A.
        let a_w = w.set_where(|x| self.membership(DistinguishedSet::A, x).unwrap_or(false));
        let down_w = p.down_closure(a_w);
        let mut distinguished = None;
        for k in 0..size {
            let x = w.labels[k];
            if self.membership(DistinguishedSet::A, x)? != a_w.contains(k)
                || self.membership(DistinguishedSet::DownA, x)? != down_w.contains(k)
            {
                distinguished = Some(vec![Witness::Element { x: k }]);
                break;
            }
        }
        report.push(Verdict::from_witness("window.distinguished-sets", "window elements", distinguished));

        let literal = down_w.len() <= MAX_DIRECTED_SCAN;
        let finite_part = if literal { one_step(p, a_w)? } else { down_w };
        report.fact("finite-one-step-literal", literal);
        let complete = |s: ElementSet| -> ElementSet {
            chains.iter().fold(s, |acc, chain| {
                let members: Vec<usize> = (0..size)
                    .filter(|&k| (0..=horizon).any(|j| w.labels[k] == chain.member(j)))
                    .collect();
                match w.index_of(chain.supremum()) {
                    Some(sup) if !members.is_empty() && members.iter().all(|&k| s.contains(k)) => acc.with(sup),
                    _ => acc,
                }
            })
        };
        let prime_w = complete(finite_part);
        let mut prime_bad = None;
        for k in prime_w.iter() {
            if !self.membership(DistinguishedSet::APrime, w.labels[k])? {
                prime_bad = Some(vec![Witness::Element { x: k }]);
                break;
            }
        }
        report.push(Verdict::from_witness("window.one-step-consistency", "window A′", prime_bad));

        match self {
            Family::Ladder => {
                let second = complete(prime_w);
                let top = w.index_of(FamilyElement::Top).expect("ladder windows contain top");
                let two_step = second.contains(top)
                    && !prime_w.contains(top)
                    && !self.membership(DistinguishedSet::APrime, FamilyElement::Top)?
                    && self.membership(DistinguishedSet::ScottClosureA, FamilyElement::Top)?;
                report.fact("one-step-closure", !two_step);
                report.push(Verdict::from_witness(
                    "window.two-step-closure",
                    "top",
                    (!two_step).then(|| vec![Witness::set(second)]),
                ));
            }
            Family::Omega => self.verify_omega(&w, horizon, &mut report)?,
        }
        Ok(report)
    }

    fn verify_omega(&self, w: &Window, horizon: u64, report: &mut Report) -> Result<(), Error> {
        let p = &w.poset;
        let size = w.labels.len();
        let wb = AuxRelation::way_below(p.clone(), Budget::UNLIMITED)?;
        let chain = DeclaredChain::Naturals;
        let sup = chain.supremum();

        // Pairs whose answer depends on the infinite chain: y is its supremum and x
        // lies above every member. Those are checked against the chain itself.
        let needs_chain = |x: FamilyElement, y: FamilyElement| -> Result<bool, Error> {
            Ok(y == sup && !(0..=horizon + 1).any(|k| self.order(x, chain.member(k)).unwrap_or(false)))
        };
        let mut agree = None;
        let mut analytic = None;
        for x in 0..size {
            for y in 0..size {
                let (fx, fy) = (w.labels[x], w.labels[y]);
                let family = self.way_below(fx, fy)?;
                if needs_chain(fx, fy)? {
                    // The chain is directed with supremum y and no member above x.
                    if family && analytic.is_none() {
                        analytic = Some(vec![Witness::Pair { x, y }]);
                    }
                } else if family != wb.relates(x, y) && agree.is_none() {
                    agree = Some(vec![Witness::Pair { x, y }]);
                }
            }
        }
        report.push(Verdict::from_witness("window.way-below-agreement", "window pairs", agree));
        report.push(Verdict::from_witness("window.way-below-analytic", "pairs above the chain", analytic));

        // int_σ(↑x) against ↟x. ↑x is Scott open unless some declared chain has its
        // supremum in ↑x and no member there; ↑omega = {omega} is such a set, and its
        // only other subset is ∅.
        let up_is_open = |x: FamilyElement| -> Result<bool, Error> {
            Ok(!self.order(x, sup)? || (0..=horizon + 1).any(|k| self.order(x, chain.member(k)).unwrap_or(false)))
        };
        let mut interior_bad = None;
        for x in 0..size {
            let fx = w.labels[x];
            let up_open = up_is_open(fx)?;
            let up = p.up_of(x);
            let interior = if up_open {
                up
            } else if up.len() == 1 {
                p.empty_set()
            } else {
                return Err(Error::Unsupported(format!("Scott interior of ↑{fx}"), self.to_string()));
            };
            let way_above = w.set_where(|y| self.way_below(fx, y).unwrap_or(false));
            if interior != way_above {
                interior_bad = Some(vec![Witness::SetPair { a: interior, b: way_above }]);
                break;
            }
        }
        report.push(Verdict::from_witness("window.interior-of-up-is-way-above", "window elements", interior_bad));

        let omega = w.index_of(FamilyElement::Omega).expect("omega windows contain omega");
        let up_omega = p.up_of(omega);
        let way_above_omega = w.set_where(|y| self.way_below(FamilyElement::Omega, y).unwrap_or(false));
        let interior_omega = if up_is_open(FamilyElement::Omega)? {
            up_omega
        } else {
            p.empty_set()
        };
        let ok = up_omega == ElementSet::singleton(size, omega) && interior_omega.is_empty() && way_above_omega.is_empty();
        report.push(Verdict::from_witness(
            "window.omega-interior-empty",
            "omega",
            (!ok).then(|| vec![Witness::SetPair { a: interior_omega, b: way_above_omega }]),
        ));
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use FamilyElement::*;

    #[test]
    fn terms_round_trip() {
        for t in ["a(2,7)", "b(0)", "top", "nat(4)", "omega"] {
            assert_eq!(t.parse::<FamilyElement>().unwrap().to_string(), t);
        }
        assert_eq!("a( 1, 3 )".parse::<FamilyElement>().unwrap(), A(1, 3));
        for bad in ["a(1)", "c(2)", "b(x)", "nat()", "a(1,2"] {
            assert!(bad.parse::<FamilyElement>().is_err(), "{bad}");
        }
        assert_eq!(serde_json::to_string(&A(0, 1)).unwrap(), "\"a(0,1)\"");
    }

    #[test]
    fn order_examples() {
        let l = Family::Ladder;
        assert!(l.order(A(1, 3), B(2)).unwrap());
        assert!(!l.order(B(2), B(1)).unwrap());
        assert!(!l.order(A(0, 1), A(1, 1)).unwrap());
        assert!(Family::Omega.order(Nat(5), Omega).unwrap());
        assert!(matches!(l.order(Nat(1), Top), Err(Error::ForeignElement { .. })));
    }

    #[test]
    fn membership_examples() {
        let l = Family::Ladder;
        assert!(l.membership(DistinguishedSet::APrime, B(3)).unwrap());
        assert!(!l.membership(DistinguishedSet::APrime, Top).unwrap());
        assert!(l.membership(DistinguishedSet::ScottClosureA, Top).unwrap());
        assert!(l.membership(DistinguishedSet::DownA, A(0, 0)).unwrap());
        assert_eq!("Bprime".parse::<DistinguishedSet>(), Err(Error::UnknownSet("Bprime".into())));
    }

    #[test]
    fn way_below_examples() {
        let o = Family::Omega;
        assert!(o.way_below(Nat(3), Omega).unwrap());
        assert!(!o.way_below(Omega, Omega).unwrap());
        assert!(o.way_below(Nat(2), Nat(2)).unwrap());
        assert!(matches!(Family::Ladder.way_below(Top, Top), Err(Error::Unsupported(..))));
    }

    #[test]
    fn window_examples() {
        assert_eq!(Family::Ladder.window(1, 1).unwrap().labels.len(), 7);
        let o = Family::Omega.window(0, 3).unwrap();
        assert_eq!(o.labels.len(), 5);
        assert_eq!(o.poset.covers().len(), 4);
        let w = Family::Ladder.window(0, 0).unwrap();
        assert_eq!(w.labels, vec![A(0, 0), B(0), Top]);
        assert_eq!(w.poset.covers(), vec![(0, 1), (1, 2)]);
        assert_eq!(w.poset.label(1), "b(0)");
        assert!(matches!(Family::Ladder.window(10, 10), Err(Error::WindowTooLarge { size: 133, .. })));
    }

    #[test]
    fn soundness_examples() {
        for (m, n) in [(0, 0), (1, 2), (4, 4)] {
            let rep = Family::Ladder.verify_window_soundness(m, n).unwrap();
            assert!(rep.passed(), "{rep:?}");
            assert_eq!(rep.fact_value("one-step-closure"), Some(false));
        }
        let rep = Family::Omega.verify_window_soundness(0, 8).unwrap();
        assert!(rep.passed(), "{rep:?}");
    }
}
