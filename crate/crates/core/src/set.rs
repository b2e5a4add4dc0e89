//! Subsets of a finite universe, stored as a single bit mask.

use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::Error;

/// Largest universe an [`ElementSet`] can describe.
pub const MAX_UNIVERSE: usize = 128;

/// A subset of `{0, .., n-1}`.
///
/// Ordering is by bit value first, which is the emission order used by every
/// enumeration in the crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    bits: u128,
    universe: u8,
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

impl ElementSet {
    pub fn empty(n: usize) -> Self {
        debug_assert!(n <= MAX_UNIVERSE);
        ElementSet {
            bits: 0,
            universe: n as u8,
        }
    }

    pub fn full(n: usize) -> Self {
        ElementSet {
            bits: full_mask(n),
            universe: n as u8,
        }
    }

    pub fn singleton(n: usize, x: usize) -> Self {
        debug_assert!(x < n);
        ElementSet {
            bits: 1u128 << x,
            universe: n as u8,
        }
    }

    /// Builds a set from raw bits; bits outside the universe are an error.
    pub fn from_bits(n: usize, bits: u128) -> Result<Self, Error> {
        if n > MAX_UNIVERSE {
            return Err(Error::UniverseTooLarge { n, cap: MAX_UNIVERSE });
        }
        if bits & !full_mask(n) != 0 {
            let index = (bits & !full_mask(n)).trailing_zeros() as usize;
            return Err(Error::IndexOutOfRange { index, n });
        }
        Ok(ElementSet {
            bits,
            universe: n as u8,
        })
    }

    /// Unchecked variant for internal loops; masks stray bits away.
    #[inline]
    pub(crate) fn raw(n: usize, bits: u128) -> Self {
        ElementSet {
            bits: bits & full_mask(n),
            universe: n as u8,
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, indices: I) -> Result<Self, Error> {
        let mut bits = 0u128;
        for i in indices {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            bits |= 1u128 << i;
        }
        Ok(ElementSet {
            bits,
            universe: n as u8,
        })
    }

    /// Parses the CLI form: a comma-separated index list such as `"0,2"`.
    /// The empty string (or `"{}"`) denotes the empty set.
    pub fn parse(n: usize, text: &str) -> Result<Self, Error> {
        let trimmed = text.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if trimmed.is_empty() {
            return Ok(ElementSet::empty(n));
        }
        let mut indices = Vec::new();
        for piece in trimmed.split(',') {
            let piece = piece.trim();
            let i: usize = piece
                .parse()
                .map_err(|_| Error::Parse(format!("bad element index {piece:?} in set {text:?}")))?;
            indices.push(i);
        }
        ElementSet::from_indices(n, indices)
    }

    #[inline]
    pub fn bits(&self) -> u128 {
        self.bits
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe as usize
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x < 128 && self.bits >> x & 1 == 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.bits == full_mask(self.universe())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.bits & !other.bits == 0
    }

    #[inline]
    pub fn intersects(&self, other: &ElementSet) -> bool {
        self.bits & other.bits != 0
    }

    pub fn with(mut self, x: usize) -> Self {
        debug_assert!(x < self.universe());
        self.bits |= 1u128 << x;
        self
    }

    pub fn without(mut self, x: usize) -> Self {
        self.bits &= !(1u128 << x);
        self
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        if self.bits == 0 {
            None
        } else {
            Some(self.bits.trailing_zeros() as usize)
        }
    }

    pub fn iter(&self) -> Members {
        Members { bits: self.bits }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Every subset of `self`, in ascending bit order, starting with the empty set.
    pub fn subsets(&self) -> Subsets {
        Subsets {
            set: self.bits,
            next: Some(0),
            universe: self.universe,
        }
    }
}

/// Iterator over members in ascending index order.
#[derive(Clone)]
pub struct Members {
    bits: u128,
}

impl Iterator for Members {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let i = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.bits.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Members {}

/// Subsets of a mask via the carry-rippler step `s' = (s - mask) & mask`.
pub struct Subsets {
    set: u128,
    next: Option<u128>,
    universe: u8,
}

impl Iterator for Subsets {
    type Item = ElementSet;

    fn next(&mut self) -> Option<ElementSet> {
        let current = self.next?;
        let following = current.wrapping_sub(self.set) & self.set;
        self.next = if following == 0 { None } else { Some(following) };
        Some(ElementSet {
            bits: current,
            universe: self.universe,
        })
    }
}

impl BitOr for ElementSet {
    type Output = ElementSet;
    #[inline]
    fn bitor(self, rhs: ElementSet) -> ElementSet {
        debug_assert_eq!(self.universe, rhs.universe);
        ElementSet {
            bits: self.bits | rhs.bits,
            universe: self.universe,
        }
    }
}

impl BitAnd for ElementSet {
    type Output = ElementSet;
    #[inline]
    fn bitand(self, rhs: ElementSet) -> ElementSet {
        debug_assert_eq!(self.universe, rhs.universe);
        ElementSet {
            bits: self.bits & rhs.bits,
            universe: self.universe,
        }
    }
}

impl Sub for ElementSet {
    type Output = ElementSet;
    #[inline]
    fn sub(self, rhs: ElementSet) -> ElementSet {
        debug_assert_eq!(self.universe, rhs.universe);
        ElementSet {
            bits: self.bits & !rhs.bits,
            universe: self.universe,
        }
    }
}

/// Complement relative to the universe.
impl Not for ElementSet {
    type Output = ElementSet;
    #[inline]
    fn not(self) -> ElementSet {
        ElementSet {
            bits: !self.bits & full_mask(self.universe()),
            universe: self.universe,
        }
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}/{}", self.universe)
    }
}

/// Serializes as the sorted index list.
impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for i in self.iter() {
            seq.serialize_element(&i)?;
        }
        seq.end()
    }
}
