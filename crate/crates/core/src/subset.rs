//! Subsets of the ground set `1..=n` packed into a single machine word.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Largest supported ground set.
pub const MAX_GROUND: usize = 64;

/// A subset of the labels `1..=n`, stored as a characteristic bit vector.
///
/// Label `e` lives in bit `e - 1`. Iteration and display are always in
/// ascending label order.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSubset(u64);

impl GroundSubset {
    pub const EMPTY: GroundSubset = GroundSubset(0);

    pub const fn from_mask(mask: u64) -> Self {
        GroundSubset(mask)
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    /// The full ground set `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        assert!(
            n <= MAX_GROUND,
            "ground set of size {n} exceeds {MAX_GROUND}"
        );
        if n == MAX_GROUND {
            GroundSubset(u64::MAX)
        } else {
            GroundSubset((1u64 << n) - 1)
        }
    }

    pub fn singleton(label: usize) -> Self {
        debug_assert!((1..=MAX_GROUND).contains(&label));
        GroundSubset(1u64 << (label - 1))
    }

    /// Builds a subset of `1..=n`, rejecting labels out of range.
    pub fn from_labels<I: IntoIterator<Item = usize>>(n: usize, labels: I) -> Result<Self, Error> {
        let mut mask = 0u64;
        for label in labels {
            if label == 0 || label > n {
                return Err(Error::LabelOutOfRange { label, n });
            }
            mask |= 1u64 << (label - 1);
        }
        Ok(GroundSubset(mask))
    }

    /// Parses a comma-separated label list such as `4,5,6,7`. The empty
    /// string (or `-`) denotes the empty set.
    pub fn parse_list(n: usize, text: &str) -> Result<Self, Error> {
        let text = text.trim();
        if text.is_empty() || text == "-" {
            return Ok(GroundSubset::EMPTY);
        }
        let labels = text
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::BadSetArgument(text.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        GroundSubset::from_labels(n, labels)
    }

    pub fn contains(self, label: usize) -> bool {
        (1..=MAX_GROUND).contains(&label) && self.0 & (1u64 << (label - 1)) != 0
    }

    pub fn insert(self, label: usize) -> Self {
        self | GroundSubset::singleton(label)
    }

    pub fn remove(self, label: usize) -> Self {
        self - GroundSubset::singleton(label)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: GroundSubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: GroundSubset) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest label, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Largest label, if any.
    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| MAX_GROUND - self.0.leading_zeros() as usize)
    }

    /// True when every set bit is a label in `1..=n`.
    pub fn within(self, n: usize) -> bool {
        self.is_subset(GroundSubset::full(n))
    }

    pub fn iter(self) -> Labels {
        Labels(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Lexicographic comparison of the ascending label lists.
    pub fn lex_cmp(self, other: GroundSubset) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }

    /// All subsets of `self`, in increasing mask order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            of: self.0,
            next: Some(0),
        }
    }

    /// Renders as `{2,3,5}`.
    pub fn braced(self) -> String {
        format!("{self}")
    }

    /// Renders as the bare label list `2,3,5` used on the command line.
    pub fn comma_list(self) -> String {
        self.iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for GroundSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.comma_list())
    }
}

impl fmt::Debug for GroundSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::ops::BitOr for GroundSubset {
    type Output = Self;
    fn bitor(self, rhs: Self) -> Self {
        GroundSubset(self.0 | rhs.0)
    }
}

impl std::ops::BitAnd for GroundSubset {
    type Output = Self;
    fn bitand(self, rhs: Self) -> Self {
        GroundSubset(self.0 & rhs.0)
    }
}

impl std::ops::BitXor for GroundSubset {
    type Output = Self;
    fn bitxor(self, rhs: Self) -> Self {
        GroundSubset(self.0 ^ rhs.0)
    }
}

impl std::ops::Sub for GroundSubset {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        GroundSubset(self.0 & !rhs.0)
    }
}

impl std::ops::BitOrAssign for GroundSubset {
    fn bitor_assign(&mut self, rhs: Self) {
        self.0 |= rhs.0;
    }
}

impl FromIterator<usize> for GroundSubset {
    /// Panics on label 0 or labels above 64; use [`GroundSubset::from_labels`]
    /// for untrusted input.
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter()
            .fold(GroundSubset::EMPTY, |acc, e| acc.insert(e))
    }
}

impl IntoIterator for GroundSubset {
    type Item = usize;
    type IntoIter = Labels;
    fn into_iter(self) -> Labels {
        self.iter()
    }
}

/// Serialized as the ascending label list.
impl Serialize for GroundSubset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for GroundSubset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(d)?;
        GroundSubset::from_labels(MAX_GROUND, labels).map_err(serde::de::Error::custom)
    }
}

/// Ascending label iterator.
#[derive(Clone)]
pub struct Labels(u64);

impl Iterator for Labels {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(tz + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Labels {}

/// Submask enumeration in increasing order.
pub struct Subsets {
    of: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = GroundSubset;

    fn next(&mut self) -> Option<GroundSubset> {
        let cur = self.next?;
        // Standard "next submask" step: (cur - of) & of, wrapping to 0 at the end.
        let succ = cur.wrapping_sub(self.of) & self.of;
        self.next = (succ != 0).then_some(succ);
        Some(GroundSubset(cur))
    }
}

/// All `k`-element subsets of `1..=n` in increasing mask order.
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = GroundSubset> {
    GroundSubset::full(n)
        .subsets()
        .filter(move |s| s.len() == k)
}
