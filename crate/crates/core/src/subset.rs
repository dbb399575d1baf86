use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ElementId;

/// A subset of a finite carrier of at most [`crate::CARRIER_CAP`] elements.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[derive(Serialize, Deserialize)]
#[serde(into = "Vec<ElementId>", from = "Vec<ElementId>")]
pub struct SubsetMask(u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn from_bits(bits: u32) -> Self {
        SubsetMask(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(x: ElementId) -> Self {
        SubsetMask(1 << x)
    }

    /// The whole carrier `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 32 {
            SubsetMask(u32::MAX)
        } else {
            SubsetMask((1u32 << n) - 1)
        }
    }

    pub fn contains(self, x: ElementId) -> bool {
        x < 32 && self.0 & (1 << x) != 0
    }

    pub fn insert(&mut self, x: ElementId) {
        self.0 |= 1 << x;
    }

    pub fn remove(&mut self, x: ElementId) {
        self.0 &= !(1 << x);
    }

    pub fn with(self, x: ElementId) -> Self {
        SubsetMask(self.0 | 1 << x)
    }

    pub fn union(self, other: Self) -> Self {
        SubsetMask(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        SubsetMask(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        SubsetMask(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// The single member, if the set is a singleton.
    pub fn as_singleton(self) -> Option<ElementId> {
        (self.len() == 1).then(|| self.0.trailing_zeros() as usize)
    }

    /// Smallest member.
    pub fn first(self) -> Option<ElementId> {
        (!self.is_empty()).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Members {
        Members(self.0)
    }

    /// Image of the set under an index map.
    pub fn map(self, f: impl Fn(ElementId) -> ElementId) -> Self {
        self.iter().map(f).collect()
    }

    /// All subsets of `{0, .., n-1}` in increasing bit order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = SubsetMask> {
        (0..1u64 << n).map(|b| SubsetMask(b as u32))
    }

    /// Render with display labels, e.g. `{-1, 0, 1}`.
    pub fn display_with<S: AsRef<str>>(self, labels: &[S]) -> String {
        let names: Vec<&str> = self.iter().map(|x| labels[x].as_ref()).collect();
        format!("{{{}}}", names.join(", "))
    }
}

pub struct Members(u32);

impl Iterator for Members {
    type Item = ElementId;

    fn next(&mut self) -> Option<ElementId> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl IntoIterator for SubsetMask {
    type Item = ElementId;
    type IntoIter = Members;

    fn into_iter(self) -> Members {
        self.iter()
    }
}

impl FromIterator<ElementId> for SubsetMask {
    fn from_iter<I: IntoIterator<Item = ElementId>>(iter: I) -> Self {
        let mut m = SubsetMask::EMPTY;
        for x in iter {
            m.insert(x);
        }
        m
    }
}

impl From<SubsetMask> for Vec<ElementId> {
    fn from(m: SubsetMask) -> Self {
        m.iter().collect()
    }
}

impl From<Vec<ElementId>> for SubsetMask {
    fn from(v: Vec<ElementId>) -> Self {
        v.into_iter().collect()
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
