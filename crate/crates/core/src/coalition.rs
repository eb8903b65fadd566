//! Coalitions as agent bitmasks.
//!
//! Bit `i` set means agent `i` (0-based) is a member. Iteration over
//! coalitions is always in ascending bitmask order, which fixes the order in
//! which witnesses are found. For display, agents are labelled 1-based in set
//! notation (`{1,3}`).

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn from_mask(mask: u32) -> Self {
        Coalition(mask)
    }

    pub fn grand(n: usize) -> Self {
        debug_assert!(n <= 31);
        Coalition(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(agent: usize) -> Self {
        Coalition(1 << agent)
    }

    pub fn from_members(members: impl IntoIterator<Item = usize>) -> Self {
        Coalition(members.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, agent: usize) -> bool {
        self.0 >> agent & 1 == 1
    }

    pub fn with(self, agent: usize) -> Self {
        Coalition(self.0 | (1 << agent))
    }

    pub fn without(self, agent: usize) -> Self {
        Coalition(self.0 & !(1 << agent))
    }

    pub fn union(self, other: Self) -> Self {
        Coalition(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Coalition(self.0 & other.0)
    }

    pub fn minus(self, other: Self) -> Self {
        Coalition(self.0 & !other.0)
    }

    pub fn complement(self, n: usize) -> Self {
        Coalition::grand(n).minus(self)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in ascending order.
    pub fn members(self) -> Members {
        Members(self.0)
    }

    /// Position of `agent` among the members (its rank in ascending order).
    pub fn position(self, agent: usize) -> Option<usize> {
        self.contains(agent)
            .then(|| (self.0 & ((1u32 << agent) - 1)).count_ones() as usize)
    }

    /// All subsets of `self`, ascending by bitmask, including `∅` and `self`.
    pub fn subsets(self) -> Subsets {
        Subsets {
            universe: self.0,
            next: Some(0),
        }
    }

    /// Every coalition of an `n`-agent game, ascending, starting at `∅`.
    pub fn all(n: usize) -> impl Iterator<Item = Coalition> {
        (0..1u32 << n).map(Coalition)
    }

    /// Every nonempty coalition, ascending.
    pub fn nonempty(n: usize) -> impl Iterator<Item = Coalition> {
        (1..1u32 << n).map(Coalition)
    }

    /// Every nonempty proper coalition `∅ ≠ S ⊂ N`, ascending.
    pub fn proper(n: usize) -> impl Iterator<Item = Coalition> {
        (1..(1u32 << n) - 1).map(Coalition)
    }

    /// Key ordering coalitions by size, then lexicographically by members;
    /// the row order of printed tables.
    pub fn display_key(self) -> (usize, Vec<usize>) {
        (self.len(), self.members().collect())
    }
}

pub struct Members(u32);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

pub struct Subsets {
    universe: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = Coalition;

    fn next(&mut self) -> Option<Coalition> {
        let current = self.next?;
        self.next = if current == self.universe {
            None
        } else {
            // Next subset in ascending order.
            Some((current | !self.universe).wrapping_add(1) & self.universe)
        };
        Some(Coalition(current))
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.members().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
