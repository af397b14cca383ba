//! Bitset subsets of a finite domain `X = {0, .., n-1}` and families of them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr};

use serde::{Serialize, Serializer};

/// Largest supported domain size.
pub const MAX_DOMAIN: usize = 64;

/// A subset of `{0, .., 63}`; bit `x` is set iff `x` is a member.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_DOMAIN);
        if n == MAX_DOMAIN {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(x: usize) -> Self {
        Subset(1u64 << x)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, x: usize) -> bool {
        self.0 >> x & 1 == 1
    }

    pub fn with(self, x: usize) -> Self {
        Subset(self.0 | 1u64 << x)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn minus(self, other: Subset) -> Self {
        Subset(self.0 & !other.0)
    }

    /// Complement relative to `{0, .., n-1}`.
    pub fn complement(self, n: usize) -> Self {
        Subset::full(n).minus(self)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let x = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(x)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Size first, then the sorted member lists lexicographically.
    pub fn size_lex_cmp(&self, other: &Subset) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.iter().cmp(other.iter()))
    }

    /// All subsets of `{0, .., n-1}` in size-then-lexicographic order.
    pub fn all_by_size(n: usize) -> Vec<Subset> {
        let mut all: Vec<Subset> = (0..1u64 << n).map(Subset).collect();
        all.sort_by(Subset::size_lex_cmp);
        all
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(Subset::EMPTY, Subset::with)
    }
}

impl BitOr for Subset {
    type Output = Subset;
    fn bitor(self, rhs: Subset) -> Subset {
        Subset(self.0 | rhs.0)
    }
}

impl BitAnd for Subset {
    type Output = Subset;
    fn bitand(self, rhs: Subset) -> Subset {
        Subset(self.0 & rhs.0)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// A deduplicated family of subsets of `{0, .., universe_size-1}`, sorted by
/// bit pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    universe_size: usize,
    members: Vec<Subset>,
}

impl SetFamily {
    pub fn new(universe_size: usize, members: impl IntoIterator<Item = Subset>) -> Self {
        let mut members: Vec<Subset> = members.into_iter().collect();
        members.sort();
        members.dedup();
        SetFamily { universe_size, members }
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.members.binary_search(&s).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Subset> + '_ {
        self.members.iter().copied()
    }

    pub fn is_union_closed(&self) -> bool {
        self.iter().all(|a| self.iter().all(|b| self.contains(a | b)))
    }

    pub fn is_intersection_closed(&self) -> bool {
        self.iter().all(|a| self.iter().all(|b| self.contains(a & b)))
    }

    /// The smallest member containing `s`, when the family is closed under
    /// intersection and has a member containing `s`.
    pub fn hull(&self, s: Subset) -> Option<Subset> {
        self.iter().filter(|m| s.is_subset_of(*m)).reduce(|a, b| a & b)
    }

    /// Union of all members lying between `lower` and `upper`; for a
    /// union-closed family this is the largest such member.
    pub fn largest_between(&self, lower: Subset, upper: Subset) -> Option<Subset> {
        self.iter()
            .filter(|m| lower.is_subset_of(*m) && m.is_subset_of(upper))
            .reduce(|a, b| a | b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_and_iteration() {
        let s: Subset = [0, 2, 5].into_iter().collect();
        assert_eq!(s.to_string(), "{0,2,5}");
        assert_eq!(s.len(), 3);
        assert_eq!(Subset::EMPTY.to_string(), "{}");
        assert_eq!(s.complement(6).to_vec(), vec![1, 3, 4]);
        assert_eq!(Subset::full(64).len(), 64);
    }

    #[test]
    fn size_lex_order() {
        let order: Vec<String> = Subset::all_by_size(3).iter().map(|s| s.to_string()).collect();
        assert_eq!(order, ["{}", "{0}", "{1}", "{2}", "{0,1}", "{0,2}", "{1,2}", "{0,1,2}"]);
    }

    #[test]
    fn hull_and_largest_between() {
        let fam = SetFamily::new(3, [0b000, 0b001, 0b011, 0b111].map(Subset::from_bits));
        assert_eq!(fam.hull(Subset::singleton(1)), Some(Subset::from_bits(0b011)));
        assert_eq!(fam.largest_between(Subset::singleton(0), Subset::from_bits(0b011)), Some(Subset::from_bits(0b011)));
        assert_eq!(fam.largest_between(Subset::singleton(2), Subset::from_bits(0b011)), None);
    }

    proptest! {
        #[test]
        fn set_algebra(a in any::<u16>(), b in any::<u16>()) {
            let (a, b) = (Subset::from_bits(a as u64), Subset::from_bits(b as u64));
            prop_assert_eq!((a | b).len() + (a & b).len(), a.len() + b.len());
            prop_assert!(a.minus(b).is_disjoint(b));
            prop_assert_eq!(a.complement(16).complement(16), a);
            prop_assert_eq!(a.iter().collect::<Subset>(), a);
        }
    }
}
