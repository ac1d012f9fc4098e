use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite set of distinct positive integers, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct IntegerSet {
    elements: Vec<u64>,
}

impl IntegerSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a set from arbitrary elements: sorts and removes duplicates.
    /// Zero is rejected.
    pub fn new(mut elements: Vec<u64>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() == Some(&0) {
            return Err(Error::invalid("integer sets hold positive integers only"));
        }
        Ok(Self { elements })
    }

    /// Wraps an already strictly increasing sequence of positive integers.
    pub fn from_sorted(elements: Vec<u64>) -> Result<Self> {
        if elements.first() == Some(&0) {
            return Err(Error::invalid("integer sets hold positive integers only"));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("elements must be strictly increasing"));
        }
        Ok(Self { elements })
    }

    /// Internal constructor for sequences known to be valid.
    pub(crate) fn from_sorted_unchecked(elements: Vec<u64>) -> Self {
        debug_assert!(elements.first() != Some(&0));
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Self { elements }
    }

    /// The interval `[lo, hi]` of consecutive integers.
    pub fn interval(lo: u64, hi: u64) -> Self {
        if lo > hi {
            return Self::empty();
        }
        Self::from_sorted_unchecked((lo.max(1)..=hi).collect())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.elements
    }

    pub fn iter(&self) -> std::iter::Copied<std::slice::Iter<'_, u64>> {
        self.elements.iter().copied()
    }

    pub fn min(&self) -> Option<u64> {
        self.elements.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.elements.last().copied()
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.elements
    }

    /// Elements in `[lo, hi)`.
    pub fn block_trace(&self, lo: u64, hi: u64) -> IntegerSet {
        if lo >= hi {
            return Self::empty();
        }
        let a = self.elements.partition_point(|&x| x < lo);
        let b = self.elements.partition_point(|&x| x < hi);
        Self::from_sorted_unchecked(self.elements[a..b].to_vec())
    }

    /// Elements `>= lo`.
    pub fn tail_from(&self, lo: u64) -> IntegerSet {
        let a = self.elements.partition_point(|&x| x < lo);
        Self::from_sorted_unchecked(self.elements[a..].to_vec())
    }

    /// `|set ∩ [1, n]|`.
    pub fn count_up_to(&self, n: u64) -> usize {
        self.elements.partition_point(|&x| x <= n)
    }

    pub fn is_subset(&self, other: &IntegerSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    pub fn union(&self, other: &IntegerSet) -> IntegerSet {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.elements);
        v.extend_from_slice(&other.elements);
        v.sort_unstable();
        v.dedup();
        Self::from_sorted_unchecked(v)
    }

    pub fn difference(&self, other: &IntegerSet) -> IntegerSet {
        Self::from_sorted_unchecked(self.iter().filter(|&x| !other.contains(x)).collect())
    }

    /// Subset picked by a bit mask over positions (bit i selects the i-th smallest element).
    pub fn select_mask(&self, mask: u64) -> IntegerSet {
        Self::from_sorted_unchecked(
            self.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, x)| x)
                .collect(),
        )
    }
}

impl TryFrom<Vec<u64>> for IntegerSet {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::from_sorted(v)
    }
}

impl From<IntegerSet> for Vec<u64> {
    fn from(s: IntegerSet) -> Self {
        s.elements
    }
}

impl<'a> IntoIterator for &'a IntegerSet {
    type Item = u64;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, u64>>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_sorts_and_rejects_zero() {
        let s = IntegerSet::new(vec![9, 1, 5, 5]).unwrap();
        assert_eq!(s.as_slice(), &[1, 5, 9]);
        assert!(IntegerSet::new(vec![0, 3]).is_err());
        assert!(IntegerSet::from_sorted(vec![3, 2]).is_err());
        assert!(IntegerSet::from_sorted(vec![2, 2]).is_err());
    }

    #[test]
    fn block_trace_examples() {
        let s = IntegerSet::new(vec![1, 5, 9, 30]).unwrap();
        assert_eq!(s.block_trace(5, 10).as_slice(), &[5, 9]);
        assert!(s.block_trace(7, 7).is_empty());
        assert!(s.block_trace(10, 2).is_empty());
    }

    #[test]
    fn json_shape_is_plain_array() {
        let s = IntegerSet::new(vec![3, 1]).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,3]");
        let back: IntegerSet = serde_json::from_str("[1,3]").unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<IntegerSet>("[3,1]").is_err());
    }
}
