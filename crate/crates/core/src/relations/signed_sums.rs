//! The set `{Σ_{b∈S} θ_b·b : S ⊆ B, θ ∈ {±1}^S}` of a growing set `B`.
//!
//! `B ∪ {x}` is quasi-independent iff `B` is and `x` is not in this set.

use crate::error::{Error, Result};

/// Largest sum range handled by the bitset representation (bits).
const BITSET_LIMIT: u128 = 1 << 28;

#[derive(Debug, Clone)]
enum Repr {
    /// Bit `offset + v` set iff `v` is a signed sum, for `|v| ≤ offset`.
    Bits { words: Vec<u64>, offset: u64 },
    /// Sorted distinct magnitudes `|v|`.
    Sorted(Vec<u128>),
}

/// Signed subset sums of the elements inserted so far (the empty sum included).
#[derive(Debug, Clone)]
pub struct SignedSums {
    repr: Repr,
    /// Sum of inserted elements: the largest magnitude present.
    total: u128,
    capacity: u128,
    budget: usize,
}

impl SignedSums {
    /// `capacity` bounds the sum of all elements that will ever be inserted;
    /// `budget` caps the number of magnitudes kept when the range is too wide
    /// for a bitset.
    pub fn new(capacity: u128, budget: usize) -> Self {
        let repr = if capacity <= BITSET_LIMIT {
            let offset = capacity as u64;
            let bits = 2 * offset + 1;
            let mut words = vec![0u64; bits.div_ceil(64) as usize];
            words[(offset / 64) as usize] |= 1 << (offset % 64);
            Repr::Bits { words, offset }
        } else {
            Repr::Sorted(vec![0])
        };
        Self { repr, total: 0, capacity, budget }
    }

    /// Whether `x` is a signed sum of some subset of the inserted elements.
    pub fn contains(&self, x: u64) -> bool {
        if u128::from(x) > self.total {
            return false;
        }
        match &self.repr {
            Repr::Bits { words, offset } => {
                let i = offset + x;
                words[(i / 64) as usize] >> (i % 64) & 1 == 1
            }
            Repr::Sorted(v) => v.binary_search(&u128::from(x)).is_ok(),
        }
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    /// Number of distinct magnitudes, when stored explicitly.
    pub fn explicit_len(&self) -> Option<usize> {
        match &self.repr {
            Repr::Bits { .. } => None,
            Repr::Sorted(v) => Some(v.len()),
        }
    }

    pub fn insert(&mut self, x: u64) -> Result<()> {
        let mut next = self.clone();
        self.extend_into(x, &mut next)?;
        *self = next;
        Ok(())
    }

    /// Writes the sums of `B ∪ {x}` into `out`, reusing its storage.
    /// `out` must have been created with the same capacity.
    pub fn extend_into(&self, x: u64, out: &mut SignedSums) -> Result<()> {
        let total = self.total + u128::from(x);
        if total > self.capacity {
            return Err(Error::invalid(format!(
                "signed-sum capacity {} exceeded by total {total}",
                self.capacity
            )));
        }
        out.total = total;
        out.capacity = self.capacity;
        out.budget = self.budget;
        match (&self.repr, &mut out.repr) {
            (Repr::Bits { words, offset }, Repr::Bits { words: dst, offset: o2 }) if offset == o2 => {
                // Only words covering [offset - total, offset + total] can be nonzero.
                let lo = ((*offset as u128 - total) / 64) as usize;
                let hi = ((*offset as u128 + total) / 64) as usize;
                let active = ((*offset as u128 - self.total) / 64) as usize..=((*offset as u128 + self.total) / 64) as usize;
                dst[lo..=hi].fill(0);
                dst[active.clone()].copy_from_slice(&words[active.clone()]);
                or_shifted(dst, words, active.clone(), x, true);
                or_shifted(dst, words, active, x, false);
                Ok(())
            }
            (Repr::Sorted(src), _) => {
                let x = u128::from(x);
                let needed = src.len() * 3;
                let mut merged: Vec<u128> = Vec::with_capacity(needed.min(self.budget + 1));
                merged.extend_from_slice(src);
                merged.extend(src.iter().map(|&s| s + x));
                merged.extend(src.iter().map(|&s| s.abs_diff(x)));
                merged.sort_unstable();
                merged.dedup();
                if merged.len() > self.budget {
                    return Err(Error::ResourceExceeded {
                        what: "signed subset sums",
                        needed: merged.len() as u128,
                        budget: self.budget as u128,
                    });
                }
                out.repr = Repr::Sorted(merged);
                Ok(())
            }
            _ => {
                *out = self.clone();
                self.extend_into(x, out)
            }
        }
    }
}

/// `dst |= src` shifted by `shift` bits up (`up = true`) or down, restricted to
/// source words in `range`.
fn or_shifted(dst: &mut [u64], src: &[u64], range: std::ops::RangeInclusive<usize>, shift: u64, up: bool) {
    let w = (shift / 64) as usize;
    let b = (shift % 64) as u32;
    for i in range {
        let v = src[i];
        if v == 0 {
            continue;
        }
        if up {
            let j = i + w;
            if j < dst.len() {
                dst[j] |= v << b;
            }
            if b != 0 && j + 1 < dst.len() {
                dst[j + 1] |= v >> (64 - b);
            }
        } else {
            if i >= w {
                dst[i - w] |= v >> b;
            }
            if b != 0 && i > w {
                dst[i - w - 1] |= v << (64 - b);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(elements: &[u64]) -> Vec<u128> {
        let mut out = vec![0i128];
        for &e in elements {
            let e = i128::from(e);
            let mut next = out.clone();
            for &s in &out {
                next.push(s + e);
                next.push(s - e);
            }
            out = next;
        }
        let mut mags: Vec<u128> = out.into_iter().map(|v| v.unsigned_abs()).collect();
        mags.sort_unstable();
        mags.dedup();
        mags
    }

    #[test]
    fn both_representations_match_enumeration() {
        let elements = [3u64, 70, 5, 129, 64, 1];
        let cap: u128 = elements.iter().map(|&e| u128::from(e)).sum();
        let mut bits = SignedSums::new(cap, 1 << 20);
        let mut sorted = SignedSums::new(BITSET_LIMIT + 1, 1 << 20);
        for (i, &e) in elements.iter().enumerate() {
            bits.insert(e).unwrap();
            sorted.insert(e).unwrap();
            let truth = brute(&elements[..=i]);
            for x in 0..=cap as u64 + 2 {
                let expected = truth.binary_search(&u128::from(x)).is_ok();
                assert_eq!(bits.contains(x), expected, "bits x={x} after {i}");
                assert_eq!(sorted.contains(x), expected, "sorted x={x} after {i}");
            }
        }
    }

    #[test]
    fn word_boundary_shifts() {
        let elements = [64u64, 128, 63, 65, 1000];
        let cap: u128 = elements.iter().map(|&e| u128::from(e)).sum();
        let mut bits = SignedSums::new(cap, 0);
        for &e in &elements {
            bits.insert(e).unwrap();
        }
        let truth = brute(&elements);
        for x in 0..=cap as u64 {
            assert_eq!(bits.contains(x), truth.binary_search(&u128::from(x)).is_ok(), "x={x}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let mut s = SignedSums::new(u128::MAX, 10);
        s.insert(1).unwrap();
        s.insert(10).unwrap();
        assert!(s.insert(100).unwrap_err().is_resource());
    }
}
