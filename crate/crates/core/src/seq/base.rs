//! Prescribed base sequences `λ_1 < λ_2 < …`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::IntegerSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseSequence {
    Naturals,
    /// `1, 2^d, 3^d, …`
    PerfectPowers { d: u32 },
    Primes,
    Custom { elements: IntegerSet },
}

impl BaseSequence {
    pub fn tag(&self) -> &'static str {
        match self {
            BaseSequence::Naturals => "naturals",
            BaseSequence::PerfectPowers { .. } => "perfect_powers",
            BaseSequence::Primes => "primes",
            BaseSequence::Custom { .. } => "custom",
        }
    }

    pub fn squares() -> Self {
        BaseSequence::PerfectPowers { d: 2 }
    }

    /// `λ_1..λ_count` as a plain vector.
    pub fn values(&self, count: usize) -> Result<Vec<u64>> {
        match self {
            BaseSequence::Naturals => Ok((1..=count as u64).collect()),
            BaseSequence::PerfectPowers { d } => {
                if *d == 0 {
                    return Err(Error::invalid("perfect power exponent must be at least 1"));
                }
                (1..=count as u64)
                    .map(|m| {
                        m.checked_pow(*d)
                            .ok_or_else(|| Error::Overflow(format!("{m}^{d} exceeds 64 bits")))
                    })
                    .collect()
            }
            BaseSequence::Primes => Ok(primal::Primes::all().take(count).map(|p| p as u64).collect()),
            BaseSequence::Custom { elements } => {
                if count > elements.len() {
                    return Err(Error::invalid(format!(
                        "custom base has {} elements, {count} requested",
                        elements.len()
                    )));
                }
                Ok(elements.as_slice()[..count].to_vec())
            }
        }
    }

    /// The first `count` terms as a set.
    pub fn first(&self, count: usize) -> Result<IntegerSet> {
        Ok(IntegerSet::from_sorted_unchecked(self.values(count)?))
    }

    /// Every term `≤ bound`.
    pub fn up_to(&self, bound: u64) -> Result<IntegerSet> {
        let n = self.count_in(1, bound.saturating_add(1))?;
        self.first(n as usize)
    }

    /// `ν([lo, hi))`: number of terms in the half-open interval.
    pub fn count_in(&self, lo: u64, hi: u64) -> Result<u64> {
        if lo > hi {
            return Err(Error::invalid(format!("empty range [{lo}, {hi})")));
        }
        Ok(self.count_below(hi) - self.count_below(lo))
    }

    /// Number of terms strictly below `x`.
    fn count_below(&self, x: u64) -> u64 {
        if x <= 1 {
            return 0;
        }
        match self {
            BaseSequence::Naturals => x - 1,
            BaseSequence::PerfectPowers { d } => integer_root(x - 1, *d),
            BaseSequence::Primes => {
                let limit = usize::try_from(x - 1).expect("sieve bound fits in usize");
                primal::Sieve::new(limit.max(2)).prime_pi(limit) as u64
            }
            BaseSequence::Custom { elements } => elements.as_slice().partition_point(|&e| e < x) as u64,
        }
    }
}

/// `⌊x^{1/d}⌋`, exact.
pub(crate) fn integer_root(x: u64, d: u32) -> u64 {
    if d <= 1 || x < 2 {
        return if d == 0 { 0 } else { x };
    }
    let mut r = (x as f64).powf(1.0 / f64::from(d)).round() as u64;
    let fits = |r: u64| r.checked_pow(d).is_some_and(|v| v <= x);
    while r > 0 && !fits(r) {
        r -= 1;
    }
    while fits(r + 1) {
        r += 1;
    }
    r
}
