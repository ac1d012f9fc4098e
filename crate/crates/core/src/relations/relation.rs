use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::IntegerSet;

/// A finite signed relation `Σ θ_k·k = 0` with `θ_k ∈ {−1, +1}`.
///
/// Stored in canonical form: support increasing, and the largest element
/// carries sign `−1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRelation", into = "RawRelation")]
pub struct Relation {
    support: Vec<u64>,
    signs: Vec<i8>,
}

#[derive(Serialize, Deserialize)]
struct RawRelation {
    support: Vec<u64>,
    signs: Vec<i8>,
}

impl Relation {
    /// Validates and canonicalises `(element, sign)` pairs.
    pub fn new(mut terms: Vec<(u64, i8)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("a relation needs a nonempty support"));
        }
        terms.sort_unstable_by_key(|t| t.0);
        if terms[0].0 == 0 || terms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid("relation support must be distinct positive integers"));
        }
        if terms.iter().any(|t| t.1 != 1 && t.1 != -1) {
            return Err(Error::invalid("relation signs must be +1 or -1"));
        }
        let flip = terms.last().is_some_and(|t| t.1 == 1);
        let (support, signs): (Vec<u64>, Vec<i8>) = terms
            .into_iter()
            .map(|(k, s)| (k, if flip { -s } else { s }))
            .unzip();
        let rel = Relation { support, signs };
        match rel.signed_sum() {
            Some(0) => Ok(rel),
            Some(v) => Err(Error::invalid(format!("signed sum is {v}, not 0"))),
            None => Err(Error::Overflow("signed sum of relation".into())),
        }
    }

    /// Number of elements in the support.
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn support_set(&self) -> IntegerSet {
        IntegerSet::from_sorted_unchecked(self.support.clone())
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn sign_of(&self, k: u64) -> Option<i8> {
        self.support.binary_search(&k).ok().map(|i| self.signs[i])
    }

    /// `Σ θ_k·k` in checked arithmetic; `None` on overflow.
    pub fn signed_sum(&self) -> Option<i128> {
        self.support.iter().zip(&self.signs).try_fold(0i128, |acc, (&k, &s)| {
            acc.checked_add(i128::from(s).checked_mul(i128::from(k))?)
        })
    }
}

impl TryFrom<RawRelation> for Relation {
    type Error = Error;

    fn try_from(raw: RawRelation) -> Result<Self> {
        if raw.support.len() != raw.signs.len() {
            return Err(Error::invalid("support and signs differ in length"));
        }
        Relation::new(raw.support.into_iter().zip(raw.signs).collect())
    }
}

impl From<Relation> for RawRelation {
    fn from(r: Relation) -> Self {
        RawRelation { support: r.support, signs: r.signs }
    }
}
