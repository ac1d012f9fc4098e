//! Extraction of quasi-independent subsets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relations::search::{find_any_relation, find_relation_with, is_quasi_independent_with, quasi_independence};
use crate::relations::{Independence, Relation, SearchBudget, SignedSums};
use crate::seq::{BlockSchedule, IntegerSet};

/// Largest input accepted by [`max_quasi_independent`].
pub const MAX_QI_EXACT_CAP: usize = 20;

fn total_of(set: &[u64]) -> u128 {
    set.iter().map(|&x| u128::from(x)).sum()
}

/// A maximum-cardinality quasi-independent subset; among those, the
/// lexicographically smallest.
pub fn max_quasi_independent(set: &IntegerSet) -> Result<IntegerSet> {
    max_quasi_independent_with(set, MAX_QI_EXACT_CAP, &SearchBudget::default())
}

pub fn max_quasi_independent_with(set: &IntegerSet, cap: usize, budget: &SearchBudget) -> Result<IntegerSet> {
    if set.len() > cap {
        return Err(Error::ResourceExceeded {
            what: "exact maximum quasi-independent subset",
            needed: set.len() as u128,
            budget: cap as u128,
        });
    }
    let elems = set.as_slice();
    let capacity = total_of(elems);
    let mut search = MaxSearch {
        elems,
        levels: (0..=elems.len()).map(|_| SignedSums::new(capacity, budget.table_entries as usize)).collect(),
        chosen: Vec::new(),
        best: Vec::new(),
    };
    search.run(0, 0)?;
    Ok(IntegerSet::from_sorted_unchecked(search.best))
}

struct MaxSearch<'a> {
    elems: &'a [u64],
    /// `levels[d]` holds the signed sums of the first `d` chosen elements.
    levels: Vec<SignedSums>,
    chosen: Vec<u64>,
    best: Vec<u64>,
}

impl MaxSearch<'_> {
    /// Include-first depth-first search in increasing order: the first
    /// maximum reached is the lexicographically smallest one.
    fn run(&mut self, i: usize, depth: usize) -> Result<()> {
        if self.chosen.len() + (self.elems.len() - i) <= self.best.len() {
            return Ok(());
        }
        if i == self.elems.len() {
            self.best = self.chosen.clone();
            return Ok(());
        }
        let x = self.elems[i];
        if !self.levels[depth].contains(x) {
            let (done, rest) = self.levels.split_at_mut(depth + 1);
            done[depth].extend_into(x, &mut rest[0])?;
            self.chosen.push(x);
            self.run(i + 1, depth + 1)?;
            self.chosen.pop();
        }
        self.run(i + 1, depth)
    }
}

/// Result of the largest-first greedy scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GreedyExtraction {
    /// Always quasi-independent.
    pub set: IntegerSet,
    /// Elements left out only because the check ran out of budget.
    pub skipped: Vec<u64>,
}

/// Scans from the largest element down, keeping an element when it closes no
/// relation with those already kept.
pub fn greedy_quasi_independent(set: &IntegerSet) -> GreedyExtraction {
    greedy_quasi_independent_with(set, &SearchBudget::default())
}

pub fn greedy_quasi_independent_with(set: &IntegerSet, budget: &SearchBudget) -> GreedyExtraction {
    let mut sums = Some(SignedSums::new(total_of(set.as_slice()), budget.table_entries as usize));
    let mut kept: Vec<u64> = Vec::new();
    let mut skipped = Vec::new();
    for x in set.as_slice().iter().rev().copied() {
        if let Some(s) = sums.as_mut() {
            if s.contains(x) {
                continue;
            }
            if s.insert(x).is_err() {
                sums = None;
            }
            kept.push(x);
            continue;
        }
        let mut candidate = kept.clone();
        candidate.push(x);
        candidate.sort_unstable();
        match find_any_relation(&IntegerSet::from_sorted_unchecked(candidate), budget) {
            Ok(None) => kept.push(x),
            Ok(Some(_)) => {}
            Err(_) => skipped.push(x),
        }
    }
    kept.sort_unstable();
    skipped.sort_unstable();
    GreedyExtraction { set: IntegerSet::from_sorted_unchecked(kept), skipped }
}

/// Splits `set` into its nonempty traces on `[1, M_1), [M_1, M_2), …`.
/// The block index of `[M_n, M_{n+1})` is `n`; `[1, M_1)` has index 0.
pub fn block_traces(set: &IntegerSet, blocks: &BlockSchedule) -> Vec<(u64, IntegerSet)> {
    let mut out = Vec::new();
    let Some(max) = set.max() else { return out };
    let mut lo = 1u64;
    let mut n = 0u64;
    loop {
        let hi = blocks.boundary(n + 1).ok();
        let trace = match hi {
            Some(h) => set.block_trace(lo, h),
            None => set.tail_from(lo),
        };
        if !trace.is_empty() {
            out.push((n, trace));
        }
        match hi {
            Some(h) if h <= max => {
                lo = lo.max(h);
                n += 1;
            }
            _ => break,
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum ExtractionCase {
    Empty,
    /// One block trace already has at least `√|A|` elements.
    LargeBlock { block: u64 },
    /// One element from every other nonempty block.
    Alternating { blocks: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SqrtExtraction {
    pub set: IntegerSet,
    pub case: ExtractionCase,
    /// Block traces too large to check for quasi-independence.
    pub unverified_blocks: usize,
}

/// Quasi-independent `B ⊆ A` with `|B| ≥ ½√|A|`, for `A` whose block traces
/// are quasi-independent.
pub fn extract_sqrt_block(set: &IntegerSet, blocks: &BlockSchedule) -> Result<SqrtExtraction> {
    let budget = SearchBudget::default();
    let traces = block_traces(set, blocks);
    let mut unverified_blocks = 0;
    for (n, trace) in &traces {
        if trace.len() > budget.exact_cap {
            unverified_blocks += 1;
        } else if !is_quasi_independent_with(trace, &budget)? {
            return Err(Error::invalid(format!("block {n} trace is not quasi-independent")));
        }
    }
    let size = set.len();
    if size == 0 {
        return Ok(SqrtExtraction { set: IntegerSet::empty(), case: ExtractionCase::Empty, unverified_blocks });
    }
    if let Some((n, trace)) = traces.iter().find(|(_, t)| t.len() * t.len() >= size) {
        return Ok(SqrtExtraction {
            set: trace.clone(),
            case: ExtractionCase::LargeBlock { block: *n },
            unverified_blocks,
        });
    }
    let picks: Vec<u64> = traces
        .iter()
        .step_by(2)
        .map(|(_, t)| t.min().expect("traces are nonempty"))
        .collect();
    let result = IntegerSet::from_sorted_unchecked(picks);
    if 4 * result.len() * result.len() < size {
        return Err(Error::VerificationFailed(format!(
            "extracted {} elements from {size}, below half the square root",
            result.len()
        )));
    }
    if let Independence::Dependent(_) = quasi_independence(&result, &budget) {
        return Err(Error::VerificationFailed(
            "alternating block representatives are not quasi-independent".into(),
        ));
    }
    Ok(SqrtExtraction {
        set: result,
        case: ExtractionCase::Alternating { blocks: traces.len() },
        unverified_blocks,
    })
}

/// Whether the "no relation longer than `l_max`" premise was checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PremiseCheck {
    Verified,
    /// A relation longer than `l_max` exists.
    Violated,
    /// Too large to check; assumed.
    Trusted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrunedBlock {
    /// `E = block ∖ S`.
    pub kept: IntegerSet,
    /// `S`, support of a longest relation (empty if none).
    pub removed: IntegerSet,
    pub relation: Option<Relation>,
    pub premise: PremiseCheck,
    /// Whether `E` was re-checked for quasi-independence.
    pub kept_verified: bool,
}

/// Removes the support of a maximum-length relation from `block`.
pub fn prune_block_max_relation(block: &IntegerSet, l_max: usize) -> Result<PrunedBlock> {
    prune_block_max_relation_with(block, l_max, &SearchBudget::default())
}

pub fn prune_block_max_relation_with(block: &IntegerSet, l_max: usize, budget: &SearchBudget) -> Result<PrunedBlock> {
    let n = block.len();
    let small = n <= budget.exact_cap;
    let top = if small { n } else { l_max.min(n) };
    let mut relation = None;
    for s in (2..=top).rev() {
        if let Some(r) = find_relation_with(block, s, 1, budget)? {
            relation = Some(r);
            break;
        }
    }
    let premise = match (&relation, small) {
        (Some(r), true) if r.len() > l_max => PremiseCheck::Violated,
        (_, true) => PremiseCheck::Verified,
        (_, false) => PremiseCheck::Trusted,
    };
    let removed = relation.as_ref().map_or_else(IntegerSet::empty, Relation::support_set);
    let kept = block.difference(&removed);
    let kept_verified = kept.len() <= budget.exact_cap;
    if kept_verified && !is_quasi_independent_with(&kept, budget)? {
        return Err(Error::VerificationFailed(
            "block minus a longest relation still carries a relation".into(),
        ));
    }
    Ok(PrunedBlock { kept, removed, relation, premise, kept_verified })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u64]) -> IntegerSet {
        IntegerSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn maximum_subsets() {
        let m = max_quasi_independent(&IntegerSet::interval(1, 6)).unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m.as_slice(), &[1, 2, 4]);
        assert_eq!(max_quasi_independent(&set(&[1, 2, 4, 8])).unwrap(), set(&[1, 2, 4, 8]));
        assert_eq!(max_quasi_independent(&set(&[9])).unwrap(), set(&[9]));
        assert!(max_quasi_independent(&IntegerSet::empty()).unwrap().is_empty());
        assert!(max_quasi_independent(&IntegerSet::interval(1, 21)).unwrap_err().is_resource());
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_quasi_independent(&set(&[1, 2, 4, 8])).set, set(&[1, 2, 4, 8]));
        assert_eq!(greedy_quasi_independent(&set(&[3, 5, 8])).set, set(&[5, 8]));
        let g = greedy_quasi_independent(&IntegerSet::empty());
        assert!(g.set.is_empty() && g.skipped.is_empty());
    }

    #[test]
    fn greedy_falls_back_when_sums_do_not_fit() {
        let tiny = SearchBudget { table_entries: 1000, probes: 1 << 20, exact_cap: 24 };
        let big: Vec<u64> = (0..12).map(|j| (1u64 << 62) + (1 << (2 * j))).collect();
        let g = greedy_quasi_independent_with(&set(&big), &tiny);
        assert!(g.skipped.is_empty());
        assert_eq!(g.set.len(), 12);
        assert!(is_quasi_independent_with(&g.set, &SearchBudget::default()).unwrap());
    }

    #[test]
    fn traces_partition_by_blocks() {
        let a = set(&[1, 5, 9, 10, 11, 40]);
        let t = block_traces(&a, &BlockSchedule::Dyadic);
        let idx: Vec<u64> = t.iter().map(|(n, _)| *n).collect();
        assert_eq!(idx, vec![0, 2, 3, 5]);
        assert_eq!(t[2].1, set(&[9, 10, 11]));
        let total: usize = t.iter().map(|(_, s)| s.len()).sum();
        assert_eq!(total, a.len());
    }

    #[test]
    fn sqrt_extraction_cases() {
        let e = extract_sqrt_block(&set(&[5, 9, 10, 11]), &BlockSchedule::Dyadic);
        let e = e.unwrap();
        assert_eq!(e.set, set(&[9, 10, 11]));
        assert_eq!(e.case, ExtractionCase::LargeBlock { block: 3 });

        let e = extract_sqrt_block(&set(&[5, 9, 17, 33]), &BlockSchedule::Dyadic).unwrap();
        assert_eq!(e.set, set(&[5, 17]));
        assert_eq!(e.case, ExtractionCase::Alternating { blocks: 4 });

        let e = extract_sqrt_block(&set(&[12]), &BlockSchedule::Dyadic).unwrap();
        assert_eq!(e.set, set(&[12]));
    }

    #[test]
    fn sqrt_extraction_rejects_dependent_blocks() {
        let err = extract_sqrt_block(&set(&[8, 9, 10, 11, 12]), &BlockSchedule::Dyadic).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn pruning_examples() {
        let p = prune_block_max_relation(&set(&[1, 2, 4, 8]), 3).unwrap();
        assert_eq!(p.kept, set(&[1, 2, 4, 8]));
        assert!(p.removed.is_empty());

        let p = prune_block_max_relation(&set(&[3, 5, 8, 21]), 3).unwrap();
        assert_eq!(p.kept, set(&[21]));
        assert_eq!(p.removed, set(&[3, 5, 8]));
        assert_eq!(p.premise, PremiseCheck::Verified);
        assert!(p.kept_verified);

        let p = prune_block_max_relation(&IntegerSet::empty(), 0).unwrap();
        assert!(p.kept.is_empty() && p.removed.is_empty());

        let p = prune_block_max_relation(&set(&[1, 2, 3, 4]), 3).unwrap();
        assert_eq!(p.premise, PremiseCheck::Violated);
    }
}
