//! Exact relation search by meet-in-the-middle over signed subset sums.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::relations::{Relation, SignedSums};
use crate::seq::IntegerSet;

/// Limits for the exact searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Entries in the tabulated half of a meet-in-the-middle search.
    pub table_entries: u64,
    /// Assignments enumerated on the probing half.
    pub probes: u64,
    /// Largest set accepted by [`is_quasi_independent`].
    pub exact_cap: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { table_entries: 1 << 22, probes: 1 << 27, exact_cap: 24 }
    }
}

/// Outcome of a quasi-independence test that may run out of budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Independence {
    Independent,
    /// A relation exists; the witness is attached when it was cheap to recover.
    Dependent(Option<Relation>),
    Unknown,
}

impl Independence {
    pub fn is_independent(&self) -> bool {
        matches!(self, Independence::Independent)
    }
}

#[derive(Debug, Clone, Copy)]
struct Partial {
    sum: i128,
    count: u32,
    pos: u64,
    neg: u64,
}

/// Number of `{−1,0,1}` assignments on `h` elements with at most `limit` nonzero.
fn assignments_up_to(h: usize, limit: usize) -> u128 {
    let mut binom: u128 = 1;
    let mut total: u128 = 0;
    for j in 0..=limit.min(h) {
        total = total.saturating_add(binom.saturating_mul(1u128 << j.min(127)));
        binom = binom.saturating_mul((h - j) as u128) / (j as u128 + 1);
    }
    total
}

fn enumerate(elems: &[u64], limit: usize, visit: &mut impl FnMut(Partial) -> ControlFlow<()>) -> ControlFlow<()> {
    fn go(
        elems: &[u64],
        i: usize,
        limit: usize,
        p: Partial,
        visit: &mut impl FnMut(Partial) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if i == elems.len() {
            return visit(p);
        }
        go(elems, i + 1, limit, p, visit)?;
        if (p.count as usize) < limit {
            let v = i128::from(elems[i]);
            let bit = 1u64 << i;
            go(elems, i + 1, limit, Partial { sum: p.sum + v, count: p.count + 1, pos: p.pos | bit, ..p }, visit)?;
            go(elems, i + 1, limit, Partial { sum: p.sum - v, count: p.count + 1, neg: p.neg | bit, ..p }, visit)?;
        }
        ControlFlow::Continue(())
    }
    go(elems, 0, limit, Partial { sum: 0, count: 0, pos: 0, neg: 0 }, visit)
}

/// Finds some nonzero `{−1,0,1}` assignment on `cands` with zero sum and, if
/// `length` is given, exactly that many nonzero entries.
pub(crate) fn meet_in_the_middle(cands: &[u64], length: Option<usize>, budget: &SearchBudget) -> Result<Option<Relation>> {
    let n = cands.len();
    let limit = length.unwrap_or(n);
    if limit > n || n == 0 {
        return Ok(None);
    }
    if n > 128 {
        return Err(Error::ResourceExceeded { what: "relation search support", needed: n as u128, budget: 128 });
    }
    let h = n / 2;
    let (left, right) = cands.split_at(h);
    if right.len() > 64 {
        return Err(Error::ResourceExceeded { what: "relation search support", needed: n as u128, budget: 128 });
    }
    let table_size = assignments_up_to(left.len(), limit);
    if table_size > u128::from(budget.table_entries) {
        return Err(Error::ResourceExceeded {
            what: "relation search table",
            needed: table_size,
            budget: u128::from(budget.table_entries),
        });
    }
    let probe_count = assignments_up_to(right.len(), limit);
    if probe_count > u128::from(budget.probes) {
        return Err(Error::ResourceExceeded {
            what: "relation search probes",
            needed: probe_count,
            budget: u128::from(budget.probes),
        });
    }

    let mut table = Vec::with_capacity(table_size as usize);
    let _ = enumerate(left, limit, &mut |p| {
        table.push(p);
        ControlFlow::Continue(())
    });
    table.sort_unstable_by_key(|p| (p.sum, p.count, p.pos, p.neg));

    let mut found = None;
    let _ = enumerate(right, limit, &mut |r| {
        let want_sum = -r.sum;
        let need = match length {
            Some(s) if r.count as usize > s => return ControlFlow::Continue(()),
            Some(s) => Some(s as u32 - r.count),
            None => None,
        };
        let start = table.partition_point(|l| (l.sum, l.count) < (want_sum, need.unwrap_or(0)));
        for l in &table[start..] {
            if l.sum != want_sum || need.is_some_and(|c| l.count != c) {
                break;
            }
            if l.count + r.count == 0 {
                continue;
            }
            found = Some((*l, r));
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });

    let Some((l, r)) = found else { return Ok(None) };
    let mut terms = Vec::with_capacity((l.count + r.count) as usize);
    for (i, &x) in left.iter().enumerate() {
        if l.pos >> i & 1 == 1 {
            terms.push((x, 1));
        } else if l.neg >> i & 1 == 1 {
            terms.push((x, -1));
        }
    }
    for (i, &x) in right.iter().enumerate() {
        if r.pos >> i & 1 == 1 {
            terms.push((x, 1));
        } else if r.neg >> i & 1 == 1 {
            terms.push((x, -1));
        }
    }
    Relation::new(terms).map(Some)
}

/// A relation of length exactly `length` supported in `set ∩ [min_element, ∞)`,
/// if one exists.
pub fn find_relation(set: &IntegerSet, length: usize, min_element: u64) -> Result<Option<Relation>> {
    find_relation_with(set, length, min_element, &SearchBudget::default())
}

pub fn find_relation_with(
    set: &IntegerSet,
    length: usize,
    min_element: u64,
    budget: &SearchBudget,
) -> Result<Option<Relation>> {
    if length < 2 {
        return Err(Error::invalid(format!("relation length must be at least 2, got {length}")));
    }
    let tail = set.tail_from(min_element);
    meet_in_the_middle(tail.as_slice(), Some(length), budget)
}

/// Any relation supported in `set`, of any length.
pub fn find_any_relation(set: &IntegerSet, budget: &SearchBudget) -> Result<Option<Relation>> {
    meet_in_the_middle(set.as_slice(), None, budget)
}

/// Exact test; sets larger than the budget's `exact_cap` are refused.
pub fn is_quasi_independent(set: &IntegerSet) -> Result<bool> {
    is_quasi_independent_with(set, &SearchBudget::default())
}

pub fn is_quasi_independent_with(set: &IntegerSet, budget: &SearchBudget) -> Result<bool> {
    if set.len() > budget.exact_cap {
        return Err(Error::ResourceExceeded {
            what: "exact quasi-independence test",
            needed: set.len() as u128,
            budget: budget.exact_cap as u128,
        });
    }
    Ok(find_any_relation(set, budget)?.is_none())
}

/// Quasi-independence for sets of any size: exact when the signed sums fit
/// in memory or the meet-in-the-middle search fits the budget, `Unknown`
/// otherwise.
pub fn quasi_independence(set: &IntegerSet, budget: &SearchBudget) -> Independence {
    // Elements exceeding the sum of all smaller ones cannot close a relation,
    // and once that holds for a whole suffix only the prefix needs testing.
    let elems = set.as_slice();
    let mut prefix_len = elems.len();
    let mut running: u128 = elems.iter().map(|&x| u128::from(x)).sum();
    for (i, &x) in elems.iter().enumerate().rev() {
        running -= u128::from(x);
        if u128::from(x) <= running {
            break;
        }
        prefix_len = i;
    }
    let set = &IntegerSet::from_sorted_unchecked(elems[..prefix_len].to_vec());
    let total: u128 = set.iter().map(u128::from).sum();
    let mut sums = SignedSums::new(total, budget.table_entries as usize);
    let mut incremental_ok = true;
    for (i, x) in set.iter().enumerate() {
        if sums.contains(x) {
            let prefix = IntegerSet::from_sorted_unchecked(set.as_slice()[..=i].to_vec());
            let witness = find_any_relation(&prefix, budget).ok().flatten();
            return Independence::Dependent(witness);
        }
        if sums.insert(x).is_err() {
            incremental_ok = false;
            break;
        }
    }
    if incremental_ok {
        return Independence::Independent;
    }
    match find_any_relation(set, budget) {
        Ok(None) => Independence::Independent,
        Ok(Some(r)) => Independence::Dependent(Some(r)),
        Err(_) => Independence::Unknown,
    }
}

/// Largest set accepted by [`count_relation_supports`].
pub const SUPPORT_COUNT_SET_CAP: usize = 20;
/// Largest length accepted by [`count_relation_supports`].
pub const SUPPORT_COUNT_LENGTH_CAP: usize = 6;

/// Number of `length`-element subsets of `set` carrying at least one relation.
pub fn count_relation_supports(set: &IntegerSet, length: usize) -> Result<u64> {
    if set.len() > SUPPORT_COUNT_SET_CAP {
        return Err(Error::ResourceExceeded {
            what: "support counting set size",
            needed: set.len() as u128,
            budget: SUPPORT_COUNT_SET_CAP as u128,
        });
    }
    if length > SUPPORT_COUNT_LENGTH_CAP {
        return Err(Error::ResourceExceeded {
            what: "support counting length",
            needed: length as u128,
            budget: SUPPORT_COUNT_LENGTH_CAP as u128,
        });
    }
    let n = set.len();
    if length < 2 || length > n {
        return Ok(0);
    }
    let elems = set.as_slice();
    let mut idx: Vec<usize> = (0..length).collect();
    let mut count = 0;
    loop {
        let values: Vec<i128> = idx.iter().map(|&i| i128::from(elems[i])).collect();
        // Fix the sign of the first element; the other half is its negation.
        let has_relation = (0..1u32 << (length - 1)).any(|pattern| {
            let tail: i128 = values[1..]
                .iter()
                .enumerate()
                .map(|(j, &v)| if pattern >> j & 1 == 1 { -v } else { v })
                .sum();
            values[0] + tail == 0
        });
        if has_relation {
            count += 1;
        }
        // Next combination in lexicographic order.
        let mut i = length;
        loop {
            if i == 0 {
                return Ok(count);
            }
            i -= 1;
            if idx[i] != i + n - length {
                break;
            }
            if i == 0 {
                return Ok(count);
            }
        }
        idx[i] += 1;
        for j in i + 1..length {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
