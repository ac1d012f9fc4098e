//! Counts `|Λ ∩ [1, M_n]|` against the band `[σ/2, 2σ]` and quasi-independence
//! of small block traces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relations::{block_traces, quasi_independence, Independence, SearchBudget};
use crate::seq::{BlockSchedule, IntegerSet, MeanSchedule};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingRow {
    pub n: u64,
    pub boundary: u64,
    pub count: usize,
    pub sigma: f64,
    pub in_band: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockAudit {
    pub n: u64,
    pub size: usize,
    /// `None` for traces above the size cap or when the search ran out of budget.
    pub independent: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingReport {
    pub rows: Vec<CountingRow>,
    pub blocks: Vec<BlockAudit>,
}

impl CountingReport {
    pub fn all_in_band(&self) -> bool {
        self.rows.iter().all(|r| r.in_band)
    }

    /// Every audited trace was proved quasi-independent.
    pub fn small_blocks_independent(&self) -> bool {
        self.blocks.iter().all(|b| b.independent != Some(false))
    }
}

/// Rows for every `M_n ≤ horizon` (with `σ` over the natural numbers), and an
/// audit of each block trace with at most `block_cap` elements.
pub fn counting_band_report(
    set: &IntegerSet,
    schedule: &MeanSchedule,
    blocks: &BlockSchedule,
    horizon: u64,
    block_cap: usize,
) -> Result<CountingReport> {
    if horizon == 0 {
        return Err(Error::invalid("horizon must be positive"));
    }
    let sigma = schedule.sigma_table(horizon as usize);
    let rows = blocks
        .boundaries_up_to(horizon)
        .into_iter()
        .map(|(n, m)| {
            let count = set.count_up_to(m);
            let s = sigma[m as usize - 1];
            let c = count as f64;
            CountingRow { n, boundary: m, count, sigma: s, in_band: c >= s / 2.0 && c <= 2.0 * s }
        })
        .collect();
    let budget = SearchBudget::default();
    let blocks = block_traces(set, blocks)
        .into_iter()
        .map(|(n, trace)| {
            let independent = if trace.len() <= block_cap {
                match quasi_independence(&trace, &budget) {
                    Independence::Independent => Some(true),
                    Independence::Dependent(_) => Some(false),
                    Independence::Unknown => None,
                }
            } else {
                None
            };
            BlockAudit { n, size: trace.len(), independent }
        })
        .collect();
    Ok(CountingReport { rows, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_and_audits() {
        let set = IntegerSet::new(vec![1, 2, 3, 30, 31, 300, 1000]).unwrap();
        let table = vec![0.5; 2000];
        let r = counting_band_report(&set, &MeanSchedule::Custom { table }, &BlockSchedule::NPowN, 2000, 20).unwrap();
        assert_eq!(r.rows.len(), 4);
        assert_eq!(r.rows[2].boundary, 27);
        assert_eq!(r.rows[2].count, 3);
        assert!(!r.rows[2].in_band);
        // {1, 2, 3} carries 1 + 2 − 3 = 0.
        let first = r.blocks.iter().find(|b| b.n == 1).unwrap();
        assert_eq!(first.independent, Some(false));
        assert!(!r.small_blocks_independent());
    }
}
