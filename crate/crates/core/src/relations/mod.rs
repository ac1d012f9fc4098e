//! Signed relations, quasi-independence, and extraction of quasi-independent
//! subsets.

mod extract;
mod relation;
mod search;
mod signed_sums;

pub use extract::{
    block_traces, extract_sqrt_block, greedy_quasi_independent, greedy_quasi_independent_with, max_quasi_independent,
    max_quasi_independent_with, prune_block_max_relation, prune_block_max_relation_with, ExtractionCase,
    GreedyExtraction, PremiseCheck, PrunedBlock, SqrtExtraction, MAX_QI_EXACT_CAP,
};
pub use relation::Relation;
pub use search::{
    count_relation_supports, find_any_relation, find_relation, find_relation_with, is_quasi_independent,
    is_quasi_independent_with, quasi_independence, Independence, SearchBudget, SUPPORT_COUNT_LENGTH_CAP,
    SUPPORT_COUNT_SET_CAP,
};
pub use signed_sums::SignedSums;
