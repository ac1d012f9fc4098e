//! Random sets `Λ = {λ_j : ε_j = 1}` from independent selectors.

use crate::error::{Error, Result};
use crate::seq::rng::{streams, Stream};
use crate::seq::{BaseSequence, IntegerSet, MeanSchedule};

/// Keeps `values[j]` iff the `j`-th uniform of `(seed, stream)` is below `means[j]`.
pub fn sample_from_means(means: &[f64], values: &[u64], seed: u64, stream: u64) -> IntegerSet {
    debug_assert_eq!(means.len(), values.len());
    let mut rng = Stream::new(seed, stream);
    let kept = means
        .iter()
        .zip(values)
        .filter_map(|(&d, &v)| (rng.next_uniform() < d).then_some(v))
        .collect();
    IntegerSet::from_sorted_unchecked(kept)
}

/// Samples `Λ ⊆ {λ_1..λ_count}` with `P(λ_j ∈ Λ) = δ_j`.
pub fn sample_set(schedule: &MeanSchedule, base: &BaseSequence, count: usize, seed: u64) -> Result<IntegerSet> {
    schedule.validate()?;
    let values = base.values(count)?;
    Ok(sample_from_means(&schedule.table(count), &values, seed, streams::SELECTORS))
}

/// Samples several schedules from the same uniforms, so pointwise smaller
/// means give subsets.
pub fn sample_coupled(
    schedules: &[MeanSchedule],
    base: &BaseSequence,
    count: usize,
    seed: u64,
) -> Result<Vec<IntegerSet>> {
    let values = base.values(count)?;
    schedules
        .iter()
        .map(|s| {
            s.validate()?;
            Ok(sample_from_means(&s.table(count), &values, seed, streams::SELECTORS))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoStageSample {
    /// `Λ`, from the primary selectors.
    pub primary: IntegerSet,
    /// `{k ∈ Λ : ε'_k = 1}` with independent second-stage selectors of mean `τ`.
    pub thinned: IntegerSet,
}

/// Two independent selector stages; the second has constant mean `tau`.
pub fn sample_two_stage(
    schedule: &MeanSchedule,
    tau: f64,
    base: &BaseSequence,
    count: usize,
    seed: u64,
) -> Result<TwoStageSample> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::invalid(format!("tau must lie in [0, 1], got {tau}")));
    }
    schedule.validate()?;
    let values = base.values(count)?;
    let means = schedule.table(count);
    let mut first = Stream::new(seed, streams::SELECTORS);
    let mut second = Stream::new(seed, streams::SECONDARY);
    let mut primary = Vec::new();
    let mut thinned = Vec::new();
    for (&d, &v) in means.iter().zip(&values) {
        let keep = first.next_uniform() < d;
        let keep_second = second.next_uniform() < tau;
        if keep {
            primary.push(v);
            if keep_second {
                thinned.push(v);
            }
        }
    }
    Ok(TwoStageSample {
        primary: IntegerSet::from_sorted_unchecked(primary),
        thinned: IntegerSet::from_sorted_unchecked(thinned),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_means() {
        let all = MeanSchedule::Custom { table: vec![1.0; 3] };
        let none = MeanSchedule::Custom { table: vec![0.0; 3] };
        for seed in 0..20 {
            let a = sample_set(&all, &BaseSequence::Naturals, 3, seed).unwrap();
            assert_eq!(a.as_slice(), &[1, 2, 3]);
            assert!(sample_set(&none, &BaseSequence::Naturals, 3, seed).unwrap().is_empty());
        }
    }

    #[test]
    fn deterministic() {
        let s = MeanSchedule::LogLog { c: 1.0 };
        let a = sample_set(&s, &BaseSequence::Naturals, 50_000, 9).unwrap();
        let b = sample_set(&s, &BaseSequence::Naturals, 50_000, 9).unwrap();
        assert_eq!(a, b);
        let c = sample_set(&s, &BaseSequence::Naturals, 50_000, 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn prefix_stable() {
        // Element j depends only on (seed, j): a longer horizon extends the set.
        let s = MeanSchedule::LogLog { c: 2.0 };
        let short = sample_set(&s, &BaseSequence::Naturals, 1000, 3).unwrap();
        let long = sample_set(&s, &BaseSequence::Naturals, 5000, 3).unwrap();
        assert_eq!(long.block_trace(1, 1001), short);
    }

    #[test]
    fn coupled_sampling_is_monotone() {
        let small = MeanSchedule::LogLog { c: 0.5 };
        let large = MeanSchedule::LogLog { c: 1.5 };
        for seed in 0..100 {
            let sets = sample_coupled(&[small.clone(), large.clone()], &BaseSequence::Naturals, 4000, seed).unwrap();
            assert!(sets[0].is_subset(&sets[1]), "seed {seed}");
        }
    }

    #[test]
    fn two_stage_is_nested_and_matches_primary() {
        let s = MeanSchedule::Dyadic { c: 0.5, tau: 0.5 };
        let t = sample_two_stage(&s, 0.5, &BaseSequence::Naturals, 1 << 12, 4).unwrap();
        assert!(t.thinned.is_subset(&t.primary));
        let direct = sample_set(&s, &BaseSequence::Naturals, 1 << 12, 4).unwrap();
        assert_eq!(direct, t.primary);
    }

    #[test]
    fn base_values_are_used() {
        let s = MeanSchedule::Custom { table: vec![1.0, 0.0, 1.0] };
        let a = sample_set(&s, &BaseSequence::Primes, 3, 0).unwrap();
        assert_eq!(a.as_slice(), &[2, 5]);
    }
}
