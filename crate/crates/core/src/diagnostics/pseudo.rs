//! Pseudo-complements for random quasi-independent sets drawn from the tail
//! of a sampled `Λ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{grid_values, pseudo_complement_report, riesz_product, sup_grid, PseudoComplement};
use crate::relations::is_quasi_independent;
use crate::seq::rng::{streams, Stream};
use crate::seq::{sample_set, BaseSequence, BlockSchedule, IntegerSet, MeanSchedule};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudoComplementTrial {
    /// Block index: `B ⊆ Λ ∩ (2M_n, horizon]`, `|B| = min(n − 1, max_len)`.
    pub n: u64,
    pub m: u64,
    pub lambda_len: usize,
    pub b: IntegerSet,
    pub b_independent: bool,
    /// `R̂(0)`.
    pub riesz_constant: f64,
    /// `min R` over a grid of `sup_grid(deg, 4)` points.
    pub riesz_grid_min: f64,
    /// `None` when `B` is not quasi-independent.
    pub report: Option<PseudoComplement>,
}

/// Samples `Λ` with the given seed, takes the largest `n` whose tail above
/// `2M_n` holds at least `min(n − 1, max_len)` elements, draws `B` uniformly
/// from that tail and builds `μ` with `M = M_n`.
pub fn pseudo_complement_trial(
    schedule: &MeanSchedule,
    blocks: &BlockSchedule,
    horizon: u64,
    seed: u64,
    max_len: usize,
) -> Result<PseudoComplementTrial> {
    if max_len == 0 {
        return Err(Error::invalid("max_len must be positive"));
    }
    let lambda = sample_set(schedule, &BaseSequence::Naturals, horizon as usize, seed)?;
    let (n, m, tail) = blocks
        .boundaries_up_to(horizon)
        .into_iter()
        .filter(|&(n, _)| n >= 2)
        .filter_map(|(n, m)| {
            let tail = lambda.tail_from(2 * m + 1);
            (tail.len() >= ((n - 1) as usize).min(max_len)).then_some((n, m, tail))
        })
        .last()
        .ok_or_else(|| Error::invalid("no block leaves enough sampled elements above 2M_n"))?;
    let size = ((n - 1) as usize).min(max_len);
    let mut pool = tail.into_vec();
    let mut rng = Stream::new(seed, streams::COEFFICIENTS);
    for i in 0..size {
        let j = rng.gen_range(i as u64, pool.len() as u64) as usize;
        pool.swap(i, j);
    }
    pool.truncate(size);
    let b = IntegerSet::new(pool)?;
    let b_independent = is_quasi_independent(&b)?;
    let (riesz_constant, riesz_grid_min, report) = if b_independent {
        let r = riesz_product(&b, None)?;
        let grid = sup_grid(r.poly.degree(), 4);
        let min = grid_values(&r.poly, grid)?.into_iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        (r.poly.coeff(0).re, min, Some(pseudo_complement_report(&b, &lambda, m)?))
    } else {
        (f64::NAN, f64::NAN, None)
    };
    Ok(PseudoComplementTrial { n, m, lambda_len: lambda.len(), b, b_independent, riesz_constant, riesz_grid_min, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loglog_tail_trial() {
        let t = pseudo_complement_trial(&MeanSchedule::LogLog { c: 1.0 }, &BlockSchedule::NPowN, 100_000, 3, 12).unwrap();
        assert!(t.b.min().unwrap() > 2 * t.m);
        assert_eq!(t.b.len(), (t.n - 1) as usize);
        if let Some(rep) = &t.report {
            assert!((t.riesz_constant - 1.0).abs() < 1e-12);
            assert!(t.riesz_grid_min >= -1e-9);
            assert!(rep.passes(), "{rep:?}");
        }
    }
}
