//! Concentration of selector sums: the scalar tail bound `4·exp(−a²/8σ)` and
//! the sup-norm bound for random polynomials over a base sequence.

use rayon::prelude::*;

use crate::diagnostics::verdict::{frequency, BoundCheckResult, Verdict};
use crate::diagnostics::weyl::{weighted_average, Angle};
use crate::error::{Error, Result};
use crate::fourier::{for_each_grid_coset, TrigPolynomial};
use crate::numeric::{mean_and_stderr, CompensatedSum};
use crate::seq::rng::{streams, trial_seed, Stream};
use crate::seq::{BaseSequence, MeanSchedule};

/// Smallest number of trials accepted by the tail-bound check.
pub const MIN_DEVIATION_TRIALS: usize = 1000;
/// Largest grid (`2λ_N` points) evaluated per trial.
pub const MAX_DEVIATION_GRID: u128 = 1 << 24;

fn selectors(means: &[f64], seed: u64) -> Vec<bool> {
    let mut rng = Stream::new(seed, streams::SELECTORS);
    means.iter().map(|&d| rng.next_uniform() < d).collect()
}

/// `P(|Σ(ε_k − δ_k)| ≥ a)` against `4·exp(−a²/8σ)`, `σ = Σ δ_k(1 − δ_k)`.
pub fn check_deviation_bound(means: &[f64], a: f64, trials: usize, seed: u64) -> Result<BoundCheckResult> {
    if means.iter().any(|d| !(0.0..=1.0).contains(d)) {
        return Err(Error::invalid("means must lie in [0, 1]"));
    }
    let sigma: f64 = means.iter().map(|d| d * (1.0 - d)).collect::<CompensatedSum>().value();
    if sigma <= 0.0 {
        return Err(Error::invalid("σ = Σ δ(1−δ) must be positive"));
    }
    if !(a >= 0.0 && a <= sigma) {
        return Err(Error::invalid(format!("need 0 <= a <= σ = {sigma}, got a = {a}")));
    }
    if trials < MIN_DEVIATION_TRIALS {
        return Err(Error::invalid(format!("need at least {MIN_DEVIATION_TRIALS} trials, got {trials}")));
    }
    let hits = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let eps = selectors(means, trial_seed(seed, t));
            let s: f64 = eps
                .iter()
                .zip(means)
                .map(|(&e, &d)| f64::from(u8::from(e)) - d)
                .collect::<CompensatedSum>()
                .value();
            s.abs() >= a
        })
        .filter(|&hit| hit)
        .count() as u64;
    let (p, se) = frequency(hits, trials as u64);
    let analytic = 4.0 * (-a * a / (8.0 * sigma)).exp();
    Ok(BoundCheckResult::new("lemma1_3", analytic, p, trials as u64, se)
        .param("n", means.len())
        .param("a", a)
        .param("sigma", sigma)
        .param("seed", seed))
}

/// Parameters shared by the sup-norm checks over a base sequence.
struct SelectorSetup {
    values: Vec<u64>,
    means: Vec<f64>,
    sigma: f64,
    log_lambda: f64,
}

fn selector_setup(base: &BaseSequence, schedule: &MeanSchedule, n: usize) -> Result<SelectorSetup> {
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    schedule.validate()?;
    let values = base.values(n)?;
    let means = schedule.table(n);
    let sigma = means.iter().copied().collect::<CompensatedSum>().value();
    let log_lambda = (*values.last().expect("n >= 1") as f64).ln();
    Ok(SelectorSetup { values, means, sigma, log_lambda })
}

/// `P(‖Σ_{k≤N}(ε_k − δ_k) e_{λ_k}‖∞ > 15√(σ_N log λ_N))` against `8/N²`.
///
/// The sup norm is replaced by `3·max` over the `2λ_N`-th roots of unity,
/// which dominates it, so the measured event contains the one in the bound.
pub fn check_grid_deviation_bound(
    base: &BaseSequence,
    schedule: &MeanSchedule,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<BoundCheckResult> {
    let setup = selector_setup(base, schedule, n)?;
    if setup.sigma < 25.0 * setup.log_lambda {
        return Err(Error::invalid(format!(
            "σ_N = {} is below 25·log λ_N = {}",
            setup.sigma,
            25.0 * setup.log_lambda
        )));
    }
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let lambda_n = *setup.values.last().expect("n >= 1");
    let grid = 2 * u128::from(lambda_n);
    if grid > MAX_DEVIATION_GRID {
        return Err(Error::ResourceExceeded { what: "root-of-unity grid", needed: grid, budget: MAX_DEVIATION_GRID });
    }
    let threshold = 15.0 * (setup.sigma * setup.log_lambda).sqrt();
    let hits = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let eps = selectors(&setup.means, trial_seed(seed, t));
            let q = TrigPolynomial::from_real_terms(
                setup
                    .values
                    .iter()
                    .zip(&setup.means)
                    .zip(&eps)
                    .map(|((&v, &d), &e)| (v as i64, f64::from(u8::from(e)) - d)),
            );
            let mut max = 0.0f64;
            for_each_grid_coset(&q, grid as usize, |_, _, vals| {
                for z in vals {
                    max = max.max(z.norm());
                }
            })?;
            Ok(3.0 * max > threshold)
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&h| h)
        .count() as u64;
    let (p, se) = frequency(hits, trials as u64);
    let analytic = 8.0 / (n as f64 * n as f64);
    Ok(BoundCheckResult::new("lemma3_2", analytic, p, trials as u64, se)
        .param("base", base.tag())
        .param("schedule", schedule.describe())
        .param("n", n)
        .param("sigma", setup.sigma)
        .param("seed", seed)
        .note("event measured as 3·max over the 2λ_N-th roots of unity > 15√(σ_N log λ_N), a superset of the sup-norm event"))
}

/// `|A_N(t) − σ_N^{-1} Σ δ_k e^{iλ_k t}|` at the given angles against
/// `30√(log λ_N/σ_N)`, the bound implied by the sup-norm estimate. The
/// empirical value is the trial mean of the worst angle.
pub fn check_weyl_deviation(
    base: &BaseSequence,
    schedule: &MeanSchedule,
    n: usize,
    angles: &[Angle],
    trials: usize,
    seed: u64,
) -> Result<BoundCheckResult> {
    let setup = selector_setup(base, schedule, n)?;
    if trials == 0 || angles.is_empty() {
        return Err(Error::invalid("need at least one trial and one angle"));
    }
    let centres: Vec<_> = angles
        .iter()
        .map(|&a| weighted_average(&setup.values, &setup.means, a).ok_or_else(|| Error::invalid("σ_N = 0")))
        .collect::<Result<_>>()?;
    let worst: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let eps = selectors(&setup.means, trial_seed(seed, t));
            let kept: Vec<u64> = setup.values.iter().zip(&eps).filter(|(_, &e)| e).map(|(&v, _)| v).collect();
            if kept.is_empty() {
                return 2.0;
            }
            angles
                .iter()
                .zip(&centres)
                .map(|(a, c)| {
                    let ones = vec![1.0; kept.len()];
                    let avg = weighted_average(&kept, &ones, *a).expect("nonempty");
                    (avg - c).norm()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let (mean, se) = mean_and_stderr(&worst);
    let analytic = 30.0 * (setup.log_lambda / setup.sigma).sqrt();
    let proxy = angles.iter().map(|a| a.proxy_error(*setup.values.last().expect("n >= 1"))).fold(0.0, f64::max);
    let mut result = BoundCheckResult::new("weyl", analytic, mean, trials as u64, se)
        .param("base", base.tag())
        .param("schedule", schedule.describe())
        .param("n", n)
        .param("angles", angles.len())
        .param("seed", seed)
        .note(format!("angle proxy error at most {proxy:.3e}"));
    if setup.sigma < 25.0 * setup.log_lambda {
        result.verdict = if result.verdict == Verdict::Violated { Verdict::Inconclusive } else { result.verdict };
        result = result.note("σ_N < 25·log λ_N: the sup-norm estimate behind the bound does not apply");
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fair_coins() {
        let r = check_deviation_bound(&[0.5; 100], 20.0, 2000, 9).unwrap();
        assert!((r.analytic_bound - 4.0 * (-2.0f64).exp()).abs() < 1e-12);
        assert_ne!(r.verdict, Verdict::Violated);
        assert!(r.empirical_estimate < 0.01);
    }

    #[test]
    fn zero_threshold_is_certain() {
        let r = check_deviation_bound(&[0.5; 10], 0.0, 1000, 1).unwrap();
        assert_eq!(r.empirical_estimate, 1.0);
        assert_eq!(r.analytic_bound, 4.0);
    }

    #[test]
    fn preconditions() {
        assert!(check_deviation_bound(&[0.0; 10], 0.0, 1000, 1).is_err());
        assert!(check_deviation_bound(&[0.5; 4], 2.0, 1000, 1).is_err());
        assert!(check_deviation_bound(&[0.5; 100], 1.0, 10, 1).is_err());
        let none = MeanSchedule::Custom { table: vec![0.0; 100] };
        assert!(check_grid_deviation_bound(&BaseSequence::Naturals, &none, 100, 10, 1).is_err());
    }

    #[test]
    fn null_selectors_give_zero_polynomial() {
        let none = MeanSchedule::Custom { table: vec![0.0] };
        let r = check_grid_deviation_bound(&BaseSequence::Naturals, &none, 1, 10, 1).unwrap();
        assert_eq!(r.empirical_estimate, 0.0);
    }

    #[test]
    fn grid_sup_of_half_density_selectors() {
        let half = MeanSchedule::Custom { table: vec![0.5; 2000] };
        let r = check_grid_deviation_bound(&BaseSequence::Naturals, &half, 2000, 20, 3).unwrap();
        assert_eq!(r.empirical_estimate, 0.0);
        assert_eq!(r.verdict, Verdict::Consistent);
    }

    #[test]
    fn weyl_deviation_is_bounded() {
        let half = MeanSchedule::Custom { table: vec![0.5; 4000] };
        let angles = [Angle::Rational { p: 1, q: 3 }, Angle::GoldenMultiple { m: 1 }];
        let r = check_weyl_deviation(&BaseSequence::squares(), &half, 4000, &angles, 10, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
        assert!(r.empirical_estimate < 0.1);
    }
}
