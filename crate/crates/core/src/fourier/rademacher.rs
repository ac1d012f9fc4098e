//! Rademacher averages `⟦f⟧ = E‖Σ r_n f̂(n) e_n‖_∞`.

use rayon::prelude::*;

use crate::error::Result;
use crate::fourier::norms::{sup_norm, NormMethod, NormReport};
use crate::fourier::TrigPolynomial;
use crate::numeric::mean_and_stderr;
use crate::seq::rng::{streams, trial_seed, Stream};

/// `f` with its coefficients multiplied by the signs of trial `trial`.
pub fn sign_flipped(f: &TrigPolynomial, seed: u64, trial: u64) -> TrigPolynomial {
    let mut rng = Stream::new(trial_seed(seed, trial), streams::COEFFICIENTS);
    TrigPolynomial::from_terms(f.iter().map(|(n, c)| (n, c * rng.next_sign())).collect::<Vec<_>>())
}

/// Monte Carlo estimate of the Rademacher average; the error is the
/// standard error of the mean.
pub fn rademacher_norm(f: &TrigPolynomial, trials: usize, seed: u64, oversample: usize) -> Result<NormReport> {
    let trials = trials.max(1);
    if f.is_zero() {
        return Ok(NormReport { value: 0.0, method: NormMethod::MonteCarlo, samples: trials as u64, error_estimate: 0.0 });
    }
    let sups = (0..trials as u64)
        .into_par_iter()
        .map(|t| sup_norm(&sign_flipped(f, seed, t), oversample).map(|r| r.value))
        .collect::<Result<Vec<f64>>>()?;
    let (mean, stderr) = mean_and_stderr(&sups);
    Ok(NormReport { value: mean, method: NormMethod::MonteCarlo, samples: trials as u64, error_estimate: stderr })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::IntegerSet;

    #[test]
    fn single_term_is_exact() {
        let r = rademacher_norm(&TrigPolynomial::monomial(9), 5, 1, 4).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(r.error_estimate < 1e-12);
        assert_eq!(rademacher_norm(&TrigPolynomial::zero(), 5, 1, 4).unwrap().value, 0.0);
    }

    #[test]
    fn interval_is_of_order_sqrt_n_log_n() {
        let f = TrigPolynomial::indicator(&IntegerSet::interval(1, 64)).unwrap();
        let r = rademacher_norm(&f, 200, 3, 4).unwrap();
        let scale = (64.0 * 64f64.ln()).sqrt();
        assert!(r.value > scale / 3.0 && r.value < 3.0 * scale, "{}", r.value);
        assert!(r.value >= f.l2_norm() * (1.0 - 3.0 * r.error_estimate));
    }

    #[test]
    fn deterministic_in_seed() {
        let f = TrigPolynomial::indicator(&IntegerSet::interval(1, 20)).unwrap();
        assert_eq!(rademacher_norm(&f, 30, 8, 4).unwrap(), rademacher_norm(&f, 30, 8, 4).unwrap());
    }
}
