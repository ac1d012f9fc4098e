//! Pseudo-complement measures `μ = 2(δ₀ − V_M) ∗ R`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::kernels::{vallee_poussin, vallee_poussin_coeff};
use crate::fourier::norms::{sup_grid, NormReport};
use crate::fourier::riesz::riesz_product;
use crate::fourier::{lq_norm, TrigPolynomial};
use crate::seq::IntegerSet;

const CHECK_TOL: f64 = 1e-6;

/// The measure and the three defining checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudoComplement {
    /// Density of `μ` (a trigonometric polynomial, since `R` is one).
    pub density: TrigPolynomial,
    /// `min_{k∈B} |μ̂(k)|`.
    pub min_on_b: f64,
    /// `max_{k∈Λ∖B} |μ̂(k)|`.
    pub max_off_b: f64,
    /// Quadrature estimate of `‖μ‖₁`.
    pub total_variation: NormReport,
    /// `‖δ₀ − V_M‖ ≤ 1 + ‖V_M‖₁`, by quadrature for the kernel.
    pub kernel_measure_bound: f64,
    pub riesz_collisions: u64,
    pub large_on_b: bool,
    pub vanishes_off_b: bool,
    pub mass_bounded: bool,
}

impl PseudoComplement {
    pub fn passes(&self) -> bool {
        self.large_on_b && self.vanishes_off_b && self.mass_bounded
    }
}

/// Builds `μ` and evaluates the checks without failing on them.
pub fn pseudo_complement_report(b: &IntegerSet, lambda: &IntegerSet, m: u64) -> Result<PseudoComplement> {
    if b.is_empty() {
        return Err(Error::invalid("B must be nonempty"));
    }
    if !b.is_subset(lambda) {
        return Err(Error::invalid("B must be a subset of Λ"));
    }
    let min_b = b.min().expect("nonempty");
    if u128::from(min_b) <= 2 * u128::from(m) {
        return Err(Error::invalid(format!("min(B) = {min_b} must exceed 2M = {}", 2 * u128::from(m))));
    }
    let riesz = riesz_product(b, None)?;
    let density = riesz
        .poly
        .map_coeffs(|k, c| c * (2.0 * (1.0 - vallee_poussin_coeff(m, k))));
    let coeff_abs = |k: u64| density.coeff(k as i64).norm();
    let min_on_b = b.iter().map(coeff_abs).fold(f64::INFINITY, f64::min);
    let max_off_b = lambda.difference(b).iter().map(coeff_abs).fold(0.0, f64::max);
    let grid = sup_grid(density.degree(), 8);
    let total_variation = lq_norm(&density, 1.0, grid)?;
    let kernel = vallee_poussin(m);
    let kernel_l1 = lq_norm(&kernel, 1.0, sup_grid(kernel.degree(), 64))?;
    Ok(PseudoComplement {
        min_on_b,
        max_off_b,
        large_on_b: min_on_b >= 1.0 - CHECK_TOL,
        vanishes_off_b: max_off_b <= CHECK_TOL,
        mass_bounded: total_variation.value <= 8.0 + CHECK_TOL,
        total_variation,
        kernel_measure_bound: 1.0 + kernel_l1.value,
        riesz_collisions: riesz.collisions,
        density,
    })
}

/// As [`pseudo_complement_report`], but any failed check is an error.
pub fn pseudo_complement(b: &IntegerSet, lambda: &IntegerSet, m: u64) -> Result<PseudoComplement> {
    let report = pseudo_complement_report(b, lambda, m)?;
    if !report.passes() {
        return Err(Error::VerificationFailed(format!(
            "min |μ̂| on B = {}, max |μ̂| on Λ∖B = {}, ‖μ‖₁ ≈ {}",
            report.min_on_b, report.max_off_b, report.total_variation.value
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u64]) -> IntegerSet {
        IntegerSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn single_frequency() {
        let p = pseudo_complement(&set(&[5]), &set(&[5, 9]), 2).unwrap();
        assert!((p.density.coeff(5).re - 1.0).abs() < 1e-15);
        assert_eq!(p.density.coeff(9).norm(), 0.0);
        assert!(p.total_variation.value <= 8.0);
        let p = pseudo_complement(&set(&[5]), &set(&[5]), 2).unwrap();
        assert!(p.total_variation.value <= 8.0);
    }

    #[test]
    fn sum_inside_lambda_fails() {
        let r = pseudo_complement_report(&set(&[5, 7]), &set(&[5, 7, 12]), 2).unwrap();
        assert!((r.max_off_b - 0.5).abs() < 1e-15);
        assert!(!r.vanishes_off_b);
        assert!(matches!(pseudo_complement(&set(&[5, 7]), &set(&[5, 7, 12]), 2), Err(Error::VerificationFailed(_))));
    }

    #[test]
    fn preconditions() {
        assert!(pseudo_complement(&set(&[4]), &set(&[4]), 2).is_err());
        assert!(pseudo_complement(&set(&[5]), &set(&[6]), 2).is_err());
        assert!(matches!(pseudo_complement(&set(&[30, 50, 80]), &set(&[30, 50, 80]), 2), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn kernel_part_is_bounded() {
        let p = pseudo_complement(&set(&[100, 300]), &set(&[100, 300]), 40).unwrap();
        assert!(p.kernel_measure_bound <= 4.0 + 1e-6);
    }
}
