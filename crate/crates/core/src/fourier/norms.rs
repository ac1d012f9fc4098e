//! Norm estimates with their method and error.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::grid::for_each_grid_coset;
use crate::fourier::TrigPolynomial;
use crate::numeric::{bisect_threshold, next_pow2, CompensatedSum};
use crate::seq::IntegerSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    GridQuadrature,
    ExactCount,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub value: f64,
    pub method: NormMethod,
    /// Grid size, or number of trials for Monte Carlo estimates.
    pub samples: u64,
    pub error_estimate: f64,
}

impl NormReport {
    /// `value + error_estimate`.
    pub fn upper(&self) -> f64 {
        self.value + self.error_estimate
    }
}

/// Grid used by [`sup_norm`]: a power of two `≥ oversample·(2·degree + 2)`.
pub fn sup_grid(degree: u64, oversample: usize) -> usize {
    next_pow2(oversample * (2 * degree as usize + 2))
}

/// `max |f|` over the grid, with the Bernstein bound on how far the true sup
/// can sit above it: `‖f‖∞ ≤ max_grid / (1 − π·deg/G)`.
pub fn sup_norm(f: &TrigPolynomial, oversample: usize) -> Result<NormReport> {
    if oversample < 4 {
        return Err(Error::invalid(format!("oversample must be at least 4, got {oversample}")));
    }
    let grid = sup_grid(f.degree(), oversample);
    let mut max = 0.0f64;
    for_each_grid_coset(f, grid, |_, _, vals| {
        for v in vals {
            max = max.max(v.norm());
        }
    })?;
    let ratio = PI * f.degree() as f64 / grid as f64;
    Ok(NormReport {
        value: max,
        method: NormMethod::GridQuadrature,
        samples: grid as u64,
        error_estimate: max * (1.0 / (1.0 - ratio) - 1.0),
    })
}

/// Whether the `G`-point rule integrates `|f|^q` exactly: `q` even and
/// `G > (q/2)·(max freq − min freq)`.
pub fn quadrature_is_exact(f: &TrigPolynomial, q: f64, grid: usize) -> bool {
    let Some((lo, hi)) = f.frequency_range() else { return true };
    if q.fract() != 0.0 || q as u64 % 2 != 0 {
        return false;
    }
    let span = (hi - lo) as u128;
    (grid as u128) > (q as u128 / 2) * span
}

/// Smallest power-of-two grid on which `|f|^q` is integrated exactly (for even
/// integer `q`), and never below `oversample·(2·degree+2)`.
pub fn exact_grid(f: &TrigPolynomial, q: f64, oversample: usize) -> usize {
    let base = sup_grid(f.degree(), oversample);
    let Some((lo, hi)) = f.frequency_range() else { return base };
    let half = (q / 2.0).ceil() as usize;
    base.max(next_pow2(half * (hi - lo) as usize + 1))
}

/// `(mean over the grid of |f|^q)^{1/q}`. The error estimate compares against
/// the half grid; it is rounding-level when the rule is exact.
pub fn lq_norm(f: &TrigPolynomial, q: f64, grid: usize) -> Result<NormReport> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::invalid(format!("q must be a finite number >= 1, got {q}")));
    }
    let needed = 2 * f.degree() as usize + 2;
    if grid < needed {
        return Err(Error::invalid(format!("grid of {grid} points is below 2·degree+2 = {needed}")));
    }
    // Scale by the grid maximum so large q cannot overflow.
    let mut moduli = Vec::with_capacity(grid);
    let mut index = Vec::with_capacity(grid);
    for_each_grid_coset(f, grid, |r, stride, vals| {
        for (m, v) in vals.iter().enumerate() {
            moduli.push(v.norm());
            index.push(m * stride + r);
        }
    })?;
    let scale = moduli.iter().copied().fold(0.0f64, f64::max);
    if scale == 0.0 {
        return Ok(NormReport { value: 0.0, method: NormMethod::GridQuadrature, samples: grid as u64, error_estimate: 0.0 });
    }
    let mut full = CompensatedSum::new();
    let mut even = CompensatedSum::new();
    for (&m, &j) in moduli.iter().zip(&index) {
        let p = (m / scale).powf(q);
        full.add(p);
        if j % 2 == 0 {
            even.add(p);
        }
    }
    let value = scale * (full.value() / grid as f64).powf(1.0 / q);
    let half = scale * (even.value() / (grid / 2).max(1) as f64).powf(1.0 / q);
    let error_estimate = if quadrature_is_exact(f, q, grid) {
        value * f64::EPSILON * (grid as f64).log2().max(1.0) * 4.0
    } else {
        (value - half).abs()
    };
    Ok(NormReport { value, method: NormMethod::GridQuadrature, samples: grid as u64, error_estimate })
}

/// `‖e_A‖_q^q` for even `q`: the number of pairs of `(q/2)`-tuples from `A`
/// with equal sums.
pub fn lq_norm_exact_even(set: &IntegerSet, q: u32) -> Result<u128> {
    lq_norm_exact_even_with(set, q, 1 << 27)
}

pub fn lq_norm_exact_even_with(set: &IntegerSet, q: u32, budget: u64) -> Result<u128> {
    if q == 0 || q % 2 != 0 {
        return Err(Error::invalid(format!("q must be a positive even integer, got {q}")));
    }
    let h = (q / 2) as usize;
    if set.is_empty() {
        return Ok(0);
    }
    let min = set.min().expect("nonempty");
    let width = (set.max().expect("nonempty") - min) as u128;
    // Work with A − min so the tuple sums start at 0.
    let dense_len = width * h as u128 + 1;
    let work = dense_len * set.len() as u128 * h as u128;
    if work > u128::from(budget) {
        return Err(Error::ResourceExceeded { what: "even moment convolution", needed: work, budget: u128::from(budget) });
    }
    let shifted: Vec<usize> = set.iter().map(|x| (x - min) as usize).collect();
    let mut dist: Vec<u128> = vec![1];
    for _ in 0..h {
        let mut next = vec![0u128; dist.len() + width as usize];
        for (s, &c) in dist.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &a in &shifted {
                next[s + a] += c;
            }
        }
        dist = next;
    }
    dist.iter().try_fold(0u128, |acc, &c| {
        c.checked_mul(c)
            .and_then(|sq| acc.checked_add(sq))
            .ok_or_else(|| Error::Overflow("even moment count".into()))
    })
}

/// `ψ_A = max_p ‖e_A‖_p/√p` over a grid of `p`, with the maximising `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiEstimate {
    pub norm: NormReport,
    pub best_p: f64,
}

pub fn psi_parameter(set: &IntegerSet, p_grid: &[f64]) -> Result<PsiEstimate> {
    if p_grid.is_empty() || p_grid.iter().any(|&p| !(p >= 2.0 && p.is_finite())) {
        return Err(Error::invalid("p grid must be nonempty and contained in [2, ∞)"));
    }
    if set.is_empty() {
        return Err(Error::invalid("ψ of the empty set is undefined"));
    }
    let f = TrigPolynomial::indicator(set)?;
    let mut best: Option<PsiEstimate> = None;
    for &p in p_grid {
        let grid = exact_grid(&f, p, 4);
        let r = lq_norm(&f, p, grid)?;
        let scaled = NormReport {
            value: r.value / p.sqrt(),
            error_estimate: r.error_estimate / p.sqrt(),
            ..r
        };
        if best.map_or(true, |b| scaled.value > b.norm.value) {
            best = Some(PsiEstimate { norm: scaled, best_p: p });
        }
    }
    Ok(best.expect("grid is nonempty"))
}

/// Orlicz norm for `Ψ(x) = e^{x²} − 1`: the smallest `θ` with
/// `mean(exp(|f|²/θ²)) ≤ 2` on the grid.
pub fn orlicz_psi2_norm(f: &TrigPolynomial, grid: usize) -> Result<NormReport> {
    if f.is_zero() {
        return Err(Error::invalid("the Orlicz norm of the zero polynomial is not defined here"));
    }
    let needed = 2 * f.degree() as usize + 2;
    if grid < needed {
        return Err(Error::invalid(format!("grid of {grid} points is below 2·degree+2 = {needed}")));
    }
    let mut sq = Vec::with_capacity(grid);
    for_each_grid_coset(f, grid, |_, _, vals| sq.extend(vals.iter().map(|v| v.norm_sqr())))?;
    let max_sq = sq.iter().copied().fold(0.0f64, f64::max);
    let mean_sq = sq.iter().copied().collect::<CompensatedSum>().value() / grid as f64;
    let ln2 = std::f64::consts::LN_2;
    // log of the grid mean of exp(|f|²/θ²), by log-sum-exp.
    let log_mean = |theta: f64| {
        let inv = 1.0 / (theta * theta);
        let top = max_sq * inv;
        let s = sq.iter().map(|&v| (v * inv - top).exp()).collect::<CompensatedSum>().value();
        top + (s / grid as f64).ln()
    };
    let lo = (mean_sq / ln2).sqrt();
    let hi = (max_sq / ln2).sqrt();
    let tol = 1e-8;
    let value = if hi <= lo * (1.0 + tol) { hi } else { bisect_threshold(lo, hi, tol, |t| log_mean(t) <= ln2) };
    Ok(NormReport { value, method: NormMethod::GridQuadrature, samples: grid as u64, error_estimate: value * tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn sup_norm_examples() {
        let r = sup_norm(&TrigPolynomial::monomial(5), 4).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let dirichlet = TrigPolynomial::from_real_terms((-8..=8).map(|n| (n, 1.0)));
        assert!((sup_norm(&dirichlet, 4).unwrap().value - 17.0).abs() < 1e-9);
        let c3 = TrigPolynomial::from_real_terms([(0, 1.0), (3, 0.5), (-3, 0.5)]);
        assert!((sup_norm(&c3, 4).unwrap().value - 2.0).abs() < 1e-12);
        assert!(sup_norm(&c3, 3).is_err());
    }

    #[test]
    fn fourth_moments_of_intervals() {
        let f = TrigPolynomial::indicator(&IntegerSet::interval(1, 3)).unwrap();
        let r = lq_norm(&f, 4.0, 64).unwrap();
        assert!((r.value - 19f64.powf(0.25)).abs() < 1e-12);
        let f = TrigPolynomial::indicator(&IntegerSet::interval(1, 2)).unwrap();
        assert!((lq_norm(&f, 4.0, 64).unwrap().value - 6f64.powf(0.25)).abs() < 1e-12);
        assert_eq!(lq_norm_exact_even(&IntegerSet::interval(1, 3), 4).unwrap(), 19);
        assert_eq!(lq_norm_exact_even(&IntegerSet::interval(1, 2), 4).unwrap(), 6);
        assert_eq!(lq_norm_exact_even(&IntegerSet::new(vec![9]).unwrap(), 6).unwrap(), 1);
        assert!(lq_norm(&f, 4.0, 5).is_err());
    }

    #[test]
    fn parseval_on_the_grid() {
        let f = TrigPolynomial::from_terms([(-3, Complex64::new(1.0, 2.0)), (10, Complex64::new(0.5, 0.0))]);
        let r = lq_norm(&f, 2.0, 32).unwrap();
        assert!((r.value * r.value - f.l2_norm_sq()).abs() < 1e-12);
    }

    #[test]
    fn psi_examples() {
        let single = psi_parameter(&IntegerSet::new(vec![7]).unwrap(), &[2.0, 4.0, 6.0]).unwrap();
        assert!((single.norm.value - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(single.best_p, 2.0);
        // max(√3/√2, 19^{1/4}/2) = √1.5.
        let two = psi_parameter(&IntegerSet::interval(1, 3), &[2.0, 4.0]).unwrap();
        assert!((two.norm.value - 1.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(two.best_p, 2.0);
    }

    #[test]
    fn orlicz_examples() {
        let c = 3.0;
        let r = orlicz_psi2_norm(&TrigPolynomial::constant(c), 8).unwrap();
        assert!((r.value - c / std::f64::consts::LN_2.sqrt()).abs() < 1e-7);
        let r = orlicz_psi2_norm(&TrigPolynomial::monomial(4), 16).unwrap();
        assert!((r.value - 1.0 / std::f64::consts::LN_2.sqrt()).abs() < 1e-7);
        assert!(orlicz_psi2_norm(&TrigPolynomial::zero(), 16).is_err());
    }

    #[test]
    fn exactness_rule() {
        let f = TrigPolynomial::indicator(&IntegerSet::interval(1, 10)).unwrap();
        assert!(quadrature_is_exact(&f, 4.0, 19));
        assert!(!quadrature_is_exact(&f, 4.0, 18));
        assert!(!quadrature_is_exact(&f, 3.0, 1 << 10));
        assert!(exact_grid(&f, 8.0, 4) > 36);
    }
}
