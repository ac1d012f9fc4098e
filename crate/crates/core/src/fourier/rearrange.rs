//! Non-increasing rearrangement of coefficients and the weak Orlicz–Lorentz
//! functional for `φ_α(x) = x·(log(1+x))^α`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::TrigPolynomial;
use crate::numeric::bisect_threshold;

/// `φ_α(x) = x·(log(1+x))^α`.
pub fn orlicz_phi(alpha: f64, x: f64) -> f64 {
    x * x.ln_1p().powf(alpha)
}

/// `φ_α^{−1}(y)` by bisection.
pub fn orlicz_phi_inverse(alpha: f64, y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    // φ_α(x) ≥ x once x ≥ e − 1.
    let hi = y.max(std::f64::consts::E);
    bisect_threshold(0.0, hi, 1e-10, |x| orlicz_phi(alpha, x) >= y)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rearrangement {
    /// `a*_1 ≥ a*_2 ≥ …`, zeros dropped.
    pub sorted: Vec<f64>,
    /// `sup_n φ_α^{−1}(n)·a*_n`.
    pub functional: f64,
    /// 1-based index attaining the supremum (0 for the zero polynomial).
    pub argmax: usize,
    /// Smallest `C` with `a*_n ≤ C·(log n)^α/n` for `n ≥ 3`.
    pub fitted_c: Option<f64>,
}

pub fn coefficient_rearrangement(f: &TrigPolynomial, alpha: f64) -> Result<Rearrangement> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid(format!("alpha must be positive, got {alpha}")));
    }
    let mut sorted: Vec<f64> = f.iter().map(|(_, c)| c.norm()).collect();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut functional = 0.0;
    let mut argmax = 0;
    for (i, &a) in sorted.iter().enumerate() {
        let v = orlicz_phi_inverse(alpha, (i + 1) as f64) * a;
        if v > functional {
            functional = v;
            argmax = i + 1;
        }
    }
    let fitted_c = (sorted.len() >= 3).then(|| {
        sorted
            .iter()
            .enumerate()
            .skip(2)
            .map(|(i, &a)| {
                let n = (i + 1) as f64;
                a * n / n.ln().powf(alpha)
            })
            .fold(0.0, f64::max)
    });
    Ok(Rearrangement { sorted, functional, argmax, fitted_c })
}
