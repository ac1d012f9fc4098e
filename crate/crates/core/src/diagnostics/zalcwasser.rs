//! Growth of `‖S_N‖_q` for the quadratic Weyl sums `S_N(x) = Σ_{n≤N} e^{in²x}`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{for_each_grid_coset, TrigPolynomial};
use crate::numeric::{linear_fit, next_pow2, CompensatedSum};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZalcwasserRow {
    pub q: f64,
    /// Fitted slope of `log ‖S_N‖_q` in `log N`.
    pub exponent: f64,
    /// `1 − 2/q`.
    pub expected: f64,
    pub constant: f64,
    pub rms_residual: f64,
    /// `(N, ‖S_N‖_q)`.
    pub points: Vec<(u64, f64)>,
}

pub fn quadratic_weyl_sum(n: u64) -> TrigPolynomial {
    TrigPolynomial::from_real_terms((1..=n as i64).map(|k| (k * k, 1.0)))
}

/// `‖S_N‖_q` for every `q`, from one pass over a grid of `≥ 4N²` points.
fn norms_for(n: u64, q_grid: &[f64]) -> Result<Vec<f64>> {
    let f = quadratic_weyl_sum(n);
    let grid = next_pow2(4 * (n * n) as usize);
    let scale = n as f64;
    let mut sums: Vec<CompensatedSum> = vec![CompensatedSum::new(); q_grid.len()];
    for_each_grid_coset(&f, grid, |_, _, vals| {
        for z in vals {
            let r = z.norm() / scale;
            for (s, &q) in sums.iter_mut().zip(q_grid) {
                s.add(r.powf(q));
            }
        }
    })?;
    Ok(sums.iter().zip(q_grid).map(|(s, &q)| scale * (s.value() / grid as f64).powf(1.0 / q)).collect())
}

pub fn zalcwasser_fit(n_grid: &[u64], q_grid: &[f64]) -> Result<Vec<ZalcwasserRow>> {
    if let Some(q) = q_grid.iter().find(|&&q| !(q >= 5.0 && q.is_finite())) {
        return Err(Error::invalid(format!("q must be at least 5, got {q}")));
    }
    let (lo, hi) = match (n_grid.iter().min(), n_grid.iter().max()) {
        (Some(&lo), Some(&hi)) if lo >= 1 => (lo, hi),
        _ => return Err(Error::invalid("N grid must be nonempty and positive")),
    };
    if hi < 4 * lo {
        return Err(Error::invalid("N grid must span at least two octaves"));
    }
    let norms: Vec<Vec<f64>> = n_grid.par_iter().map(|&n| norms_for(n, q_grid)).collect::<Result<_>>()?;
    let xs: Vec<f64> = n_grid.iter().map(|&n| (n as f64).ln()).collect();
    q_grid
        .iter()
        .enumerate()
        .map(|(i, &q)| {
            let ys: Vec<f64> = norms.iter().map(|row| row[i].ln()).collect();
            let fit = linear_fit(&xs, &ys).ok_or_else(|| Error::invalid("degenerate N grid"))?;
            Ok(ZalcwasserRow {
                q,
                exponent: fit.slope,
                expected: 1.0 - 2.0 / q,
                constant: fit.intercept.exp(),
                rms_residual: fit.rms_residual,
                points: n_grid.iter().zip(&norms).map(|(&n, row)| (n, row[i])).collect(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::lq_norm;

    #[test]
    fn matches_generic_norm() {
        let f = quadratic_weyl_sum(20);
        let direct = lq_norm(&f, 6.0, 4096).unwrap().value;
        let fast = norms_for(20, &[6.0]).unwrap()[0];
        assert!((direct - fast).abs() < 1e-9 * direct);
    }

    #[test]
    fn small_grid_exponent() {
        let rows = zalcwasser_fit(&[16, 32, 64, 128], &[6.0]).unwrap();
        assert!((rows[0].exponent - 2.0 / 3.0).abs() < 0.15, "{:?}", rows[0]);
    }

    #[test]
    fn preconditions() {
        assert!(zalcwasser_fit(&[16, 64], &[2.0]).is_err());
        assert!(zalcwasser_fit(&[16, 32], &[6.0]).is_err());
    }
}
