//! Evaluation on uniform grids `t_j = 2πj/G` by FFT.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::fourier::TrigPolynomial;

/// Largest single FFT; bigger grids are evaluated coset by coset.
const MAX_FFT: usize = 1 << 20;

/// Calls `visit(r, stride, values)` for cosets of the grid, where
/// `values[m] = f(2π(m·stride + r)/G)`. Every grid point is visited once.
pub fn for_each_grid_coset(f: &TrigPolynomial, grid: usize, mut visit: impl FnMut(usize, usize, &[Complex64])) -> Result<()> {
    if grid == 0 {
        return Err(Error::invalid("grid size must be positive"));
    }
    let chunk = if grid > MAX_FFT && grid % MAX_FFT == 0 { MAX_FFT } else { grid };
    let stride = grid / chunk;
    let fft = FftPlanner::<f64>::new().plan_fft_inverse(chunk);
    let mut buf = vec![Complex64::new(0.0, 0.0); chunk];
    let g = grid as u128;
    let folded: Vec<(usize, u128, Complex64)> = f
        .iter()
        .map(|(n, c)| {
            let residue = i128::from(n).rem_euclid(grid as i128) as u128;
            ((residue % chunk as u128) as usize, residue, c)
        })
        .collect();
    for r in 0..stride {
        buf.fill(Complex64::new(0.0, 0.0));
        for &(k, residue, c) in &folded {
            let twist = if r == 0 {
                c
            } else {
                let turns = (residue * r as u128 % g) as f64 / grid as f64;
                c * Complex64::from_polar(1.0, TAU * turns)
            };
            buf[k] += twist;
        }
        fft.process(&mut buf);
        visit(r, stride, &buf);
    }
    Ok(())
}

/// `f(2πj/G)` for `j = 0..G`.
pub fn grid_values(f: &TrigPolynomial, grid: usize) -> Result<Vec<Complex64>> {
    let mut out = vec![Complex64::new(0.0, 0.0); grid];
    for_each_grid_coset(f, grid, |r, stride, vals| {
        for (m, &v) in vals.iter().enumerate() {
            out[m * stride + r] = v;
        }
    })?;
    Ok(out)
}

/// `|f|` on the grid.
pub fn grid_moduli(f: &TrigPolynomial, grid: usize) -> Result<Vec<f64>> {
    Ok(grid_values(f, grid)?.into_iter().map(|v| v.norm()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_evaluation() {
        let f = TrigPolynomial::from_terms([
            (-7, Complex64::new(0.3, 1.0)),
            (0, Complex64::new(2.0, 0.0)),
            (5, Complex64::new(-1.0, 0.5)),
            (40, Complex64::new(0.25, 0.0)),
        ]);
        let g = 64;
        let vals = grid_values(&f, g).unwrap();
        for (j, v) in vals.iter().enumerate() {
            let direct = f.eval(TAU * j as f64 / g as f64);
            assert!((v - direct).norm() < 1e-12, "j={j}");
        }
    }

    #[test]
    fn coset_evaluation_matches_single_fft() {
        let f = TrigPolynomial::from_real_terms((1..50).map(|n| (n * n * 997 % 3_000_001 - 1_500_000, 1.0 / n as f64)));
        let g = 1 << 22;
        let vals = grid_values(&f, g).unwrap();
        for j in [0usize, 1, 12345, g / 3, g - 1] {
            let direct: Complex64 = f
                .iter()
                .map(|(n, c)| {
                    let turns = (i128::from(n) * j as i128).rem_euclid(g as i128) as f64 / g as f64;
                    c * Complex64::from_polar(1.0, TAU * turns)
                })
                .sum();
            assert!((vals[j] - direct).norm() < 1e-9, "j={j}");
        }
    }
}
