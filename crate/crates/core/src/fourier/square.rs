//! Littlewood–Paley square function over dyadic blocks.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::fourier::grid::grid_values;
use crate::fourier::TrigPolynomial;

/// Dyadic block of a frequency: `{0}`, `[2^j, 2^{j+1})` or `(−2^{j+1}, −2^j]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DyadicBlock {
    Zero,
    Positive(u32),
    Negative(u32),
}

impl DyadicBlock {
    pub fn of(n: i64) -> Self {
        match n {
            0 => DyadicBlock::Zero,
            n if n > 0 => DyadicBlock::Positive(63 - n.unsigned_abs().leading_zeros()),
            n => DyadicBlock::Negative(63 - n.unsigned_abs().leading_zeros()),
        }
    }
}

/// Splits `f` into its dyadic pieces `f_k`.
pub fn dyadic_pieces(f: &TrigPolynomial) -> BTreeMap<DyadicBlock, TrigPolynomial> {
    let mut groups: BTreeMap<DyadicBlock, Vec<_>> = BTreeMap::new();
    for (n, c) in f.iter() {
        groups.entry(DyadicBlock::of(n)).or_default().push((n, c));
    }
    groups.into_iter().map(|(b, t)| (b, TrigPolynomial::from_terms(t))).collect()
}

/// `Sf = (Σ_k |f_k|²)^{1/2}` on the grid `2πj/G`.
pub fn square_function(f: &TrigPolynomial, grid: usize) -> Result<Vec<f64>> {
    let mut acc = vec![0.0f64; grid];
    for piece in dyadic_pieces(f).values() {
        for (a, v) in acc.iter_mut().zip(grid_values(piece, grid)?) {
            *a += v.norm_sqr();
        }
    }
    Ok(acc.into_iter().map(f64::sqrt).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn blocks() {
        assert_eq!(DyadicBlock::of(0), DyadicBlock::Zero);
        assert_eq!(DyadicBlock::of(1), DyadicBlock::Positive(0));
        assert_eq!(DyadicBlock::of(7), DyadicBlock::Positive(2));
        assert_eq!(DyadicBlock::of(8), DyadicBlock::Positive(3));
        assert_eq!(DyadicBlock::of(-8), DyadicBlock::Negative(3));
        assert_eq!(DyadicBlock::of(-9), DyadicBlock::Negative(3));
    }

    #[test]
    fn separated_monomials_are_flat() {
        let s = square_function(&TrigPolynomial::monomial(5), 64).unwrap();
        assert!(s.iter().all(|v| (v - 1.0).abs() < 1e-12));
        let f = TrigPolynomial::from_real_terms([(5, 1.0), (9, 1.0)]);
        let s = square_function(&f, 64).unwrap();
        assert!(s.iter().all(|v| (v - 2f64.sqrt()).abs() < 1e-12));
    }

    #[test]
    fn energy_is_preserved() {
        let f = TrigPolynomial::from_terms(
            (-40i64..60).map(|n| (n, Complex64::new((n as f64).sin(), (n as f64 * 0.3).cos()))),
        );
        let g = 256;
        let s = square_function(&f, g).unwrap();
        let energy: f64 = s.iter().map(|v| v * v).sum::<f64>() / g as f64;
        assert!((energy - f.l2_norm_sq()).abs() < 1e-9 * f.l2_norm_sq());
    }
}
