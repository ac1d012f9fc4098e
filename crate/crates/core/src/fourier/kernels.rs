//! Classical summation kernels.

use crate::fourier::TrigPolynomial;

/// de la Vallée-Poussin kernel: `V̂(k) = 1` for `|k| ≤ M`, `2 − |k|/M` for
/// `M < |k| ≤ 2M`, 0 beyond.
pub fn vallee_poussin(m: u64) -> TrigPolynomial {
    let m = m.max(1) as i64;
    TrigPolynomial::from_real_terms((-2 * m..=2 * m).map(|k| (k, vallee_poussin_coeff(m as u64, k))))
}

/// `V̂_M(k)` without building the kernel.
pub fn vallee_poussin_coeff(m: u64, k: i64) -> f64 {
    let m = m.max(1);
    let a = k.unsigned_abs();
    if a <= m {
        1.0
    } else if a < 2 * m {
        2.0 - a as f64 / m as f64
    } else {
        0.0
    }
}

/// `D_N = Σ_{|n|≤N} e_n`.
pub fn dirichlet(n: u64) -> TrigPolynomial {
    let n = n as i64;
    TrigPolynomial::from_real_terms((-n..=n).map(|k| (k, 1.0)))
}

/// Fejér kernel `F_N = Σ_{|n|≤N} (1 − |n|/(N+1)) e_n`.
pub fn fejer(n: u64) -> TrigPolynomial {
    let n = n as i64;
    TrigPolynomial::from_real_terms((-n..=n).map(|k| (k, 1.0 - k.abs() as f64 / (n + 1) as f64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::lq_norm;

    #[test]
    fn vallee_poussin_coefficients() {
        let v = vallee_poussin(2);
        assert_eq!(v.coeff(2).re, 1.0);
        assert_eq!(v.coeff(3).re, 0.5);
        assert_eq!(v.coeff(4).re, 0.0);
        assert_eq!(v.degree(), 3);
        assert_eq!(vallee_poussin(1).coeff(0).re, 1.0);
        assert!(v.is_real(0.0));
    }

    #[test]
    fn vallee_poussin_l1_is_at_most_three() {
        for m in [1u64, 2, 8, 64] {
            let v = vallee_poussin(m);
            let l1 = lq_norm(&v, 1.0, 1 << 16).unwrap();
            assert!(l1.value <= 3.0 + 1e-6, "M={m}: {}", l1.value);
        }
    }

    #[test]
    fn fejer_is_nonnegative() {
        let f = fejer(10);
        for j in 0..200 {
            assert!(f.eval(j as f64 * 0.0314).re > -1e-12);
        }
        assert_eq!(dirichlet(3).len(), 7);
    }
}
