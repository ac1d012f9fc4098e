//! Riesz products `R = Π_{k∈B} (1 + cos kt)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::TrigPolynomial;
use crate::seq::IntegerSet;

/// Cap on the number of expanded terms (each element triples it).
pub const RIESZ_TERM_BUDGET: u128 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RieszProduct {
    pub poly: TrigPolynomial,
    /// Expansion terms that landed on an already occupied frequency.
    pub collisions: u64,
    /// Largest `|S|` kept; `|B|` when nothing was truncated.
    pub max_support: usize,
    /// ℓ¹ mass of the dropped terms: every `S` with `|S|` above the cap
    /// contributes `2^{|S|}` terms of size `2^{−|S|}`.
    pub truncation_l1: f64,
}

/// Expands the product exactly, or only over supports `|S| ≤ max_support`
/// when given. Collisions at nonzero frequencies are summed and counted; a
/// collision at frequency 0 is a relation in `B` and is rejected.
pub fn riesz_product(b: &IntegerSet, max_support: Option<usize>) -> Result<RieszProduct> {
    let n = b.len();
    let cap = max_support.unwrap_or(n).min(n);
    let total: u128 = b.iter().map(u128::from).sum();
    if total > i64::MAX as u128 {
        return Err(Error::Overflow("Riesz product frequencies exceed 64 bits".into()));
    }
    let terms = expanded_terms(n, cap);
    if terms > RIESZ_TERM_BUDGET {
        return Err(Error::ResourceExceeded { what: "Riesz product expansion", needed: terms, budget: RIESZ_TERM_BUDGET });
    }
    // levels[s]: frequency -> (coefficient, number of terms), over supports of size s.
    let mut levels: Vec<BTreeMap<i64, (f64, u32)>> = vec![BTreeMap::new(); cap + 1];
    levels[0].insert(0, (1.0, 1));
    for (done, k) in b.iter().enumerate() {
        let k = k as i64;
        for s in (0..cap.min(done + 1)).rev() {
            let (lower, upper) = levels.split_at_mut(s + 1);
            let src = &lower[s];
            let dst = &mut upper[0];
            for (&f, &(c, cnt)) in src {
                for g in [f + k, f - k] {
                    let e = dst.entry(g).or_insert((0.0, 0));
                    e.0 += 0.5 * c;
                    e.1 += cnt;
                }
            }
        }
    }
    let mut merged: BTreeMap<i64, (f64, u32)> = BTreeMap::new();
    for level in levels {
        for (f, (c, cnt)) in level {
            let e = merged.entry(f).or_insert((0.0, 0));
            e.0 += c;
            e.1 += cnt;
        }
    }
    if merged.get(&0).is_some_and(|e| e.1 > 1) {
        return Err(Error::invalid("B carries a relation: two expansion terms meet at frequency 0"));
    }
    let collisions = merged.values().map(|e| u64::from(e.1 - 1)).sum();
    let truncation_l1 = (cap + 1..=n).map(|s| binomial(n, s)).sum();
    Ok(RieszProduct {
        poly: TrigPolynomial::from_real_terms(merged.into_iter().map(|(f, (c, _))| (f, c))),
        collisions,
        max_support: cap,
        truncation_l1,
    })
}

/// `Σ_{s ≤ cap} C(n, s)·2^s`.
fn expanded_terms(n: usize, cap: usize) -> u128 {
    (0..=cap).map(|s| binomial(n, s) as u128 * (1u128 << s)).sum()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{grid_values, lq_norm};

    fn set(v: &[u64]) -> IntegerSet {
        IntegerSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn two_factor_expansion() {
        let r = riesz_product(&set(&[3, 5]), None).unwrap();
        let c = |n| r.poly.coeff(n).re;
        assert_eq!(c(0), 1.0);
        assert_eq!(c(3), 0.5);
        assert_eq!(c(5), 0.5);
        assert_eq!(c(8), 0.25);
        assert_eq!(c(2), 0.25);
        assert_eq!(c(-2), 0.25);
        assert_eq!(r.collisions, 0);
        assert_eq!(r.poly.len(), 9);
    }

    #[test]
    fn top_frequency_of_powers_of_two() {
        let r = riesz_product(&set(&[1, 2, 4]), None).unwrap();
        assert_eq!(r.poly.coeff(7).re, 0.125);
        assert_eq!(r.poly.coeff(0).re, 1.0);
    }

    #[test]
    fn collisions_away_from_zero_are_summed() {
        // {1,3,5} carries no relation, yet 1 − 3 + 5 lands on the frequency 3.
        let r = riesz_product(&set(&[1, 3, 5]), None).unwrap();
        assert!(r.collisions > 0);
        assert_eq!(r.poly.coeff(3).re, 0.5 + 0.125);
        assert_eq!(r.poly.coeff(0).re, 1.0);
    }

    #[test]
    fn relations_are_rejected() {
        assert!(matches!(riesz_product(&set(&[3, 5, 8]), None), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn nonnegative_with_unit_mass() {
        let r = riesz_product(&set(&[3, 7, 19, 50]), None).unwrap();
        let vals = grid_values(&r.poly, 1024).unwrap();
        assert!(vals.iter().all(|v| v.re >= -1e-12));
        let l1 = lq_norm(&r.poly, 1.0, 1024).unwrap();
        assert!((l1.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn truncation_reports_dropped_mass() {
        let b = set(&[1, 3, 9, 27, 81]);
        let r = riesz_product(&b, Some(2)).unwrap();
        assert_eq!(r.max_support, 2);
        assert_eq!(r.truncation_l1, 10.0 + 5.0 + 1.0);
        let full = riesz_product(&b, None).unwrap();
        assert_eq!(full.truncation_l1, 0.0);
        assert_eq!(full.poly.len(), 243);
        assert_eq!(r.poly.coeff(12).re, full.poly.coeff(12).re);
    }
}
