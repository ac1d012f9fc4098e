//! Sparse trigonometric polynomials `f(t) = Σ f̂(n)·e^{int}`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::seq::IntegerSet;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawPoly", into = "RawPoly")]
pub struct TrigPolynomial {
    coeffs: BTreeMap<i64, Complex64>,
}

#[derive(Serialize, Deserialize)]
struct RawPoly {
    coeffs: Vec<(i64, f64, f64)>,
}

impl TrigPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::from_terms([(0, Complex64::new(c, 0.0))])
    }

    /// `e_n`.
    pub fn monomial(n: i64) -> Self {
        Self::from_terms([(n, Complex64::new(1.0, 0.0))])
    }

    /// Sums repeated frequencies and drops zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (n, c) in terms {
            *coeffs.entry(n).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        coeffs.retain(|_, c: &mut Complex64| c.re != 0.0 || c.im != 0.0);
        Self { coeffs }
    }

    pub fn from_real_terms(terms: impl IntoIterator<Item = (i64, f64)>) -> Self {
        Self::from_terms(terms.into_iter().map(|(n, c)| (n, Complex64::new(c, 0.0))))
    }

    /// `e_A = Σ_{n∈A} e_n`.
    pub fn indicator(set: &IntegerSet) -> Result<Self> {
        set.iter()
            .map(|n| {
                let n = i64::try_from(n).map_err(|_| Error::Overflow(format!("frequency {n}")))?;
                Ok((n, 1.0))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_real_terms)
    }

    /// `Σ_{n∈A} c_n e_n` for coefficients listed in the order of `A`.
    pub fn on_set(set: &IntegerSet, coeffs: &[Complex64]) -> Result<Self> {
        if set.len() != coeffs.len() {
            return Err(Error::invalid("one coefficient per element is required"));
        }
        let mut terms = Vec::with_capacity(set.len());
        for (n, &c) in set.iter().zip(coeffs) {
            let n = i64::try_from(n).map_err(|_| Error::Overflow(format!("frequency {n}")))?;
            terms.push((n, c));
        }
        Ok(Self::from_terms(terms))
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    /// Number of stored (nonzero) coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `max |n|` over the spectrum; 0 for the zero polynomial.
    pub fn degree(&self) -> u64 {
        match (self.coeffs.keys().next(), self.coeffs.keys().next_back()) {
            (Some(&lo), Some(&hi)) => lo.unsigned_abs().max(hi.unsigned_abs()),
            _ => 0,
        }
    }

    /// Smallest and largest frequency.
    pub fn frequency_range(&self) -> Option<(i64, i64)> {
        Some((*self.coeffs.keys().next()?, *self.coeffs.keys().next_back()?))
    }

    /// `Σ|f̂(n)|² = ‖f‖₂²`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).collect::<CompensatedSum>().value()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// `Σ|f̂(n)|`.
    pub fn coeff_l1(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).collect::<CompensatedSum>().value()
    }

    /// Whether `f̂(−n) = conj f̂(n)` within `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|(&n, &c)| (self.coeff(-n) - c.conj()).norm() <= tol)
    }

    /// `f(t)` by direct summation.
    pub fn eval(&self, t: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&n, &c)| c * Complex64::from_polar(1.0, n as f64 * t))
            .sum()
    }

    /// `S_{M,N}(f) = Σ_{−M ≤ n ≤ N} f̂(n) e_n`.
    pub fn partial_sum(&self, m: i64, n: i64) -> Self {
        if n < -m {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.range(-m..=n).map(|(&k, &c)| (k, c)).collect() }
    }

    /// Coefficients restricted to frequencies satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(i64) -> bool) -> Self {
        Self { coeffs: self.coeffs.iter().filter(|(&k, _)| keep(k)).map(|(&k, &c)| (k, c)).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.iter().map(|(n, c)| (n, c * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.iter().chain(other.iter()))
    }

    /// Pointwise product (coefficient convolution).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                let n = a.checked_add(b).ok_or_else(|| Error::Overflow("product frequency".into()))?;
                terms.push((n, ca * cb));
            }
        }
        Ok(Self::from_terms(terms))
    }

    /// Applies `g` to each coefficient (frequency, value) and drops zeros.
    pub fn map_coeffs(&self, g: impl Fn(i64, Complex64) -> Complex64) -> Self {
        Self::from_terms(self.iter().map(|(n, c)| (n, g(n, c))))
    }
}

impl TryFrom<RawPoly> for TrigPolynomial {
    type Error = Error;

    fn try_from(raw: RawPoly) -> Result<Self> {
        if raw.coeffs.iter().any(|t| !t.1.is_finite() || !t.2.is_finite()) {
            return Err(Error::invalid("non-finite coefficient"));
        }
        Ok(Self::from_terms(raw.coeffs.into_iter().map(|(n, re, im)| (n, Complex64::new(re, im)))))
    }
}

impl From<TrigPolynomial> for RawPoly {
    fn from(p: TrigPolynomial) -> Self {
        RawPoly { coeffs: p.coeffs.into_iter().map(|(n, c)| (n, c.re, c.im)).collect() }
    }
}
