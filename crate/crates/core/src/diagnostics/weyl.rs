//! Weyl averages `A_N(t) = |Λ_N|^{-1} Σ_{n∈Λ_N} e^{int}`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::seq::IntegerSet;

/// `2^64·(√5 − 1)/2`, rounded.
const GOLDEN_TURNS: u64 = 0x9E37_79B9_7F4A_7C15;
const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;

/// An angle `t`, stored so that `n·t mod 2π` is exact or has a known error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Angle {
    Zero,
    /// `t = 2πp/q`.
    Rational { p: u64, q: u64 },
    /// `t = 2π·frac(m·φ)` with `φ = (√5 − 1)/2`, held as a 64-bit fixed-point
    /// number of turns.
    GoldenMultiple { m: u64 },
}

impl Angle {
    pub fn label(&self) -> String {
        match self {
            Angle::Zero => "0".into(),
            Angle::Rational { p, q } => format!("2pi*{p}/{q}"),
            Angle::GoldenMultiple { m } => format!("2pi*frac({m}*phi)"),
        }
    }

    /// `frac(n·t/2π)`.
    pub fn turns(&self, n: u64) -> f64 {
        match *self {
            Angle::Zero => 0.0,
            Angle::Rational { p, q } => {
                let r = (u128::from(n % q) * u128::from(p % q)) % u128::from(q);
                r as f64 / q as f64
            }
            Angle::GoldenMultiple { m } => n.wrapping_mul(m.wrapping_mul(GOLDEN_TURNS)) as f64 / TWO_POW_64,
        }
    }

    pub fn radians(&self) -> f64 {
        TAU * self.turns(1)
    }

    /// Bound on `|e^{int} − e^{in t_true}|` for `n ≤ n_max`, where `t_true` is
    /// the irrational angle the proxy stands for.
    pub fn proxy_error(&self, n_max: u64) -> f64 {
        match *self {
            Angle::GoldenMultiple { m } => TAU * m as f64 * n_max as f64 / TWO_POW_64,
            _ => 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Angle::Rational { q: 0, .. } => Err(Error::invalid("rational angle needs q > 0")),
            _ => Ok(()),
        }
    }
}

/// The first `count` golden-ratio proxies `m = 1..=count`.
pub fn golden_angles(count: u64) -> Vec<Angle> {
    (1..=count).map(|m| Angle::GoldenMultiple { m }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeylClass {
    ConvergesToZero,
    ConvergesToLimit,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylPoint {
    pub n: u64,
    /// `|Λ_N|`.
    pub count: usize,
    /// `None` while `Λ_N` is empty.
    pub average: Option<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleProfile {
    pub angle: Angle,
    pub points: Vec<WeylPoint>,
    pub class: WeylClass,
    pub proxy_error: f64,
}

impl AngleProfile {
    /// Average at the largest grid point.
    pub fn last(&self) -> Option<Complex64> {
        self.points.last().and_then(|p| p.average)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylProfile {
    pub n_grid: Vec<u64>,
    pub tolerance: f64,
    pub angles: Vec<AngleProfile>,
}

fn unit(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * turns)
}

/// Averages on `n_grid` by one pass over the set; each angle is classified
/// from the last quarter of the grid: all moduli within `tolerance` of 0, or
/// all values within `tolerance` of each other, or neither.
pub fn weyl_profile(set: &IntegerSet, angles: &[Angle], n_grid: &[u64], tolerance: f64) -> Result<WeylProfile> {
    if set.is_empty() {
        return Err(Error::invalid("Weyl averages need a nonempty set"));
    }
    if n_grid.is_empty() || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("N grid must be nonempty and strictly increasing"));
    }
    let n_max = *n_grid.last().expect("nonempty");
    let mut profiles = Vec::with_capacity(angles.len());
    for angle in angles {
        angle.validate()?;
        let mut re = CompensatedSum::new();
        let mut im = CompensatedSum::new();
        let mut elems = set.iter().peekable();
        let mut count = 0usize;
        let mut points = Vec::with_capacity(n_grid.len());
        for &n in n_grid {
            while let Some(k) = elems.next_if(|&k| k <= n) {
                let z = unit(angle.turns(k));
                re.add(z.re);
                im.add(z.im);
                count += 1;
            }
            let average = (count > 0).then(|| Complex64::new(re.value(), im.value()) / count as f64);
            points.push(WeylPoint { n, count, average });
        }
        let class = classify(&points, tolerance);
        profiles.push(AngleProfile { angle: *angle, points, class, proxy_error: angle.proxy_error(n_max) });
    }
    Ok(WeylProfile { n_grid: n_grid.to_vec(), tolerance, angles: profiles })
}

fn classify(points: &[WeylPoint], tolerance: f64) -> WeylClass {
    let tail_len = points.len().div_ceil(4).max(2).min(points.len());
    let tail: Option<Vec<Complex64>> = points[points.len() - tail_len..].iter().map(|p| p.average).collect();
    let Some(tail) = tail.filter(|t| t.len() >= 2) else {
        return WeylClass::Undecided;
    };
    if tail.iter().all(|z| z.norm() <= tolerance) {
        return WeylClass::ConvergesToZero;
    }
    let spread = tail
        .iter()
        .flat_map(|a| tail.iter().map(move |b| (a - b).norm()))
        .fold(0.0, f64::max);
    if spread <= tolerance {
        WeylClass::ConvergesToLimit
    } else {
        WeylClass::Undecided
    }
}

/// `max |A_N(t)|` over every `N ∈ [n/2, n]` (the average only changes at
/// elements of the set, so this is exact). `None` if `Λ_{n/2}` is empty.
pub fn last_octave_max(set: &IntegerSet, angle: Angle, n: u64) -> Option<f64> {
    let lo = n / 2;
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    let mut count = 0usize;
    let mut best: Option<f64> = None;
    for k in set.iter().take_while(|&k| k <= n) {
        let z = unit(angle.turns(k));
        re.add(z.re);
        im.add(z.im);
        count += 1;
        if k >= lo {
            let m = Complex64::new(re.value(), im.value()).norm() / count as f64;
            best = Some(best.map_or(m, |b: f64| b.max(m)));
        }
    }
    if count == 0 || set.count_up_to(lo) == 0 {
        return None;
    }
    // The value on [lo, first element ≥ lo) is A_{lo}.
    let at_lo = average_at(set, angle, lo)?.norm();
    Some(best.map_or(at_lo, |b| b.max(at_lo)))
}

/// `A_N(t)` at a single `N`.
pub fn average_at(set: &IntegerSet, angle: Angle, n: u64) -> Option<Complex64> {
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    let mut count = 0usize;
    for k in set.iter().take_while(|&k| k <= n) {
        let z = unit(angle.turns(k));
        re.add(z.re);
        im.add(z.im);
        count += 1;
    }
    (count > 0).then(|| Complex64::new(re.value(), im.value()) / count as f64)
}

/// Weighted base average `σ_N^{-1} Σ_{k≤N} δ_k e^{iλ_k t}`, the deterministic
/// centre the random averages are compared with.
pub fn weighted_average(values: &[u64], means: &[f64], angle: Angle) -> Option<Complex64> {
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    let mut sigma = CompensatedSum::new();
    for (&v, &d) in values.iter().zip(means) {
        let z = unit(angle.turns(v)) * d;
        re.add(z.re);
        im.add(z.im);
        sigma.add(d);
    }
    let s = sigma.value();
    (s > 0.0).then(|| Complex64::new(re.value(), im.value()) / s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_angle_is_exactly_one() {
        let set = IntegerSet::new(vec![3, 10, 11, 400]).unwrap();
        let p = weyl_profile(&set, &[Angle::Zero], &[5, 50, 500, 5000], 1e-9).unwrap();
        for pt in &p.angles[0].points {
            assert_eq!(pt.average, Some(Complex64::new(1.0, 0.0)));
        }
        assert_eq!(p.angles[0].class, WeylClass::ConvergesToLimit);
    }

    #[test]
    fn alternating_sum_at_pi() {
        let set = IntegerSet::interval(1, 1000);
        let grid: Vec<u64> = (1..=1000).collect();
        let p = weyl_profile(&set, &[Angle::Rational { p: 1, q: 2 }], &grid, 0.01).unwrap();
        for pt in &p.angles[0].points {
            assert!(pt.average.unwrap().norm() <= 1.0 / pt.n as f64 + 1e-15);
        }
        assert_eq!(p.angles[0].class, WeylClass::ConvergesToZero);
    }

    #[test]
    fn squares_at_quarter_turn() {
        let squares: Vec<u64> = (1..=100).map(|k| k * k).collect();
        let set = IntegerSet::new(squares).unwrap();
        let z = average_at(&set, Angle::Rational { p: 1, q: 4 }, 10_000).unwrap();
        assert!((z - Complex64::new(0.5, 0.5)).norm() < 1e-12);
    }

    #[test]
    fn golden_proxy_is_accurate() {
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let a = Angle::GoldenMultiple { m: 3 };
        assert!((a.turns(1) - (3.0 * phi).fract()).abs() < 1e-15);
        assert!((a.turns(1000) - (3000.0 * phi).fract()).abs() < 1e-12);
        assert!(a.proxy_error(1_000_000) < 2e-12);
    }

    #[test]
    fn octave_maximum_dominates_endpoint() {
        let set = IntegerSet::new(vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]).unwrap();
        let a = Angle::GoldenMultiple { m: 1 };
        let m = last_octave_max(&set, a, 30).unwrap();
        assert!(m >= average_at(&set, a, 30).unwrap().norm());
        assert!(m >= average_at(&set, a, 15).unwrap().norm());
        assert!(last_octave_max(&set, a, 2).is_none());
    }

    #[test]
    fn rejects_bad_grid() {
        let set = IntegerSet::interval(1, 3);
        assert!(weyl_profile(&set, &[Angle::Zero], &[5, 5], 0.1).is_err());
        assert!(weyl_profile(&IntegerSet::empty(), &[Angle::Zero], &[5], 0.1).is_err());
    }
}
