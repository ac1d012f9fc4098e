//! Lower estimates of `Λ(q)`, uniform-convergence and Rider constants by
//! searching over polynomials with the given spectrum.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{
    exact_grid, for_each_grid_coset, grid_values, lq_norm, rademacher_norm, sup_grid, vallee_poussin_coeff,
    NormReport, TrigPolynomial,
};
use crate::numeric::linear_fit;
use crate::seq::rng::{streams, trial_seed, Stream};
use crate::seq::IntegerSet;

/// Coefficients visited by the sign-improvement pass.
const IMPROVE_LIMIT: usize = 64;
/// Sign patterns per Rademacher average in [`rider_ratio`].
pub const RIDER_SIGN_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// All coefficients equal to 1.
    Indicator,
    Unimodular { trial: u64 },
    Gaussian { trial: u64 },
    /// A random draw after one pass of coefficient sign flips.
    SignImproved { trial: u64 },
    /// Sign of `Re D_N` (Dirichlet kernel over the spectrum) smoothed by `V_N`.
    DirichletSign { n: u64 },
    /// Sign of `Im D_N`, smoothed the same way.
    ConjugateSign { n: u64 },
}

fn random_poly(spectrum: &[i64], seed: u64, trial: u64, gaussian: bool) -> TrigPolynomial {
    let mut rng = Stream::new(trial_seed(seed, trial), streams::COEFFICIENTS);
    TrigPolynomial::from_terms(
        spectrum
            .iter()
            .map(|&k| {
                let c = if gaussian {
                    Complex64::new(rng.next_gaussian(), rng.next_gaussian())
                } else {
                    Complex64::from_polar(1.0, TAU * rng.next_uniform())
                };
                (k, c)
            })
            .collect::<Vec<_>>(),
    )
}

/// Flips coefficient signs one at a time (the first [`IMPROVE_LIMIT`]),
/// keeping each flip that increases `score`.
fn improve_signs(f: &TrigPolynomial, score: &impl Fn(&TrigPolynomial) -> Result<f64>) -> Result<(TrigPolynomial, f64)> {
    let mut best = f.clone();
    let mut best_score = score(&best)?;
    let freqs: Vec<i64> = f.iter().map(|(k, _)| k).take(IMPROVE_LIMIT).collect();
    for k in freqs {
        let candidate = best.map_coeffs(|n, c| if n == k { -c } else { c });
        let s = score(&candidate)?;
        if s > best_score {
            best = candidate;
            best_score = s;
        }
    }
    Ok((best, best_score))
}

fn pick_best<T: Copy>(items: impl IntoIterator<Item = (T, f64)>) -> Option<(T, f64)> {
    items.into_iter().fold(None, |acc, (w, v)| match acc {
        Some((_, b)) if b >= v => acc,
        _ => Some((w, v)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaQRow {
    pub q: f64,
    /// Largest `‖f‖_q/‖f‖₂` found: a lower bound for the `Λ(q)` constant.
    pub c_q: f64,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaQProfile {
    pub rows: Vec<LambdaQRow>,
    /// Slope of `log C_q` against `log q`, when at least two `q` are given.
    pub exponent: Option<f64>,
}

pub fn lambda_q_profile(set: &IntegerSet, q_grid: &[f64], trials: usize, seed: u64) -> Result<LambdaQProfile> {
    if set.is_empty() {
        return Err(Error::invalid("Λ(q) profile needs a nonempty set"));
    }
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    if let Some(q) = q_grid.iter().find(|q| !(2.0..=16.0).contains(*q)) {
        return Err(Error::invalid(format!("q must lie in [2, 16], got {q}")));
    }
    let spectrum: Vec<i64> = set.iter().map(|k| k as i64).collect();
    let indicator = TrigPolynomial::indicator(set)?;
    let mut rows = Vec::with_capacity(q_grid.len());
    for &q in q_grid {
        let grid = exact_grid(&indicator, q, 2);
        let ratio = |f: &TrigPolynomial| -> Result<f64> { Ok(lq_norm(f, q, grid)?.value / f.l2_norm()) };
        let draws = (0..trials as u64)
            .into_par_iter()
            .map(|t| {
                let u = ratio(&random_poly(&spectrum, seed, t, false))?;
                let g = ratio(&random_poly(&spectrum, seed, t, true))?;
                Ok([(Witness::Unimodular { trial: t }, u), (Witness::Gaussian { trial: t }, g)])
            })
            .collect::<Result<Vec<_>>>()?;
        let (best_random, _) = pick_best(draws.iter().flatten().copied()).expect("trials >= 1");
        let base = match best_random {
            Witness::Gaussian { trial } => random_poly(&spectrum, seed, trial, true),
            Witness::Unimodular { trial } => random_poly(&spectrum, seed, trial, false),
            _ => unreachable!(),
        };
        let (_, improved) = improve_signs(&base, &ratio)?;
        let trial = match best_random {
            Witness::Gaussian { trial } | Witness::Unimodular { trial } => trial,
            _ => unreachable!(),
        };
        let candidates = std::iter::once((Witness::Indicator, ratio(&indicator)?))
            .chain(draws.into_iter().flatten())
            .chain(std::iter::once((Witness::SignImproved { trial }, improved)));
        let (witness, c_q) = pick_best(candidates).expect("nonempty");
        rows.push(LambdaQRow { q, c_q, witness });
    }
    let exponent = if rows.len() >= 2 {
        let xs: Vec<f64> = rows.iter().map(|r| r.q.ln()).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.c_q.ln()).collect();
        linear_fit(&xs, &ys).map(|f| f.slope)
    } else {
        None
    };
    Ok(LambdaQProfile { rows, exponent })
}

fn grid_max(f: &TrigPolynomial, grid: usize) -> Result<f64> {
    let mut m = 0.0f64;
    for_each_grid_coset(f, grid, |_, _, vals| {
        for v in vals {
            m = m.max(v.norm());
        }
    })?;
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UcEstimate {
    /// `max |S_N f| / max |f|`, both over the same grid.
    pub value: f64,
    /// `value` with the denominator inflated by the Bernstein factor: a
    /// guaranteed lower bound for `sup_N ‖S_N f‖_∞/‖f‖_∞`.
    pub certified: f64,
    pub best_n: u64,
    pub witness: Witness,
}

/// `(value, certified, best N)` for one witness.
fn partial_sum_ratio(f: &TrigPolynomial, n_grid: &[u64]) -> Result<(f64, f64, u64)> {
    let grid = sup_grid(f.degree(), 32);
    let den = grid_max(f, grid)?;
    if den == 0.0 {
        return Ok((0.0, 0.0, 0));
    }
    let bernstein = 1.0 / (1.0 - PI * f.degree() as f64 / grid as f64);
    let mut best = (0.0, 0.0, 0);
    for &n in n_grid {
        let n_i = i64::try_from(n).unwrap_or(i64::MAX);
        let num = grid_max(&f.partial_sum(n_i, n_i), grid)?;
        if num / den > best.0 {
            best = (num / den, num / (den * bernstein), n);
        }
    }
    Ok(best)
}

/// Projection onto the spectrum of `sign(part(D_N))`, tapered by `V̂_N`.
fn sign_witness(spectrum: &[i64], n: u64, conjugate: bool) -> Result<TrigPolynomial> {
    let n_i = i64::try_from(n).unwrap_or(i64::MAX);
    let dirichlet = TrigPolynomial::from_real_terms(spectrum.iter().filter(|k| k.abs() <= n_i).map(|&k| (k, 1.0)));
    let degree = spectrum.iter().map(|k| k.unsigned_abs()).max().unwrap_or(0);
    let grid = sup_grid(degree, 4);
    let mut buf: Vec<Complex64> = grid_values(&dirichlet, grid)?
        .into_iter()
        .map(|z| {
            let part = if conjugate { z.im } else { z.re };
            let s = if part > 1e-12 { 1.0 } else if part < -1e-12 { -1.0 } else { 0.0 };
            Complex64::new(s, 0.0)
        })
        .collect();
    FftPlanner::<f64>::new().plan_fft_forward(grid).process(&mut buf);
    let g = grid as i64;
    Ok(TrigPolynomial::from_terms(
        spectrum
            .iter()
            .map(|&k| {
                let coeff = buf[k.rem_euclid(g) as usize] / grid as f64;
                (k, coeff * vallee_poussin_coeff(n.max(1), k))
            })
            .collect::<Vec<_>>(),
    ))
}

/// Lower estimate of the uniform-convergence constant `sup_N ‖S_N f‖∞/‖f‖∞`
/// over structured witnesses and `trials` random unimodular draws.
pub fn uc_lower_bound(spectrum: &[i64], n_grid: &[u64], trials: usize, seed: u64) -> Result<UcEstimate> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let mut spec = spectrum.to_vec();
    spec.sort_unstable();
    spec.dedup();
    if spec.is_empty() || n_grid.is_empty() {
        return Err(Error::invalid("spectrum and N grid must be nonempty"));
    }
    let mut candidates: Vec<(Witness, (f64, f64, u64))> = Vec::new();
    for &n in n_grid {
        for conjugate in [false, true] {
            let f = sign_witness(&spec, n, conjugate)?;
            if !f.is_zero() {
                let w = if conjugate { Witness::ConjugateSign { n } } else { Witness::DirichletSign { n } };
                candidates.push((w, partial_sum_ratio(&f, n_grid)?));
            }
        }
    }
    let random = (0..trials as u64)
        .into_par_iter()
        .map(|t| Ok((Witness::Unimodular { trial: t }, partial_sum_ratio(&random_poly(&spec, seed, t, false), n_grid)?)))
        .collect::<Result<Vec<_>>>()?;
    let (best_w, _) = pick_best(random.iter().map(|(w, r)| (*w, r.0))).expect("trials >= 1");
    let Witness::Unimodular { trial } = best_w else { unreachable!() };
    let (improved, _) = improve_signs(&random_poly(&spec, seed, trial, false), &|f| Ok(partial_sum_ratio(f, n_grid)?.0))?;
    candidates.extend(random);
    candidates.push((Witness::SignImproved { trial }, partial_sum_ratio(&improved, n_grid)?));
    let best = candidates
        .iter()
        .fold(None::<&(Witness, (f64, f64, u64))>, |acc, c| match acc {
            Some(a) if a.1 .0 >= c.1 .0 => acc,
            _ => Some(c),
        })
        .expect("nonempty");
    Ok(UcEstimate { value: best.1 .0, certified: best.1 .1, best_n: best.1 .2, witness: best.0 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiderEstimate {
    /// `‖f̂‖_p / ⟦f⟧` for the best witness.
    pub value: f64,
    pub witness: Witness,
    pub polynomial: TrigPolynomial,
    pub coefficient_norm: f64,
    pub rademacher: NormReport,
}

/// Lower estimate of `sup ‖f̂‖_p/⟦f⟧` over the indicator and `trials`
/// unimodular and Gaussian draws.
pub fn rider_ratio(set: &IntegerSet, p: f64, trials: usize, seed: u64) -> Result<RiderEstimate> {
    if !(1.0..2.0).contains(&p) {
        return Err(Error::invalid(format!("p must lie in [1, 2), got {p}")));
    }
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    if set.is_empty() {
        return Err(Error::invalid("Rider ratio needs a nonempty set"));
    }
    let spectrum: Vec<i64> = set.iter().map(|k| k as i64).collect();
    let mut witnesses = vec![Witness::Indicator];
    for t in 0..trials as u64 {
        witnesses.push(Witness::Unimodular { trial: t });
        witnesses.push(Witness::Gaussian { trial: t });
    }
    let build = |w: Witness| -> Result<TrigPolynomial> {
        Ok(match w {
            Witness::Indicator => TrigPolynomial::indicator(set)?,
            Witness::Unimodular { trial } => random_poly(&spectrum, seed, trial, false),
            Witness::Gaussian { trial } => random_poly(&spectrum, seed, trial, true),
            _ => unreachable!(),
        })
    };
    let evaluated = witnesses
        .par_iter()
        .enumerate()
        .map(|(i, &w)| {
            let f = build(w)?;
            let coefficient_norm = f.iter().map(|(_, c)| c.norm().powf(p)).sum::<f64>().powf(1.0 / p);
            let rademacher = rademacher_norm(&f, RIDER_SIGN_SAMPLES, trial_seed(seed ^ 0x5249_4445, i as u64), 4)?;
            Ok((w, f, coefficient_norm, rademacher))
        })
        .collect::<Result<Vec<_>>>()?;
    let best = evaluated
        .into_iter()
        .fold(None::<(Witness, TrigPolynomial, f64, NormReport)>, |acc, c| match acc {
            Some(ref a) if a.2 / a.3.value >= c.2 / c.3.value => acc,
            _ => Some(c),
        })
        .expect("nonempty");
    Ok(RiderEstimate {
        value: best.2 / best.3.value,
        witness: best.0,
        polynomial: best.1,
        coefficient_norm: best.2,
        rademacher: best.3,
    })
}
