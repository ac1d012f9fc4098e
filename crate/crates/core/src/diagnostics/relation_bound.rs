//! Probability that a random set contains a relation of length `s` above `M`,
//! against `K_s·Σ_{j>M} δ_j² σ_j^{s−2}`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::verdict::{frequency, BoundCheckResult};
use crate::error::{Error, Result};
use crate::numeric::{bisect_threshold, CompensatedSum};
use crate::relations::find_relation;
use crate::seq::rng::trial_seed;
use crate::seq::{sample_set, BaseSequence, BlockSchedule, MeanSchedule};

/// Indices summed exactly before switching to the integral remainder.
pub const DEFAULT_TAIL_CAP: u64 = 1_000_000;
/// Step in `v = log t` for the tail integrals.
const LOG_STEP: f64 = 1e-2;
/// The integrand is dropped once it is `e^{-40}` below its peak.
const LOG_CUTOFF: f64 = 40.0;

/// Combinatorial constant in front of the sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationConstant {
    /// `(4e)^s/s^s`, for sets of integers.
    Integers,
    /// `(16e)^s/s^s`, for subsets of a regular base sequence.
    RegularBase,
}

impl RelationConstant {
    pub fn ln_factor(self, s: u32) -> f64 {
        let s = f64::from(s);
        let base: f64 = match self {
            RelationConstant::Integers => 4.0,
            RelationConstant::RegularBase => 16.0,
        };
        s * (base.ln() + 1.0) - s * s.ln()
    }

    pub fn bound_id(self) -> &'static str {
        match self {
            RelationConstant::Integers => "lemma2_1",
            RelationConstant::RegularBase => "lemma3_3",
        }
    }
}

/// `ln ∫_{e^{v0}}^∞ δ(t)²·σ(t)^{s−2} dt` with `σ(e^{v_sigma}) = sigma0` and
/// `σ' = δ`, by the trapezoid rule in `v = log t`.
fn ln_tail_integral(schedule: &MeanSchedule, v_sigma: f64, sigma0: f64, v0: f64, s: u32) -> f64 {
    let power = f64::from(s) - 2.0;
    let ln_integrand = |v: f64, sigma: f64| {
        let a = schedule.alpha_at_log(v);
        if a <= 0.0 || sigma <= 0.0 && power > 0.0 {
            f64::NEG_INFINITY
        } else {
            2.0 * a.ln() - v + if power > 0.0 { power * sigma.ln() } else { 0.0 }
        }
    };
    // Advance σ to v0 without accumulating.
    let mut v = v_sigma;
    let mut sigma = sigma0;
    while v + LOG_STEP <= v0 {
        sigma += 0.5 * LOG_STEP * (schedule.alpha_at_log(v) + schedule.alpha_at_log(v + LOG_STEP));
        v += LOG_STEP;
    }
    if v < v0 {
        let h = v0 - v;
        sigma += 0.5 * h * (schedule.alpha_at_log(v) + schedule.alpha_at_log(v0));
        v = v0;
    }
    // Running log-sum-exp of trapezoid weights.
    let mut peak = f64::NEG_INFINITY;
    let mut scaled = 0.0;
    let add = |l: f64, w: f64, peak: &mut f64, scaled: &mut f64| {
        if l == f64::NEG_INFINITY {
            return;
        }
        if l > *peak {
            *scaled *= (*peak - l).exp();
            *peak = l;
        }
        *scaled += w * (l - *peak).exp();
    };
    let mut l = ln_integrand(v, sigma);
    add(l, 0.5 * LOG_STEP, &mut peak, &mut scaled);
    let limit = v0 + 1e4;
    while v < limit {
        sigma += 0.5 * LOG_STEP * (schedule.alpha_at_log(v) + schedule.alpha_at_log(v + LOG_STEP));
        v += LOG_STEP;
        l = ln_integrand(v, sigma);
        add(l, LOG_STEP, &mut peak, &mut scaled);
        if v > v0 + 1.0 && l < peak - LOG_CUTOFF {
            break;
        }
        if peak == f64::NEG_INFINITY && v > v0 + 50.0 {
            break;
        }
    }
    if peak == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        peak + scaled.ln()
    }
}

/// `Σ_{j>M} δ_j² σ_j^{s−2}` given `ln M` (which may exceed 64 bits): exact up
/// to `tail_cap`, then the integral with `σ` shifted up by `δ_{tail_cap}` so
/// that the discrete partial sums are covered.
pub fn relation_tail_sum(schedule: &MeanSchedule, ln_m: f64, s: u32, tail_cap: u64) -> f64 {
    let cap = match schedule {
        MeanSchedule::Custom { table } => tail_cap.min(table.len() as u64),
        _ => tail_cap,
    };
    let power = s.saturating_sub(2) as i32;
    let m_exact = if ln_m < (cap as f64).ln() { ln_m.exp().floor() as u64 } else { cap };
    let mut sigma = CompensatedSum::new();
    let mut sum = CompensatedSum::new();
    for j in 1..=cap {
        let d = schedule.mean_at(j);
        sigma.add(d);
        if j > m_exact {
            sum.add(d * d * sigma.value().powi(power));
        }
    }
    if matches!(schedule, MeanSchedule::Custom { .. }) {
        return sum.value();
    }
    let v_cap = (cap as f64).ln();
    let shifted = sigma.value() + schedule.mean_at(cap);
    let tail = ln_tail_integral(schedule, v_cap, shifted, ln_m.max(v_cap), s);
    sum.value() + tail.exp()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationBoundParams {
    pub schedule: MeanSchedule,
    pub base: BaseSequence,
    pub constant: RelationConstant,
    pub s: u32,
    /// Relations are sought among elements `≥ λ_M`.
    pub m: u64,
    /// Number of base elements sampled per trial.
    pub horizon: usize,
    pub trials: usize,
    pub seed: u64,
    pub tail_cap: u64,
}

pub fn check_relation_bound(params: &RelationBoundParams) -> Result<BoundCheckResult> {
    let RelationBoundParams { schedule, base, constant, s, m, horizon, trials, seed, tail_cap } = params;
    if *s < 3 {
        return Err(Error::invalid(format!("relation length must be at least 3, got {s}")));
    }
    if *m == 0 || *m as usize > *horizon {
        return Err(Error::invalid(format!("need 1 <= M <= horizon, got M = {m}")));
    }
    if *trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    schedule.validate()?;
    let min_element = *base.values(*m as usize)?.last().expect("m >= 1");
    let hits = (0..*trials as u64)
        .into_par_iter()
        .map(|t| {
            let set = sample_set(schedule, base, *horizon, trial_seed(*seed, t))?;
            Ok(find_relation(&set, *s as usize, min_element)?.is_some())
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&h| h)
        .count() as u64;
    let (p, se) = frequency(hits, *trials as u64);
    let tail = relation_tail_sum(schedule, (*m as f64).ln(), *s, *tail_cap);
    let analytic = if tail == 0.0 { 0.0 } else { (constant.ln_factor(*s) + tail.ln()).exp() };
    let mut result = BoundCheckResult::new(constant.bound_id(), analytic, p, *trials as u64, se)
        .param("schedule", schedule.describe())
        .param("base", base.tag())
        .param("s", s)
        .param("m", m)
        .param("horizon", horizon)
        .param("tail_cap", tail_cap)
        .param("seed", seed)
        .note(format!(
            "sets truncated at the first {horizon} base elements: the empirical frequency is a lower bound for the probability"
        ));
    if *constant == RelationConstant::RegularBase {
        result = result.note("the regular-base constant is only claimed for s large enough");
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibleConstant {
    /// Chosen constant: the truncated series equals `target` there.
    pub c: f64,
    pub target: f64,
    /// `(n, ln term_n)` at `c = 1`; the term at `c` is `c^n·term_n`.
    pub ln_terms: Vec<(u64, f64)>,
    /// Whether `c·δ_k(1) ≤ 1` for all `k` (the series scales exactly as `c^n`).
    pub unclipped: bool,
}

impl FeasibleConstant {
    pub fn series(&self, c: f64) -> f64 {
        self.ln_terms.iter().map(|&(n, l)| (n as f64 * c.ln() + l).exp()).sum()
    }
}

/// Largest `n` in the truncated series `Σ_{n≥3} P(Ω_n(M_n))`.
pub const SERIES_TERMS: u64 = 80;

/// The constant `c` for which `Σ_{3≤n≤80} (4e)^n/n^n Σ_{j>M_n} δ_j² σ_j^{n−2}`
/// equals `target`; the series is increasing in `c`.
pub fn feasible_c(schedule: &MeanSchedule, blocks: &BlockSchedule, target: f64) -> Result<FeasibleConstant> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::invalid(format!("target must lie in (0, 1), got {target}")));
    }
    if matches!(schedule, MeanSchedule::Custom { .. }) {
        return Err(Error::invalid("a custom table has no constant to tune"));
    }
    let unit = schedule.with_c(1.0);
    let ln_terms = (3..=SERIES_TERMS)
        .into_par_iter()
        .map(|n| {
            let ln_m = blocks.ln_boundary(n)?;
            let tail = relation_tail_sum(&unit, ln_m, n as u32, DEFAULT_TAIL_CAP);
            Ok((n, RelationConstant::Integers.ln_factor(n as u32) + tail.ln()))
        })
        .collect::<Result<Vec<_>>>()?;
    let probe = FeasibleConstant { c: 0.0, target, ln_terms, unclipped: true };
    let c = bisect_threshold(1e-9, 1e3, 1e-10, |c| probe.series(c) >= target);
    let max_mean = (1..=64).map(|k| unit.mean_at(k)).fold(0.0, f64::max);
    Ok(FeasibleConstant { c, unclipped: c * max_mean <= 1.0, ..probe })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::verdict::Verdict;

    #[test]
    fn constants() {
        let l = RelationConstant::Integers.ln_factor(3).exp();
        assert!((l - (4.0 * std::f64::consts::E).powi(3) / 27.0).abs() < 1e-9);
        let l = RelationConstant::RegularBase.ln_factor(3).exp();
        assert!((l - (16.0 * std::f64::consts::E).powi(3) / 27.0).abs() < 1e-6);
    }

    #[test]
    fn tail_sum_matches_direct_summation() {
        let sched = MeanSchedule::LogLog { c: 1.0 };
        let direct: f64 = {
            let mut sigma = 0.0;
            let mut sum = 0.0;
            for j in 1..=200_000u64 {
                let d = sched.mean_at(j);
                sigma += d;
                if j > 27 {
                    sum += d * d * sigma;
                }
            }
            sum
        };
        let capped = relation_tail_sum(&sched, 27f64.ln(), 3, 200_000);
        let split = relation_tail_sum(&sched, 27f64.ln(), 3, 2_000);
        assert!(capped >= direct);
        // The remainder past 2·10^5 is small; the split version over-covers it.
        assert!((capped - direct) / direct < 0.05, "{capped} {direct}");
        assert!(split >= direct && (split - capped).abs() / capped < 0.05, "{split} {capped}");
    }

    #[test]
    fn null_schedule() {
        let params = RelationBoundParams {
            schedule: MeanSchedule::Custom { table: vec![0.0; 1000] },
            base: BaseSequence::Naturals,
            constant: RelationConstant::Integers,
            s: 3,
            m: 10,
            horizon: 1000,
            trials: 20,
            seed: 1,
            tail_cap: 1000,
        };
        let r = check_relation_bound(&params).unwrap();
        assert_eq!(r.empirical_estimate, 0.0);
        assert_eq!(r.analytic_bound, 0.0);
        assert_eq!(r.verdict, Verdict::Consistent);
    }

    #[test]
    fn short_relations_above_m() {
        let params = RelationBoundParams {
            schedule: MeanSchedule::LogLog { c: 1.0 },
            base: BaseSequence::Naturals,
            constant: RelationConstant::Integers,
            s: 3,
            m: 27,
            horizon: 10_000,
            trials: 100,
            seed: 4,
            tail_cap: DEFAULT_TAIL_CAP,
        };
        let r = check_relation_bound(&params).unwrap();
        assert_ne!(r.verdict, Verdict::Violated);
        assert!(r.empirical_estimate > 0.0 && r.empirical_estimate < 1.0);
    }

    #[test]
    fn feasible_constant_makes_series_small() {
        let f = feasible_c(&MeanSchedule::LogLog { c: 1.0 }, &BlockSchedule::NPowN, 0.5).unwrap();
        assert!(f.c > 0.0 && f.c < 1.0, "{}", f.c);
        assert!((f.series(f.c) - 0.5).abs() < 1e-6);
        assert!(f.series(f.c * 1.01) > 0.5);
        assert!(f.unclipped);
        // Terms must die off well before the truncation point.
        let last = f.ln_terms.last().unwrap().1 + SERIES_TERMS as f64 * f.c.ln();
        assert!(last < -30.0, "{last}");
    }
}
