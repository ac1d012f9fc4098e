//! Selector mean schedules `δ_k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// A sequence of selector means `δ_1, δ_2, …`, one variant per construction.
///
/// Formulas are only meaningful from a variant-specific start index (`loglog k`
/// is negative below 3); indices below it take the value at the start index.
/// Every value is clipped to `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MeanSchedule {
    /// `c·loglog k / k`.
    #[serde(rename = "t2_2")]
    LogLog { c: f64 },
    /// Same means as [`MeanSchedule::LogLog`]; paired with the
    /// `⌊e^{n(loglog n)²}⌋` block schedule.
    #[serde(rename = "p2_4")]
    LogLogOrlicz { c: f64 },
    /// `c·(log k)^α / (k·(loglog k)^{α+1})` with `α = 2(p−1)/(2−p)`, `1 < p < 4/3`.
    #[serde(rename = "t2_5")]
    PowerLog { c: f64, p: f64 },
    /// `c·(log k)^α·loglog k / k`, `1 < p < 4/3`.
    #[serde(rename = "t2_6")]
    PowerLogLog { c: f64, p: f64 },
    /// `c·n/2^n` on the dyadic block `[2^n, 2^{n+1})`, `n ≥ 2`, with a second
    /// independent selector stage of constant mean `τ`.
    #[serde(rename = "t2_7")]
    Dyadic { c: f64, tau: f64 },
    /// The `t2_5` formula for `4/3 ≤ p < 2` (so `α ≥ 1`).
    #[serde(rename = "t2_10")]
    PowerLogHigh { c: f64, p: f64 },
    /// `c/k`: bounded `k·δ_k`.
    #[serde(rename = "katz_mall")]
    KatzMalliavin { c: f64 },
    /// Explicit table `δ_1..δ_n`; zero beyond.
    #[serde(rename = "custom")]
    Custom { table: Vec<f64> },
}

/// `α = 2(p−1)/(2−p)`.
pub fn alpha_for_p(p: f64) -> f64 {
    2.0 * (p - 1.0) / (2.0 - p)
}

impl MeanSchedule {
    /// Short tag used on the command line and in file metadata.
    pub fn tag(&self) -> &'static str {
        match self {
            MeanSchedule::LogLog { .. } => "t2_2",
            MeanSchedule::LogLogOrlicz { .. } => "p2_4",
            MeanSchedule::PowerLog { .. } => "t2_5",
            MeanSchedule::PowerLogLog { .. } => "t2_6",
            MeanSchedule::Dyadic { .. } => "t2_7",
            MeanSchedule::PowerLogHigh { .. } => "t2_10",
            MeanSchedule::KatzMalliavin { .. } => "katz_mall",
            MeanSchedule::Custom { .. } => "custom",
        }
    }

    /// Human-readable description including parameters.
    pub fn describe(&self) -> String {
        match self {
            MeanSchedule::LogLog { c }
            | MeanSchedule::LogLogOrlicz { c }
            | MeanSchedule::KatzMalliavin { c } => format!("{}(c={c})", self.tag()),
            MeanSchedule::PowerLog { c, p }
            | MeanSchedule::PowerLogLog { c, p }
            | MeanSchedule::PowerLogHigh { c, p } => format!("{}(c={c},p={p})", self.tag()),
            MeanSchedule::Dyadic { c, tau } => format!("t2_7(c={c},tau={tau})"),
            MeanSchedule::Custom { table } => format!("custom(len={})", table.len()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check_c = |c: f64| {
            if c.is_finite() && c >= 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(format!("constant c must be finite and >= 0, got {c}")))
            }
        };
        match *self {
            MeanSchedule::LogLog { c }
            | MeanSchedule::LogLogOrlicz { c }
            | MeanSchedule::KatzMalliavin { c } => check_c(c),
            MeanSchedule::PowerLog { c, p } | MeanSchedule::PowerLogLog { c, p } => {
                check_c(c)?;
                if !(p > 1.0 && p < 4.0 / 3.0) {
                    return Err(Error::invalid(format!("{} needs 1 < p < 4/3, got {p}", self.tag())));
                }
                Ok(())
            }
            MeanSchedule::PowerLogHigh { c, p } => {
                check_c(c)?;
                if !((4.0 / 3.0..2.0).contains(&p)) {
                    return Err(Error::invalid(format!("t2_10 needs 4/3 <= p < 2, got {p}")));
                }
                Ok(())
            }
            MeanSchedule::Dyadic { c, tau } => {
                check_c(c)?;
                if !(0.0..=1.0).contains(&tau) {
                    return Err(Error::invalid(format!("tau must lie in [0, 1], got {tau}")));
                }
                Ok(())
            }
            MeanSchedule::Custom { ref table } => {
                if table.iter().all(|d| d.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::invalid("custom table contains a non-finite mean"))
                }
            }
        }
    }

    /// `α = 2(p−1)/(2−p)` for the variants parameterised by `p`.
    pub fn alpha(&self) -> Option<f64> {
        match *self {
            MeanSchedule::PowerLog { p, .. }
            | MeanSchedule::PowerLogLog { p, .. }
            | MeanSchedule::PowerLogHigh { p, .. } => Some(alpha_for_p(p)),
            _ => None,
        }
    }

    /// First index at which the formula is used as written.
    pub fn start_index(&self) -> u64 {
        match self {
            MeanSchedule::LogLog { .. }
            | MeanSchedule::LogLogOrlicz { .. }
            | MeanSchedule::PowerLogLog { .. } => 3,
            MeanSchedule::PowerLog { .. }
            | MeanSchedule::PowerLogHigh { .. }
            | MeanSchedule::Dyadic { .. } => 4,
            MeanSchedule::KatzMalliavin { .. } | MeanSchedule::Custom { .. } => 1,
        }
    }

    /// Whether `k·δ_k → ∞` for this variant.
    pub fn has_divergent_alpha(&self) -> bool {
        match self {
            MeanSchedule::KatzMalliavin { .. } | MeanSchedule::Custom { .. } => false,
            MeanSchedule::LogLog { c }
            | MeanSchedule::LogLogOrlicz { c }
            | MeanSchedule::PowerLog { c, .. }
            | MeanSchedule::PowerLogLog { c, .. }
            | MeanSchedule::PowerLogHigh { c, .. }
            | MeanSchedule::Dyadic { c, .. } => *c > 0.0,
        }
    }

    /// Mean of the second selector stage, if the construction has one.
    pub fn secondary_mean(&self) -> Option<f64> {
        match *self {
            MeanSchedule::Dyadic { tau, .. } => Some(tau),
            _ => None,
        }
    }

    /// The same schedule with its constant replaced.
    pub fn with_c(&self, new_c: f64) -> MeanSchedule {
        let mut s = self.clone();
        match &mut s {
            MeanSchedule::LogLog { c }
            | MeanSchedule::LogLogOrlicz { c }
            | MeanSchedule::PowerLog { c, .. }
            | MeanSchedule::PowerLogLog { c, .. }
            | MeanSchedule::Dyadic { c, .. }
            | MeanSchedule::PowerLogHigh { c, .. }
            | MeanSchedule::KatzMalliavin { c } => *c = new_c,
            MeanSchedule::Custom { .. } => {}
        }
        s
    }

    /// `δ_k`, clipped to `[0, 1]`.
    pub fn mean_at(&self, k: u64) -> f64 {
        let k = k.max(1);
        if let MeanSchedule::Custom { table } = self {
            return table.get((k - 1) as usize).map_or(0.0, |d| d.clamp(0.0, 1.0));
        }
        let k = k.max(self.start_index());
        if let MeanSchedule::Dyadic { c, .. } = *self {
            let n = 63 - k.leading_zeros();
            return (c * f64::from(n) / 2f64.powi(n as i32)).clamp(0.0, 1.0);
        }
        let v = (k as f64).ln();
        (self.alpha_raw(v) / k as f64).clamp(0.0, 1.0)
    }

    /// Unclipped `k·δ_k` for `k = e^v`, defined for the closed-form variants.
    fn alpha_raw(&self, v: f64) -> f64 {
        let lv = v.ln();
        match *self {
            MeanSchedule::LogLog { c } | MeanSchedule::LogLogOrlicz { c } => c * lv,
            MeanSchedule::PowerLog { c, p } | MeanSchedule::PowerLogHigh { c, p } => {
                let a = alpha_for_p(p);
                c * v.powf(a) / lv.powf(a + 1.0)
            }
            MeanSchedule::PowerLogLog { c, p } => c * v.powf(alpha_for_p(p)) * lv,
            MeanSchedule::KatzMalliavin { c } => c,
            MeanSchedule::Dyadic { c, .. } => {
                let n = (v / std::f64::consts::LN_2).floor();
                c * n * (v - n * std::f64::consts::LN_2).exp()
            }
            MeanSchedule::Custom { .. } => 0.0,
        }
    }

    /// `t·δ(t)` at `t = e^v` for the continuous extension of the formula,
    /// clipped so that `δ ≤ 1`. Works in log space so `t` may exceed `f64` range.
    pub fn alpha_at_log(&self, v: f64) -> f64 {
        if let MeanSchedule::Custom { table } = self {
            let t = v.exp();
            return if t.is_finite() && t >= 1.0 {
                table
                    .get(t.floor() as usize - 1)
                    .map_or(0.0, |d| d.clamp(0.0, 1.0) * t)
            } else {
                0.0
            };
        }
        let v_start = (self.start_index() as f64).ln();
        if v < v_start {
            return self.mean_at(self.start_index()) * v.exp();
        }
        let a = self.alpha_raw(v).max(0.0);
        if v < 700.0 {
            a.min(v.exp())
        } else {
            a
        }
    }

    /// `σ_N = δ_1 + … + δ_N`, compensated summation.
    pub fn sigma(&self, n: u64) -> f64 {
        (1..=n).map(|k| self.mean_at(k)).collect::<CompensatedSum>().value()
    }

    /// Means `δ_1..δ_n` as a table (index `k-1` holds `δ_k`).
    pub fn table(&self, n: usize) -> Vec<f64> {
        (1..=n as u64).map(|k| self.mean_at(k)).collect()
    }

    /// Running partial sums `σ_1..σ_n`.
    pub fn sigma_table(&self, n: usize) -> Vec<f64> {
        let mut acc = CompensatedSum::new();
        (1..=n as u64)
            .map(|k| {
                acc.add(self.mean_at(k));
                acc.value()
            })
            .collect()
    }
}
