//! Block schedules `n ↦ M_n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rule splitting the positive integers into blocks `[M_n, M_{n+1})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockSchedule {
    /// `n^n`.
    NPowN,
    /// `⌊e^{n(loglog n)²}⌋`, at least 1.
    ExpLogLogSq,
    /// Smallest integer `≥ n^{βn}`.
    NPowBetaN { beta: f64 },
    /// `2^n`.
    Dyadic,
}

impl BlockSchedule {
    pub fn tag(&self) -> &'static str {
        match self {
            BlockSchedule::NPowN => "n_pow_n",
            BlockSchedule::ExpLogLogSq => "exp_loglog_sq",
            BlockSchedule::NPowBetaN { .. } => "n_pow_beta_n",
            BlockSchedule::Dyadic => "dyadic",
        }
    }

    /// `M_n` as an exact 64-bit integer.
    pub fn boundary(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::invalid("block index starts at 1"));
        }
        let overflow = || Error::Overflow(format!("{} block boundary M_{n} exceeds 64 bits", self.tag()));
        match *self {
            BlockSchedule::NPowN => {
                let e = u32::try_from(n).map_err(|_| overflow())?;
                n.checked_pow(e).ok_or_else(overflow)
            }
            BlockSchedule::Dyadic => {
                let e = u32::try_from(n).map_err(|_| overflow())?;
                1u64.checked_shl(e).filter(|_| e < 64).ok_or_else(overflow)
            }
            BlockSchedule::ExpLogLogSq => {
                // loglog n < 0 for n < 3; the formula is only used from there on.
                let x = n.max(3) as f64;
                let ll = x.ln().ln();
                let v = (x * ll * ll).exp().floor();
                float_to_u64(v.max(1.0)).ok_or_else(overflow)
            }
            BlockSchedule::NPowBetaN { beta } => {
                if !(beta.is_finite() && beta > 0.0) {
                    return Err(Error::invalid(format!("beta must be positive, got {beta}")));
                }
                let exponent = beta * n as f64;
                let rounded = exponent.round();
                if (exponent - rounded).abs() < 1e-12 {
                    let e = u32::try_from(rounded as u64).map_err(|_| overflow())?;
                    return n.checked_pow(e).ok_or_else(overflow);
                }
                let v = (exponent * (n as f64).ln()).exp().ceil();
                float_to_u64(v).ok_or_else(overflow)
            }
        }
    }

    /// `ln M_n` from the same rule, without rounding; finite where
    /// [`boundary`](Self::boundary) overflows.
    pub fn ln_boundary(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::invalid("block index starts at 1"));
        }
        let x = n as f64;
        Ok(match *self {
            BlockSchedule::NPowN => x * x.ln(),
            BlockSchedule::Dyadic => x * std::f64::consts::LN_2,
            BlockSchedule::ExpLogLogSq => {
                let x = x.max(3.0);
                let ll = x.ln().ln();
                x * ll * ll
            }
            BlockSchedule::NPowBetaN { beta } => {
                if !(beta.is_finite() && beta > 0.0) {
                    return Err(Error::invalid(format!("beta must be positive, got {beta}")));
                }
                beta * x * x.ln()
            }
        })
    }

    /// First index from which `M_{n+1} ≥ 2·M_n` holds for every later `n`
    /// representable in 64 bits.
    pub fn doubling_start(&self) -> u64 {
        let mut start = 1;
        let mut n = 1;
        while let (Ok(a), Ok(b)) = (self.boundary(n), self.boundary(n + 1)) {
            if b / 2 < a {
                start = n + 1;
            }
            n += 1;
        }
        start
    }

    /// Boundaries `M_n ≤ limit`, in order, starting from `n = 1`.
    pub fn boundaries_up_to(&self, limit: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut n = 1;
        while let Ok(m) = self.boundary(n) {
            if m > limit {
                break;
            }
            out.push((n, m));
            n += 1;
        }
        out
    }
}

fn float_to_u64(v: f64) -> Option<u64> {
    // 2^64 is exactly representable; anything at or above it does not fit.
    if v.is_finite() && v >= 0.0 && v < 18_446_744_073_709_551_616.0 {
        Some(v as u64)
    } else {
        None
    }
}
