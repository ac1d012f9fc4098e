//! Regularity diagnostics for a prescribed base against a growth model `φ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::linear_fit;
use crate::seq::BaseSequence;

/// One grid point of a regularity report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityRow {
    pub n: u64,
    /// `ν([N, 2N))`.
    pub count: u64,
    pub model: f64,
    /// `ν([N, 2N)) / φ(N)`; should tend to 1.
    pub count_ratio: f64,
    /// `φ(2N) / φ(N)`; should tend to a limit `> 1`.
    pub growth_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityReport {
    pub rows: Vec<RegularityRow>,
    /// Fitted `ν([1,k]) ≥ a·k^d` over the grid: `d` is the log-log slope and
    /// `a` the smallest `ν([1,k])/k^d` seen.
    pub power_a: f64,
    pub power_d: f64,
    /// `λ_{8n} ≥ 2λ_n` checked for `n` up to `ν([1, max grid])`.
    pub doubling_checked_up_to: u64,
    /// Smallest `n0` with the doubling condition true for all checked `n ≥ n0`.
    pub doubling_holds_from: u64,
    /// Grid point with the largest `|count_ratio − 1|`.
    pub worst_n: u64,
    pub worst_deviation: f64,
}

/// Evaluates the count ratio, the growth ratio, a power-law lower fit and
/// the `λ_{8n} ≥ 2λ_n` scan on `grid`.
pub fn regularity_report(base: &BaseSequence, phi: impl Fn(f64) -> f64, grid: &[u64]) -> Result<RegularityReport> {
    if grid.is_empty() {
        return Err(Error::invalid("regularity grid is empty"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] == 0 {
        return Err(Error::invalid("regularity grid must be positive and increasing"));
    }
    let mut rows = Vec::with_capacity(grid.len());
    for &n in grid {
        let hi = n.checked_mul(2).ok_or_else(|| Error::Overflow(format!("2·{n}")))?;
        let count = base.count_in(n, hi)?;
        let model = phi(n as f64);
        rows.push(RegularityRow {
            n,
            count,
            model,
            count_ratio: count as f64 / model,
            growth_ratio: phi(hi as f64) / model,
        });
    }

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut cumulative = Vec::new();
    for &k in grid {
        let nu = base.count_in(1, k + 1)?;
        if nu > 0 {
            xs.push((k as f64).ln());
            ys.push((nu as f64).ln());
            cumulative.push((k, nu));
        }
    }
    let power_d = match linear_fit(&xs, &ys) {
        Some(fit) => fit.slope,
        None => f64::NAN,
    };
    let power_a = cumulative
        .iter()
        .map(|&(k, nu)| nu as f64 / (k as f64).powf(power_d))
        .fold(f64::INFINITY, f64::min);

    let top = *grid.last().expect("grid is nonempty");
    let max_index = base.count_in(1, top + 1)?;
    let (doubling_checked_up_to, doubling_holds_from) = match base {
        BaseSequence::Custom { elements } => {
            let m = (elements.len() / 8) as u64;
            (m.min(max_index), doubling_scan(elements.as_slice(), m.min(max_index)))
        }
        _ => {
            let values = base.values(8 * max_index as usize)?;
            (max_index, doubling_scan(&values, max_index))
        }
    };

    let (worst_n, worst_deviation) = rows
        .iter()
        .map(|r| (r.n, (r.count_ratio - 1.0).abs()))
        .fold((grid[0], -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });

    Ok(RegularityReport {
        rows,
        power_a,
        power_d,
        doubling_checked_up_to,
        doubling_holds_from,
        worst_n,
        worst_deviation,
    })
}

/// Smallest `n0` such that `λ_{8n} ≥ 2λ_n` for every `n0 ≤ n ≤ up_to` (1-based).
fn doubling_scan(values: &[u64], up_to: u64) -> u64 {
    let mut from = 1;
    for n in 1..=up_to as usize {
        if values[8 * n - 1] < 2 * values[n - 1] {
            from = n as u64 + 1;
        }
    }
    from
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naturals_are_exactly_regular() {
        let r = regularity_report(&BaseSequence::Naturals, |x| x, &[10, 100, 1000]).unwrap();
        for row in &r.rows {
            assert_eq!(row.count_ratio, 1.0);
            assert_eq!(row.growth_ratio, 2.0);
        }
        assert_eq!(r.doubling_holds_from, 1);
        assert_eq!(r.doubling_checked_up_to, 1000);
        assert!((r.power_d - 1.0).abs() < 1e-12);
        assert_eq!(r.worst_deviation, 0.0);
    }

    #[test]
    fn squares_count_ratio_tends_to_one() {
        let phi = |x: f64| (2f64.sqrt() - 1.0) * x.sqrt();
        let grid = [1_000, 10_000, 100_000, 1_000_000];
        let r = regularity_report(&BaseSequence::squares(), phi, &grid).unwrap();
        assert!((r.rows[3].count_ratio - 1.0).abs() < 0.05);
        assert!((r.power_d - 0.5).abs() < 0.02);
        assert_eq!(r.doubling_holds_from, 1);
    }

    #[test]
    fn primes_follow_the_prime_number_theorem() {
        let phi = |x: f64| x / x.ln();
        let r = regularity_report(&BaseSequence::Primes, phi, &[10_000, 100_000, 1_000_000]).unwrap();
        for row in &r.rows {
            assert!((row.count_ratio - 1.0).abs() < 0.15, "{row:?}");
        }
        assert!(r.worst_deviation >= (r.rows[2].count_ratio - 1.0).abs());
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(regularity_report(&BaseSequence::Naturals, |x| x, &[]).is_err());
        assert!(regularity_report(&BaseSequence::Naturals, |x| x, &[5, 5]).is_err());
    }
}
