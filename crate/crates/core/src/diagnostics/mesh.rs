//! Fits `|Λ ∩ [1, N]| ≈ C·(log N)^β`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::linear_fit;
use crate::seq::IntegerSet;

/// Fits whose RMS residual (in `log count`) exceeds this are rejected: the
/// counts do not follow a power of `log N`.
pub const MESH_RESIDUAL_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshFit {
    pub beta: f64,
    pub constant: f64,
    pub rms_residual: f64,
    pub accepted: bool,
    /// `(N, |Λ ∩ [1, N]|)` for the grid points used.
    pub points: Vec<(u64, usize)>,
}

/// Least squares of `log count` against `log log N` over grid points with
/// `N ≥ 3` and a nonzero count.
pub fn mesh_exponent_fit(set: &IntegerSet, n_grid: &[u64]) -> Result<MeshFit> {
    let points: Vec<(u64, usize)> = n_grid
        .iter()
        .filter(|&&n| n >= 3)
        .map(|&n| (n, set.count_up_to(n)))
        .filter(|&(_, c)| c > 0)
        .collect();
    if points.len() < 4 {
        return Err(Error::invalid(format!(
            "mesh fit needs at least 4 grid points with N >= 3 and a nonzero count, got {}",
            points.len()
        )));
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln().ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, c)| (c as f64).ln()).collect();
    let fit = linear_fit(&xs, &ys).ok_or_else(|| Error::invalid("degenerate N grid for the mesh fit"))?;
    Ok(MeshFit {
        beta: fit.slope,
        constant: fit.intercept.exp(),
        rms_residual: fit.rms_residual,
        accepted: fit.rms_residual <= MESH_RESIDUAL_LIMIT,
        points,
    })
}

/// `{2^n + 2^j : 0 ≤ j < n}` with every element at most `limit`.
pub fn two_power_pairs(limit: u64) -> IntegerSet {
    let mut v = Vec::new();
    for n in 1..64u32 {
        let high = 1u64 << n;
        if high > limit {
            break;
        }
        v.extend((0..n).map(|j| high + (1u64 << j)).filter(|&x| x <= limit));
    }
    IntegerSet::new(v).expect("distinct positive values")
}

/// `{2^n : 2^n ≤ limit}`.
pub fn powers_of_two(limit: u64) -> IntegerSet {
    IntegerSet::new((0..64).map(|n| 1u64 << n).take_while(|&x| x <= limit).collect()).expect("distinct")
}
