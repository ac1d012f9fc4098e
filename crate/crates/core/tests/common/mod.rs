//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the search or transform code under test.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Relation structure of a small set by exhaustive enumeration.
pub struct RelationCensus {
    /// `supports[s]` = number of `s`-subsets carrying a relation.
    pub supports: Vec<u64>,
}

impl RelationCensus {
    pub fn is_quasi_independent(&self) -> bool {
        self.supports.iter().all(|&c| c == 0)
    }

    pub fn has_length(&self, s: usize) -> bool {
        self.supports.get(s).is_some_and(|&c| c > 0)
    }
}

/// Walks every subset and every sign pattern (Gray code order, first sign fixed).
pub fn relation_census(elems: &[u64]) -> RelationCensus {
    let n = elems.len();
    assert!(n <= 20);
    let mut supports = vec![0u64; n + 1];
    for mask in 1u32..(1 << n) {
        let members: Vec<i64> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| elems[i] as i64).collect();
        let k = members.len();
        if k < 2 {
            continue;
        }
        let mut sum: i64 = members.iter().sum();
        let mut signs = vec![1i64; k];
        let mut found = sum == 0;
        // Flip members[1..] through a Gray code.
        let mut g: u32 = 0;
        for step in 1u32..(1 << (k - 1)) {
            if found {
                break;
            }
            let next = step ^ (step >> 1);
            let bit = (next ^ g).trailing_zeros() as usize + 1;
            g = next;
            sum -= 2 * signs[bit] * members[bit];
            signs[bit] = -signs[bit];
            found = sum == 0;
        }
        if found {
            supports[k] += 1;
        }
    }
    RelationCensus { supports }
}

/// `#{(a,b,c,d) ∈ [1,n]^4 : a+b = c+d}`.
pub fn quadruple_count(n: u64) -> u64 {
    let mut count = 0;
    for a in 1..=n {
        for b in 1..=n {
            for c in 1..=n {
                for d in 1..=n {
                    if a + b == c + d {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// `#{(x, y) ∈ A^h × A^h : Σx = Σy}` by listing all `h`-tuple sums.
pub fn tuple_collisions(elems: &[u64], h: usize) -> u128 {
    let mut sums = vec![0u64];
    for _ in 0..h {
        sums = sums.iter().flat_map(|&s| elems.iter().map(move |&e| s + e)).collect();
    }
    sums.sort_unstable();
    let mut total = 0u128;
    let mut i = 0;
    while i < sums.len() {
        let j = sums[i..].iter().take_while(|&&v| v == sums[i]).count();
        total += (j as u128) * (j as u128);
        i += j;
    }
    total
}

/// Deterministic random sets for oracle comparisons.
pub fn random_sets(seed: u64, count: usize, max_len: usize, max_element: u64) -> Vec<Vec<u64>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            let bound = if rng.gen_bool(0.3) { max_element.min(60) } else { max_element };
            let mut v: Vec<u64> = Vec::new();
            while v.len() < len.min(bound as usize) {
                let x = rng.gen_range(1..=bound);
                if !v.contains(&x) {
                    v.push(x);
                }
            }
            v.sort_unstable();
            v
        })
        .collect()
}

/// Direct evaluation `Σ c_n e^{int}` at `t`.
pub fn eval_direct(coeffs: &[(i64, f64, f64)], t: f64) -> (f64, f64) {
    coeffs.iter().fold((0.0, 0.0), |(re, im), &(n, a, b)| {
        let (s, c) = (n as f64 * t).sin_cos();
        (re + a * c - b * s, im + a * s + b * c)
    })
}
