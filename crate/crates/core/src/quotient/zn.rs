//! `Z/N` with `aN * bN = {cN : c in aN + bN}` and `N = {1, 2, 3, ...}`:
//! the class of `1` has many inverse candidates, so unique inverses fail.

use serde::{Deserialize, Serialize};

use crate::error::{HyperError, Result};

/// `(-k)N` is an inverse candidate of `1N`: `0 = 1*k + (-k)*1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseCandidate {
    pub k: i64,
    /// Members of `(-k)N` with absolute value at most the bound.
    pub orbit: Vec<i64>,
    /// `(n, m)` with `1*n + (-k)*m = 0`.
    pub zero_witness: (i64, i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZnReport {
    pub k_max: i64,
    pub bound: i64,
    pub candidates: Vec<InverseCandidate>,
    /// `(j, k, s)`: `s` lies in `(-j)N` but not in `(-k)N`.
    pub separations: Vec<(i64, i64, i64)>,
    pub h3_violated: bool,
}

fn orbit(a: i64, bound: i64) -> Vec<i64> {
    if a == 0 {
        return vec![0];
    }
    (1..).map(|n| a * n).take_while(|v| v.abs() <= bound).collect()
}

pub fn demonstrate_zn_failure(k_max: i64, bound: i64) -> Result<ZnReport> {
    if k_max < 2 {
        return Err(HyperError::InvalidArgument(format!("k_max = {k_max} < 2")));
    }
    if bound < k_max {
        return Err(HyperError::InvalidArgument(format!("bound {bound} < k_max {k_max}")));
    }
    let one = orbit(1, bound);
    let mut candidates = Vec::new();
    for k in 1..=k_max {
        let neg = orbit(-k, bound);
        // 1N contains k and (-k)N contains -k
        debug_assert!(one.contains(&k) && neg.contains(&-k));
        let (n, m) = (k, 1);
        assert_eq!(n + (-k) * m, 0);
        candidates.push(InverseCandidate { k, orbit: neg, zero_witness: (n, m) });
    }
    // -j is in (-j)N; it is in (-k)N only if k divides j. The truncated orbit
    // holds every member up to the bound, so absence there is genuine.
    let mut separations = Vec::new();
    for a in &candidates {
        for b in &candidates {
            if a.k < b.k {
                let s = -a.k;
                if a.orbit.contains(&s) && !b.orbit.contains(&s) {
                    separations.push((a.k, b.k, s));
                }
            }
        }
    }
    let pairs = (k_max * (k_max - 1) / 2) as usize;
    let h3_violated = candidates.len() >= 2 && separations.len() == pairs;
    Ok(ZnReport { k_max, bound, candidates, separations, h3_violated })
}
