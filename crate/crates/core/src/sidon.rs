//! t-wise Sidon sets from powers of two reduced modulo a prime.
//!
//! Starting from `{1, 2, 4, …, 2^{n²−1}}`, whose subset sums are all
//! distinct, we reduce modulo successive primes `p` and keep the first one
//! for which the `n²` residues stay distinct and all sums of `t` distinct
//! residues stay distinct as integers.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::prime::{is_prime, next_prime};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SidonSet {
    pub n: usize,
    pub t: usize,
    pub p: u64,
    /// `grid[i][j] = 2^{i·n + j} mod p` (0-indexed).
    pub grid: Vec<Vec<u64>>,
}

impl SidonSet {
    /// Elements in row-major grid order.
    pub fn elements(&self) -> Vec<u64> {
        self.grid.iter().flatten().copied().collect()
    }

    pub fn max_element(&self) -> u64 {
        self.elements().into_iter().max().unwrap_or(0)
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays exact because acc = C(n, i).
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// True iff all sums of `t` distinct-position elements are pairwise
/// distinct as integers. Sorting the `C(|S|, t)` sums is capped by
/// `sum_budget`.
pub fn verify_tsum_distinct(elements: &[u64], t: usize, sum_budget: u64) -> Result<bool> {
    let count = binomial(elements.len() as u64, t as u64);
    if count > sum_budget as u128 {
        return Err(Error::budget(
            format!("{t}-subset sums of {} elements", elements.len()),
            count,
            sum_budget,
        ));
    }
    let mut sums: Vec<u128> = elements
        .iter()
        .combinations(t)
        .map(|c| c.into_iter().map(|&x| x as u128).sum())
        .collect();
    sums.sort_unstable();
    Ok(sums.windows(2).all(|w| w[0] != w[1]))
}

/// Smallest prime `p > n²` (and `p ≤ prime_budget`) for which
/// `{2^i mod p : i < n²}` is a t-wise Sidon set of size `n²`.
pub fn construct_sidon(n: usize, t: usize, prime_budget: u64, sum_budget: u64) -> Result<SidonSet> {
    if n == 0 || t == 0 {
        return Err(Error::InvalidArgument("n and t must be positive".into()));
    }
    let size = n * n;
    if t > size {
        return Err(Error::InvalidArgument(format!(
            "t = {t} exceeds n² = {size}"
        )));
    }
    let count = binomial(size as u64, t as u64);
    if count > sum_budget as u128 {
        return Err(Error::budget(
            format!("C({size}, {t}) subset sums"),
            count,
            sum_budget,
        ));
    }

    let mut p = next_prime(size as u64);
    while p <= prime_budget {
        debug_assert!(is_prime(p));
        let residues: Vec<u64> = std::iter::successors(Some(1 % p), |&r| Some(r * 2 % p))
            .take(size)
            .collect();
        if residues.iter().all_unique() && verify_tsum_distinct(&residues, t, sum_budget)? {
            let grid = residues.chunks(n).map(<[u64]>::to_vec).collect();
            return Ok(SidonSet { n, t, p, grid });
        }
        p = next_prime(p);
    }
    Err(Error::budget(
        format!("Sidon prime search for n={n}, t={t}"),
        format!("a prime above {prime_budget}"),
        prime_budget,
    ))
}
