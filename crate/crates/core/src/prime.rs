//! Deterministic primality by trial division.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default limit on trial divisors for [`is_prime_bigint`]; inputs above its
/// square are rejected.
pub const DEFAULT_TRIAL_BOUND: u64 = 10_000_000;

/// Trial division up to `⌊√n⌋`. Every `u64` is decided exactly.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let root = n.sqrt();
    let mut d = 5u64;
    while d <= root {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Trial division on an arbitrary-precision input. Inputs whose square root
/// exceeds `trial_bound` are rejected with a budget error; nothing is ever
/// accepted probabilistically.
pub fn is_prime_bigint(n: &BigInt, trial_bound: u64) -> Result<bool> {
    if n.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "primality of negative number {n}"
        )));
    }
    let root = n.sqrt();
    if root > BigInt::from(trial_bound) {
        return Err(Error::budget(
            "trial division",
            format!("divisors up to {root}"),
            trial_bound,
        ));
    }
    if let Some(small) = n.to_u64() {
        return Ok(is_prime(small));
    }
    // Only reachable when trial_bound ≥ 2^32.
    let root = root.to_u64().expect("bounded by trial_bound");
    let mut d = 2u64;
    while d <= root {
        if (n % d).is_zero() {
            return Ok(false);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    Ok(n > &BigInt::one())
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}
