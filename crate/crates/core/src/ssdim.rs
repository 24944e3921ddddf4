//! Shoup–Smolensky measures and the sparsity bounds they are compared to.
//!
//! `Π_t(M)` is the family of products of `t` entries taken at distinct
//! positions. `Γ_t` is the dimension of its span over a base field and
//! `Σ_t` counts the distinct sums of nonempty sets of distinct values of
//! `Π_t`.
//!
//! A depth-d circuit with `s` wires computing `M` has
//! `Γ_t ≤ (e^d (2s/dt)^d)^t`, and for integer matrices
//! `Σ_t ≤ 2^{2n³ (e^d (2s/dt)^d)^t}` as long as `s ≤ n²d`. The hard
//! constructions have `Γ_t ≥ (n²/t)^t`, which turns into a size lower bound
//! through [`certify_depth_d`].

use std::collections::HashSet;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};
use crate::matrix::ExactMatrix;
use crate::sidon::binomial;

/// Working precision of the bound evaluation, in bits.
pub const PRECISION: usize = 128;
/// Largest number of distinct products [`sigma_t`] will take subset sums of.
pub const SIGMA_MAX_DISTINCT: usize = 22;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductFamily {
    pub t: usize,
    /// One product per t-subset of positions, in lexicographic subset order.
    pub values: Vec<FieldElement>,
    pub subset_count: u128,
}

impl ProductFamily {
    /// Distinct values in order of first appearance.
    pub fn distinct_values(&self) -> Vec<FieldElement> {
        self.values.iter().unique().cloned().collect()
    }
}

pub fn pi_t(m: &ExactMatrix, t: usize, budget: u64) -> Result<ProductFamily> {
    let size = m.rows() * m.cols();
    if t == 0 || t > size {
        return Err(Error::InvalidArgument(format!(
            "t = {t} must lie in [1, {size}]"
        )));
    }
    let subset_count = binomial(size as u64, t as u64);
    if subset_count > budget as u128 {
        return Err(Error::budget(
            format!("C({size}, {t}) products"),
            subset_count,
            budget,
        ));
    }
    let f = m.field();
    let values = m
        .entries()
        .iter()
        .combinations(t)
        .map(|subset| {
            subset
                .into_iter()
                .try_fold(f.one(), |acc, x| f.mul(&acc, x))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProductFamily {
        t,
        values,
        subset_count,
    })
}

/// `Γ_t(M)` over `base`: the rank of the coordinate vectors of `Π_t(M)`.
///
/// `base` must be `M`'s own field, or the prime subfield when `M` lives in
/// an extension. Integer matrices may use the rationals as base.
pub fn gamma_t(m: &ExactMatrix, t: usize, base: &FieldDescriptor, budget: u64) -> Result<usize> {
    let field = m.field();
    let over_prime_subfield = matches!(
        (field, base),
        (FieldDescriptor::Extension { p, .. }, FieldDescriptor::Prime { p: q }) if p == q
    );
    let same = field == base
        || matches!(
            (field, base),
            (FieldDescriptor::Integer, FieldDescriptor::Rational)
        );
    if !over_prime_subfield && !same {
        return Err(Error::FieldMismatch(format!(
            "matrix over {field} is not a vector space over {base}"
        )));
    }
    let distinct = pi_t(m, t, budget)?.distinct_values();
    if !over_prime_subfield {
        // Over the entries' own field the span is at most one-dimensional.
        return Ok(distinct.iter().any(|v| !field.is_zero(v)) as usize);
    }
    let coords = distinct
        .iter()
        .map(|v| field.prime_coordinates(v))
        .collect::<Result<Vec<_>>>()?;
    let width = field.degree().expect("extension has a degree");
    let coeffs = ExactMatrix::from_fn(base, coords.len(), width, |i, j| {
        FieldElement::Residue(coords[i][j])
    })?;
    coeffs.rank()
}

/// `Σ_t(M)`: the number of distinct sums over nonempty subsets of the
/// distinct values of `Π_t(M)`. The empty sum is not counted.
pub fn sigma_t(m: &ExactMatrix, t: usize, budget: u64) -> Result<u64> {
    let field = m.field();
    if !matches!(field, FieldDescriptor::Integer | FieldDescriptor::Rational) {
        return Err(Error::FieldMismatch(format!(
            "subset sums need integer or rational entries, got {field}"
        )));
    }
    let distinct = pi_t(m, t, budget)?.distinct_values();
    if distinct.len() > SIGMA_MAX_DISTINCT {
        return Err(Error::budget(
            "distinct products for subset sums",
            distinct.len(),
            SIGMA_MAX_DISTINCT,
        ));
    }
    let mut sums: HashSet<FieldElement> = HashSet::new();
    for v in &distinct {
        let shifted = sums
            .iter()
            .map(|x| field.add(x, v))
            .collect::<Result<Vec<_>>>()?;
        sums.extend(shifted);
        sums.insert(v.clone());
    }
    Ok(sums.len() as u64)
}

/// Base-2 logarithms of the bounds at one parameter point.
#[derive(Debug, Clone)]
pub struct BoundEvaluation {
    pub s: u64,
    pub d: u64,
    pub t: u64,
    pub n: u64,
    /// `log₂ (e^d (2s/dt)^d)^t`.
    pub log2_gamma_upper: BigFloat,
    /// `log₂ (n²/t)^t`.
    pub log2_gamma_lower: BigFloat,
    /// `log₂ log₂` of the Σ bound, i.e. `1 + 3 log₂ n + log2_gamma_upper`.
    /// `None` when `s > n²d`, where that bound is not claimed.
    pub log2_log2_sigma_upper: Option<BigFloat>,
    /// `log₂` of the Σ bound, `2n³ (e^d (2s/dt)^d)^t`.
    pub log2_sigma_upper: Option<BigFloat>,
}

impl BoundEvaluation {
    pub fn to_json(&self) -> Value {
        let mut cc = consts();
        json!({
            "s": self.s,
            "d": self.d,
            "t": self.t,
            "n": self.n,
            "log2_gamma_upper": fixed_decimal(&self.log2_gamma_upper, 12),
            "log2_gamma_lower": fixed_decimal(&self.log2_gamma_lower, 12),
            "log2_sigma_upper": self.log2_sigma_upper.as_ref().map(|x| scientific(x, &mut cc)),
            "log2_log2_sigma_upper": self.log2_log2_sigma_upper.as_ref().map(|x| fixed_decimal(x, 12)),
        })
    }

    /// Whether the Γ upper bound at this `s` is strictly below the lower bound.
    pub fn certifies(&self) -> bool {
        self.log2_gamma_upper < self.log2_gamma_lower
    }
}

fn consts() -> Consts {
    Consts::new().expect("constant cache allocation")
}

fn big(x: u64) -> BigFloat {
    BigFloat::from_u64(x, PRECISION)
}

fn log2_of(x: &BigFloat, cc: &mut Consts) -> BigFloat {
    x.log2(PRECISION, RM, cc)
}

fn check_bound_params(s: u64, d: u64, t: u64, n: u64) -> Result<()> {
    if d == 0 || t == 0 || n == 0 {
        return Err(Error::InvalidArgument("d, t and n must be positive".into()));
    }
    let dt = d as u128 * t as u128;
    if (s as u128) < dt {
        return Err(Error::InvalidArgument(format!(
            "s = {s} is below dt = {dt}"
        )));
    }
    if 4 * t as u128 > n as u128 * n as u128 {
        return Err(Error::InvalidArgument(format!(
            "t = {t} exceeds n²/4 for n = {n}"
        )));
    }
    Ok(())
}

fn gamma_upper(s: u64, d: u64, t: u64, log2e: &BigFloat, cc: &mut Consts) -> BigFloat {
    let dt = big(d).mul(&big(t), PRECISION, RM);
    let ratio = big(2).mul(&big(s), PRECISION, RM).div(&dt, PRECISION, RM);
    let per_unit = log2e.add(&log2_of(&ratio, cc), PRECISION, RM);
    dt.mul(&per_unit, PRECISION, RM)
}

fn gamma_lower(t: u64, n: u64, cc: &mut Consts) -> BigFloat {
    let nn = big(n).mul(&big(n), PRECISION, RM);
    let ratio = nn.div(&big(t), PRECISION, RM);
    big(t).mul(&log2_of(&ratio, cc), PRECISION, RM)
}

fn log2_e(cc: &mut Consts) -> BigFloat {
    let e = cc.e(PRECISION, RM);
    log2_of(&e, cc)
}

pub fn bound_eval(s: u64, d: u64, t: u64, n: u64) -> Result<BoundEvaluation> {
    check_bound_params(s, d, t, n)?;
    let mut cc = consts();
    let log2e = log2_e(&mut cc);
    let upper = gamma_upper(s, d, t, &log2e, &mut cc);
    let lower = gamma_lower(t, n, &mut cc);
    let sigma_valid = s as u128 <= n as u128 * n as u128 * d as u128;
    let (loglog, log) = if sigma_valid {
        let log2n = log2_of(&big(n), &mut cc);
        let loglog = big(1)
            .add(&big(3).mul(&log2n, PRECISION, RM), PRECISION, RM)
            .add(&upper, PRECISION, RM);
        let log = big(2).pow(&loglog, PRECISION, RM, &mut cc);
        (Some(loglog), Some(log))
    } else {
        (None, None)
    };
    Ok(BoundEvaluation {
        s,
        d,
        t,
        n,
        log2_gamma_upper: upper,
        log2_gamma_lower: lower,
        log2_log2_sigma_upper: loglog,
        log2_sigma_upper: log,
    })
}

/// Outcome of [`certify_depth_d`].
#[derive(Debug, Clone)]
pub struct Certificate {
    pub n: u64,
    pub d: u64,
    pub t: u64,
    /// Largest `s` whose Γ upper bound is strictly below the lower bound.
    pub s_star: u64,
    pub upper_at_s_star: BigFloat,
    pub upper_at_next: BigFloat,
    pub lower: BigFloat,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "d": self.d,
            "t": self.t,
            "s_star": self.s_star,
            "log2_gamma_upper_at_s_star": fixed_decimal(&self.upper_at_s_star, 12),
            "log2_gamma_upper_at_next": fixed_decimal(&self.upper_at_next, 12),
            "log2_gamma_lower": fixed_decimal(&self.lower, 12),
        })
    }
}

/// Largest `s ≥ dt` with `log₂ Γ-upper(s) < log₂ Γ-lower`, by binary search
/// on the monotone upper bound. Every depth-d circuit computing a matrix
/// with `Γ_t ≥ (n²/t)^t` has more than `s*` wires.
pub fn certify_depth_d(n: u64, d: u64, t: u64) -> Result<Certificate> {
    let dt = d
        .checked_mul(t)
        .ok_or_else(|| Error::InvalidArgument("d·t overflows".into()))?;
    check_bound_params(dt, d, t, n)?;
    let mut cc = consts();
    let log2e = log2_e(&mut cc);
    let lower = gamma_lower(t, n, &mut cc);
    let below = |s: u64, cc: &mut Consts| gamma_upper(s, d, t, &log2e, cc) < lower;

    if !below(dt, &mut cc) {
        return Err(Error::InvalidArgument(format!(
            "no s ≥ dt = {dt} certifies anything for n = {n}, d = {d}, t = {t}"
        )));
    }
    // Invariant: below(lo) holds, below(hi) fails.
    let mut lo = dt;
    let mut hi = dt.saturating_mul(2);
    while below(hi, &mut cc) {
        lo = hi;
        hi = hi
            .checked_mul(2)
            .ok_or_else(|| Error::InvalidArgument("certified size overflows u64".into()))?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if below(mid, &mut cc) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Certificate {
        n,
        d,
        t,
        s_star: lo,
        upper_at_s_star: gamma_upper(lo, d, t, &log2e, &mut cc),
        upper_at_next: gamma_upper(lo + 1, d, t, &log2e, &mut cc),
        lower,
    })
}

/// Smallest integer `t` with `t^den ≥ n^num`, i.e. `⌈n^{num/den}⌉`.
pub fn ceil_rational_power(n: u64, num: u32, den: u32) -> u64 {
    let target = BigUint::from(n).pow(num);
    let approx = (n as f64).powf(num as f64 / den as f64).ceil() as u64;
    let mut t = approx.saturating_sub(2).max(1);
    while BigUint::from(t).pow(den) < target {
        t += 1;
    }
    while t > 1 && BigUint::from(t - 1).pow(den) >= target {
        t -= 1;
    }
    t
}

/// Integer nearest to `x`, ties to even.
fn round_to_integer(x: &BigFloat) -> BigInt {
    let r = x.round(0, RM);
    let Some((words, _, sign, exp, _)) = r.as_raw_parts() else {
        return BigInt::from(0);
    };
    let digits: Vec<u32> = words
        .iter()
        .flat_map(|&w| [w as u32, (w >> 32) as u32])
        .collect();
    let mantissa = BigUint::new(digits);
    let shift = exp as i64 - 64 * words.len() as i64;
    let magnitude = if shift >= 0 {
        mantissa << shift as u64
    } else {
        mantissa >> (-shift) as u64
    };
    let value = BigInt::from(magnitude);
    if sign == Sign::Neg {
        -value
    } else {
        value
    }
}

/// `x` as a decimal string with exactly `digits` fractional digits.
pub fn fixed_decimal(x: &BigFloat, digits: u32) -> String {
    let scale = BigFloat::from_u64(10, PRECISION).powi(digits as usize, PRECISION, RM);
    let scaled = round_to_integer(&x.mul(&scale, PRECISION, RM));
    let negative = scaled < BigInt::from(0);
    let text = scaled.magnitude().to_string();
    let width = digits as usize + 1;
    let padded = format!("{text:0>width$}");
    let (int_part, frac_part) = padded.split_at(padded.len() - digits as usize);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// `x` in decimal scientific notation.
pub fn scientific(x: &BigFloat, cc: &mut Consts) -> String {
    x.format(Radix::Dec, RM, cc)
        .unwrap_or_else(|_| x.to_string())
}

/// `x` as the nearest `f64`.
pub fn to_f64(x: &BigFloat) -> f64 {
    fixed_decimal(x, 15).parse().unwrap_or(f64::NAN)
}
