//! Bit-packed polynomials over `F_2`, used to run the irreducibility test
//! on the high-degree moduli the finite-field construction needs.
//!
//! Bit `i` of word `i / 64` is the coefficient of `z^i`. Vectors are kept
//! trimmed (no trailing zero words).

type Bits = Vec<u64>;

fn trim(a: &mut Bits) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn degree(a: &[u64]) -> Option<usize> {
    let w = a.iter().rposition(|&x| x != 0)?;
    Some(w * 64 + 63 - a[w].leading_zeros() as usize)
}

fn bit(a: &[u64], i: usize) -> bool {
    a.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
}

/// `a ^= b << shift`.
fn xor_shifted(a: &mut Bits, b: &[u64], shift: usize) {
    let words = shift / 64;
    let bits = shift % 64;
    let need = b.len() + words + 1;
    if a.len() < need {
        a.resize(need, 0);
    }
    for (i, &w) in b.iter().enumerate() {
        a[i + words] ^= w << bits;
        if bits != 0 {
            a[i + words + 1] ^= w >> (64 - bits);
        }
    }
}

fn rem(a: &[u64], b: &[u64]) -> Bits {
    let db = degree(b).expect("nonzero divisor");
    let mut r = a.to_vec();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        xor_shifted(&mut r, b, dr - db);
    }
    trim(&mut r);
    r
}

fn gcd_is_one(a: &[u64], b: &[u64]) -> bool {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    degree(&x) == Some(0)
}

/// `h² mod g`; squaring in characteristic 2 spreads the bits apart.
fn square_mod(h: &[u64], g: &[u64]) -> Bits {
    let mut spread = vec![0u64; h.len() * 2];
    for (i, &w) in h.iter().enumerate() {
        spread[2 * i] = spread_bits(w as u32);
        spread[2 * i + 1] = spread_bits((w >> 32) as u32);
    }
    rem(&spread, g)
}

fn spread_bits(x: u32) -> u64 {
    let mut v = x as u64;
    v = (v | (v << 16)) & 0x0000_FFFF_0000_FFFF;
    v = (v | (v << 8)) & 0x00FF_00FF_00FF_00FF;
    v = (v | (v << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    v = (v | (v << 2)) & 0x3333_3333_3333_3333;
    v = (v | (v << 1)) & 0x5555_5555_5555_5555;
    v
}

pub(crate) fn pack(coeffs: &[u64]) -> Bits {
    let mut out = vec![0u64; coeffs.len().div_ceil(64)];
    for (i, &c) in coeffs.iter().enumerate() {
        if c & 1 == 1 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    trim(&mut out);
    out
}

/// Ben-Or's test over `F_2`; same decision as [`crate::poly::is_irreducible`].
pub(crate) fn is_irreducible(g: &[u64]) -> bool {
    let Some(d) = degree(g) else { return false };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if !bit(g, 0) {
        return false;
    }
    let z: Bits = vec![2];
    let mut h = rem(&z, g);
    for _ in 1..=d / 2 {
        h = square_mod(&h, g);
        let mut diff = h.clone();
        if diff.is_empty() {
            diff.push(0);
        }
        diff[0] ^= 2;
        trim(&mut diff);
        if diff.is_empty() || !gcd_is_one(g, &diff) {
            return false;
        }
    }
    true
}
