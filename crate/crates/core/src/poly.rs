//! Dense univariate polynomials over a prime field `F_p`.
//!
//! A polynomial is a `Vec<u64>` of residues in `[0, p)`, lowest degree
//! first, with no trailing zeros; the zero polynomial is the empty vector.
//! All routines assume `p < 2^32` so that products of residues fit in `u64`.

use crate::error::{Error, Result};

pub type Poly = Vec<u64>;

pub fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn trimmed(mut a: Poly) -> Poly {
    trim(&mut a);
    a
}

/// Degree, or `None` for the zero polynomial.
pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Poly {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, &s) in out.iter_mut().zip(short) {
        *o = (*o + s) % p;
    }
    trimmed(out)
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), 0);
    }
    for (o, &s) in out.iter_mut().zip(b) {
        *o = (*o + p - s) % p;
    }
    trimmed(out)
}

pub fn neg(a: &[u64], p: u64) -> Poly {
    a.iter().map(|&c| (p - c) % p).collect()
}

pub fn scale(a: &[u64], c: u64, p: u64) -> Poly {
    trimmed(a.iter().map(|&x| x * c % p).collect())
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trimmed(out)
}

/// Inverse of a nonzero residue by Fermat's little theorem.
pub fn inv_scalar(a: u64, p: u64) -> Result<u64> {
    if a % p == 0 {
        return Err(Error::DivisionByZero);
    }
    Ok(pow_scalar(a % p, p - 2, p))
}

pub fn pow_scalar(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Remainder modulo a monic polynomial, touching only its nonzero terms.
pub fn rem_monic(a: &[u64], g: &[u64], p: u64) -> Poly {
    let d = g.len() - 1;
    debug_assert_eq!(g[d], 1, "modulus must be monic");
    if a.len() <= d {
        return trimmed(a.to_vec());
    }
    let terms: Vec<(usize, u64)> = g[..d]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(j, &c)| (j, c))
        .collect();
    let mut r = a.to_vec();
    for i in (d..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        r[i] = 0;
        for &(j, gj) in &terms {
            let k = i - d + j;
            r[k] = (r[k] + (p - c) * gj) % p;
        }
    }
    r.truncate(d);
    trimmed(r)
}

/// Quotient and remainder for an arbitrary nonzero divisor.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> Result<(Poly, Poly)> {
    let db = degree(b).ok_or(Error::DivisionByZero)?;
    let lead_inv = inv_scalar(b[db], p)?;
    let mut r = trimmed(a.to_vec());
    if r.len() <= db {
        return Ok((Vec::new(), r));
    }
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i] * lead_inv % p;
        if c == 0 {
            continue;
        }
        q[i - db] = c;
        for (j, &bj) in b[..=db].iter().enumerate() {
            let k = i - db + j;
            r[k] = (r[k] + (p - c) * bj % p) % p;
        }
    }
    r.truncate(db);
    Ok((trimmed(q), trimmed(r)))
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x = trimmed(a.to_vec());
    let mut y = trimmed(b.to_vec());
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y, p).expect("divisor is nonzero");
        x = y;
        y = r;
    }
    make_monic(&x, p)
}

pub fn make_monic(a: &[u64], p: u64) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(&lead) => scale(a, inv_scalar(lead, p).expect("nonzero lead"), p),
    }
}

/// Inverse of `a` modulo `g` by the extended Euclidean algorithm.
pub fn inv_mod(a: &[u64], g: &[u64], p: u64) -> Result<Poly> {
    let a = rem_monic(a, g, p);
    if a.is_empty() {
        return Err(Error::DivisionByZero);
    }
    // Invariant: s_i * a ≡ r_i (mod g).
    let (mut r0, mut r1) = (g.to_vec(), a);
    let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p)?;
        let s = sub(&s0, &mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return Err(Error::InvalidField(
            "element shares a factor with the modulus".into(),
        ));
    }
    let c = inv_scalar(r0[0], p)?;
    Ok(rem_monic(&scale(&s0, c, p), g, p))
}

/// `h^p mod g`. In characteristic `p` this is `Σ h_i z^{ip}`, so only the
/// reduction costs anything.
pub fn frobenius(h: &[u64], g: &[u64], p: u64) -> Poly {
    if h.is_empty() {
        return Vec::new();
    }
    let step = p as usize;
    let mut spread = vec![0u64; (h.len() - 1) * step + 1];
    for (i, &c) in h.iter().enumerate() {
        spread[i * step] = c;
    }
    rem_monic(&spread, g, p)
}

/// Ben-Or's test: a monic `g` of degree `d` is irreducible over `F_p` iff
/// `gcd(g, z^{p^i} − z) = 1` for every `1 ≤ i ≤ ⌊d/2⌋`.
pub fn is_irreducible(g: &[u64], p: u64) -> bool {
    if p == 2 && g.last() == Some(&1) && g.iter().all(|&c| c < 2) {
        return crate::gf2::is_irreducible(&crate::gf2::pack(g));
    }
    is_irreducible_generic(g, p)
}

pub(crate) fn is_irreducible_generic(g: &[u64], p: u64) -> bool {
    let Some(d) = degree(g) else { return false };
    if d == 0 || g[d] != 1 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if g[0] == 0 {
        return false;
    }
    let z: Poly = vec![0, 1];
    let mut h = rem_monic(&z, g, p);
    for _ in 1..=d / 2 {
        h = frobenius(&h, g, p);
        let diff = sub(&h, &z, p);
        if gcd(g, &diff, p) != [1] {
            return false;
        }
    }
    true
}

/// The lexicographically first monic irreducible polynomial of degree `d`
/// over `F_p`, ordering candidates by their coefficient tuple with the
/// constant term varying fastest.
///
/// `max_candidates` caps how many candidates are examined.
pub fn find_irreducible(p: u64, d: usize, max_candidates: u64) -> Result<Poly> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    if !crate::prime::is_prime(p) || p >= 1 << 32 {
        return Err(Error::InvalidField(format!("{p} is not a supported prime")));
    }
    let mut coeffs = vec![0u64; d + 1];
    coeffs[d] = 1;
    let mut examined = 0u64;
    loop {
        examined += 1;
        if examined > max_candidates {
            return Err(Error::budget(
                format!("irreducible search (p={p}, degree {d})"),
                format!("more than {max_candidates} candidates"),
                max_candidates,
            ));
        }
        if (d == 1 || coeffs[0] != 0) && is_irreducible(&coeffs, p) {
            return Ok(coeffs);
        }
        // Odometer over the low coefficients.
        let mut k = 0;
        loop {
            if k == d {
                return Err(Error::Inconsistent(format!(
                    "no irreducible polynomial of degree {d} over F_{p}"
                )));
            }
            coeffs[k] += 1;
            if coeffs[k] < p {
                break;
            }
            coeffs[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_irreducible(g: &[u64], p: u64) -> bool {
        // No monic factor of degree 1..=d/2 divides g.
        let d = degree(g).unwrap();
        for fd in 1..=d / 2 {
            let total = p.pow(fd as u32);
            for idx in 0..total {
                let mut f = vec![0u64; fd + 1];
                let mut v = idx;
                for c in f.iter_mut().take(fd) {
                    *c = v % p;
                    v /= p;
                }
                f[fd] = 1;
                let (_, r) = divrem(g, &f, p).unwrap();
                if r.is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn known_values() {
        assert_eq!(find_irreducible(2, 2, 100).unwrap(), vec![1, 1, 1]);
        assert_eq!(find_irreducible(3, 1, 100).unwrap(), vec![0, 1]);
        assert_eq!(find_irreducible(2, 3, 100).unwrap(), vec![1, 1, 0, 1]);
    }

    #[test]
    fn lex_first_matches_brute_force() {
        for &(p, d) in &[
            (2u64, 4usize),
            (2, 5),
            (2, 6),
            (3, 2),
            (3, 3),
            (3, 4),
            (5, 2),
            (5, 3),
            (7, 2),
        ] {
            let found = find_irreducible(p, d, 1_000_000).unwrap();
            let total = p.pow(d as u32);
            let mut first = None;
            for idx in 0..total {
                let mut g = vec![0u64; d + 1];
                let mut v = idx;
                for c in g.iter_mut().take(d) {
                    *c = v % p;
                    v /= p;
                }
                g[d] = 1;
                if brute_irreducible(&g, p) {
                    first = Some(g);
                    break;
                }
            }
            assert_eq!(Some(found), first, "p={p} d={d}");
        }
    }

    #[test]
    fn ben_or_matches_brute_force() {
        for p in [2u64, 3] {
            for d in 2..=6usize {
                for idx in 0..p.pow(d as u32) {
                    let mut g = vec![0u64; d + 1];
                    let mut v = idx;
                    for c in g.iter_mut().take(d) {
                        *c = v % p;
                        v /= p;
                    }
                    g[d] = 1;
                    assert_eq!(
                        is_irreducible_generic(&g, p),
                        brute_irreducible(&g, p),
                        "{g:?} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        // z^2 + z + 1 is the fourth candidate.
        assert!(find_irreducible(2, 2, 3).unwrap_err().is_budget());
    }

    #[test]
    fn inverse_mod() {
        let g = vec![1, 1, 0, 1];
        for idx in 1..8u64 {
            let a: Poly = trimmed(vec![idx & 1, (idx >> 1) & 1, (idx >> 2) & 1]);
            let inv = inv_mod(&a, &g, 2).unwrap();
            assert_eq!(rem_monic(&mul(&a, &inv, 2), &g, 2), vec![1]);
        }
        assert!(inv_mod(&[], &g, 2).is_err());
    }

    #[test]
    fn frobenius_is_pth_power() {
        let g = vec![2, 0, 1, 1]; // arbitrary monic cubic over F_3
        let h = vec![1, 2, 1];
        let direct = rem_monic(&mul(&mul(&h, &h, 3), &h, 3), &g, 3);
        assert_eq!(frobenius(&h, &g, 3), direct);
    }
}
