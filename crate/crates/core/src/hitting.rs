//! Probe vectors that no sparse row can annihilate, and Reed–Solomon
//! generators whose duals have no sparse vectors.
//!
//! Over Q, a nonzero `r` with at most `s` nonzero entries is a polynomial
//! `Σ r_j x^{j−1}` with at most `s − 1` sign changes, hence fewer than `s`
//! positive roots, so it cannot vanish at all of `x = 1, …, s`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};
use crate::matrix::{dot, ExactMatrix};
use crate::prime::is_prime;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingVectors {
    pub field: FieldDescriptor,
    pub n: usize,
    pub s: usize,
    /// `vectors[i − 1] = (1, i, i², …, i^{n−1})`.
    pub vectors: Vec<Vec<FieldElement>>,
}

impl HittingVectors {
    /// Probe `v_i` for node `i` (1-based).
    pub fn probe(&self, i: usize) -> &[FieldElement] {
        &self.vectors[i - 1]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field.to_json(),
            "n": self.n,
            "s": self.s,
            "vectors": self
                .vectors
                .iter()
                .map(|v| v.iter().map(|e| self.field.encode(e)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

/// The probes `v_1, …, v_s` over Q with nodes `1..=s`.
pub fn vandermonde_vectors(n: usize, s: usize) -> Result<HittingVectors> {
    if s == 0 || s > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 ≤ s ≤ n, got s = {s}, n = {n}"
        )));
    }
    let field = FieldDescriptor::Rational;
    let nodes: Vec<FieldElement> = (1..=s as i64).map(|i| field.from_i64(i)).collect();
    let v = ExactMatrix::vandermonde(&field, &nodes, n)?;
    let vectors = (0..s).map(|i| v.row(i).to_vec()).collect();
    Ok(HittingVectors {
        field,
        n,
        s,
        vectors,
    })
}

/// Least node `i` with `⟨r, v_i⟩ ≠ 0` for a nonzero `r` with at most `s`
/// nonzero entries. Always `i ≤ s`.
pub fn sparse_row_hit(r: &[FieldElement], s: usize, h: &HittingVectors) -> Result<usize> {
    if r.len() != h.n {
        return Err(Error::DimensionMismatch(format!(
            "row of length {} against probes of length {}",
            r.len(),
            h.n
        )));
    }
    if s > h.s {
        return Err(Error::InvalidArgument(format!(
            "threshold {s} exceeds the {} available probes",
            h.s
        )));
    }
    let f = &h.field;
    let weight = r.iter().filter(|x| !f.is_zero(x)).count();
    if weight == 0 {
        return Err(Error::InvalidArgument("row is zero".into()));
    }
    if weight > s {
        return Err(Error::InvalidArgument(format!(
            "row has {weight} nonzero entries, more than the threshold {s}"
        )));
    }
    for i in 1..=s {
        if !f.is_zero(&dot(f, r, h.probe(i))?) {
            return Ok(i);
        }
    }
    Err(Error::Inconsistent(format!(
        "a {weight}-sparse row vanished on all of nodes 1..={s}"
    )))
}

/// Reed–Solomon parameters: block length `q`, dimension `k`, nodes
/// `0, 1, …, q − 1` in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RSParams {
    pub q: u64,
    pub k: usize,
}

impl RSParams {
    pub fn new(q: u64, k: usize) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::InvalidArgument(format!("q = {q} is not prime")));
        }
        if k == 0 || k as u64 >= q {
            return Err(Error::InvalidArgument(format!(
                "need 1 ≤ k ≤ q − 1, got k = {k}"
            )));
        }
        Ok(RSParams { q, k })
    }
}

/// `q × k` matrix with row `i` equal to `(1, i, …, i^{k−1})` over `F_q`.
pub fn rs_generator(params: RSParams, budget: u64) -> Result<ExactMatrix> {
    let cells = params.q as u128 * params.k as u128;
    if cells > budget as u128 {
        return Err(Error::budget("generator entries", cells, budget));
    }
    let field = FieldDescriptor::prime(params.q)?;
    let nodes: Vec<FieldElement> = (0..params.q).map(FieldElement::Residue).collect();
    ExactMatrix::vandermonde(&field, &nodes, params.k)
}

/// Minimum Hamming weight of a nonzero vector `x` with `Gᵀx = 0`, by
/// enumerating all `q^{dim}` kernel vectors. `None` when the kernel is zero.
pub fn min_kernel_weight(g: &ExactMatrix, budget: u64) -> Result<Option<usize>> {
    let FieldDescriptor::Prime { p: q } = *g.field() else {
        return Err(Error::Unsupported(format!(
            "kernel enumeration needs a prime field, got {}",
            g.field()
        )));
    };
    let basis = g.transpose().kernel()?;
    let dim = basis.len();
    if dim == 0 {
        return Ok(None);
    }
    let count = (q as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if count > budget as u128 {
        return Err(Error::budget(
            format!("{q}^{dim} kernel vectors"),
            count,
            budget,
        ));
    }
    let basis: Vec<Vec<u64>> = basis
        .iter()
        .map(|v| {
            v.iter()
                .map(|e| match e {
                    FieldElement::Residue(r) => *r,
                    _ => unreachable!("prime field residues"),
                })
                .collect()
        })
        .collect();

    // Odometer over coefficient vectors. Bumping digit j adds basis[j] once;
    // wrapping it from q − 1 to 0 also adds basis[j] once, since q·b = 0.
    let len = g.rows();
    let mut current = vec![0u64; len];
    let mut digits = vec![0u64; dim];
    let mut best = usize::MAX;
    'outer: loop {
        let mut j = 0;
        loop {
            if j == dim {
                break 'outer;
            }
            for (c, b) in current.iter_mut().zip(&basis[j]) {
                *c = (*c + b) % q;
            }
            digits[j] += 1;
            if digits[j] < q {
                break;
            }
            digits[j] = 0;
            j += 1;
        }
        let weight = current.iter().filter(|&&c| c != 0).count();
        if weight > 0 {
            best = best.min(weight);
        }
    }
    Ok(Some(best))
}

/// `aᵀ·M·b`.
pub fn hit_inner(m: &ExactMatrix, a: &[FieldElement], b: &[FieldElement]) -> Result<FieldElement> {
    if a.len() != m.rows() || b.len() != m.cols() {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {} and {} against a {}x{} matrix",
            a.len(),
            b.len(),
            m.rows(),
            m.cols()
        )));
    }
    let mb = m.mul_vec(b)?;
    dot(m.field(), a, &mb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::DEFAULT_ENUMERATION;
    use itertools::Itertools;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const B: u64 = DEFAULT_ENUMERATION;

    fn q_vec(xs: &[i64]) -> Vec<FieldElement> {
        xs.iter()
            .map(|&x| FieldDescriptor::Rational.from_i64(x))
            .collect()
    }

    #[test]
    fn vandermonde_examples() {
        let h = vandermonde_vectors(3, 2).unwrap();
        assert_eq!(h.vectors, vec![q_vec(&[1, 1, 1]), q_vec(&[1, 2, 4])]);
        assert_eq!(
            vandermonde_vectors(1, 1).unwrap().vectors,
            vec![q_vec(&[1])]
        );
        let h = vandermonde_vectors(4, 4).unwrap();
        assert_eq!(h.probe(4), q_vec(&[1, 4, 16, 64]).as_slice());
        assert!(vandermonde_vectors(2, 3).is_err());
        assert!(vandermonde_vectors(2, 0).is_err());
    }

    #[test]
    fn hit_examples() {
        let h = vandermonde_vectors(4, 3).unwrap();
        assert_eq!(sparse_row_hit(&q_vec(&[1, 0, 0, 0]), 1, &h).unwrap(), 1);
        assert_eq!(sparse_row_hit(&q_vec(&[1, -1, 0, 0]), 2, &h).unwrap(), 2);
        assert_eq!(sparse_row_hit(&q_vec(&[2, -3, 1, 0]), 3, &h).unwrap(), 3);
        assert!(sparse_row_hit(&q_vec(&[0, 0, 0, 0]), 1, &h).is_err());
        assert!(sparse_row_hit(&q_vec(&[1, 1, 1, 0]), 2, &h).is_err());
        assert!(sparse_row_hit(&q_vec(&[1, 0, 0]), 1, &h).is_err());
    }

    #[test]
    fn descartes_guarantee_on_random_sparse_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let probes: Vec<HittingVectors> = (0..=32)
            .map(|n| vandermonde_vectors(n.max(2), (n / 2).max(1)).unwrap())
            .collect();
        for _ in 0..2000 {
            let n = rng.gen_range(2..=32usize);
            let s = rng.gen_range(1..=n / 2);
            let mut r = vec![0i64; n];
            let weight = rng.gen_range(1..=s);
            for pos in rand::seq::index::sample(&mut rng, n, weight) {
                let v = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
                r[pos] = v;
            }
            let i = sparse_row_hit(&q_vec(&r), s, &probes[n]).unwrap();
            assert!(i <= s);
        }
    }

    #[test]
    fn rs_generator_examples() {
        let g = rs_generator(RSParams::new(5, 2).unwrap(), B).unwrap();
        let f5 = FieldDescriptor::prime(5).unwrap();
        let want = ExactMatrix::from_i64_rows(
            &f5,
            &[vec![1, 0], vec![1, 1], vec![1, 2], vec![1, 3], vec![1, 4]],
        )
        .unwrap();
        assert_eq!(g, want);
        let g = rs_generator(RSParams::new(3, 1).unwrap(), B).unwrap();
        assert!(g.entries().iter().all(|e| *e == FieldElement::Residue(1)));
        assert!(RSParams::new(6, 2).is_err());
        assert!(RSParams::new(5, 5).is_err());
        assert!(RSParams::new(5, 0).is_err());
    }

    #[test]
    fn rs_columns_evaluate_low_degree_polynomials() {
        // Column j evaluates z^j, so G·c evaluates the polynomial with
        // coefficients c at every field element.
        let g = rs_generator(RSParams::new(7, 3).unwrap(), B).unwrap();
        let f = g.field().clone();
        let c = vec![f.from_i64(2), f.from_i64(5), f.from_i64(1)];
        let values = g.mul_vec(&c).unwrap();
        for (x, v) in values.iter().enumerate() {
            let x = x as i64;
            assert_eq!(*v, f.from_i64(2 + 5 * x + x * x));
        }
    }

    #[test]
    fn kernel_weight_examples() {
        let g = rs_generator(RSParams::new(5, 2).unwrap(), B).unwrap();
        assert_eq!(min_kernel_weight(&g, B).unwrap(), Some(3));
        let f5 = FieldDescriptor::prime(5).unwrap();
        assert_eq!(
            min_kernel_weight(&ExactMatrix::identity(&f5, 3), B).unwrap(),
            None
        );
        let g = rs_generator(RSParams::new(7, 3).unwrap(), B).unwrap();
        assert_eq!(min_kernel_weight(&g, B).unwrap(), Some(4));
        assert!(min_kernel_weight(&g, 100).unwrap_err().is_budget());
    }

    /// Smallest number of linearly dependent rows of `g`.
    fn smallest_dependent_rows(g: &ExactMatrix) -> Option<usize> {
        (1..=g.rows()).find(|&w| {
            (0..g.rows()).combinations(w).any(|rows| {
                let sub =
                    ExactMatrix::from_fn(g.field(), w, g.cols(), |i, j| g.get(rows[i], j).clone())
                        .unwrap();
                sub.rank().unwrap() < w
            })
        })
    }

    #[test]
    fn kernel_weight_matches_dependent_subsets() {
        for q in [2u64, 3, 5, 7] {
            for k in 1..q as usize {
                let g = rs_generator(RSParams::new(q, k).unwrap(), B).unwrap();
                let w = min_kernel_weight(&g, B).unwrap();
                assert_eq!(w, smallest_dependent_rows(&g), "q={q} k={k}");
                assert!(w.unwrap() > k);
            }
        }
        let f3 = FieldDescriptor::prime(3).unwrap();
        let g = ExactMatrix::from_i64_rows(&f3, &[vec![1, 0], vec![2, 0], vec![0, 1], vec![1, 1]])
            .unwrap();
        assert_eq!(
            min_kernel_weight(&g, B).unwrap(),
            smallest_dependent_rows(&g)
        );
    }

    #[test]
    fn hit_inner_examples() {
        let q = FieldDescriptor::Rational;
        let id = ExactMatrix::identity(&q, 2);
        assert_eq!(
            hit_inner(&id, &q_vec(&[1, 0]), &q_vec(&[1, 0])).unwrap(),
            q.one()
        );
        let m = ExactMatrix::from_i64_rows(&q, &[vec![1, -1], vec![-1, 1]]).unwrap();
        assert_eq!(
            hit_inner(&m, &q_vec(&[1, 1]), &q_vec(&[1, 1])).unwrap(),
            q.zero()
        );
        assert_eq!(
            hit_inner(&m, &q_vec(&[0, 0]), &q_vec(&[3, 1])).unwrap(),
            q.zero()
        );
        assert!(hit_inner(&m, &q_vec(&[1]), &q_vec(&[1, 1])).is_err());
    }

    proptest! {
        #[test]
        fn hit_inner_is_bilinear(
            m in prop::collection::vec(-9i64..9, 9),
            a in prop::collection::vec(-9i64..9, 3),
            a2 in prop::collection::vec(-9i64..9, 3),
            b in prop::collection::vec(-9i64..9, 3),
        ) {
            let q = FieldDescriptor::Rational;
            let m = ExactMatrix::from_fn(&q, 3, 3, |i, j| q.from_i64(m[3 * i + j])).unwrap();
            let sum: Vec<i64> = a.iter().zip(&a2).map(|(x, y)| x + y).collect();
            let lhs = hit_inner(&m, &q_vec(&sum), &q_vec(&b)).unwrap();
            let rhs = q.add(
                &hit_inner(&m, &q_vec(&a), &q_vec(&b)).unwrap(),
                &hit_inner(&m, &q_vec(&a2), &q_vec(&b)).unwrap(),
            ).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
