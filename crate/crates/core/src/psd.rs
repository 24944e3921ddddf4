//! A PSD matrix with no sparse symmetric or invertible factorization, and
//! refuters that turn a claimed factorization into a concrete contradiction.
//!
//! `M̃` sends the probes `v_1, …, v_{n/2}` to zero and `v_i` to `e_i` for
//! `i > n/2`; `M = M̃ᵀM̃`. If `M = BᵀB` then `‖B v_i‖² = v_iᵀ M v_i = 0`, so
//! every nonzero row of `B` vanishes on the first `n/2` probes and therefore
//! has more than `n/2` nonzero entries. Since `rank B ≥ n/2`, `B` has at
//! least `n²/4` nonzeros. The same argument applies to the non-invertible
//! factor of an invertible factorization.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};
use crate::hitting::{hit_inner, sparse_row_hit, vandermonde_vectors, HittingVectors};
use crate::matrix::{dot, ExactMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsdPair {
    pub n: usize,
    pub mtilde: ExactMatrix,
    pub m: ExactMatrix,
    /// `v_1, …, v_{n/2}`.
    pub probes: HittingVectors,
}

impl PsdPair {
    /// The sparsity threshold `n²/4`.
    pub fn threshold(&self) -> usize {
        self.n * self.n / 4
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "mtilde": self.mtilde.to_json(),
            "m": self.m.to_json(),
            "probes": self.probes.to_json(),
        })
    }
}

pub fn build_hard_psd(n: usize, cap: usize) -> Result<PsdPair> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "n = {n} must be positive and even"
        )));
    }
    if n > cap {
        return Err(Error::budget("PSD instance side", n, cap));
    }
    let q = FieldDescriptor::Rational;
    let all = vandermonde_vectors(n, n)?;
    // V has rows v_1..v_n; C has column i equal to e_i for i > n/2.
    let v = ExactMatrix::from_fn(&q, n, n, |i, j| all.vectors[i][j].clone())?;
    let c = ExactMatrix::from_fn(&q, n, n, |i, j| {
        if i == j && j >= n / 2 {
            q.one()
        } else {
            q.zero()
        }
    })?;
    let mtilde = c.matmul(&v.transpose().inverse()?)?;
    let m = mtilde.transpose().matmul(&mtilde)?;
    let pair = PsdPair {
        n,
        mtilde,
        m,
        probes: vandermonde_vectors(n, n / 2)?,
    };
    verify_pair(&pair, &all)?;
    Ok(pair)
}

fn verify_pair(pair: &PsdPair, all: &HittingVectors) -> Result<()> {
    let n = pair.n;
    let q = pair.m.field();
    let fail = |what: &str| Err(Error::Inconsistent(format!("hard PSD instance: {what}")));
    if pair.m != pair.m.transpose() {
        return fail("M is not symmetric");
    }
    if pair.m.rank()? != n / 2 {
        return fail("rank of M is not n/2");
    }
    for i in 1..=n {
        let image = pair.mtilde.mul_vec(all.probe(i))?;
        let expected: Vec<FieldElement> = (1..=n)
            .map(|j| {
                if i > n / 2 && j == i {
                    q.one()
                } else {
                    q.zero()
                }
            })
            .collect();
        if image != expected {
            return fail("M̃ does not map the probes as required");
        }
        if i <= n / 2 && !q.is_zero(&hit_inner(&pair.m, all.probe(i), all.probe(i))?) {
            return fail("a probe is not isotropic for M");
        }
    }
    Ok(())
}

/// An entry where a claimed product differs from `M` (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryMismatch {
    pub row: usize,
    pub col: usize,
    pub expected: FieldElement,
    pub found: FieldElement,
}

impl EntryMismatch {
    /// Positions are 1-based in JSON.
    fn to_json(&self, f: &FieldDescriptor) -> Value {
        json!({
            "row": self.row + 1,
            "col": self.col + 1,
            "expected": f.encode(&self.expected),
            "found": f.encode(&self.found),
        })
    }
}

/// A sparse nonzero row of `B` and the probe it does not vanish on, so
/// `v_iᵀ BᵀB v_i = ‖B v_i‖² ≠ 0 = v_iᵀ M v_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricWitness {
    pub row: usize,
    /// Node `i` of the probe `v_i`, 1-based.
    pub probe: usize,
    pub norm_squared: FieldElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymmetricVerdict {
    NotFactorization {
        mismatch: EntryMismatch,
        witness: Option<SymmetricWitness>,
    },
    DenseFactorization {
        sparsity: usize,
        threshold: usize,
    },
}

impl SymmetricVerdict {
    pub fn to_json(&self) -> Value {
        let q = FieldDescriptor::Rational;
        match self {
            SymmetricVerdict::NotFactorization { mismatch, witness } => json!({
                "verdict": "not-a-factorization",
                "mismatch": mismatch.to_json(&q),
                "witness": witness.as_ref().map(|w| json!({
                    "row": w.row + 1,
                    "probe": w.probe,
                    "norm_squared": q.encode(&w.norm_squared),
                })),
            }),
            SymmetricVerdict::DenseFactorization {
                sparsity,
                threshold,
            } => json!({
                "verdict": "dense-factorization",
                "sparsity": sparsity,
                "threshold": threshold,
            }),
        }
    }
}

fn as_rational(b: &ExactMatrix) -> Result<ExactMatrix> {
    match b.field() {
        FieldDescriptor::Rational => Ok(b.clone()),
        FieldDescriptor::Integer => b.lift_to_rational(),
        other => Err(Error::FieldMismatch(format!(
            "the PSD instance lives over the rationals, got {other}"
        ))),
    }
}

fn mismatch(expected: &ExactMatrix, found: &ExactMatrix) -> Option<EntryMismatch> {
    expected
        .first_difference(found)
        .map(|(row, col)| EntryMismatch {
            row,
            col,
            expected: expected.get(row, col).clone(),
            found: found.get(row, col).clone(),
        })
}

/// First nonzero vector with at most `limit` nonzero entries.
fn first_sparse(
    vectors: impl Iterator<Item = Vec<FieldElement>>,
    limit: usize,
) -> Option<(usize, Vec<FieldElement>)> {
    let q = FieldDescriptor::Rational;
    vectors.enumerate().find(|(_, v)| {
        let w = v.iter().filter(|x| !q.is_zero(x)).count();
        w > 0 && w <= limit
    })
}

/// Check a claim `BᵀB = M`.
pub fn refute_symmetric(b: &ExactMatrix, pair: &PsdPair) -> Result<SymmetricVerdict> {
    let n = pair.n;
    if b.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "B has {} columns, the instance has side {n}",
            b.cols()
        )));
    }
    let b = as_rational(b)?;
    let q = FieldDescriptor::Rational;
    let product = b.transpose().matmul(&b)?;
    let sparse_row = first_sparse((0..b.rows()).map(|r| b.row(r).to_vec()), n / 2);
    let witness = match &sparse_row {
        Some((row, r)) => {
            let probe = sparse_row_hit(r, n / 2, &pair.probes)?;
            let bv = b.mul_vec(pair.probes.probe(probe))?;
            Some(SymmetricWitness {
                row: *row,
                probe,
                norm_squared: dot(&q, &bv, &bv)?,
            })
        }
        None => None,
    };

    if let Some(mismatch) = mismatch(&pair.m, &product) {
        return Ok(SymmetricVerdict::NotFactorization { mismatch, witness });
    }
    if let Some(w) = witness {
        return Err(Error::Inconsistent(format!(
            "BᵀB = M although row {} of B has at most n/2 nonzeros",
            w.row
        )));
    }
    let sparsity = b.sparsity().total;
    if sparsity < pair.threshold() {
        return Err(Error::Inconsistent(format!(
            "BᵀB = M with only {sparsity} nonzeros"
        )));
    }
    Ok(SymmetricVerdict::DenseFactorization {
        sparsity,
        threshold: pair.threshold(),
    })
}

/// Which factor of `B·C` is claimed invertible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `B` is invertible; `C` is the factor whose sparsity is bounded.
    Left,
    /// `C` is invertible; `B` is the factor whose sparsity is bounded.
    Right,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left-invertible",
            Side::Right => "right-invertible",
        }
    }
}

/// Probe `v_i` and coordinate `j` (0-based) with `e_jᵀ(BC)v_i ≠ 0` for the
/// left side, or `v_iᵀ(BC)e_j ≠ 0` for the right side, while the same
/// entry of `M v_i` is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertibleWitness {
    pub probe: usize,
    pub coordinate: usize,
    pub value: FieldElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvertibleVerdict {
    NotInvertible {
        side: Side,
        rank: usize,
    },
    ProductMismatch {
        mismatch: EntryMismatch,
        witness: Option<InvertibleWitness>,
    },
    DenseFactor {
        sparsity: usize,
        threshold: usize,
    },
}

impl InvertibleVerdict {
    pub fn to_json(&self) -> Value {
        let q = FieldDescriptor::Rational;
        match self {
            InvertibleVerdict::NotInvertible { side, rank } => json!({
                "verdict": "not-invertible",
                "side": side.name(),
                "rank": rank,
            }),
            InvertibleVerdict::ProductMismatch { mismatch, witness } => json!({
                "verdict": "product-mismatch",
                "mismatch": mismatch.to_json(&q),
                "witness": witness.as_ref().map(|w| json!({
                    "probe": w.probe,
                    "coordinate": w.coordinate + 1,
                    "value": q.encode(&w.value),
                })),
            }),
            InvertibleVerdict::DenseFactor {
                sparsity,
                threshold,
            } => json!({
                "verdict": "dense-factor",
                "sparsity": sparsity,
                "threshold": threshold,
            }),
        }
    }
}

/// Check a claim `B·C = M` where the factor named by `side` is invertible.
pub fn refute_invertible(
    b: &ExactMatrix,
    c: &ExactMatrix,
    side: Side,
    pair: &PsdPair,
) -> Result<InvertibleVerdict> {
    let n = pair.n;
    for (name, f) in [("B", b), ("C", c)] {
        if (f.rows(), f.cols()) != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "{name} is {}x{}, expected {n}x{n}",
                f.rows(),
                f.cols()
            )));
        }
    }
    let b = as_rational(b)?;
    let c = as_rational(c)?;
    let (invertible, other) = match side {
        Side::Left => (&b, &c),
        Side::Right => (&c, &b),
    };
    let rank = invertible.rank()?;
    if rank < n {
        return Ok(InvertibleVerdict::NotInvertible { side, rank });
    }

    let product = b.matmul(&c)?;
    // Rows of C (left) or columns of B (right) must vanish on the probes.
    let lines: Vec<Vec<FieldElement>> = match side {
        Side::Left => (0..n).map(|r| other.row(r).to_vec()).collect(),
        Side::Right => (0..n).map(|j| other.column(j)).collect(),
    };
    let witness = match first_sparse(lines.into_iter(), n / 2) {
        Some((_, line)) => {
            let probe = sparse_row_hit(&line, n / 2, &pair.probes)?;
            let v = pair.probes.probe(probe);
            let image = match side {
                Side::Left => product.mul_vec(v)?,
                Side::Right => product.transpose().mul_vec(v)?,
            };
            let q = FieldDescriptor::Rational;
            image
                .iter()
                .position(|x| !q.is_zero(x))
                .map(|coordinate| InvertibleWitness {
                    probe,
                    coordinate,
                    value: image[coordinate].clone(),
                })
        }
        None => None,
    };

    if let Some(mismatch) = mismatch(&pair.m, &product) {
        return Ok(InvertibleVerdict::ProductMismatch { mismatch, witness });
    }
    if witness.is_some() {
        return Err(Error::Inconsistent(
            "B·C = M although the bounded factor has a sparse line off the probes' kernel".into(),
        ));
    }
    let sparsity = other.sparsity().total;
    if sparsity < pair.threshold() {
        return Err(Error::Inconsistent(format!(
            "B·C = M with a {sparsity}-sparse factor"
        )));
    }
    Ok(InvertibleVerdict::DenseFactor {
        sparsity,
        threshold: pair.threshold(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::DEFAULT_PSD_CAP;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> FieldDescriptor {
        FieldDescriptor::Rational
    }

    fn rat(rows: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_i64_rows(&q(), rows).unwrap()
    }

    fn pair(n: usize) -> PsdPair {
        build_hard_psd(n, DEFAULT_PSD_CAP).unwrap()
    }

    #[test]
    fn two_by_two_instance() {
        let p = pair(2);
        assert_eq!(p.mtilde, rat(&[vec![0, 0], vec![-1, 1]]));
        assert_eq!(p.m, rat(&[vec![1, -1], vec![-1, 1]]));
        assert_eq!(p.m.rank().unwrap(), 1);
        let v1 = p.probes.probe(1);
        assert_eq!(hit_inner(&p.m, v1, v1).unwrap(), q().zero());
    }

    #[test]
    fn instance_invariants_hold_up_to_32() {
        for n in (2..=32).step_by(2) {
            // build_hard_psd verifies every invariant before returning.
            let p = pair(n);
            assert_eq!(p.m, p.mtilde.transpose().matmul(&p.mtilde).unwrap());
            assert_eq!(p.m.rank().unwrap(), n / 2);
        }
    }

    #[test]
    fn rejects_odd_and_oversized() {
        assert!(build_hard_psd(3, 64).is_err());
        assert!(build_hard_psd(0, 64).is_err());
        assert!(build_hard_psd(66, 64).unwrap_err().is_budget());
    }

    #[test]
    fn symmetric_examples() {
        let p = pair(2);
        assert_eq!(
            refute_symmetric(&p.mtilde, &p).unwrap(),
            SymmetricVerdict::DenseFactorization {
                sparsity: 2,
                threshold: 1
            }
        );
        let zero = ExactMatrix::zeros(&q(), 2, 2);
        match refute_symmetric(&zero, &p).unwrap() {
            SymmetricVerdict::NotFactorization { mismatch, witness } => {
                assert_eq!((mismatch.row, mismatch.col), (0, 0));
                assert_eq!(mismatch.expected, q().one());
                assert_eq!(witness, None);
            }
            v => panic!("{v:?}"),
        }
        let id = ExactMatrix::identity(&q(), 2);
        match refute_symmetric(&id, &p).unwrap() {
            SymmetricVerdict::NotFactorization { mismatch, witness } => {
                assert_eq!((mismatch.row, mismatch.col), (0, 1));
                let w = witness.unwrap();
                assert_eq!((w.row, w.probe), (0, 1));
                // B·v_1 = (1, 1).
                assert_eq!(w.norm_squared, q().from_i64(2));
            }
            v => panic!("{v:?}"),
        }
        assert!(refute_symmetric(&ExactMatrix::zeros(&q(), 2, 3), &p).is_err());
    }

    #[test]
    fn symmetric_accepts_dense_gram_factors() {
        // A signed permutation P keeps (P·M̃)ᵀ(P·M̃) = M.
        let p = pair(4);
        let perm = rat(&[
            vec![0, 0, 0, -1],
            vec![0, 0, 1, 0],
            vec![0, 1, 0, 0],
            vec![1, 0, 0, 0],
        ]);
        let b = perm.matmul(&p.mtilde).unwrap();
        match refute_symmetric(&b, &p).unwrap() {
            SymmetricVerdict::DenseFactorization {
                sparsity,
                threshold,
            } => assert!(sparsity >= threshold),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn invertible_examples() {
        let p = pair(2);
        let id = ExactMatrix::identity(&q(), 2);
        assert_eq!(
            refute_invertible(&id, &p.m, Side::Left, &p).unwrap(),
            InvertibleVerdict::DenseFactor {
                sparsity: 4,
                threshold: 1
            }
        );
        assert_eq!(
            refute_invertible(&p.m, &id, Side::Right, &p).unwrap(),
            InvertibleVerdict::DenseFactor {
                sparsity: 4,
                threshold: 1
            }
        );
        let singular = rat(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(
            refute_invertible(&singular, &id, Side::Left, &p).unwrap(),
            InvertibleVerdict::NotInvertible {
                side: Side::Left,
                rank: 1
            }
        );
        match refute_invertible(&id, &id, Side::Left, &p).unwrap() {
            InvertibleVerdict::ProductMismatch { mismatch, witness } => {
                assert_eq!((mismatch.row, mismatch.col), (0, 1));
                let w = witness.unwrap();
                assert_eq!(w.probe, 1);
                assert!(!q().is_zero(&w.value));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn sparse_claims_always_get_a_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [4usize, 6, 8] {
            let p = pair(n);
            for _ in 0..20 {
                // An invertible B and a C with one sparse nonzero row.
                let b = ExactMatrix::from_fn(&q(), n, n, |i, j| {
                    q().from_i64(if i == j {
                        1
                    } else if j > i {
                        rng.gen_range(-2..=2)
                    } else {
                        0
                    })
                })
                .unwrap();
                let c = ExactMatrix::from_fn(&q(), n, n, |i, j| {
                    q().from_i64(if i == 0 && j < n / 2 {
                        rng.gen_range(1..=3)
                    } else {
                        0
                    })
                })
                .unwrap();
                for side in [Side::Left, Side::Right] {
                    let (bb, cc) = match side {
                        Side::Left => (&b, &c),
                        Side::Right => (&c.transpose(), &b.transpose()),
                    };
                    match refute_invertible(bb, cc, side, &p).unwrap() {
                        InvertibleVerdict::ProductMismatch {
                            witness: Some(w), ..
                        } => {
                            assert!(w.probe <= n / 2);
                            let mv = p.m.mul_vec(p.probes.probe(w.probe)).unwrap();
                            assert!(q().is_zero(&mv[w.coordinate]));
                            assert!(!q().is_zero(&w.value));
                        }
                        v => panic!("{v:?}"),
                    }
                }
            }
        }
    }
}
