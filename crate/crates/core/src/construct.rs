//! The explicit hard matrices.
//!
//! * [`univariate_hard`]: exponents `e_{i,j}` of the monomial matrix
//!   `G[i,j] = y^{e_{i,j}}`, taken from a t-wise Sidon set.
//! * [`hard_over_finite`]: `y ↦ α` with `α` a root of an irreducible of
//!   degree `D + 1`, `D = 10·t·Δ`.
//! * [`hard_over_integers`]: `y ↦ 2`.
//! * [`trivial_hard`]: `A[i,j] = 2^{2^{(n+1)(i−1)+j}}`.
//! * [`amplify_direct_sum`] and [`quasipoly_hard`]: `I_m ⊗ A`.

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};
use crate::matrix::ExactMatrix;
use crate::poly::find_irreducible;
use crate::sidon::{construct_sidon, SidonSet};

/// Multiplier in `D = 10·t·Δ`.
pub const EXTENSION_DEGREE_FACTOR: u64 = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    pub n: usize,
    pub t: usize,
    pub exponents: Vec<Vec<u64>>,
    /// Δ, the largest exponent.
    pub max_degree: u64,
    pub source: SidonSet,
}

pub fn univariate_hard(n: usize, t: usize, budget: &Budget) -> Result<ExponentMatrix> {
    let source = construct_sidon(n, t, budget.prime_budget, budget.sidon_sums)?;
    let max_degree = source.max_element();
    Ok(ExponentMatrix {
        n,
        t,
        exponents: source.grid.clone(),
        max_degree,
        source,
    })
}

/// Which construction produced a bundle, with the parameters needed to
/// rebuild it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    FiniteField { p: u64, n: usize, t: usize },
    Integers { n: usize, t: usize },
    Trivial { n: usize },
    Quasipoly { n: usize, c: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardMatrixBundle {
    pub matrix: ExactMatrix,
    pub construction: Construction,
    /// Modulus of the Sidon set behind the exponents.
    pub sidon_prime: Option<u64>,
    /// Δ.
    pub max_degree: Option<u64>,
    /// D; the extension has degree `D + 1`.
    pub extension_d: Option<u64>,
    pub modulus: Option<Vec<u64>>,
    /// Side `k` of the repeated block.
    pub block_size: Option<usize>,
    pub blocks: Option<usize>,
}

impl HardMatrixBundle {
    fn bare(matrix: ExactMatrix, construction: Construction) -> Self {
        HardMatrixBundle {
            matrix,
            construction,
            sidon_prime: None,
            max_degree: None,
            extension_d: None,
            modulus: None,
            block_size: None,
            blocks: None,
        }
    }

    pub fn provenance(&self) -> &'static str {
        match self.construction {
            Construction::FiniteField { .. } => "finite-field",
            Construction::Integers { .. } => "integer",
            Construction::Trivial { .. } => "trivial",
            Construction::Quasipoly { .. } => "quasipoly",
        }
    }

    /// Parameters as a JSON object (inputs first, then derived values).
    pub fn parameters(&self) -> Value {
        let mut v = match &self.construction {
            Construction::FiniteField { p, n, t } => json!({"p": p, "n": n, "t": t}),
            Construction::Integers { n, t } => json!({"n": n, "t": t}),
            Construction::Trivial { n } => json!({"n": n}),
            Construction::Quasipoly { n, c } => json!({"n": n, "c": c}),
        };
        let obj = v.as_object_mut().expect("object");
        if let Some(x) = self.sidon_prime {
            obj.insert("sidon_p".into(), json!(x));
        }
        if let Some(x) = self.max_degree {
            obj.insert("delta".into(), json!(x));
        }
        if let Some(x) = self.extension_d {
            obj.insert("D".into(), json!(x));
        }
        if let Some(x) = self.block_size {
            obj.insert("k".into(), json!(x));
        }
        if let Some(x) = self.blocks {
            obj.insert("m".into(), json!(x));
        }
        v
    }

    /// Run the construction again from the recorded parameters.
    pub fn rebuild(&self, budget: &Budget) -> Result<Self> {
        match self.construction {
            Construction::FiniteField { p, n, t } => hard_over_finite(p, n, t, budget),
            Construction::Integers { n, t } => hard_over_integers(n, t, budget),
            Construction::Trivial { n } => trivial_hard(n, budget.trivial_cap),
            Construction::Quasipoly { n, c } => quasipoly_hard(n, c, budget.trivial_cap),
        }
    }
}

/// `M[i,j] = α^{e_{i,j}}` over `E = F_p[z]/(g)`, `g` the lex-first monic
/// irreducible of degree `D + 1`.
pub fn hard_over_finite(p: u64, n: usize, t: usize, budget: &Budget) -> Result<HardMatrixBundle> {
    let exps = univariate_hard(n, t, budget)?;
    let d = EXTENSION_DEGREE_FACTOR * t as u64 * exps.max_degree;
    let modulus = find_irreducible(p, d as usize + 1, budget.irreducible_candidates)?;
    let field = FieldDescriptor::extension_trusted(p, modulus.clone());
    let alpha = field.generator()?;
    let mut entries = Vec::with_capacity(n * n);
    for &e in exps.exponents.iter().flatten() {
        entries.push(field.pow(&alpha, e)?);
    }
    let matrix = ExactMatrix::new(field, n, n, entries)?;
    Ok(HardMatrixBundle {
        sidon_prime: Some(exps.source.p),
        max_degree: Some(exps.max_degree),
        extension_d: Some(d),
        modulus: Some(modulus),
        ..HardMatrixBundle::bare(matrix, Construction::FiniteField { p, n, t })
    })
}

/// `M[i,j] = 2^{e_{i,j}}` over the integers.
pub fn hard_over_integers(n: usize, t: usize, budget: &Budget) -> Result<HardMatrixBundle> {
    let exps = univariate_hard(n, t, budget)?;
    if exps.max_degree > budget.max_entry_bits {
        return Err(Error::budget(
            "entry bit length",
            exps.max_degree,
            budget.max_entry_bits,
        ));
    }
    let field = FieldDescriptor::Integer;
    let entries = exps
        .exponents
        .iter()
        .flatten()
        .map(|&e| FieldElement::Integer(BigInt::one() << e))
        .collect();
    let matrix = ExactMatrix::new(field, n, n, entries)?;
    Ok(HardMatrixBundle {
        sidon_prime: Some(exps.source.p),
        max_degree: Some(exps.max_degree),
        ..HardMatrixBundle::bare(matrix, Construction::Integers { n, t })
    })
}

/// The doubly-exponential pattern `M_k[i,j] = 2^{2^{(k+1)(i−1)+j}}`
/// (1-indexed).
fn doubly_exponential(k: usize, cap: usize) -> Result<ExactMatrix> {
    if k == 0 {
        return Err(Error::InvalidArgument("side must be positive".into()));
    }
    if k > cap {
        return Err(Error::budget("doubly-exponential side", k, cap));
    }
    ExactMatrix::from_fn(&FieldDescriptor::Integer, k, k, |i, j| {
        let inner = (k + 1) * i + j + 1;
        FieldElement::Integer(BigInt::one() << (1usize << inner))
    })
}

pub fn trivial_hard(n: usize, cap: usize) -> Result<HardMatrixBundle> {
    let matrix = doubly_exponential(n, cap)?;
    Ok(HardMatrixBundle::bare(matrix, Construction::Trivial { n }))
}

/// `I_m ⊗ A`.
pub fn amplify_direct_sum(a: &ExactMatrix, m: usize) -> Result<ExactMatrix> {
    if m == 0 {
        return Err(Error::InvalidArgument("copies must be at least 1".into()));
    }
    ExactMatrix::identity(a.field(), m).kronecker(a)
}

/// `⌈(log₂ n)^c⌉`, exact when `n` is a power of two.
pub fn log_power_ceiling(n: usize, c: u32) -> u64 {
    if n.is_power_of_two() {
        return (n.trailing_zeros() as u64).pow(c);
    }
    let x = (n as f64).log2().powi(c as i32);
    x.ceil() as u64
}

/// Block size: the smallest divisor `k` of `n` with
/// `⌈log₂^c n⌉ ≤ k ≤ 2⌈log₂^c n⌉`.
pub fn quasipoly_block_size(n: usize, c: u32) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    if c == 0 {
        return Err(Error::InvalidArgument("c must be positive".into()));
    }
    let target = log_power_ceiling(n, c).max(1) as usize;
    (target..=(2 * target).min(n))
        .find(|k| n % k == 0)
        .ok_or_else(|| {
            Error::InvalidArgument(format!("no divisor of {n} in [{target}, {}]", 2 * target))
        })
}

/// `I_{n/k} ⊗ M_k`.
pub fn quasipoly_hard(n: usize, c: u32, cap: usize) -> Result<HardMatrixBundle> {
    let k = quasipoly_block_size(n, c)?;
    let block = doubly_exponential(k, cap)?;
    let matrix = amplify_direct_sum(&block, n / k)?;
    Ok(HardMatrixBundle {
        block_size: Some(k),
        blocks: Some(n / k),
        ..HardMatrixBundle::bare(matrix, Construction::Quasipoly { n, c })
    })
}
