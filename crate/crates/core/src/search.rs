//! Exhaustive minimum-sparsity depth-2 factorization over tiny prime fields.
//!
//! `A = B·C` with `B` n×m and `C` m×n is a sum of `m` outer products
//! `b_k c_kᵀ`, and the size is `Σ wt(b_k) + wt(c_k)`. The search deepens on
//! the size bound and, at each level, picks terms in strictly increasing
//! order from a fixed list (`b` scaled so its first nonzero is 1), with the
//! last term read off directly once the residual has rank one.
//!
//! Pruning, for a residual `R` with `k` terms still allowed:
//! * `k ≥ rank R`;
//! * the remaining `Σ wt(b) ≥ max(rank R, nonzero rows of R)`;
//! * the remaining `Σ wt(c) ≥ max(rank R, nonzero columns of R)`.

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};
use crate::matrix::ExactMatrix;
use crate::slc::CircuitFactorization;

/// Largest field size the search accepts.
pub const MAX_FIELD: u64 = 3;
/// Largest matrix side the search accepts.
pub const MAX_SIDE: usize = 4;
/// Largest inner dimension the search accepts.
pub const MAX_INNER: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    /// Minimal size, or `None` when nothing of size ≤ `s_max` exists.
    pub size: Option<usize>,
    /// `[B, C]` achieving `size`.
    pub witness: Option<CircuitFactorization>,
    pub nodes: u64,
    pub m_max: usize,
    pub s_max: usize,
}

/// Dense n×n matrix over F_q with small residues, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
struct Small {
    n: usize,
    q: u8,
    cells: Vec<u8>,
}

impl Small {
    fn is_zero(&self) -> bool {
        self.cells.iter().all(|&c| c == 0)
    }

    fn nonzero_rows(&self) -> usize {
        self.cells
            .chunks(self.n)
            .filter(|r| r.iter().any(|&c| c != 0))
            .count()
    }

    fn nonzero_cols(&self) -> usize {
        (0..self.n)
            .filter(|&j| (0..self.n).any(|i| self.cells[i * self.n + j] != 0))
            .count()
    }

    fn rank(&self) -> usize {
        let (n, q) = (self.n, self.q as u32);
        let mut m: Vec<u32> = self.cells.iter().map(|&c| c as u32).collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| m[r * n + col] != 0) else {
                continue;
            };
            for j in 0..n {
                m.swap(rank * n + j, piv * n + j);
            }
            // q ≤ 3, so every nonzero is its own inverse up to sign: x·x = 1.
            let inv = m[rank * n + col];
            for j in 0..n {
                m[rank * n + j] = m[rank * n + j] * inv % q;
            }
            for r in 0..n {
                let f = m[r * n + col];
                if r != rank && f != 0 {
                    for j in 0..n {
                        m[r * n + j] = (m[r * n + j] + (q - f) * m[rank * n + j]) % q;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// `self − b cᵀ`.
    fn minus_outer(&self, b: &[u8], c: &[u8]) -> Small {
        let mut out = self.clone();
        let q = self.q;
        for i in 0..self.n {
            if b[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                let prod = b[i] * c[j] % q;
                let cell = &mut out.cells[i * self.n + j];
                *cell = (*cell + q - prod) % q;
            }
        }
        out
    }

    /// `(b, c)` with `self = b cᵀ` for a rank-one matrix.
    fn rank_one_split(&self) -> (Vec<u8>, Vec<u8>) {
        let n = self.n;
        let q = self.q;
        let row = (0..n)
            .find(|&i| self.cells[i * n..(i + 1) * n].iter().any(|&c| c != 0))
            .expect("nonzero");
        let c: Vec<u8> = self.cells[row * n..(row + 1) * n].to_vec();
        let j0 = c.iter().position(|&x| x != 0).expect("nonzero row");
        // b_i = R[i, j0] / c[j0]; inverses in F_2, F_3 are the elements themselves.
        let b: Vec<u8> = (0..n).map(|i| self.cells[i * n + j0] * c[j0] % q).collect();
        (b, c)
    }
}

#[derive(Debug)]
struct Term {
    b: Vec<u8>,
    c: Vec<u8>,
    wb: usize,
    wc: usize,
}

/// All nonzero vectors of length `n` over F_q; with `canonical`, only those
/// whose first nonzero coordinate is 1.
fn vectors(n: usize, q: u8, canonical: bool) -> Vec<Vec<u8>> {
    let total = (q as usize).pow(n as u32);
    (1..total)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let d = (idx % q as usize) as u8;
                    idx /= q as usize;
                    d
                })
                .collect::<Vec<u8>>()
        })
        .filter(|v| !canonical || v.iter().find(|&&x| x != 0) == Some(&1))
        .collect()
}

fn weight(v: &[u8]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

struct Search<'a> {
    terms: &'a [Term],
    nodes: u64,
    node_budget: u64,
    chosen: Vec<(Vec<u8>, Vec<u8>)>,
}

impl Search<'_> {
    /// Find terms with total weight ≤ `room` summing to `r`, using at most
    /// `k` terms with indices ≥ `start`.
    fn dfs(&mut self, r: &Small, room: usize, k: usize, start: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.node_budget {
            return Err(Error::budget(
                "depth-2 search nodes",
                self.nodes,
                self.node_budget,
            ));
        }
        if r.is_zero() {
            return Ok(true);
        }
        let rank = r.rank();
        let need_b = rank.max(r.nonzero_rows());
        let need_c = rank.max(r.nonzero_cols());
        if k < rank || need_b + need_c > room {
            return Ok(false);
        }
        if rank == 1 {
            // The remaining term is forced up to scaling.
            let (b, c) = r.rank_one_split();
            self.chosen.push((b, c));
            return Ok(true);
        }
        for idx in start..self.terms.len() {
            let t = &self.terms[idx];
            if t.wb + t.wc > room {
                continue;
            }
            let next = r.minus_outer(&t.b, &t.c);
            self.chosen.push((t.b.clone(), t.c.clone()));
            if self.dfs(&next, room - t.wb - t.wc, k - 1, idx + 1)? {
                return Ok(true);
            }
            self.chosen.pop();
        }
        Ok(false)
    }
}

/// Smallest `wt(B) + wt(C)` over `B·C = A` with inner dimension ≤ `m_max`
/// and size ≤ `s_max`.
pub fn min_depth2_sparsity(
    a: &ExactMatrix,
    m_max: usize,
    s_max: usize,
    node_budget: u64,
) -> Result<SearchResult> {
    let field = a.field().clone();
    let FieldDescriptor::Prime { p } = field else {
        return Err(Error::Unsupported(format!(
            "search needs F_2 or F_3, got {field}"
        )));
    };
    if p > MAX_FIELD {
        return Err(Error::Unsupported(format!(
            "search needs F_2 or F_3, got F_{p}"
        )));
    }
    let n = a.rows();
    if a.cols() != n || n > MAX_SIDE {
        return Err(Error::Unsupported(format!(
            "search needs a square matrix of side ≤ {MAX_SIDE}, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if m_max == 0 || m_max > MAX_INNER {
        return Err(Error::InvalidArgument(format!(
            "m_max must lie in [1, {MAX_INNER}]"
        )));
    }
    let q = p as u8;
    let target = Small {
        n,
        q,
        cells: a
            .entries()
            .iter()
            .map(|e| match e {
                FieldElement::Residue(r) => *r as u8,
                _ => unreachable!("prime field residues"),
            })
            .collect(),
    };

    let mut result = SearchResult {
        size: None,
        witness: None,
        nodes: 0,
        m_max,
        s_max,
    };
    if target.is_zero() {
        // Zero needs no wires; one zero column keeps the shapes valid.
        result.size = Some(0);
        result.witness = Some(CircuitFactorization::new(
            field.clone(),
            vec![
                ExactMatrix::zeros(&field, n, 1),
                ExactMatrix::zeros(&field, 1, n),
            ],
        )?);
        return Ok(result);
    }

    let bs = vectors(n, q, true);
    let cs = vectors(n, q, false);
    let mut terms: Vec<Term> = Vec::with_capacity(bs.len() * cs.len());
    for b in &bs {
        for c in &cs {
            terms.push(Term {
                wb: weight(b),
                wc: weight(c),
                b: b.clone(),
                c: c.clone(),
            });
        }
    }

    let mut search = Search {
        terms: &terms,
        nodes: 0,
        node_budget,
        chosen: Vec::new(),
    };
    for s in 0..=s_max {
        if search.dfs(&target, s, m_max, 0)? {
            let chosen = std::mem::take(&mut search.chosen);
            let witness = witness_circuit(&field, n, &chosen)?;
            debug_assert_eq!(witness.product()?, *a);
            result.size = Some(witness.size());
            result.witness = Some(witness);
            break;
        }
        search.chosen.clear();
    }
    result.nodes = search.nodes;
    Ok(result)
}

fn witness_circuit(
    field: &FieldDescriptor,
    n: usize,
    terms: &[(Vec<u8>, Vec<u8>)],
) -> Result<CircuitFactorization> {
    let m = terms.len();
    let b = ExactMatrix::from_fn(field, n, m, |i, k| {
        FieldElement::Residue(terms[k].0[i] as u64)
    })?;
    let c = ExactMatrix::from_fn(field, m, n, |k, j| {
        FieldElement::Residue(terms[k].1[j] as u64)
    })?;
    CircuitFactorization::new(field.clone(), vec![b, c])
}
