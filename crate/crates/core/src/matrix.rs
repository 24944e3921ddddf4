//! Dense exact matrices over any [`FieldDescriptor`].
//!
//! Storage is always dense and row-major. Sparsity is something we measure
//! ([`ExactMatrix::sparsity`]), not a storage format.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    field: FieldDescriptor,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

/// Nonzero counts of a matrix: `‖M‖₀` and its row/column breakdown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityReport {
    pub total: usize,
    pub per_row: Vec<usize>,
    pub per_col: Vec<usize>,
}

impl ExactMatrix {
    pub fn new(
        field: FieldDescriptor,
        rows: usize,
        cols: usize,
        entries: Vec<FieldElement>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix shape {rows}x{cols} must be positive"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        for e in &entries {
            field.check(e)?;
        }
        Ok(ExactMatrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(field: &FieldDescriptor, rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix shape must be positive");
        ExactMatrix {
            entries: vec![field.zero(); rows * cols],
            field: field.clone(),
            rows,
            cols,
        }
    }

    pub fn identity(field: &FieldDescriptor, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    /// Build from small integer rows, mapped into `field`.
    pub fn from_i64_rows(field: &FieldDescriptor, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let entries = rows.iter().flatten().map(|&v| field.from_i64(v)).collect();
        Self::new(field.clone(), r, c, entries)
    }

    pub fn from_fn(
        field: &FieldDescriptor,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElement,
    ) -> Result<Self> {
        let entries = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self::new(field.clone(), rows, cols, entries)
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) -> Result<()> {
        self.field.check(&v)?;
        self.entries[i * self.cols + j] = v;
        Ok(())
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.field.is_zero(e))
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        ExactMatrix {
            field: self.field.clone(),
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!(
                "{} vs {}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = f.zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if f.is_zero(a) || f.is_zero(b) {
                        continue;
                    }
                    acc = f.add(&acc, &f.mul(a, b)?)?;
                }
                entries.push(acc);
            }
        }
        Ok(ExactMatrix {
            field: f.clone(),
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("shapes differ".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.field.add(a, b))
            .collect::<Result<_>>()?;
        Ok(ExactMatrix {
            entries,
            ..self.clone()
        })
    }

    /// `A·v` for a column vector given as a slice.
    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        (0..self.rows).map(|i| dot(f, self.row(i), v)).collect()
    }

    /// First position (row-major) where two same-shaped matrices differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Some((0, 0));
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .position(|(a, b)| a != b)
            .map(|k| (k / self.cols, k % self.cols))
    }

    pub fn sparsity(&self) -> SparsityReport {
        let mut per_row = vec![0; self.rows];
        let mut per_col = vec![0; self.cols];
        for (k, e) in self.entries.iter().enumerate() {
            if !self.field.is_zero(e) {
                per_row[k / self.cols] += 1;
                per_col[k % self.cols] += 1;
            }
        }
        SparsityReport {
            total: per_row.iter().sum(),
            per_row,
            per_col,
        }
    }

    /// `(A⊗B)[i·B.rows + k, j·B.cols + l] = A[i,j]·B[k,l]` (0-indexed).
    pub fn kronecker(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let f = &self.field;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut entries = vec![f.zero(); rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if f.is_zero(a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let r = i * other.rows + k;
                        let c = j * other.cols + l;
                        entries[r * cols + c] = f.mul(a, other.get(k, l))?;
                    }
                }
            }
        }
        Ok(ExactMatrix {
            field: f.clone(),
            rows,
            cols,
            entries,
        })
    }

    /// The `rows × cols` block starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<Self> {
        if r0 + rows > self.rows || c0 + cols > self.cols {
            return Err(Error::DimensionMismatch("block out of range".into()));
        }
        Self::from_fn(&self.field, rows, cols, |i, j| {
            self.get(r0 + i, c0 + j).clone()
        })
    }

    /// Entry-wise embedding of an integer matrix into the rationals.
    pub fn lift_to_rational(&self) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| self.field.lift_to_rational(e))
            .collect::<Result<_>>()?;
        Ok(ExactMatrix {
            field: FieldDescriptor::Rational,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    fn require_division(&self, op: &str) -> Result<()> {
        if self.field.has_division() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "{op} over the integer ring; lift to rationals first"
            )))
        }
    }

    /// Rank by Gaussian elimination, taking as pivot the first nonzero entry
    /// at or below the current row, scanning columns left to right.
    pub fn rank(&self) -> Result<usize> {
        self.require_division("rank")?;
        let mut work = self.clone();
        Ok(work.row_reduce(self.cols, false)?.len())
    }

    /// In-place elimination over the first `limit` columns. With `full`
    /// the result is reduced row echelon form. Returns pivot columns.
    fn row_reduce(&mut self, limit: usize, full: bool) -> Result<Vec<usize>> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !f.is_zero(self.get(i, c))) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.entries.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.get(r, c))?;
            for j in c..cols {
                let v = f.mul(self.get(r, j), &inv)?;
                self.entries[r * cols + j] = v;
            }
            let targets: Vec<usize> = if full {
                (0..self.rows).filter(|&i| i != r).collect()
            } else {
                (r + 1..self.rows).collect()
            };
            for i in targets {
                let factor = self.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..cols {
                    let delta = f.mul(&factor, self.get(r, j))?;
                    let v = f.sub(self.get(i, j), &delta)?;
                    self.entries[i * cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok(pivots)
    }

    /// Exact `X` with `A·X = B` for square invertible `A`.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        self.require_division("solve")?;
        self.same_field(rhs)?;
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "solve needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} rows, expected {}",
                rhs.rows, self.rows
            )));
        }
        let n = self.rows;
        let width = n + rhs.cols;
        let mut aug = Self::from_fn(&self.field, n, width, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - n).clone()
            }
        })?;
        let pivots = aug.row_reduce(n, true)?;
        if pivots.len() < n {
            return Err(Error::Singular);
        }
        let x = aug.submatrix(0, n, n, rhs.cols)?;
        debug_assert_eq!(self.matmul(&x).as_ref(), Ok(rhs));
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.solve(&Self::identity(&self.field, self.rows))
    }

    /// A basis of `{x : A·x = 0}`, one vector per free column, each with a 1
    /// in its free coordinate.
    pub fn kernel(&self) -> Result<Vec<Vec<FieldElement>>> {
        self.require_division("kernel")?;
        let f = &self.field;
        let mut work = self.clone();
        let pivots = work.row_reduce(self.cols, true)?;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![f.zero(); self.cols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(work.get(r, fc))?;
            }
            basis.push(v);
        }
        Ok(basis)
    }

    /// `len(nodes) × k` matrix whose row `i` is `(1, x_i, x_i², …, x_i^{k−1})`.
    pub fn vandermonde(field: &FieldDescriptor, nodes: &[FieldElement], k: usize) -> Result<Self> {
        if nodes.is_empty() || k == 0 {
            return Err(Error::InvalidArgument(
                "vandermonde needs at least one node and k ≥ 1".into(),
            ));
        }
        let mut entries = Vec::with_capacity(nodes.len() * k);
        for x in nodes {
            field.check(x)?;
            let mut power = field.one();
            for _ in 0..k {
                let next = field.mul(&power, x)?;
                entries.push(power);
                power = next;
            }
        }
        Self::new(field.clone(), nodes.len(), k, entries)
    }

    // ---- JSON --------------------------------------------------------

    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field.to_json(),
            "rows": self.rows,
            "cols": self.cols,
            "entries": self.entries.iter().map(|e| self.field.encode(e)).collect::<Vec<_>>(),
        })
    }

    /// Parse the matrix JSON object. An object carrying a nested `"matrix"`
    /// key (the generator output with its provenance) is accepted too.
    pub fn from_json(v: &Value) -> Result<Self> {
        let v = v.get("matrix").unwrap_or(v);
        let field = FieldDescriptor::from_json(
            v.get("field")
                .ok_or_else(|| Error::InvalidArgument("matrix JSON needs \"field\"".into()))?,
        )?;
        let dim = |key: &str| {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("matrix JSON needs integer \"{key}\""))
                })
        };
        let rows = dim("rows")?;
        let cols = dim("cols")?;
        let raw = v.get("entries").and_then(Value::as_array).ok_or_else(|| {
            Error::InvalidArgument("matrix JSON needs an \"entries\" array".into())
        })?;
        let entries = raw
            .iter()
            .map(|e| field.decode(e))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, rows, cols, entries)
    }
}

pub fn dot(f: &FieldDescriptor, a: &[FieldElement], b: &[FieldElement]) -> Result<FieldElement> {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        if f.is_zero(x) || f.is_zero(y) {
            continue;
        }
        acc = f.add(&acc, &f.mul(x, y)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> FieldDescriptor {
        FieldDescriptor::Rational
    }

    fn f2() -> FieldDescriptor {
        FieldDescriptor::prime(2).unwrap()
    }

    fn m(field: &FieldDescriptor, rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_i64_rows(field, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn matmul_examples() {
        let a = m(&q(), &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(ExactMatrix::identity(&q(), 3).matmul(&a).unwrap(), a);
        let t = m(&q(), &[&[0, 0], &[-1, 1]]);
        assert_eq!(
            t.transpose().matmul(&t).unwrap(),
            m(&q(), &[&[1, -1], &[-1, 1]])
        );
        let x = m(&f2(), &[&[1, 1], &[0, 1]]);
        let y = m(&f2(), &[&[1, 0], &[1, 1]]);
        assert_eq!(x.matmul(&y).unwrap(), m(&f2(), &[&[0, 1], &[1, 1]]));
        assert!(matches!(x.matmul(&a), Err(Error::FieldMismatch(_))));
        assert!(matches!(
            a.matmul(&m(&q(), &[&[1, 2]])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::identity(&q(), 3).rank().unwrap(), 3);
        assert_eq!(m(&q(), &[&[1, -1], &[-1, 1]]).rank().unwrap(), 1);
        let nodes: Vec<_> = (1..=4).map(|x| q().from_i64(x)).collect();
        assert_eq!(
            ExactMatrix::vandermonde(&q(), &nodes, 4)
                .unwrap()
                .rank()
                .unwrap(),
            4
        );
        let z = ExactMatrix::identity(&FieldDescriptor::Integer, 2);
        assert!(matches!(z.rank(), Err(Error::Unsupported(_))));
        assert_eq!(z.lift_to_rational().unwrap().rank().unwrap(), 2);
    }

    #[test]
    fn solve_examples() {
        let b = m(&q(), &[&[1, 2], &[3, 4]]);
        assert_eq!(ExactMatrix::identity(&q(), 2).solve(&b).unwrap(), b);
        let a = m(&q(), &[&[1, 1], &[1, 2]]);
        let rhs = m(&q(), &[&[0, 0], &[0, 1]]);
        let x = a.solve(&rhs).unwrap();
        assert_eq!(x, m(&q(), &[&[0, -1], &[0, 1]]));
        assert_eq!(a.matmul(&x).unwrap(), rhs);
        // The right-division form X·A = B is the transposed system.
        let y = a.transpose().solve(&rhs.transpose()).unwrap().transpose();
        assert_eq!(y, m(&q(), &[&[0, 0], &[-1, 1]]));
        assert_eq!(
            m(&q(), &[&[1, 1], &[2, 2]]).solve(&rhs),
            Err(Error::Singular)
        );
        assert!(matches!(
            a.solve(&m(&q(), &[&[1]])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn kronecker_examples() {
        let one = m(&q(), &[&[1]]);
        let i2 = ExactMatrix::identity(&q(), 2);
        assert_eq!(i2.kronecker(&one).unwrap(), i2);
        let a = m(&q(), &[&[1, 2], &[3, 4]]);
        let block = i2.kronecker(&a).unwrap();
        assert_eq!(
            block,
            m(
                &q(),
                &[&[1, 2, 0, 0], &[3, 4, 0, 0], &[0, 0, 1, 2], &[0, 0, 3, 4]]
            )
        );
        let s = ExactMatrix::zeros(&q(), 2, 3)
            .kronecker(&ExactMatrix::zeros(&q(), 4, 5))
            .unwrap();
        assert_eq!((s.rows(), s.cols()), (8, 15));
    }

    #[test]
    fn sparsity_examples() {
        assert_eq!(ExactMatrix::zeros(&q(), 3, 3).sparsity().total, 0);
        let r = ExactMatrix::identity(&q(), 4).sparsity();
        assert_eq!((r.total, r.per_row, r.per_col), (4, vec![1; 4], vec![1; 4]));
        assert_eq!(m(&q(), &[&[1, -1], &[-1, 1]]).sparsity().total, 4);
    }

    #[test]
    fn vandermonde_examples() {
        let nodes: Vec<_> = [1, 2].iter().map(|&x| q().from_i64(x)).collect();
        assert_eq!(
            ExactMatrix::vandermonde(&q(), &nodes, 2).unwrap(),
            m(&q(), &[&[1, 1], &[1, 2]])
        );
        let f5 = FieldDescriptor::prime(5).unwrap();
        let all: Vec<_> = (0..5).map(|x| f5.from_i64(x)).collect();
        let g = ExactMatrix::vandermonde(&f5, &all, 2).unwrap();
        assert_eq!(g, m(&f5, &[&[1, 0], &[1, 1], &[1, 2], &[1, 3], &[1, 4]]));
        let ones = ExactMatrix::vandermonde(&f5, &all, 1).unwrap();
        assert_eq!(ones, m(&f5, &[&[1], &[1], &[1], &[1], &[1]]));
    }

    #[test]
    fn kernel_is_annihilated() {
        let a = m(&q(), &[&[1, 2, 3, 4], &[2, 4, 6, 8], &[1, 0, 1, 0]]);
        let basis = a.kernel().unwrap();
        assert_eq!(basis.len(), 4 - a.rank().unwrap());
        for v in basis {
            assert!(a.mul_vec(&v).unwrap().iter().all(|e| q().is_zero(e)));
        }
        assert!(ExactMatrix::identity(&q(), 3).kernel().unwrap().is_empty());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let e = FieldDescriptor::extension(2, vec![1, 1, 1]).unwrap();
        let a = ExactMatrix::from_fn(&e, 1, 2, |_, j| {
            FieldElement::Poly(if j == 0 { vec![0, 1] } else { vec![1] })
        })
        .unwrap();
        assert_eq!(ExactMatrix::from_json(&a.to_json()).unwrap(), a);
        let bad =
            json!({"field": {"kind": "prime", "p": 5}, "rows": 1, "cols": 1, "entries": ["6"]});
        assert!(ExactMatrix::from_json(&bad).is_err());
        let short = json!({"field": {"kind": "rational"}, "rows": 2, "cols": 1, "entries": ["1"]});
        assert!(ExactMatrix::from_json(&short).is_err());
        let wrapped = json!({"matrix": a.to_json(), "provenance": {}});
        assert_eq!(ExactMatrix::from_json(&wrapped).unwrap(), a);
    }

    fn small_f3(rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
        proptest::collection::vec(0u64..3, rows * cols).prop_map(move |v| {
            let f = FieldDescriptor::prime(3).unwrap();
            let entries = v.into_iter().map(FieldElement::Residue).collect();
            ExactMatrix::new(f, rows, cols, entries).unwrap()
        })
    }

    fn small_q(rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
        proptest::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
            let rows_v: Vec<Vec<i64>> = v.chunks(cols).map(<[i64]>::to_vec).collect();
            ExactMatrix::from_i64_rows(&FieldDescriptor::Rational, &rows_v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn rank_of_product_is_bounded(a in small_f3(3, 4), b in small_f3(4, 3)) {
            let ab = a.matmul(&b).unwrap();
            prop_assert!(ab.rank().unwrap() <= a.rank().unwrap().min(b.rank().unwrap()));
        }

        #[test]
        fn solve_postcondition(a in small_q(3, 3), b in small_q(3, 2)) {
            match a.solve(&b) {
                Ok(x) => prop_assert_eq!(a.matmul(&x).unwrap(), b),
                Err(e) => {
                    prop_assert_eq!(e, Error::Singular);
                    prop_assert!(a.rank().unwrap() < 3);
                }
            }
        }

        #[test]
        fn kronecker_mixed_product(a in small_f3(2, 2), b in small_f3(2, 3), c in small_f3(2, 2), d in small_f3(3, 1)) {
            let lhs = a.kronecker(&b).unwrap().matmul(&c.kronecker(&d).unwrap()).unwrap();
            let rhs = a.matmul(&c).unwrap().kronecker(&b.matmul(&d).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn vandermonde_on_distinct_nodes_is_full_rank(mut nodes in proptest::collection::btree_set(-20i64..20, 1..6)) {
            let nodes: Vec<_> = std::mem::take(&mut nodes).into_iter().map(|x| FieldDescriptor::Rational.from_i64(x)).collect();
            let v = ExactMatrix::vandermonde(&FieldDescriptor::Rational, &nodes, nodes.len()).unwrap();
            prop_assert_eq!(v.rank().unwrap(), nodes.len());
        }
    }
}
