//! Sparse linear circuits as factor chains, and their `.slc` text format.
//!
//! ```text
//! # comments run to the end of the line
//! field prime 2              | field ext <p> <c0> … <cd> | field rational | field integer
//! layer 2 3
//! 1 1 1                      # <row> <col> <value>, 1-indexed
//! 2 3 1
//! end
//! layer 3 2
//! …
//! end
//! ```
//!
//! Layers are listed left to right, so the circuit computes
//! `layer1 · layer2 · …`. Extension elements are written as colon-separated
//! coefficients, lowest degree first.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::matrix::ExactMatrix;

/// Largest layer (rows × cols) the parser will allocate.
pub const MAX_LAYER_CELLS: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitFactorization {
    field: FieldDescriptor,
    factors: Vec<ExactMatrix>,
}

impl CircuitFactorization {
    /// Validates that there is at least one factor, that all factors share
    /// `field` and that consecutive shapes chain.
    pub fn new(field: FieldDescriptor, factors: Vec<ExactMatrix>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument(
                "a circuit needs at least one layer".into(),
            ));
        }
        for (k, f) in factors.iter().enumerate() {
            if f.field() != &field {
                return Err(Error::FieldMismatch(format!(
                    "layer {} is over {}, circuit is over {field}",
                    k + 1,
                    f.field()
                )));
            }
        }
        for (k, w) in factors.windows(2).enumerate() {
            if w[0].cols() != w[1].rows() {
                return Err(Error::DimensionMismatch(format!(
                    "layer {} has {} columns but layer {} has {} rows",
                    k + 1,
                    w[0].cols(),
                    k + 2,
                    w[1].rows()
                )));
            }
        }
        Ok(CircuitFactorization { field, factors })
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn factors(&self) -> &[ExactMatrix] {
        &self.factors
    }

    pub fn depth(&self) -> usize {
        self.factors.len()
    }

    /// Total number of nonzero entries over all layers.
    pub fn size(&self) -> usize {
        self.factors.iter().map(|f| f.sparsity().total).sum()
    }

    pub fn product(&self) -> Result<ExactMatrix> {
        let mut acc = self.factors[0].clone();
        for f in &self.factors[1..] {
            acc = acc.matmul(f)?;
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub equal: bool,
    pub size: usize,
    pub product: ExactMatrix,
    /// First differing entry (0-based) when not equal.
    pub difference: Option<(usize, usize)>,
}

pub fn verify_factorization(c: &CircuitFactorization, a: &ExactMatrix) -> Result<Verification> {
    if c.field() != a.field() {
        return Err(Error::FieldMismatch(format!(
            "circuit over {}, target over {}",
            c.field(),
            a.field()
        )));
    }
    let product = c.product()?;
    if (product.rows(), product.cols()) != (a.rows(), a.cols()) {
        return Err(Error::DimensionMismatch(format!(
            "circuit computes a {}x{} matrix, target is {}x{}",
            product.rows(),
            product.cols(),
            a.rows(),
            a.cols()
        )));
    }
    let difference = a.first_difference(&product);
    Ok(Verification {
        equal: difference.is_none(),
        size: c.size(),
        product,
        difference,
    })
}

/// A token with its 1-based column.
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start = None;
    for (col, (idx, ch)) in code.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((idx, col + 1)),
            (true, Some((s, c))) => {
                tokens.push(Token {
                    text: &code[s..idx],
                    column: c,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some((s, c)) = start {
        tokens.push(Token {
            text: &code[s..],
            column: c,
        });
    }
    tokens
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_count(tok: &Token, line: usize, what: &str) -> Result<usize> {
    match tok.text.parse::<usize>() {
        Ok(v) if v > 0 && tok.text.bytes().all(|b| b.is_ascii_digit()) => Ok(v),
        _ => Err(parse_err(
            line,
            tok.column,
            format!("{what} must be a positive integer, got {:?}", tok.text),
        )),
    }
}

fn expect_arity(tokens: &[Token], n: usize, line: usize, what: &str) -> Result<()> {
    if tokens.len() == n {
        return Ok(());
    }
    let column = tokens.get(n).or(tokens.last()).map_or(1, |t| t.column);
    Err(parse_err(
        line,
        column,
        format!("{what} expects {n} tokens, found {}", tokens.len()),
    ))
}

fn parse_field(tokens: &[Token], line: usize) -> Result<FieldDescriptor> {
    let kind = tokens
        .get(1)
        .ok_or_else(|| parse_err(line, tokens[0].column, "field kind missing"))?;
    let wrap = |e: Error, column: usize| parse_err(line, column, e.to_string());
    match kind.text {
        "prime" => {
            expect_arity(tokens, 3, line, "field prime")?;
            let p = tokens[2]
                .text
                .parse::<u64>()
                .map_err(|_| parse_err(line, tokens[2].column, "modulus must be an integer"))?;
            FieldDescriptor::prime(p).map_err(|e| wrap(e, tokens[2].column))
        }
        "ext" => {
            if tokens.len() < 5 {
                return Err(parse_err(
                    line,
                    kind.column,
                    "field ext needs a prime and at least two modulus coefficients",
                ));
            }
            let p = tokens[2].text.parse::<u64>().map_err(|_| {
                parse_err(line, tokens[2].column, "characteristic must be an integer")
            })?;
            let modulus = tokens[3..]
                .iter()
                .map(|t| {
                    t.text.parse::<u64>().map_err(|_| {
                        parse_err(line, t.column, "modulus coefficient must be an integer")
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            FieldDescriptor::extension(p, modulus).map_err(|e| wrap(e, tokens[2].column))
        }
        "rational" => {
            expect_arity(tokens, 2, line, "field rational")?;
            Ok(FieldDescriptor::Rational)
        }
        "integer" => {
            expect_arity(tokens, 2, line, "field integer")?;
            Ok(FieldDescriptor::Integer)
        }
        other => Err(parse_err(
            line,
            kind.column,
            format!("unknown field kind {other:?}"),
        )),
    }
}

struct OpenLayer {
    rows: usize,
    cols: usize,
    header_line: usize,
    matrix: ExactMatrix,
    seen: HashSet<(usize, usize)>,
}

pub fn parse_slc(text: &str) -> Result<CircuitFactorization> {
    let mut field: Option<FieldDescriptor> = None;
    let mut factors: Vec<ExactMatrix> = Vec::new();
    let mut open: Option<OpenLayer> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let tokens = tokenize(raw);
        let Some(head) = tokens.first() else { continue };

        let Some(f) = field.as_ref() else {
            if head.text != "field" {
                return Err(parse_err(
                    line,
                    head.column,
                    "expected a `field` header first",
                ));
            }
            field = Some(parse_field(&tokens, line)?);
            continue;
        };

        match (head.text, open.as_mut()) {
            ("field", _) => {
                return Err(parse_err(line, head.column, "duplicate `field` header"));
            }
            ("layer", Some(_)) => {
                return Err(parse_err(
                    line,
                    head.column,
                    "`layer` before the previous layer's `end`",
                ));
            }
            ("layer", None) => {
                expect_arity(&tokens, 3, line, "layer")?;
                let rows = parse_count(&tokens[1], line, "row count")?;
                let cols = parse_count(&tokens[2], line, "column count")?;
                if rows.saturating_mul(cols) > MAX_LAYER_CELLS {
                    return Err(parse_err(
                        line,
                        tokens[1].column,
                        format!("layer {rows}x{cols} exceeds {MAX_LAYER_CELLS} cells"),
                    ));
                }
                if let Some(prev) = factors.last() {
                    if prev.cols() != rows {
                        return Err(parse_err(
                            line,
                            tokens[1].column,
                            format!(
                                "layer has {rows} rows but the previous layer has {} columns",
                                prev.cols()
                            ),
                        ));
                    }
                }
                open = Some(OpenLayer {
                    rows,
                    cols,
                    header_line: line,
                    matrix: ExactMatrix::zeros(f, rows, cols),
                    seen: HashSet::new(),
                });
            }
            ("end", Some(_)) => {
                expect_arity(&tokens, 1, line, "end")?;
                factors.push(open.take().expect("open layer").matrix);
            }
            ("end", None) => {
                return Err(parse_err(line, head.column, "`end` without an open layer"));
            }
            (_, None) => {
                return Err(parse_err(
                    line,
                    head.column,
                    format!("expected `layer`, found {:?}", head.text),
                ));
            }
            (_, Some(layer)) => {
                expect_arity(&tokens, 3, line, "a triplet")?;
                let row = parse_count(&tokens[0], line, "row index")?;
                let col = parse_count(&tokens[1], line, "column index")?;
                if row > layer.rows {
                    return Err(parse_err(
                        line,
                        tokens[0].column,
                        format!("row {row} outside 1..={}", layer.rows),
                    ));
                }
                if col > layer.cols {
                    return Err(parse_err(
                        line,
                        tokens[1].column,
                        format!("column {col} outside 1..={}", layer.cols),
                    ));
                }
                if !layer.seen.insert((row, col)) {
                    return Err(parse_err(
                        line,
                        tokens[0].column,
                        format!("duplicate entry ({row}, {col})"),
                    ));
                }
                let value = f
                    .parse_scalar(tokens[2].text)
                    .map_err(|e| parse_err(line, tokens[2].column, e.to_string()))?;
                layer.matrix.set(row - 1, col - 1, value)?;
            }
        }
    }

    if let Some(layer) = open {
        return Err(parse_err(
            last_line + 1,
            1,
            format!(
                "layer opened on line {} is missing `end`",
                layer.header_line
            ),
        ));
    }
    let Some(field) = field else {
        return Err(parse_err(last_line + 1, 1, "missing `field` header"));
    };
    if factors.is_empty() {
        return Err(parse_err(last_line + 1, 1, "circuit has no layers"));
    }
    CircuitFactorization::new(field, factors)
}

fn field_header(f: &FieldDescriptor) -> String {
    match f {
        FieldDescriptor::Prime { p } => format!("field prime {p}"),
        FieldDescriptor::Extension { p, modulus } => {
            let coeffs: Vec<String> = modulus.iter().map(u64::to_string).collect();
            format!("field ext {p} {}", coeffs.join(" "))
        }
        FieldDescriptor::Rational => "field rational".into(),
        FieldDescriptor::Integer => "field integer".into(),
    }
}

/// Canonical text: nonzero triplets in row-major order, single spaces.
pub fn emit_slc(c: &CircuitFactorization) -> String {
    let f = c.field();
    let mut out = field_header(f);
    out.push('\n');
    for m in c.factors() {
        out.push_str(&format!("layer {} {}\n", m.rows(), m.cols()));
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let e = m.get(i, j);
                if !f.is_zero(e) {
                    out.push_str(&format!("{} {} {}\n", i + 1, j + 1, f.scalar_text(e)));
                }
            }
        }
        out.push_str("end\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElement;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const ID2: &str = "field prime 2\nlayer 2 2\n1 1 1\n2 2 1\nend\nlayer 2 2\n1 1 1\n2 2 1\nend\n";

    fn f(p: u64) -> FieldDescriptor {
        FieldDescriptor::prime(p).unwrap()
    }

    fn parse_error_at(text: &str) -> (usize, usize) {
        match parse_slc(text).unwrap_err() {
            Error::Parse { line, column, .. } => (line, column),
            e => panic!("expected a parse error, got {e:?}"),
        }
    }

    #[test]
    fn identity_circuit() {
        let c = parse_slc(ID2).unwrap();
        assert_eq!(c.depth(), 2);
        assert_eq!(c.size(), 4);
        assert_eq!(c.factors()[0], ExactMatrix::identity(&f(2), 2));
        assert_eq!(emit_slc(&c), ID2);
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(
            parse_error_at("field prime 5\nlayer 1 1\n1 1 5\nend\n"),
            (3, 5)
        );
        assert_eq!(
            parse_error_at("field prime 2\nlayer 2 3\nend\nlayer 2 2\nend\n"),
            (4, 7)
        );
        assert_eq!(
            parse_error_at("field prime 2\nlayer 1 1\n1 1 1\n1 1 0\nend\n"),
            (4, 1)
        );
        assert_eq!(parse_error_at("field prime 4\n"), (1, 13));
        assert_eq!(parse_error_at("layer 1 1\n"), (1, 1));
        assert_eq!(parse_error_at("field prime 2\nlayer 1 1\n1 1 1\n"), (4, 1));
        assert_eq!(parse_error_at("field prime 2\n"), (2, 1));
        assert_eq!(parse_error_at(""), (1, 1));
        assert_eq!(
            parse_error_at("field prime 2\nlayer 1 1\n2 1 1\nend\n"),
            (3, 1)
        );
        assert_eq!(
            parse_error_at("field prime 2\nlayer 1 1\n1 1\nend\n"),
            (3, 3)
        );
        assert_eq!(parse_error_at("field prime 2\nlayer 0 1\nend\n"), (2, 7));
        assert_eq!(parse_error_at("field prime 2\nend\n"), (2, 1));
        assert_eq!(parse_error_at("field ext 2 1 1 0\n"), (1, 11));
        assert_eq!(
            parse_error_at("field rational\nlayer 1 1\n1 1 1/0\nend\n"),
            (3, 5)
        );
        assert_eq!(
            parse_error_at("field integer\nlayer 1 1\n1 1 x\nend\n"),
            (3, 5)
        );
        assert_eq!(
            parse_error_at("field prime 2\nlayer 1 1\nlayer 1 1\n"),
            (3, 1)
        );
        assert_eq!(
            parse_error_at("field prime 2 # c\n  layer 1 1 1\n"),
            (2, 13)
        );
        assert_eq!(
            parse_error_at("field prime 2\nlayer 99999999 99999999\n"),
            (2, 7)
        );
    }

    #[test]
    fn comments_and_whitespace() {
        let text = "# header\n  field   prime 3 # F_3\n\nlayer 1 2 # row\n 1\t2  2\nend\n";
        let c = parse_slc(text).unwrap();
        assert_eq!(c.factors()[0].get(0, 1), &FieldElement::Residue(2));
        assert_eq!(emit_slc(&c), "field prime 3\nlayer 1 2\n1 2 2\nend\n");
    }

    #[test]
    fn verify_examples() {
        let id = ExactMatrix::identity(&f(2), 2);
        let c = parse_slc(ID2).unwrap();
        let v = verify_factorization(&c, &id).unwrap();
        assert!(v.equal && v.size == 4);

        let col = ExactMatrix::from_i64_rows(&f(2), &[vec![1], vec![1]]).unwrap();
        let row = ExactMatrix::from_i64_rows(&f(2), &[vec![1, 1]]).unwrap();
        let ones = ExactMatrix::from_i64_rows(&f(2), &[vec![1, 1], vec![1, 1]]).unwrap();
        let c1 = CircuitFactorization::new(f(2), vec![col, row]).unwrap();
        let v = verify_factorization(&c1, &ones).unwrap();
        assert!(v.equal && v.size == 4);

        let upper = ExactMatrix::from_i64_rows(&f(2), &[vec![1, 1], vec![0, 1]]).unwrap();
        let v = verify_factorization(&c, &upper).unwrap();
        assert!(!v.equal);
        assert_eq!(v.difference, Some((0, 1)));

        assert!(verify_factorization(&c, &ExactMatrix::identity(&f(3), 2)).is_err());
        assert!(verify_factorization(&c, &ExactMatrix::identity(&f(2), 3)).is_err());
    }

    #[test]
    fn constructor_validates_chain() {
        let a = ExactMatrix::zeros(&f(2), 2, 3);
        let b = ExactMatrix::zeros(&f(2), 2, 2);
        assert!(CircuitFactorization::new(f(2), vec![a, b]).is_err());
        assert!(CircuitFactorization::new(f(2), vec![]).is_err());
    }

    fn random_chain(rng: &mut ChaCha8Rng, field: &FieldDescriptor) -> CircuitFactorization {
        let depth = rng.gen_range(1..=4);
        let dims: Vec<usize> = (0..=depth).map(|_| rng.gen_range(1..=4)).collect();
        let factors = (0..depth)
            .map(|k| {
                ExactMatrix::from_fn(field, dims[k], dims[k + 1], |_, _| {
                    if rng.gen_bool(0.5) {
                        field.zero()
                    } else {
                        random_element(rng, field)
                    }
                })
                .unwrap()
            })
            .collect();
        CircuitFactorization::new(field.clone(), factors).unwrap()
    }

    fn random_element(rng: &mut ChaCha8Rng, field: &FieldDescriptor) -> FieldElement {
        match field {
            FieldDescriptor::Prime { p } => FieldElement::Residue(rng.gen_range(0..*p)),
            FieldDescriptor::Extension { p, modulus } => {
                let c: Vec<u64> = (0..modulus.len() - 1)
                    .map(|_| rng.gen_range(0..*p))
                    .collect();
                FieldElement::Poly(crate::poly::trimmed(c))
            }
            FieldDescriptor::Rational => {
                let r = num_rational::BigRational::new(
                    rng.gen_range(-9i64..=9).into(),
                    rng.gen_range(1i64..=9).into(),
                );
                FieldElement::Rational(r)
            }
            FieldDescriptor::Integer => field.from_i64(rng.gen_range(-1000..=1000)),
        }
    }

    #[test]
    fn round_trips_on_random_chains() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let fields = [
            f(3),
            f(2),
            FieldDescriptor::extension(2, vec![1, 1, 0, 1]).unwrap(),
            FieldDescriptor::Rational,
            FieldDescriptor::Integer,
        ];
        for k in 0..100 {
            let c = random_chain(&mut rng, &fields[k % fields.len()]);
            let text = emit_slc(&c);
            assert_eq!(parse_slc(&text).unwrap(), c, "{text}");
        }
    }

    #[test]
    fn shuffled_triplets_emit_identically() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = random_chain(&mut rng, &f(3));
        let text = emit_slc(&c);
        let mut lines: Vec<&str> = text.lines().collect();
        // Shuffle triplet lines inside each layer.
        let mut start = None;
        for i in 0..lines.len() {
            if lines[i].starts_with("layer") {
                start = Some(i + 1);
            } else if lines[i] == "end" {
                let s = start.take().unwrap();
                lines[s..i].shuffle(&mut rng);
            }
        }
        let shuffled = lines.join("\n");
        assert_eq!(emit_slc(&parse_slc(&shuffled).unwrap()), text);
    }

    #[test]
    fn arbitrary_text_never_panics() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let alphabet: Vec<char> = "field prime ext rational integer layer end 0123456789:/-# \n\t"
            .chars()
            .collect();
        for _ in 0..3000 {
            let len = rng.gen_range(0..80);
            let s: String = (0..len)
                .map(|_| *alphabet.choose(&mut rng).unwrap())
                .collect();
            let _ = parse_slc(&s);
            let _ = parse_slc(&format!("field prime 3\n{s}"));
        }
    }
}
