//! Coefficient domains and their elements.
//!
//! A [`FieldDescriptor`] names the domain; [`FieldElement`] is a tagged value
//! that only means something together with its descriptor. Arithmetic goes
//! through the descriptor so that every result comes back in canonical form:
//! residues in `[0, p)`, extension elements reduced modulo `g` with trailing
//! zeros dropped, rationals in lowest terms with positive denominator.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::poly;
use crate::prime::is_prime;

pub type BigInteger = BigInt;
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    /// `F_p`.
    Prime {
        p: u64,
    },
    /// `F_p[z] / (g(z))` with `modulus` the coefficients of the monic
    /// irreducible `g`, lowest degree first.
    Extension {
        p: u64,
        modulus: Vec<u64>,
    },
    Rational,
    /// The integers. A ring, not a field: no division.
    Integer,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Residue(u64),
    Poly(Vec<u64>),
    Rational(Rational),
    Integer(BigInteger),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// One exact binary operation in `field`.
pub fn field_arith(
    a: &FieldElement,
    b: &FieldElement,
    op: ArithOp,
    field: &FieldDescriptor,
) -> Result<FieldElement> {
    match op {
        ArithOp::Add => field.add(a, b),
        ArithOp::Sub => field.sub(a, b),
        ArithOp::Mul => field.mul(a, b),
        ArithOp::Div => field.div(a, b),
    }
}

fn check_prime(p: u64) -> Result<()> {
    if p >= 1 << 32 {
        return Err(Error::InvalidField(format!(
            "characteristic {p} exceeds the supported range (< 2^32)"
        )));
    }
    if !is_prime(p) {
        return Err(Error::InvalidField(format!("{p} is not prime")));
    }
    Ok(())
}

impl FieldDescriptor {
    pub fn prime(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(FieldDescriptor::Prime { p })
    }

    /// An extension field; the modulus must be monic, of degree ≥ 1 and
    /// irreducible over `F_p`.
    pub fn extension(p: u64, modulus: Vec<u64>) -> Result<Self> {
        check_prime(p)?;
        if modulus.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree ≥ 1".into()));
        }
        if let Some(&c) = modulus.iter().find(|&&c| c >= p) {
            return Err(Error::InvalidField(format!(
                "modulus coefficient {c} is not a residue mod {p}"
            )));
        }
        if modulus.last() != Some(&1) {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if !poly::is_irreducible(&modulus, p) {
            return Err(Error::InvalidField(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        Ok(FieldDescriptor::Extension { p, modulus })
    }

    /// Skips the irreducibility test; for moduli produced by
    /// [`poly::find_irreducible`].
    pub(crate) fn extension_trusted(p: u64, modulus: Vec<u64>) -> Self {
        debug_assert!(modulus.len() >= 2 && modulus.last() == Some(&1));
        FieldDescriptor::Extension { p, modulus }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Prime { p } | FieldDescriptor::Extension { p, .. } => *p,
            _ => 0,
        }
    }

    /// Extension degree over the prime field; 1 for `F_p`, `None` otherwise.
    pub fn degree(&self) -> Option<usize> {
        match self {
            FieldDescriptor::Prime { .. } => Some(1),
            FieldDescriptor::Extension { modulus, .. } => Some(modulus.len() - 1),
            _ => None,
        }
    }

    pub fn has_division(&self) -> bool {
        !matches!(self, FieldDescriptor::Integer)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            FieldDescriptor::Prime { .. } => "prime",
            FieldDescriptor::Extension { .. } => "extension",
            FieldDescriptor::Rational => "rational",
            FieldDescriptor::Integer => "integer",
        }
    }

    pub fn zero(&self) -> FieldElement {
        match self {
            FieldDescriptor::Prime { .. } => FieldElement::Residue(0),
            FieldDescriptor::Extension { .. } => FieldElement::Poly(Vec::new()),
            FieldDescriptor::Rational => FieldElement::Rational(Rational::zero()),
            FieldDescriptor::Integer => FieldElement::Integer(BigInt::zero()),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    /// Image of an integer under the canonical ring map.
    pub fn from_i64(&self, v: i64) -> FieldElement {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElement {
        match self {
            FieldDescriptor::Prime { p } => FieldElement::Residue(reduce_bigint(v, *p)),
            FieldDescriptor::Extension { p, .. } => {
                FieldElement::Poly(poly::trimmed(vec![reduce_bigint(v, *p)]))
            }
            FieldDescriptor::Rational => FieldElement::Rational(Rational::from_integer(v.clone())),
            FieldDescriptor::Integer => FieldElement::Integer(v.clone()),
        }
    }

    /// The class of `z` in an extension field.
    pub fn generator(&self) -> Result<FieldElement> {
        match self {
            FieldDescriptor::Extension { p, modulus } => {
                Ok(FieldElement::Poly(poly::rem_monic(&[0, 1], modulus, *p)))
            }
            _ => Err(Error::Unsupported(format!(
                "{} domain has no extension generator",
                self.kind()
            ))),
        }
    }

    /// Does `e` carry the right tag and satisfy the canonical-form invariant?
    pub fn conforms(&self, e: &FieldElement) -> bool {
        match (self, e) {
            (FieldDescriptor::Prime { p }, FieldElement::Residue(r)) => r < p,
            (FieldDescriptor::Extension { p, modulus }, FieldElement::Poly(c)) => {
                c.len() < modulus.len() && c.last() != Some(&0) && c.iter().all(|x| x < p)
            }
            (FieldDescriptor::Rational, FieldElement::Rational(_)) => true,
            (FieldDescriptor::Integer, FieldElement::Integer(_)) => true,
            _ => false,
        }
    }

    pub fn check(&self, e: &FieldElement) -> Result<()> {
        if self.conforms(e) {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!(
                "element {e:?} does not belong to the {} domain",
                self.kind()
            )))
        }
    }

    pub fn is_zero(&self, e: &FieldElement) -> bool {
        match e {
            FieldElement::Residue(r) => *r == 0,
            FieldElement::Poly(c) => c.is_empty(),
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Integer(z) => z.is_zero(),
        }
    }

    fn pair<'a>(
        &self,
        a: &'a FieldElement,
        b: &'a FieldElement,
    ) -> Result<(&'a FieldElement, &'a FieldElement)> {
        self.check(a)?;
        self.check(b)?;
        Ok((a, b))
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        use FieldElement::*;
        Ok(match (self, self.pair(a, b)?) {
            (FieldDescriptor::Prime { p }, (Residue(x), Residue(y))) => Residue((x + y) % p),
            (FieldDescriptor::Extension { p, .. }, (Poly(x), Poly(y))) => Poly(poly::add(x, y, *p)),
            (_, (Rational(x), Rational(y))) => Rational(x + y),
            (_, (Integer(x), Integer(y))) => Integer(x + y),
            _ => unreachable!("checked by pair"),
        })
    }

    pub fn neg(&self, a: &FieldElement) -> Result<FieldElement> {
        use FieldElement::*;
        self.check(a)?;
        Ok(match (self, a) {
            (FieldDescriptor::Prime { p }, Residue(x)) => Residue((p - x) % p),
            (FieldDescriptor::Extension { p, .. }, Poly(x)) => Poly(poly::neg(x, *p)),
            (_, Rational(x)) => Rational(-x),
            (_, Integer(x)) => Integer(-x),
            _ => unreachable!("checked"),
        })
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        use FieldElement::*;
        Ok(match (self, self.pair(a, b)?) {
            (FieldDescriptor::Prime { p }, (Residue(x), Residue(y))) => Residue((x + p - y) % p),
            (FieldDescriptor::Extension { p, .. }, (Poly(x), Poly(y))) => Poly(poly::sub(x, y, *p)),
            (_, (Rational(x), Rational(y))) => Rational(x - y),
            (_, (Integer(x), Integer(y))) => Integer(x - y),
            _ => unreachable!("checked by pair"),
        })
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        use FieldElement::*;
        Ok(match (self, self.pair(a, b)?) {
            (FieldDescriptor::Prime { p }, (Residue(x), Residue(y))) => Residue(x * y % p),
            (FieldDescriptor::Extension { p, modulus }, (Poly(x), Poly(y))) => {
                Poly(poly::rem_monic(&poly::mul(x, y, *p), modulus, *p))
            }
            (_, (Rational(x), Rational(y))) => Rational(x * y),
            (_, (Integer(x), Integer(y))) => Integer(x * y),
            _ => unreachable!("checked by pair"),
        })
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        use FieldElement::*;
        self.check(a)?;
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (self, a) {
            (FieldDescriptor::Prime { p }, Residue(x)) => Residue(poly::inv_scalar(*x, *p)?),
            (FieldDescriptor::Extension { p, modulus }, Poly(x)) => {
                Poly(poly::inv_mod(x, modulus, *p)?)
            }
            (_, Rational(x)) => Rational(x.recip()),
            (FieldDescriptor::Integer, Integer(_)) => {
                return Err(Error::Unsupported(
                    "division in the integer ring; lift to rationals first".into(),
                ))
            }
            _ => unreachable!("checked"),
        })
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        let inv = self.inv(b)?;
        self.mul(a, &inv)
    }

    pub fn pow(&self, a: &FieldElement, mut exp: u64) -> Result<FieldElement> {
        self.check(a)?;
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Coordinates of `e` over the prime subfield: the residue itself for
    /// `F_p`, the padded coefficient list (length = degree) for an extension.
    pub fn prime_coordinates(&self, e: &FieldElement) -> Result<Vec<u64>> {
        self.check(e)?;
        match (self, e) {
            (FieldDescriptor::Prime { .. }, FieldElement::Residue(r)) => Ok(vec![*r]),
            (FieldDescriptor::Extension { modulus, .. }, FieldElement::Poly(c)) => {
                let mut v = c.clone();
                v.resize(modulus.len() - 1, 0);
                Ok(v)
            }
            _ => Err(Error::Unsupported(format!(
                "{} domain has no prime subfield coordinates",
                self.kind()
            ))),
        }
    }

    /// Embed into the rationals; integer-ring elements only.
    pub fn lift_to_rational(&self, e: &FieldElement) -> Result<FieldElement> {
        self.check(e)?;
        match e {
            FieldElement::Integer(z) => {
                Ok(FieldElement::Rational(Rational::from_integer(z.clone())))
            }
            FieldElement::Rational(_) => Ok(e.clone()),
            _ => Err(Error::Unsupported(format!(
                "cannot lift a {} element to the rationals",
                self.kind()
            ))),
        }
    }

    // ---- text and JSON encodings -------------------------------------

    /// Element encoding used in matrix JSON.
    pub fn encode(&self, e: &FieldElement) -> Value {
        match e {
            FieldElement::Poly(c) => {
                Value::Array(c.iter().map(|x| Value::String(x.to_string())).collect())
            }
            _ => Value::String(self.scalar_text(e)),
        }
    }

    /// Scalar text: decimal residue, `num/den` (or plain integer when the
    /// denominator is 1), decimal integer. Extension elements use
    /// colon-separated coefficients as in the circuit format.
    pub fn scalar_text(&self, e: &FieldElement) -> String {
        match e {
            FieldElement::Residue(r) => r.to_string(),
            FieldElement::Poly(c) => {
                if c.is_empty() {
                    "0".to_string()
                } else {
                    c.iter().map(u64::to_string).collect::<Vec<_>>().join(":")
                }
            }
            FieldElement::Rational(q) => {
                if q.denom().is_one() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            FieldElement::Integer(z) => z.to_string(),
        }
    }

    pub fn decode(&self, v: &Value) -> Result<FieldElement> {
        match (self, v) {
            (FieldDescriptor::Extension { .. }, Value::Array(items)) => {
                let coeffs = items
                    .iter()
                    .map(|item| match item {
                        Value::String(s) => Ok(s.as_str()),
                        other => Err(Error::InvalidElement(format!(
                            "extension coefficient {other} must be a decimal string"
                        ))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                self.parse_coefficients(&coeffs)
            }
            (FieldDescriptor::Extension { .. }, _) => Err(Error::InvalidElement(format!(
                "extension element must be an array of residue strings, got {v}"
            ))),
            (_, Value::String(s)) => self.parse_scalar(s),
            _ => Err(Error::InvalidElement(format!(
                "element must be a decimal string, got {v}"
            ))),
        }
    }

    fn parse_coefficients(&self, coeffs: &[&str]) -> Result<FieldElement> {
        let FieldDescriptor::Extension { p, modulus } = self else {
            unreachable!("extension only")
        };
        let degree = modulus.len() - 1;
        if coeffs.len() > degree {
            return Err(Error::InvalidElement(format!(
                "extension element has {} coefficients, degree is {degree}",
                coeffs.len()
            )));
        }
        let parsed = coeffs
            .iter()
            .map(|s| parse_residue(s, *p))
            .collect::<Result<Vec<_>>>()?;
        Ok(FieldElement::Poly(poly::trimmed(parsed)))
    }

    /// Parse the scalar text form produced by [`scalar_text`](Self::scalar_text).
    pub fn parse_scalar(&self, s: &str) -> Result<FieldElement> {
        match self {
            FieldDescriptor::Prime { p } => Ok(FieldElement::Residue(parse_residue(s, *p)?)),
            FieldDescriptor::Extension { .. } => {
                let parts: Vec<&str> = s.split(':').collect();
                self.parse_coefficients(&parts)
            }
            FieldDescriptor::Rational => parse_rational(s).map(FieldElement::Rational),
            FieldDescriptor::Integer => parse_integer(s).map(FieldElement::Integer),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            FieldDescriptor::Prime { p } => serde_json::json!({"kind": "prime", "p": p}),
            FieldDescriptor::Extension { p, modulus } => {
                serde_json::json!({"kind": "extension", "p": p, "modulus": modulus})
            }
            FieldDescriptor::Rational => serde_json::json!({"kind": "rational"}),
            FieldDescriptor::Integer => serde_json::json!({"kind": "integer"}),
        }
    }

    /// Parse and validate a descriptor (primality, monic, irreducible).
    pub fn from_json(v: &Value) -> Result<Self> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::InvalidField("descriptor needs a string \"kind\"".into()))?;
        let get_p = || {
            v.get("p")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::InvalidField("descriptor needs an integer \"p\"".into()))
        };
        match kind {
            "prime" => FieldDescriptor::prime(get_p()?),
            "extension" => {
                let p = get_p()?;
                let modulus = v
                    .get("modulus")
                    .and_then(Value::as_array)
                    .ok_or_else(|| {
                        Error::InvalidField("extension needs a \"modulus\" array".into())
                    })?
                    .iter()
                    .map(|c| {
                        c.as_u64()
                            .or_else(|| c.as_str().and_then(|s| s.parse().ok()))
                            .ok_or_else(|| {
                                Error::InvalidField(format!("bad modulus coefficient {c}"))
                            })
                    })
                    .collect::<Result<Vec<_>>>()?;
                FieldDescriptor::extension(p, modulus)
            }
            "rational" => Ok(FieldDescriptor::Rational),
            "integer" => Ok(FieldDescriptor::Integer),
            other => Err(Error::InvalidField(format!("unknown field kind {other:?}"))),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Prime { p } => write!(f, "F_{p}"),
            FieldDescriptor::Extension { p, modulus } => {
                write!(f, "F_{p}[z]/(degree {} modulus)", modulus.len() - 1)
            }
            FieldDescriptor::Rational => write!(f, "Q"),
            FieldDescriptor::Integer => write!(f, "Z"),
        }
    }
}

fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let r = v % BigInt::from(p);
    let r = if r.is_negative() {
        r + BigInt::from(p)
    } else {
        r
    };
    r.to_u64().expect("residue fits")
}

fn is_decimal(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

/// A residue in canonical range; "5" under p = 5 is an error, not 0.
fn parse_residue(s: &str, p: u64) -> Result<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::InvalidElement(format!(
            "{s:?} is not a decimal residue"
        )));
    }
    match s.parse::<u64>() {
        Ok(r) if r < p => Ok(r),
        _ => Err(Error::InvalidElement(format!(
            "{s} is not a residue in [0, {p})"
        ))),
    }
}

pub fn parse_integer(s: &str) -> Result<BigInt> {
    if !is_decimal(s) {
        return Err(Error::InvalidElement(format!(
            "{s:?} is not a decimal integer"
        )));
    }
    s.parse()
        .map_err(|_| Error::InvalidElement(format!("{s:?} is not a decimal integer")))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_integer(s)?)),
        Some((n, d)) => {
            let n = parse_integer(n)?;
            let d = parse_integer(d)?;
            if d.is_zero() {
                return Err(Error::InvalidElement(format!("{s:?} has zero denominator")));
            }
            Ok(Rational::new(n, d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> FieldDescriptor {
        FieldDescriptor::prime(p).unwrap()
    }

    #[test]
    fn prime_examples() {
        let f5 = f(5);
        let r = field_arith(
            &FieldElement::Residue(3),
            &FieldElement::Residue(4),
            ArithOp::Add,
            &f5,
        );
        assert_eq!(r.unwrap(), FieldElement::Residue(2));
        assert_eq!(
            f5.inv(&FieldElement::Residue(2)).unwrap(),
            FieldElement::Residue(3)
        );
        assert_eq!(
            f5.div(&FieldElement::Residue(1), &FieldElement::Residue(0)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn extension_square_of_generator() {
        let e = FieldDescriptor::extension(2, vec![1, 1, 1]).unwrap();
        let z = e.generator().unwrap();
        assert_eq!(z, FieldElement::Poly(vec![0, 1]));
        assert_eq!(e.mul(&z, &z).unwrap(), FieldElement::Poly(vec![1, 1]));
    }

    #[test]
    fn descriptor_validation() {
        assert!(FieldDescriptor::prime(4).is_err());
        assert!(FieldDescriptor::extension(2, vec![1, 0, 1]).is_err()); // (z+1)^2
        assert!(FieldDescriptor::extension(2, vec![1, 1, 2]).is_err());
        assert!(FieldDescriptor::extension(2, vec![1, 1, 0]).is_err());
        assert!(FieldDescriptor::extension(2, vec![1]).is_err());
    }

    #[test]
    fn mismatch_is_reported() {
        let f5 = f(5);
        let q = FieldElement::Rational(Rational::one());
        assert!(matches!(
            f5.add(&q, &FieldElement::Residue(1)),
            Err(Error::FieldMismatch(_))
        ));
        assert!(matches!(
            f5.add(&FieldElement::Residue(7), &FieldElement::Residue(1)),
            Err(Error::FieldMismatch(_))
        ));
    }

    #[test]
    fn integer_ring_has_no_division() {
        let z = FieldDescriptor::Integer;
        let two = z.from_i64(2);
        assert!(matches!(z.div(&two, &two), Err(Error::Unsupported(_))));
    }

    #[test]
    fn encodings() {
        let q = FieldDescriptor::Rational;
        let x = q.parse_scalar("6/-4").unwrap();
        assert_eq!(q.scalar_text(&x), "-3/2");
        assert_eq!(q.scalar_text(&q.parse_scalar("4/2").unwrap()), "2");
        assert!(q.parse_scalar("1/0").is_err());
        assert!(q.parse_scalar("1.5").is_err());
        assert!(f(5).parse_scalar("5").is_err());
        assert!(f(5).parse_scalar("-1").is_err());
        let e = FieldDescriptor::extension(2, vec![1, 1, 1]).unwrap();
        assert_eq!(
            e.decode(&serde_json::json!(["0", "1"])).unwrap(),
            FieldElement::Poly(vec![0, 1])
        );
        assert!(e.decode(&serde_json::json!(["0", "1", "1"])).is_err());
        assert_eq!(e.parse_scalar("1:0").unwrap(), FieldElement::Poly(vec![1]));
        assert_eq!(e.scalar_text(&FieldElement::Poly(vec![])), "0");
    }

    #[test]
    fn powers_of_generator_are_unit_vectors() {
        let g = poly::find_irreducible(3, 5, 10_000).unwrap();
        let e = FieldDescriptor::extension(3, g).unwrap();
        let alpha = e.generator().unwrap();
        for k in 0..5u64 {
            let coords = e.prime_coordinates(&e.pow(&alpha, k).unwrap()).unwrap();
            let expected: Vec<u64> = (0..5).map(|i| u64::from(i == k)).collect();
            assert_eq!(coords, expected);
        }
    }

    fn ext_strategy() -> impl Strategy<Value = (FieldDescriptor, Vec<u64>, Vec<u64>, Vec<u64>)> {
        // F_3[z]/(z^3 + 2z + 1) and F_2[z]/(z^4 + z + 1)
        prop_oneof![
            Just((3u64, vec![1u64, 2, 0, 1])),
            Just((2u64, vec![1u64, 1, 0, 0, 1]))
        ]
        .prop_flat_map(|(p, g)| {
            let d = g.len() - 1;
            let el = proptest::collection::vec(0..p, d);
            (
                Just(FieldDescriptor::extension(p, g).unwrap()),
                el.clone(),
                el.clone(),
                el,
            )
        })
    }

    proptest! {
        #[test]
        fn extension_field_axioms((field, a, b, c) in ext_strategy()) {
            let [a, b, c] = [a, b, c].map(|v| FieldElement::Poly(poly::trimmed(v)));
            let ab = field.mul(&a, &b).unwrap();
            prop_assert_eq!(field.mul(&ab, &c).unwrap(), field.mul(&a, &field.mul(&b, &c).unwrap()).unwrap());
            let lhs = field.mul(&a, &field.add(&b, &c).unwrap()).unwrap();
            let rhs = field.add(&ab, &field.mul(&a, &c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(field.sub(&field.add(&a, &b).unwrap(), &b).unwrap(), a.clone());
            if !field.is_zero(&a) {
                prop_assert_eq!(field.mul(&a, &field.inv(&a).unwrap()).unwrap(), field.one());
            }
        }

        #[test]
        fn prime_field_axioms(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 65537]), a in 0u64..70000, b in 0u64..70000, c in 0u64..70000) {
            let field = f(p);
            let [a, b, c] = [a, b, c].map(|x| FieldElement::Residue(x % p));
            let lhs = field.mul(&a, &field.add(&b, &c).unwrap()).unwrap();
            let rhs = field.add(&field.mul(&a, &b).unwrap(), &field.mul(&a, &c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            if !field.is_zero(&a) {
                prop_assert_eq!(field.mul(&a, &field.inv(&a).unwrap()).unwrap(), field.one());
            }
        }

        #[test]
        fn decimal_round_trip(n in any::<i128>(), d in 1i64..i64::MAX) {
            let z = BigInt::from(n);
            prop_assert_eq!(parse_integer(&z.to_string()).unwrap(), z.clone());
            let q = Rational::new(z, BigInt::from(d));
            let field = FieldDescriptor::Rational;
            let text = field.scalar_text(&FieldElement::Rational(q.clone()));
            prop_assert_eq!(field.parse_scalar(&text).unwrap(), FieldElement::Rational(q));
        }
    }
}
