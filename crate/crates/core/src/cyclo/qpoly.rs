//! Dense univariate polynomials in `q` with arbitrary-precision integer
//! coefficients.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// A polynomial in `q` over ℤ.
///
/// `coeffs[i]` is the coefficient of `q^i`. The vector never has trailing
/// zeros, so the zero polynomial is the empty vector and structural equality
/// is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// `q^e`.
    pub fn q_pow(e: usize) -> Self {
        Self::monomial(1, e)
    }

    /// `c * q^e`.
    pub fn monomial(c: impl Into<BigInt>, e: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); e + 1];
        coeffs[e] = c.into();
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Ascending coefficients, without trailing zeros.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// The value if this is a constant polynomial (zero included).
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.coeffs.len() {
            0 => Some(BigInt::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Multiply by `q^e`.
    pub fn shift(&self, e: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); e];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Horner evaluation at an integer point.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Euclidean division over ℤ.
    ///
    /// Succeeds whenever every step's leading-coefficient division is exact,
    /// which is always the case for a monic divisor.
    pub fn div_rem(&self, divisor: &QPoly) -> Result<(QPoly, QPoly)> {
        let dlead = divisor.leading().ok_or(Error::DivisionByZero)?;
        let ddeg = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= ddeg {
            return Ok((QPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - ddeg];
        for i in (ddeg..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            if !(&rem[i] % dlead).is_zero() {
                return Err(Error::NonIntegralQuotient {
                    divisor_lead: dlead.to_string(),
                    dividend: rem[i].to_string(),
                });
            }
            let factor = &rem[i] / dlead;
            let shift = i - ddeg;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] -= &factor * d;
            }
            quot[shift] = factor;
        }
        Ok((QPoly::from_coeffs(quot), QPoly::from_coeffs(rem)))
    }

    /// Division that must leave no remainder.
    pub fn exact_div(&self, divisor: &QPoly) -> Result<QPoly> {
        let (quot, rem) = self.div_rem(divisor)?;
        if rem.is_zero() {
            Ok(quot)
        } else {
            Err(Error::InexactDivision(rem.to_string()))
        }
    }

    /// Rendering without spaces, e.g. `1+q+2*q^2`; used inside products.
    pub fn to_compact_string(&self) -> String {
        self.render(false)
    }

    fn render(&self, spaced: bool) -> String {
        let mut out = String::new();
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = monomial_body(&c.abs(), e);
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                let sign = if c.is_negative() { '-' } else { '+' };
                if spaced {
                    out.push(' ');
                    out.push(sign);
                    out.push(' ');
                } else {
                    out.push(sign);
                }
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn monomial_body(abs: &BigInt, e: usize) -> String {
    let var = match e {
        0 => return abs.to_string(),
        1 => "q".to_string(),
        _ => format!("q^{e}"),
    };
    if abs.is_one() {
        var
    } else {
        format!("{abs}*{var}")
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(true))
    }
}

/// Parses the text rendering produced by `Display` (spaces optional).
impl FromStr for QPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Json(format!("bad polynomial {s:?}: {reason}"));
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(bad("empty"));
        }
        let mut result = QPoly::zero();
        let mut rest = cleaned.as_str();
        while !rest.is_empty() {
            let negative = rest.starts_with('-');
            if rest.starts_with('-') || rest.starts_with('+') {
                rest = &rest[1..];
            }
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let (term, tail) = rest.split_at(end);
            rest = tail;
            let (coeff, exp) = match term.split_once('q') {
                None => (term.parse::<BigInt>().map_err(|_| bad(term))?, 0),
                Some((c, e)) => {
                    let c = match c.strip_suffix('*') {
                        Some(digits) => digits.parse::<BigInt>().map_err(|_| bad(term))?,
                        None if c.is_empty() => BigInt::one(),
                        None => return Err(bad(term)),
                    };
                    let e = match e.strip_prefix('^') {
                        Some(digits) => digits.parse::<usize>().map_err(|_| bad(term))?,
                        None if e.is_empty() => 1,
                        None => return Err(bad(term)),
                    };
                    (c, e)
                }
            };
            let term = QPoly::monomial(if negative { -coeff } else { coeff }, exp);
            result += &term;
        }
        Ok(result)
    }
}

/// JSON form: ascending array of integer coefficients, `[]` for zero.
impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let numbers: Vec<serde_json::Number> = self
            .coeffs
            .iter()
            .map(|c| {
                serde_json::Number::from_str(&c.to_string())
                    .expect("integer literal is a valid JSON number")
            })
            .collect();
        numbers.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let numbers = Vec::<serde_json::Number>::deserialize(deserializer)?;
        let coeffs = numbers
            .iter()
            .map(|n| {
                BigInt::from_str(&n.to_string())
                    .map_err(|_| D::Error::custom(format!("non-integer coefficient {n}")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(QPoly::from_coeffs(coeffs))
    }
}

impl From<i64> for QPoly {
    fn from(c: i64) -> Self {
        QPoly::constant(c)
    }
}

impl<'a> Add<&'a QPoly> for &QPoly {
    type Output = QPoly;

    fn add(self, rhs: &'a QPoly) -> QPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl<'a> Sub<&'a QPoly> for &QPoly {
    type Output = QPoly;

    fn sub(self, rhs: &'a QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a QPoly> for &QPoly {
    type Output = QPoly;

    fn mul(self, rhs: &'a QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<QPoly> for QPoly {
            type Output = QPoly;
            fn $method(self, rhs: QPoly) -> QPoly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a QPoly> for QPoly {
            type Output = QPoly;
            fn $method(self, rhs: &'a QPoly) -> QPoly {
                (&self).$method(rhs)
            }
        }
        impl $trait<QPoly> for &QPoly {
            type Output = QPoly;
            fn $method(self, rhs: QPoly) -> QPoly {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned_binop!(Add add, Sub sub, Mul mul);

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        if rhs.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (c, r) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *c += r;
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl AddAssign for QPoly {
    fn add_assign(&mut self, rhs: QPoly) {
        *self += &rhs;
    }
}

impl SubAssign<&QPoly> for QPoly {
    fn sub_assign(&mut self, rhs: &QPoly) {
        *self += &(-rhs);
    }
}

impl Sum for QPoly {
    fn sum<I: Iterator<Item = QPoly>>(iter: I) -> Self {
        iter.fold(QPoly::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

impl<'a> Sum<&'a QPoly> for QPoly {
    fn sum<I: Iterator<Item = &'a QPoly>>(iter: I) -> Self {
        iter.fold(QPoly::zero(), |mut acc, p| {
            acc += p;
            acc
        })
    }
}

impl Product for QPoly {
    fn product<I: Iterator<Item = QPoly>>(iter: I) -> Self {
        iter.fold(QPoly::one(), |acc, p| &acc * &p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_i64s(c)
    }

    #[test]
    fn canonical_form_strips_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]).coeffs().len(), 2);
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[0, 0]), QPoly::zero());
        assert_eq!(p(&[1, -1]) + p(&[0, 1]), QPoly::one());
    }

    #[test]
    fn rendering() {
        assert_eq!(QPoly::zero().to_string(), "0");
        assert_eq!(p(&[1, 1, 2]).to_string(), "1 + q + 2*q^2");
        assert_eq!(p(&[1, 1]).to_compact_string(), "1+q");
        assert_eq!(p(&[0, -1, 0, 3]).to_string(), "-q + 3*q^3");
        assert_eq!(p(&[1, -1, 1]).to_compact_string(), "1-q+q^2");
        assert_eq!(p(&[-2]).to_string(), "-2");
    }

    #[test]
    fn parse_inverts_display() {
        for c in [&[1, 1, 2][..], &[0, -1, 0, 3], &[-2], &[], &[5, 0, -7, 1]] {
            let poly = p(c);
            assert_eq!(poly.to_string().parse::<QPoly>().unwrap(), poly);
            assert_eq!(poly.to_compact_string().parse::<QPoly>().unwrap(), poly);
        }
        assert!("1 + x".parse::<QPoly>().is_err());
    }

    #[test]
    fn division() {
        // q^3 - 1 = (q - 1)(q^2 + q + 1)
        let (quot, rem) = p(&[-1, 0, 0, 1]).div_rem(&p(&[-1, 1])).unwrap();
        assert_eq!(quot, p(&[1, 1, 1]));
        assert!(rem.is_zero());
        let (quot, rem) = p(&[0, 0, 0, 0, 1]).div_rem(&p(&[1, 0, 1])).unwrap();
        assert_eq!(quot, p(&[-1, 0, 1]));
        assert_eq!(rem, p(&[1]));
        assert_eq!(p(&[1]).div_rem(&QPoly::zero()), Err(Error::DivisionByZero));
        assert!(matches!(
            p(&[0, 1]).div_rem(&p(&[0, 2])),
            Err(Error::NonIntegralQuotient { .. })
        ));
        assert!(matches!(
            p(&[1, 1]).exact_div(&p(&[0, 1])),
            Err(Error::InexactDivision(_))
        ));
    }

    #[test]
    fn json_shape() {
        assert_eq!(serde_json::to_string(&p(&[1, 1])).unwrap(), "[1,1]");
        assert_eq!(serde_json::to_string(&QPoly::zero()).unwrap(), "[]");
        let big = QPoly::monomial(BigInt::from(10).pow(30), 2);
        let json = serde_json::to_string(&big).unwrap();
        assert_eq!(json, "[0,0,1000000000000000000000000000000]");
        assert_eq!(serde_json::from_str::<QPoly>(&json).unwrap(), big);
    }

    fn arb_poly() -> impl Strategy<Value = QPoly> {
        prop::collection::vec(-20i64..20, 0..6).prop_map(|c| QPoly::from_i64s(&c))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn eval_is_a_homomorphism(a in arb_poly(), b in arb_poly(), x in -5i64..5) {
            let x = BigInt::from(x);
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
            prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
        }

        #[test]
        fn division_identity(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let monic = &b.shift(0) + &QPoly::q_pow(b.degree().unwrap() + 1);
            let (quot, rem) = a.div_rem(&monic).unwrap();
            prop_assert_eq!(&(&quot * &monic) + &rem, a);
            prop_assert!(rem.degree() < monic.degree());
        }
    }
}
