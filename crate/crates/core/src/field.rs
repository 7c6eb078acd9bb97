//! Exact arithmetic in a real quadratic field `Q(sqrt(d))`.
//!
//! A [`FieldScalar`] is `a + b*sqrt(d)` with rational `a`, `b` and a
//! nonnegative squarefree `d`. Values with `b = 0` are plain rationals and
//! combine with any `d`; two irrational values over different `d` are
//! rejected. The ordering is the one induced by the real embedding with
//! `sqrt(d) > 0`, decided exactly by squaring.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use malachite_base::num::arithmetic::traits::{Abs, Sign};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_base::num::conversion::traits::RoundingFrom;
use malachite_base::rounding_modes::RoundingMode;
use malachite_nz::integer::Integer;
pub use malachite_q::Rational;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed quadratic fields: sqrt({0}) and sqrt({1})")]
    MixedField(u32, u32),
    #[error("d = {0} is not squarefree")]
    NotSquarefree(u32),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// An exact element `a + b*sqrt(d)` of `Q(sqrt(d))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldScalar {
    a: Rational,
    b: Rational,
    // Always 0 when b = 0, so equality is structural.
    d: u32,
}

pub fn is_squarefree(d: u32) -> bool {
    let mut p = 2u32;
    while p.saturating_mul(p) <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

impl FieldScalar {
    pub fn new(a: Rational, b: Rational, d: u32) -> Result<Self, FieldError> {
        if !is_squarefree(d) {
            return Err(FieldError::NotSquarefree(d));
        }
        Ok(Self::normalised(a, b, d))
    }

    fn normalised(a: Rational, b: Rational, d: u32) -> Self {
        match d {
            0 => Self { a, b: Rational::ZERO, d: 0 },
            1 => Self { a: a + b, b: Rational::ZERO, d: 0 },
            _ if b == 0u32 => Self { a, b, d: 0 },
            _ => Self { a, b, d },
        }
    }

    pub fn zero() -> Self {
        Self { a: Rational::ZERO, b: Rational::ZERO, d: 0 }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::rational(Rational::from(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::rational(Rational::from_signeds(num, den))
    }

    pub fn rational(a: Rational) -> Self {
        Self { a, b: Rational::ZERO, d: 0 }
    }

    /// `sqrt(d)` itself.
    pub fn sqrt(d: u32) -> Result<Self, FieldError> {
        Self::new(Rational::ZERO, Rational::ONE, d)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    /// The `d` this value lives over; 0 for rationals.
    pub fn radicand(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0u32 && self.b == 0u32
    }

    pub fn is_one(&self) -> bool {
        self.b == 0u32 && self.a == 1u32
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0u32
    }

    /// Common radicand of two operands, or an error if they are over
    /// different fields.
    pub fn common_radicand(&self, other: &Self) -> Result<u32, FieldError> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (x, y) if x == y => Ok(x),
            (x, y) => Err(FieldError::MixedField(x, y)),
        }
    }

    /// Conjugate `a - b*sqrt(d)`.
    pub fn conjugate(&self) -> Self {
        Self { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Field norm `a^2 - b^2 d`, a rational.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from(self.d)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        if self.b == 0u32 && other.b == 0u32 {
            return Ok(Self::rational(&self.a + &other.a));
        }
        let d = self.common_radicand(other)?;
        Ok(Self::normalised(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        if self.b == 0u32 && other.b == 0u32 {
            return Ok(Self::rational(&self.a - &other.a));
        }
        let d = self.common_radicand(other)?;
        Ok(Self::normalised(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        let d = self.common_radicand(other)?;
        if self.b == 0u32 && other.b == 0u32 {
            return Ok(Self::rational(&self.a * &other.a));
        }
        let dd = Rational::from(d);
        let a = &self.a * &other.a + &self.b * &other.b * dd;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::normalised(a, b, d))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        let d = self.common_radicand(other)?;
        if other.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if other.b == 0u32 {
            return Ok(Self::normalised(&self.a / &other.a, &self.b / &other.a, d));
        }
        let norm = other.norm();
        let num = self.checked_mul(&other.conjugate())?;
        Ok(Self::normalised(num.a / &norm, num.b / &norm, d))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        Self::one().checked_div(self)
    }

    /// Exact sign of the real embedding.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.sign();
        let sb = self.b.sign();
        if sb == Ordering::Equal || sa == sb {
            return if sa == Ordering::Equal { sb } else { sa };
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // Opposite signs: the larger of a^2 and b^2 d wins.
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rational::from(self.d);
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact comparison of real embeddings.
    pub fn compare(&self, other: &Self) -> Result<Ordering, FieldError> {
        Ok(self.checked_sub(other)?.signum())
    }

    /// Lossy conversion for display only.
    pub fn to_f64(&self) -> f64 {
        let a = f64::rounding_from(&self.a, RoundingMode::Nearest).0;
        let b = f64::rounding_from(&self.b, RoundingMode::Nearest).0;
        a + b * f64::from(self.d).sqrt()
    }
}

impl Default for FieldScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for FieldScalar {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl PartialOrd for FieldScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Panics on mixed fields, like the arithmetic operators.
impl Ord for FieldScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other).unwrap_or_else(|e| panic!("{e}"))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldScalar> for &FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: &FieldScalar) -> FieldScalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: FieldScalar) -> FieldScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: &FieldScalar) -> FieldScalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<FieldScalar> for &FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: FieldScalar) -> FieldScalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl AddAssign<&FieldScalar> for FieldScalar {
    fn add_assign(&mut self, rhs: &FieldScalar) {
        if self.b == 0u32 && rhs.b == 0u32 {
            self.a += &rhs.a;
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&FieldScalar> for FieldScalar {
    fn sub_assign(&mut self, rhs: &FieldScalar) {
        if self.b == 0u32 && rhs.b == 0u32 {
            self.a -= &rhs.a;
        } else {
            *self = &*self - rhs;
        }
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        Self { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        -self.clone()
    }
}

fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

/// `p/q` for rationals, `p/q+r/s*sqrt(d)` otherwise.
impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0u32 {
            return f.write_str(&fmt_rational(&self.a));
        }
        let sign = if self.b < 0u32 { '-' } else { '+' };
        write!(f, "{}{}{}*sqrt({})", fmt_rational(&self.a), sign, fmt_rational(&(&self.b).abs()), self.d)
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Integer = p.trim().parse().ok()?;
            let q: Integer = q.trim().parse().ok()?;
            if q == 0u32 {
                return None;
            }
            Some(Rational::from_integers(p, q))
        }
        None => Some(Rational::from(s.parse::<Integer>().ok()?)),
    }
}

impl FromStr for FieldScalar {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || FieldError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(pos) = t.find("sqrt(") else {
            return parse_rational(&t).map(Self::rational).ok_or_else(err);
        };
        let d: u32 = t[pos + 5..].strip_suffix(')').and_then(|d| d.parse().ok()).ok_or_else(err)?;
        let head = &t[..pos];
        // head is "<a><sign><b>*", "<sign><b>*", "<b>*" or empty.
        let head = head.strip_suffix('*').unwrap_or(head);
        let split = head.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last();
        let (a, b) = match split {
            Some(i) => (parse_rational(&head[..i]).ok_or_else(err)?, &head[i..]),
            None => (Rational::ZERO, head),
        };
        let b = match b {
            "" | "+" => Rational::ONE,
            "-" => -Rational::ONE,
            b => parse_rational(b.strip_prefix('+').unwrap_or(b)).ok_or_else(err)?,
        };
        Self::new(a, b, d)
    }
}

impl Serialize for FieldScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ScalarVisitor;

        impl Visitor<'_> for ScalarVisitor {
            type Value = FieldScalar;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a string like \"p/q\" or \"p/q+r/s*sqrt(d)\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<FieldScalar, E> {
                Ok(FieldScalar::from_integer(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<FieldScalar, E> {
                Ok(FieldScalar::rational(Rational::from(v)))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<FieldScalar, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}
