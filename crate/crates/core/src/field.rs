//! Exact scalars over the rationals and over prime fields `F_q`.
//!
//! A [`Scalar`] carries its own field tag so that mixing elements of different
//! fields is detected at run time. The checked operations (`try_add`, ...)
//! report [`FieldError::FieldMismatch`]; the `std::ops` impls on references
//! panic instead and are meant for code that already holds the invariant that
//! all operands share one [`FieldSpec`] (matrices, polynomials).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest admissible prime modulus (exclusive).
pub const PRIME_LIMIT: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },
    #[error("{0} is not an admissible prime modulus (need an odd prime below 2^31)")]
    InvalidPrime(u64),
    #[error("cannot parse scalar {text:?} over {field}")]
    Parse { text: String, field: FieldSpec },
    #[error("denominator of {0} is divisible by {1}")]
    NotReducible(String, u64),
}

/// The field a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FieldSpec {
    Rational,
    Prime { q: u64 },
}

impl FieldSpec {
    pub fn prime(q: u64) -> Result<Self, FieldError> {
        if q <= 2 || q >= PRIME_LIMIT || !is_prime(q) {
            return Err(FieldError::InvalidPrime(q));
        }
        Ok(FieldSpec::Prime { q })
    }

    /// Re-checks the primality invariant, for values that arrived through
    /// deserialization.
    pub fn validate(self) -> Result<Self, FieldError> {
        match self {
            FieldSpec::Rational => Ok(self),
            FieldSpec::Prime { q } => FieldSpec::prime(q),
        }
    }

    pub fn modulus(self) -> Option<u64> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::Prime { q } => Some(q),
        }
    }

    pub fn zero(self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::zero()),
            FieldSpec::Prime { q } => Scalar::Prime { q, v: 0 },
        }
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, x: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(x))),
            FieldSpec::Prime { q } => Scalar::Prime { q, v: x.rem_euclid(q as i64) as u64 },
        }
    }

    pub fn from_ratio(self, num: i64, den: i64) -> Result<Scalar, FieldError> {
        if den == 0 {
            return Err(FieldError::DivisionByZero);
        }
        self.from_i64(num).try_div(&self.from_i64(den))
    }

    /// Uniform sample: integers in `[-bound, bound]` over the rationals, the
    /// whole field otherwise.
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R, bound: i64) -> Scalar {
        match self {
            FieldSpec::Rational => self.from_i64(rng.gen_range(-bound..=bound)),
            FieldSpec::Prime { q } => Scalar::Prime { q, v: rng.gen_range(0..q) },
        }
    }

    /// Uniform nonzero sample.
    pub fn sample_nonzero<R: Rng + ?Sized>(self, rng: &mut R, bound: i64) -> Scalar {
        loop {
            let s = self.sample(rng, bound.max(1));
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub fn parse(self, text: &str) -> Result<Scalar, FieldError> {
        let err = || FieldError::Parse { text: text.to_string(), field: self };
        let t = text.trim();
        match self {
            FieldSpec::Rational => {
                let r = match t.split_once('/') {
                    Some((n, d)) => {
                        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
                        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
                        if d.is_zero() {
                            return Err(FieldError::DivisionByZero);
                        }
                        BigRational::new(n, d)
                    }
                    None => BigRational::from_integer(BigInt::from_str(t).map_err(|_| err())?),
                };
                Ok(Scalar::Rational(r))
            }
            FieldSpec::Prime { q } => {
                let n = BigInt::from_str(t).map_err(|_| err())?;
                let v = n.mod_floor(&BigInt::from(q)).to_u64().ok_or_else(err)?;
                Ok(Scalar::Prime { q, v })
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime { q } => write!(f, "F_{q}"),
        }
    }
}

/// Deterministic trial division; moduli are below 2^31 so this is cheap.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    /// Reduced fraction with positive denominator (guaranteed by `BigRational`).
    Rational(BigRational),
    /// Residue in `[0, q)`.
    Prime { q: u64, v: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Prime { q, .. } => FieldSpec::Prime { q: *q },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { v, .. } => *v == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Prime { .. } => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Prime { v, .. } => Some(*v),
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<(), FieldError> {
        let (l, r) = (self.field(), other.field());
        if l == r {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch { left: l, right: r })
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { q, v: a }, Scalar::Prime { v: b, .. }) => Scalar::Prime { q: *q, v: (a + b) % q },
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Prime { q, v: a }, Scalar::Prime { v: b, .. }) => Scalar::Prime { q: *q, v: (a + q - b) % q },
            _ => unreachable!(),
        })
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { q, v: a }, Scalar::Prime { v: b, .. }) => Scalar::Prime { q: *q, v: (a * b) % q },
            _ => unreachable!(),
        })
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_field(other)?;
        let inv = other.inv()?;
        self.try_mul(&inv)
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Prime { q, v } => Scalar::Prime { q: *q, v: pow_mod(*v, q - 2, *q) },
        })
    }

    /// Image in `F_q` of a rational, or the identity on `F_q` elements.
    pub fn reduce_mod(&self, q: u64) -> Result<Scalar, FieldError> {
        match self {
            Scalar::Rational(r) => {
                let m = BigInt::from(q);
                let num = r.numer().mod_floor(&m).to_u64().unwrap();
                let den = r.denom().mod_floor(&m).to_u64().unwrap();
                if den == 0 {
                    return Err(FieldError::NotReducible(r.to_string(), q));
                }
                Ok(Scalar::Prime { q, v: num * pow_mod(den, q - 2, q) % q })
            }
            Scalar::Prime { q: p, .. } if *p == q => Ok(self.clone()),
            Scalar::Prime { q: p, .. } => Err(FieldError::FieldMismatch {
                left: FieldSpec::Prime { q: *p },
                right: FieldSpec::Prime { q },
            }),
        }
    }

    /// Scalar multiple by a small integer.
    pub fn scale_i64(&self, k: i64) -> Scalar {
        self * &self.field().from_i64(k)
    }

    /// Numerator/denominator size proxy used by pivot heuristics; residues count as 1.
    pub fn height(&self) -> u64 {
        match self {
            Scalar::Rational(r) => r.numer().bits() + r.denom().bits(),
            Scalar::Prime { .. } => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Prime { v, .. } => write!(f, "{v}"),
        }
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                self.$checked(rhs).expect(concat!("scalar ", stringify!($m)))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$checked(&rhs).expect(concat!("scalar ", stringify!($m)))
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);
forward_op!(Div, div, try_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { q, v } => Scalar::Prime { q: *q, v: (q - v) % q },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
