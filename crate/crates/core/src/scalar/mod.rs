//! Exact scalar fields.
//!
//! Everything downstream is generic over [`Field`]. Two implementations are
//! provided: arbitrary-precision rationals ([`Rational`]) and the fifth
//! cyclotomic field ([`Cyclo5`]). Prime-field residues ([`ModP`]) carry their
//! modulus at runtime and are only used for randomized cross-checks, so they
//! live outside the generic trait.

mod cyclo;
mod literal;
mod modp;

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use cyclo::Cyclo5;
pub use literal::{parse_cyclo, parse_rational};
pub use modp::{embed_to_prime_field, primitive_fifth_root, EmbedModP, ModP, DEFAULT_PRIME};

use crate::polykit::UniPoly;

/// Arbitrary-precision rational numbers, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator {0} is not invertible modulo {1}")]
    NotInvertibleModP(String, u64),
    #[error("modulus {0} is not an odd prime below 2^32")]
    BadModulus(u64),
    #[error("{0} is not a primitive fifth root of unity modulo {1}")]
    BadZetaImage(u64, u64),
    #[error("residues with different moduli ({0} and {1})")]
    ModulusMismatch(u64, u64),
    #[error("cannot parse scalar literal {literal:?}: {reason}")]
    Parse { literal: String, reason: String },
}

/// An exact field of characteristic zero.
///
/// Arithmetic goes through owned operator impls; the `*_ref` helpers exist so
/// that hot loops can avoid cloning where the implementation supports
/// by-reference arithmetic.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Short name used in reports ("Q", "Q(zeta5)").
    const NAME: &'static str;

    fn inv(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self;

    fn from_rational(q: &Rational) -> Self;

    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    /// Exact quotient; panics on a zero divisor.
    fn div_ref(&self, other: &Self) -> Self {
        self.mul_ref(&other.inv().expect("division by zero"))
    }

    /// The rational value, if this element lies in Q.
    fn as_rational(&self) -> Option<Rational>;

    /// Image in Q(zeta5); both supported fields embed there.
    fn to_cyclo5(&self) -> Cyclo5;

    /// Roots of `p` that lie in this field. Implementations may return only
    /// the roots they can certify; the default only handles linear factors.
    fn field_roots(p: &UniPoly<Self>) -> Vec<Self> {
        if p.degree() == Some(1) {
            vec![-(p.coeff(0).div_ref(&p.coeff(1)))]
        } else {
            Vec::new()
        }
    }
}

impl Field for Rational {
    const NAME: &'static str = "Q";

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn div_ref(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero");
        self / other
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn to_cyclo5(&self) -> Cyclo5 {
        Cyclo5::from_rational(self)
    }

    fn field_roots(p: &UniPoly<Self>) -> Vec<Self> {
        crate::polykit::rational_roots(p)
    }
}

/// `n/d` as a rational; panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Bit length of the larger of numerator and denominator; a cheap size
/// measure used to pick small pivots.
pub fn rational_height(q: &Rational) -> u64 {
    q.numer().abs().bits().max(q.denom().bits())
}

/// Converts a small rational to `i64` when it is an integer that fits.
pub fn rational_to_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}
