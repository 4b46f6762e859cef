//! Exact scalar coefficients for ring elements.
//!
//! Every ring element in this crate is a finite sum of monomials `c * q^a * u^b`
//! whose coefficient `c` lives in a type implementing [`Coefficient`]. The
//! engine never uses floating point: the provided implementations are
//! arbitrary-precision integers, rationals, and symbolic polynomials over
//! either of them (see [`crate::poly::Poly`]).

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Which exact number system a coefficient type draws its constants from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoeffDomain {
    Integer,
    Rational,
}

impl std::fmt::Display for CoeffDomain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoeffDomain::Integer => f.write_str("INTEGER"),
            CoeffDomain::Rational => f.write_str("RATIONAL"),
        }
    }
}

/// A commutative ring of exact coefficients.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const DOMAIN: CoeffDomain;

    fn from_bigint(n: &BigInt) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    /// `Some(z)` with `z * other == self`, or `None` when no such `z` exists
    /// in this coefficient domain (or `other` is zero).
    fn exact_div(&self, other: &Self) -> Option<Self>;

    /// Multiply by a rational scalar, `None` when the product leaves the domain.
    fn scale_rational(&self, factor: &BigRational) -> Option<Self>;

    /// Whether this coefficient is invertible in its own domain.
    fn is_unit(&self) -> bool;

    /// Split into sign and magnitude text for canonical rendering.
    ///
    /// Returns `(negative, text)`; `text` is `"1"` for a unit magnitude and is
    /// parenthesized whenever it is a compound expression.
    fn render_parts(&self) -> (bool, String);
}

impl Coefficient for BigInt {
    const DOMAIN: CoeffDomain = CoeffDomain::Integer;

    fn from_bigint(n: &BigInt) -> Self {
        n.clone()
    }

    fn exact_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(other);
        r.is_zero().then_some(q)
    }

    fn scale_rational(&self, factor: &BigRational) -> Option<Self> {
        let num = self * factor.numer();
        num.exact_div(factor.denom())
    }

    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }

    fn render_parts(&self) -> (bool, String) {
        (self.is_negative(), self.abs().to_string())
    }
}

impl Coefficient for BigRational {
    const DOMAIN: CoeffDomain = CoeffDomain::Rational;

    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn exact_div(&self, other: &Self) -> Option<Self> {
        (!other.is_zero()).then(|| self / other)
    }

    fn scale_rational(&self, factor: &BigRational) -> Option<Self> {
        Some(self * factor)
    }

    fn is_unit(&self) -> bool {
        !self.is_zero()
    }

    fn render_parts(&self) -> (bool, String) {
        let mag = self.abs();
        let text = if mag.is_integer() {
            mag.numer().to_string()
        } else {
            format!("({}/{})", mag.numer(), mag.denom())
        };
        (self.is_negative(), text)
    }
}

/// Exact conversion of a rational to an integer, if it is one.
pub fn rational_to_integer(x: &BigRational) -> Option<BigInt> {
    x.is_integer().then(|| x.numer().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_exact_div() {
        let six = BigInt::from(6);
        assert_eq!(six.exact_div(&BigInt::from(3)), Some(BigInt::from(2)));
        assert_eq!(six.exact_div(&BigInt::from(4)), None);
        assert_eq!(six.exact_div(&BigInt::zero()), None);
    }

    #[test]
    fn integer_scale_rational() {
        let three = BigInt::from(3);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(three.scale_rational(&half), None);
        assert_eq!(
            BigInt::from(4).scale_rational(&half),
            Some(BigInt::from(2))
        );
    }

    #[test]
    fn rational_rendering() {
        let x = BigRational::new((-3).into(), 4.into());
        assert_eq!(x.render_parts(), (true, "(3/4)".to_string()));
        let y = BigRational::from_integer(5.into());
        assert_eq!(y.render_parts(), (false, "5".to_string()));
    }
}
