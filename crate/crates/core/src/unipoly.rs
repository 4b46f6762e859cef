//! Dense univariate polynomials over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly(Vec<BigRational>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.0.last()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => Self::new(self.0.iter().map(|c| c / l).collect()),
        }
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.0.len() - 1;
        let lead = d.lead().unwrap();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / lead;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    rem[i + j] = &rem[i + j] - &c * dc;
                }
            }
            quot[i] = c;
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// The integer polynomial with coprime coefficients and positive leading
    /// coefficient proportional to `self`.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.iter().map(|c| c / &g * &sign).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_of_products() {
        // (x+1)(x-2) and (x+1)(x+3)
        let a = UniPoly::from_ints(&[-2, -1, 1]);
        let b = UniPoly::from_ints(&[3, 4, 1]);
        assert_eq!(a.gcd(&b), UniPoly::from_ints(&[1, 1]));
    }

    #[test]
    fn squarefree_of_double_root() {
        // (x+3)^2
        let p = UniPoly::from_ints(&[9, 6, 1]);
        assert_eq!(p.squarefree_part(), UniPoly::from_ints(&[3, 1]));
        // x^2 - 1 is already squarefree
        let p = UniPoly::from_ints(&[-1, 0, 1]);
        assert_eq!(p.squarefree_part(), p);
    }

    #[test]
    fn primitive_integer_form() {
        let p = UniPoly::new(vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::new((-3).into(), 4.into()),
        ]);
        assert_eq!(
            p.primitive_integer(),
            vec![BigInt::from(-2), BigInt::from(3)]
        );
    }
}
