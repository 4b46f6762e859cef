//! The graded coefficient ring `Λ ⊗ ℤ[u]`.
//!
//! `Λ` is either the integers or the Laurent ring `ℤ[q, q⁻¹]` with `q` of a
//! configurable even degree; `u` has degree 2. A localized configuration admits
//! negative powers of `u` and requires rational coefficients. Elements are
//! finite sparse sums; completion in `u` is modelled only by allowing
//! arbitrarily large `u`-exponents.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::coeff::{CoeffDomain, Coefficient};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("illegal exponent q^{q}*u^{u} for ring {config}")]
    IllegalExponent { q: i64, u: i64, config: RingConfig },
    #[error("ring configuration mismatch: {0} vs {1}")]
    ConfigMismatch(RingConfig, RingConfig),
    #[error("element {0} is not homogeneous")]
    NotHomogeneous(String),
    #[error("operation undefined on the zero element")]
    ZeroElement,
    #[error("{dividend} is not divisible by {divisor}")]
    NotDivisible { dividend: String, divisor: String },
    #[error("invalid ring configuration: {0}")]
    BadConfig(String),
}

/// Shape of the coefficient ring: presence and degree of `q`, and whether
/// negative `u`-powers are admitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingConfig {
    q_degree: Option<i64>,
    u_localized: bool,
}

impl RingConfig {
    /// `ℤ[u]` (or `ℚ[u]`): no Novikov variable.
    pub const fn without_q() -> Self {
        RingConfig {
            q_degree: None,
            u_localized: false,
        }
    }

    pub fn with_q(q_degree: i64) -> Result<Self, RingError> {
        if q_degree <= 0 || q_degree % 2 != 0 {
            return Err(RingError::BadConfig(format!(
                "q degree must be even and positive, got {q_degree}"
            )));
        }
        Ok(RingConfig {
            q_degree: Some(q_degree),
            u_localized: false,
        })
    }

    pub fn localized(self) -> Self {
        RingConfig {
            u_localized: true,
            ..self
        }
    }

    pub fn unlocalized(self) -> Self {
        RingConfig {
            u_localized: false,
            ..self
        }
    }

    pub fn has_q(&self) -> bool {
        self.q_degree.is_some()
    }

    pub fn q_degree(&self) -> Option<i64> {
        self.q_degree
    }

    pub fn is_localized(&self) -> bool {
        self.u_localized
    }

    /// Degree of `q^a u^b`.
    pub fn monomial_degree(&self, mono: Mono) -> i64 {
        mono.q * self.q_degree.unwrap_or(0) + 2 * mono.u
    }

    pub fn check_domain(&self, domain: CoeffDomain) -> Result<(), RingError> {
        if self.u_localized && domain != CoeffDomain::Rational {
            return Err(RingError::BadConfig(
                "a localized ring needs rational coefficients".into(),
            ));
        }
        Ok(())
    }

    pub fn is_legal(&self, mono: Mono) -> bool {
        (self.has_q() || mono.q == 0) && (self.u_localized || mono.u >= 0)
    }
}

impl fmt::Display for RingConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.q_degree {
            Some(d) => write!(f, "Z[q,q^-1](|q|={d})")?,
            None => write!(f, "Z")?,
        }
        if self.u_localized {
            write!(f, "[u,u^-1]")
        } else {
            write!(f, "[u]")
        }
    }
}

/// Exponent pair of a monomial `q^q * u^u`. Ordered by `u` first, then `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub u: i64,
    pub q: i64,
}

impl Mono {
    pub const ONE: Mono = Mono { u: 0, q: 0 };

    pub const fn new(q: i64, u: i64) -> Self {
        Mono { u, q }
    }

    fn times(self, other: Mono) -> Mono {
        Mono {
            u: self.u + other.u,
            q: self.q + other.q,
        }
    }

    fn over(self, other: Mono) -> Mono {
        Mono {
            u: self.u - other.u,
            q: self.q - other.q,
        }
    }

    /// Canonical text such as `q^2*u`, or the empty string for `1`.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (sym, e) in [("q", self.q), ("u", self.u)] {
            match e {
                0 => {}
                1 => parts.push(sym.to_string()),
                _ => parts.push(format!("{sym}^{e}")),
            }
        }
        parts.join("*")
    }
}

/// A finite, exact element of the graded ring.
#[derive(Clone, PartialEq)]
pub struct RingElem<C> {
    config: RingConfig,
    terms: BTreeMap<Mono, C>,
}

impl<C: Coefficient> RingElem<C> {
    pub fn zero(config: RingConfig) -> Self {
        RingElem {
            config,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(config: RingConfig) -> Self {
        Self::constant(config, C::one())
    }

    pub fn constant(config: RingConfig, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::ONE, c);
        }
        RingElem { config, terms }
    }

    pub fn from_int(config: RingConfig, n: i64) -> Self {
        Self::constant(config, C::from_i64(n))
    }

    pub fn monomial(config: RingConfig, c: C, q: i64, u: i64) -> Result<Self, RingError> {
        Self::from_terms(config, [(c, q, u)])
    }

    pub fn q(config: RingConfig) -> Result<Self, RingError> {
        Self::monomial(config, C::one(), 1, 0)
    }

    pub fn u(config: RingConfig) -> Self {
        Self::monomial(config, C::one(), 0, 1).expect("u is legal in every ring")
    }

    /// Build a normalized element from `(coeff, q-exponent, u-exponent)` terms.
    pub fn from_terms<I>(config: RingConfig, terms: I) -> Result<Self, RingError>
    where
        I: IntoIterator<Item = (C, i64, i64)>,
    {
        config.check_domain(C::DOMAIN)?;
        let mut out = Self::zero(config);
        for (c, q, u) in terms {
            let mono = Mono::new(q, u);
            if !config.is_legal(mono) {
                return Err(RingError::IllegalExponent { q, u, config });
            }
            out.add_term(mono, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, mono: Mono, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&mono) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(mono, s);
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn config(&self) -> RingConfig {
        self.config
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Mono::ONE).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending `(u, q)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Mono, &C)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, q: i64, u: i64) -> C {
        self.terms
            .get(&Mono::new(q, u))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// The constant term, if the element is a constant.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self.terms.get(&Mono::ONE).cloned(),
            _ => None,
        }
    }

    fn same_config(&self, other: &Self) -> Result<(), RingError> {
        if self.config != other.config {
            return Err(RingError::ConfigMismatch(self.config, other.config));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RingError> {
        self.same_config(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, RingError> {
        self.same_config(other)?;
        let mut out = Self::zero(self.config);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.times(*m2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    fn neg_ref(&self) -> Self {
        RingElem {
            config: self.config,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.config);
        for (m, x) in &self.terms {
            out.add_term(*m, x.clone() * c.clone());
        }
        out
    }

    /// Multiply by `q^q u^u`, failing if the result leaves the ring.
    pub fn shift(&self, q: i64, u: i64) -> Result<Self, RingError> {
        let by = Mono::new(q, u);
        let mut out = Self::zero(self.config);
        for (m, c) in &self.terms {
            let nm = m.times(by);
            if !self.config.is_legal(nm) {
                return Err(RingError::IllegalExponent {
                    q: nm.q,
                    u: nm.u,
                    config: self.config,
                });
            }
            out.terms.insert(nm, c.clone());
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.config);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Common degree of all terms.
    pub fn degree(&self) -> Result<i64, RingError> {
        let mut degs = self.terms.keys().map(|m| self.config.monomial_degree(*m));
        let first = degs.next().ok_or(RingError::ZeroElement)?;
        if degs.all(|d| d == first) {
            Ok(first)
        } else {
            Err(RingError::NotHomogeneous(self.to_string()))
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_ok()
    }

    /// Whether the element is invertible in its ring: a single monomial with
    /// unit coefficient and no `u` (unless `u` is inverted).
    pub fn is_unit(&self) -> bool {
        if self.terms.len() != 1 {
            return false;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        c.is_unit() && (m.u == 0 || self.config.u_localized)
    }

    /// Exact quotient `z` with `z * divisor == self`.
    ///
    /// Quotient terms are peeled off by leading monomial in `(u, q)` order;
    /// every candidate term must lie in the exponent box forced by additivity
    /// of the `q`- and `u`-degree ranges, which also bounds the loop.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, RingError> {
        self.same_config(divisor)?;
        if divisor.is_zero() {
            return Err(RingError::ZeroElement);
        }
        let not_div = || RingError::NotDivisible {
            dividend: self.to_string(),
            divisor: divisor.to_string(),
        };
        if self.is_zero() {
            return Ok(Self::zero(self.config));
        }
        let (xq, xu) = exponent_ranges(self);
        let (yq, yu) = exponent_ranges(divisor);
        let q_box = (xq.0 - yq.0, xq.1 - yq.1);
        let u_box = (xu.0 - yu.0, xu.1 - yu.1);
        if q_box.0 > q_box.1 || u_box.0 > u_box.1 {
            return Err(not_div());
        }
        let (lead_m, lead_c) = divisor.terms.iter().next_back().unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.config);
        while let Some((rm, rc)) = rem.terms.iter().next_back().map(|(m, c)| (*m, c.clone())) {
            let m = rm.over(*lead_m);
            if m.q < q_box.0 || m.q > q_box.1 || m.u < u_box.0 || m.u > u_box.1 {
                return Err(not_div());
            }
            if !self.config.is_legal(m) {
                return Err(not_div());
            }
            let c = rc.exact_div(lead_c).ok_or_else(not_div)?;
            let mut t = Self::zero(self.config);
            t.terms.insert(m, c.clone());
            rem = rem.try_sub(&t.try_mul(divisor)?)?;
            quot.add_term(m, c);
        }
        Ok(quot)
    }

    /// Drop every term with `u`-exponent at least `order`.
    pub fn truncate_u(&self, order: i64) -> Self {
        RingElem {
            config: self.config,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.u < order)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Minimal `u`-exponent over the terms.
    pub fn u_valuation(&self) -> Result<i64, RingError> {
        self.terms.keys().map(|m| m.u).min().ok_or(RingError::ZeroElement)
    }

    /// Set `u = 0`; defined only without negative `u`-powers.
    pub fn at_u_zero(&self) -> Result<Self, RingError> {
        if let Some(m) = self.terms.keys().find(|m| m.u < 0) {
            return Err(RingError::IllegalExponent {
                q: m.q,
                u: m.u,
                config: self.config,
            });
        }
        Ok(self.truncate_u(1))
    }

    /// Re-home the element in another configuration with the same `q`.
    pub fn with_config(&self, config: RingConfig) -> Result<Self, RingError> {
        Self::from_terms(config, self.terms.iter().map(|(m, c)| (c.clone(), m.q, m.u)))
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> RingElem<D> {
        let mut out = RingElem::zero(self.config);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    pub fn try_map_coeffs<D: Coefficient, E>(
        &self,
        f: impl Fn(&C) -> Result<D, E>,
    ) -> Result<RingElem<D>, E> {
        let mut out = RingElem::zero(self.config);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c)?);
        }
        Ok(out)
    }

    /// Map each term, with access to its monomial.
    pub fn try_map_terms<D: Coefficient, E>(
        &self,
        f: impl Fn(Mono, &C) -> Result<D, E>,
    ) -> Result<RingElem<D>, E> {
        let mut out = RingElem::zero(self.config);
        for (m, c) in &self.terms {
            out.add_term(*m, f(*m, c)?);
        }
        Ok(out)
    }

    /// Canonical text: terms by `(u, q)` ascending, coefficient first.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = c.render_parts();
            let mono = m.render();
            let body = match (mag.as_str(), mono.is_empty()) {
                ("1", false) => mono,
                (_, true) => mag,
                (_, false) => format!("{mag}*{mono}"),
            };
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }
}

fn exponent_ranges<C>(x: &RingElem<C>) -> ((i64, i64), (i64, i64)) {
    let qs = x.terms.keys().map(|m| m.q);
    let us = x.terms.keys().map(|m| m.u);
    (
        (qs.clone().min().unwrap(), qs.max().unwrap()),
        (us.clone().min().unwrap(), us.max().unwrap()),
    )
}

impl<C: Coefficient> fmt::Display for RingElem<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<C: Coefficient> fmt::Debug for RingElem<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElem({})", self.render())
    }
}

// Operator forms panic on mismatched configurations; use the `try_*` methods
// when the operands come from different sources.

impl<C: Coefficient> Add for &RingElem<C> {
    type Output = RingElem<C>;
    fn add(self, rhs: Self) -> RingElem<C> {
        self.try_add(rhs).expect("ring configuration mismatch")
    }
}

impl<C: Coefficient> Sub for &RingElem<C> {
    type Output = RingElem<C>;
    fn sub(self, rhs: Self) -> RingElem<C> {
        self.try_sub(rhs).expect("ring configuration mismatch")
    }
}

impl<C: Coefficient> Mul for &RingElem<C> {
    type Output = RingElem<C>;
    fn mul(self, rhs: Self) -> RingElem<C> {
        self.try_mul(rhs).expect("ring configuration mismatch")
    }
}

impl<C: Coefficient> Neg for &RingElem<C> {
    type Output = RingElem<C>;
    fn neg(self) -> RingElem<C> {
        self.neg_ref()
    }
}

impl<C: Coefficient> Add for RingElem<C> {
    type Output = RingElem<C>;
    fn add(self, rhs: Self) -> RingElem<C> {
        &self + &rhs
    }
}

impl<C: Coefficient> Sub for RingElem<C> {
    type Output = RingElem<C>;
    fn sub(self, rhs: Self) -> RingElem<C> {
        &self - &rhs
    }
}

impl<C: Coefficient> Mul for RingElem<C> {
    type Output = RingElem<C>;
    fn mul(self, rhs: Self) -> RingElem<C> {
        &self * &rhs
    }
}

impl<C: Coefficient> Neg for RingElem<C> {
    type Output = RingElem<C>;
    fn neg(self) -> RingElem<C> {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    type Z = RingElem<BigInt>;

    fn zq4() -> RingConfig {
        RingConfig::with_q(4).unwrap()
    }

    fn el(cfg: RingConfig, terms: &[(i64, i64, i64)]) -> Z {
        Z::from_terms(cfg, terms.iter().map(|&(c, a, b)| (BigInt::from(c), a, b))).unwrap()
    }

    #[test]
    fn make_single_monomial() {
        let x = el(zq4(), &[(1, 1, 0)]);
        assert_eq!(x.render(), "q");
    }

    #[test]
    fn make_cancels() {
        let x = el(RingConfig::without_q(), &[(3, 0, 2), (-3, 0, 2)]);
        assert!(x.is_zero());
        assert_eq!(x.render(), "0");
    }

    #[test]
    fn make_localized() {
        let cfg = RingConfig::without_q().localized();
        let half = BigRational::new(1.into(), 2.into());
        let x = RingElem::from_terms(cfg, [(half, 0, -1)]).unwrap();
        assert_eq!(x.render(), "(1/2)*u^-1");
    }

    #[test]
    fn illegal_exponents() {
        let r = Z::from_terms(RingConfig::without_q(), [(BigInt::from(1), 0, -1)]);
        assert!(matches!(r, Err(RingError::IllegalExponent { .. })));
        let r = Z::from_terms(RingConfig::without_q(), [(BigInt::from(1), 1, 0)]);
        assert!(matches!(r, Err(RingError::IllegalExponent { .. })));
        // localized integer ring is rejected
        let r = Z::from_terms(RingConfig::without_q().localized(), []);
        assert!(matches!(r, Err(RingError::BadConfig(_))));
    }

    #[test]
    fn difference_of_squares() {
        let cfg = zq4();
        let a = el(cfg, &[(1, 1, 0), (1, 0, 1)]);
        let b = el(cfg, &[(1, 1, 0), (-1, 0, 1)]);
        assert_eq!(&a * &b, el(cfg, &[(1, 2, 0), (-1, 0, 2)]));
    }

    #[test]
    fn scalar_substitution_square() {
        // ((r+1)u)^2 at r = 1
        let cfg = RingConfig::without_q();
        let r = 1;
        let x = el(cfg, &[(r + 1, 0, 1)]);
        assert_eq!(&x * &x, el(cfg, &[((r + 1) * (r + 1), 0, 2)]));
    }

    #[test]
    fn laurent_identity() {
        let cfg = zq4();
        assert!((&el(cfg, &[(1, 1, 0)]) * &el(cfg, &[(1, -1, 0)])).is_one());
    }

    #[test]
    fn config_mismatch() {
        let a = el(zq4(), &[(1, 1, 0)]);
        let b = el(RingConfig::without_q(), &[(1, 0, 1)]);
        assert!(matches!(a.try_add(&b), Err(RingError::ConfigMismatch(..))));
    }

    #[test]
    fn degrees() {
        assert_eq!(el(zq4(), &[(1, 1, 0)]).degree(), Ok(4));
        // q has degree 2n with n = 2
        assert_eq!(el(zq4(), &[(1, 1, 1)]).degree(), Ok(6));
        assert!(matches!(
            el(zq4(), &[(1, 1, 0), (1, 0, 1)]).degree(),
            Err(RingError::NotHomogeneous(_))
        ));
        assert_eq!(Z::zero(zq4()).degree(), Err(RingError::ZeroElement));
    }

    #[test]
    fn exact_division() {
        let cfg = zq4();
        let x = el(cfg, &[(2, 1, 1), (4, 0, 2)]);
        let y = el(cfg, &[(2, 0, 1)]);
        let z = x.exact_div(&y).unwrap();
        assert_eq!(z, el(cfg, &[(1, 1, 0), (2, 0, 1)]));
        assert_eq!(&z * &y, x);
        assert_eq!(x.exact_div(&Z::one(cfg)).unwrap(), x);
        let q = el(cfg, &[(1, 1, 0)]);
        let u = el(cfg, &[(1, 0, 1)]);
        assert!(matches!(q.exact_div(&u), Err(RingError::NotDivisible { .. })));
    }

    #[test]
    fn exact_division_rejects_infinite_laurent_tail() {
        // u / (1 + q) has no finite quotient
        let cfg = zq4();
        let x = el(cfg, &[(1, 0, 1), (1, 0, 0)]);
        let y = el(cfg, &[(1, 0, 0), (1, 1, 0)]);
        assert!(x.exact_div(&y).is_err());
        let prod = &x * &y;
        assert_eq!(prod.exact_div(&y).unwrap(), x);
    }

    #[test]
    fn exact_division_integrality() {
        let cfg = RingConfig::without_q();
        let x = el(cfg, &[(3, 0, 1)]);
        let y = el(cfg, &[(2, 0, 0)]);
        assert!(x.exact_div(&y).is_err());
    }

    #[test]
    fn truncation() {
        let cfg = RingConfig::with_q(2).unwrap();
        let x = el(cfg, &[(1, 2, 0), (6, 1, 1), (6, 0, 2)]);
        assert_eq!(x.truncate_u(2), el(cfg, &[(1, 2, 0), (6, 1, 1)]));
        assert!(x.truncate_u(0).is_zero());
        let y = el(cfg, &[(3, 1, 0)]);
        assert_eq!(y.truncate_u(1), y);
    }

    #[test]
    fn valuation() {
        let cfg = RingConfig::without_q();
        assert_eq!(el(cfg, &[(2, 0, 1)]).u_valuation(), Ok(1));
        assert_eq!(el(cfg, &[(1, 0, 3), (1, 0, 5)]).u_valuation(), Ok(3));
        assert_eq!(el(zq4(), &[(1, 1, 0)]).u_valuation(), Ok(0));
        assert_eq!(Z::zero(cfg).u_valuation(), Err(RingError::ZeroElement));
    }

    #[test]
    fn rendering_order() {
        let cfg = zq4();
        let x = el(cfg, &[(-1, 0, 3), (3, 2, 1)]);
        assert_eq!(x.render(), "3*q^2*u - u^3");
    }
}
