//! Sparse multivariate polynomials used as symbolic coefficients.
//!
//! A `Poly<V, C>` is itself a [`Coefficient`], so ring elements, module
//! elements and graded maps can carry unknowns (and the action level `r`)
//! through exactly the same arithmetic as numeric ones.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coeff::{CoeffDomain, Coefficient};

pub trait Variable: Clone + Ord + Debug + Display + Send + Sync + 'static {}

impl<T: Clone + Ord + Debug + Display + Send + Sync + 'static> Variable for T {}

/// Product of variable powers, sorted by variable, all exponents positive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PolyMono<V>(Vec<(V, u32)>);

impl<V: Variable> PolyMono<V> {
    pub fn one() -> Self {
        PolyMono(Vec::new())
    }

    pub fn var(v: V) -> Self {
        PolyMono(vec![(v, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(V, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_in(&self, v: &V) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    fn times(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<V, u32> = self.0.iter().cloned().collect();
        for (v, e) in &other.0 {
            *acc.entry(v.clone()).or_insert(0) += e;
        }
        PolyMono(acc.into_iter().collect())
    }

    /// Remove `v` entirely, returning its exponent.
    fn without(&self, v: &V) -> (u32, Self) {
        let e = self.degree_in(v);
        (
            e,
            PolyMono(self.0.iter().filter(|(w, _)| w != v).cloned().collect()),
        )
    }

    fn render(&self) -> String {
        self.0
            .iter()
            .map(|(v, e)| {
                if *e == 1 {
                    v.to_string()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

#[derive(Clone, PartialEq)]
pub struct Poly<V, C> {
    terms: BTreeMap<PolyMono<V>, C>,
}

impl<V: Variable, C: Coefficient> Poly<V, C> {
    pub fn var(v: V) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(PolyMono::var(v), C::one());
        Poly { terms }
    }

    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(PolyMono::one(), c);
        }
        Poly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(C::from_i64(n))
    }

    fn add_term(&mut self, m: PolyMono<V>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PolyMono<V>, &C)> {
        self.terms.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<C> {
        if self.is_constant() {
            Some(
                self.terms
                    .values()
                    .next()
                    .cloned()
                    .unwrap_or_else(C::zero),
            )
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<V> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: &V) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    /// Coefficient of the largest monomial, used to fix a sign convention.
    pub fn leading_coeff(&self) -> Option<&C> {
        self.terms.values().next_back()
    }

    /// Write `self = a * v + b` with `a`, `b` free of `v`; `None` if `v`
    /// occurs with exponent above one.
    pub fn split_linear(&self, v: &V) -> Option<(Self, Self)> {
        let mut a = Self::zero();
        let mut b = Self::zero();
        for (m, c) in &self.terms {
            match m.without(v) {
                (0, rest) => b.add_term(rest, c.clone()),
                (1, rest) => a.add_term(rest, c.clone()),
                _ => return None,
            }
        }
        Some((a, b))
    }

    /// Coefficients of `self` viewed as a polynomial in `v`, lowest power first.
    pub fn coefficients_in(&self, v: &V) -> Vec<Self> {
        let mut out = vec![Self::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.without(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn substitute(&self, v: &V, value: &Self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.without(v);
            let mut t = Self::zero();
            t.add_term(rest, c.clone());
            for _ in 0..e {
                t = t * value.clone();
            }
            out = out + t;
        }
        out
    }

    pub fn substitute_all(&self, values: &BTreeMap<V, Self>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (v, e) in &m.0 {
                let base = values.get(v).cloned().unwrap_or_else(|| Self::var(v.clone()));
                for _ in 0..*e {
                    t = t * base.clone();
                }
            }
            out = out + t;
        }
        out
    }

    /// Rename variables (possibly merging or substituting), mapping each
    /// variable to a polynomial over a new variable set.
    pub fn map_vars<W: Variable>(&self, f: impl Fn(&V) -> Poly<W, C>) -> Poly<W, C> {
        let mut out = Poly::<W, C>::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::<W, C>::constant(c.clone());
            for (v, e) in &m.0 {
                let base = f(v);
                for _ in 0..*e {
                    t = t * base.clone();
                }
            }
            out = out + t;
        }
        out
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Poly<V, D> {
        let mut out = Poly::<V, D>::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn try_map_coeffs<D: Coefficient, E>(
        &self,
        f: impl Fn(&C) -> Result<D, E>,
    ) -> Result<Poly<V, D>, E> {
        let mut out = Poly::<V, D>::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = c.render_parts();
            let body = match (mag.as_str(), m.is_one()) {
                (_, true) => mag,
                ("1", false) => m.render(),
                (_, false) => format!("{mag}*{}", m.render()),
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

impl<V: Variable> Poly<V, BigInt> {
    pub fn to_rational(&self) -> Poly<V, BigRational> {
        self.map_coeffs(|c| BigRational::from_integer(c.clone()))
    }
}

impl<V: Variable> Poly<V, BigRational> {
    /// Exact conversion to integer coefficients.
    pub fn to_integer(&self) -> Option<Poly<V, BigInt>> {
        self.try_map_coeffs(|c| crate::coeff::rational_to_integer(c).ok_or(()))
            .ok()
    }
}

impl<V: Variable, C: Coefficient> Zero for Poly<V, C> {
    fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<V: Variable, C: Coefficient> One for Poly<V, C> {
    fn one() -> Self {
        Self::constant(C::one())
    }
}

impl<V: Variable, C: Coefficient> Add for Poly<V, C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<V: Variable, C: Coefficient> Neg for Poly<V, C> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<V: Variable, C: Coefficient> Sub for Poly<V, C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<V: Variable, C: Coefficient> Mul for Poly<V, C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.times(m2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<V: Variable, C: Coefficient> Coefficient for Poly<V, C> {
    const DOMAIN: CoeffDomain = C::DOMAIN;

    fn from_bigint(n: &BigInt) -> Self {
        Self::constant(C::from_bigint(n))
    }

    fn exact_div(&self, other: &Self) -> Option<Self> {
        let d = other.constant_value()?;
        self.try_map_coeffs(|c| c.exact_div(&d).ok_or(())).ok()
    }

    fn scale_rational(&self, factor: &BigRational) -> Option<Self> {
        self.try_map_coeffs(|c| c.scale_rational(factor).ok_or(()))
            .ok()
    }

    fn is_unit(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_unit())
    }

    fn render_parts(&self) -> (bool, String) {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            let (neg, mag) = c.render_parts();
            let text = match (mag.as_str(), m.is_one()) {
                (_, true) => mag,
                ("1", false) => m.render(),
                (_, false) => format!("{mag}*{}", m.render()),
            };
            (neg, text)
        } else {
            (false, format!("({})", self.render()))
        }
    }
}

impl<V: Variable, C: Coefficient> Display for Poly<V, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<V: Variable, C: Coefficient> Debug for Poly<V, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.render())
    }
}
