//! Map templates: graded maps whose coefficients are polynomials in the
//! level `r` and in named unknowns, and their instantiation at a level.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::coeff::rational_to_integer;
use crate::module::{GradedMap, ModuleError};
use crate::poly::Poly;
use crate::ring::RingError;
use crate::solver::Unknown;
use crate::{IntMap, PolyExpr, SymbolicMap, TemplateCoeff, TemplateMap};

/// Variables that may appear in template coefficients.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TVar {
    /// The action level `r`.
    Level,
    /// A named unknown, attached to the level at instantiation.
    Unknown(String),
}

impl fmt::Display for TVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TVar::Level => f.write_str("r"),
            TVar::Unknown(name) => write!(f, "?{name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TemplateError {
    #[error("unresolved unknowns in {0}")]
    Unresolved(String),
    #[error("coefficient {0} is not an integer")]
    NonIntegral(String),
    #[error("negative level {0}")]
    NegativeLevel(i64),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A fixed value for an unknown, either at every level (the value may
/// involve `r`) or at one specific level.
#[derive(Debug, Clone, PartialEq)]
pub struct Seed {
    pub name: String,
    pub level: Option<i64>,
    pub value: TemplateCoeff,
}

impl Seed {
    pub fn family(name: &str, value: TemplateCoeff) -> Self {
        Seed {
            name: name.to_string(),
            level: None,
            value,
        }
    }

    pub fn at_level(name: &str, level: i64, value: i64) -> Self {
        Seed {
            name: name.to_string(),
            level: Some(level),
            value: TemplateCoeff::from_int(value),
        }
    }

    pub fn render(&self) -> String {
        match self.level {
            None => format!("{} = {}", self.name, self.value.render()),
            Some(l) => format!("{}[{l}] = {}", self.name, self.value.render()),
        }
    }
}

/// The polynomial `r + k`, handy for writing templates.
pub fn level_plus(k: i64) -> TemplateCoeff {
    TemplateCoeff::var(TVar::Level) + TemplateCoeff::from_int(k)
}

pub fn unknown(name: &str) -> TemplateCoeff {
    TemplateCoeff::var(TVar::Unknown(name.to_string()))
}

/// Substitute the level and family seeds, turning remaining unknowns into
/// level-tagged solver variables.
pub fn instantiate_coeff(c: &TemplateCoeff, r: i64, seeds: &[Seed]) -> PolyExpr {
    let level = Poly::<Unknown, BigInt>::from_int(r);
    c.map_vars(|v| match v {
        TVar::Level => level.clone(),
        TVar::Unknown(name) => match seeds.iter().find(|s| s.level.is_none() && &s.name == name) {
            Some(seed) => seed.value.map_vars(|w| match w {
                TVar::Level => level.clone(),
                TVar::Unknown(n) => Poly::var(Unknown::new(n, r)),
            }),
            None => Poly::var(Unknown::new(name, r)),
        },
    })
    .to_rational()
}

pub fn instantiate_symbolic(
    map: &TemplateMap,
    r: i64,
    seeds: &[Seed],
) -> Result<SymbolicMap, TemplateError> {
    if r < 0 {
        return Err(TemplateError::NegativeLevel(r));
    }
    Ok(map.try_map_entries(|x| {
        Ok::<_, RingError>(x.map_coeffs(|c| instantiate_coeff(c, r, seeds)))
    })?)
}

/// Substitute solved unknown values.
pub fn bind(map: &SymbolicMap, values: &BTreeMap<Unknown, PolyExpr>) -> SymbolicMap {
    map.map_entries(|x| x.map_coeffs(|c| c.substitute_all(values)))
}

/// Convert a map whose coefficients are integer constants.
pub fn to_numeric(map: &SymbolicMap) -> Result<IntMap, TemplateError> {
    map.try_map_entries(|x| {
        x.try_map_coeffs(|c| {
            let k = c
                .constant_value()
                .ok_or_else(|| TemplateError::Unresolved(c.render()))?;
            rational_to_integer(&k).ok_or_else(|| TemplateError::NonIntegral(c.render()))
        })
    })
}

pub fn instantiate_numeric(
    map: &TemplateMap,
    r: i64,
    seeds: &[Seed],
) -> Result<IntMap, TemplateError> {
    to_numeric(&instantiate_symbolic(map, r, seeds)?)
}

pub fn lift_numeric(map: &IntMap) -> SymbolicMap {
    map.map_entries_into(|c| PolyExpr::constant(BigRational::from_integer(c.clone())))
}

pub fn template_from_numeric(map: &IntMap) -> TemplateMap {
    map.map_entries_into(|c| TemplateCoeff::constant(c.clone()))
}

/// Names of unknowns occurring in a template.
pub fn unknown_names(map: &TemplateMap) -> Vec<String> {
    let mut names: Vec<String> = map
        .matrix()
        .iter()
        .flatten()
        .flat_map(|x| x.terms().flat_map(|(_, c)| c.vars()).collect::<Vec<_>>())
        .filter_map(|v| match v {
            TVar::Unknown(n) => Some(n),
            TVar::Level => None,
        })
        .collect();
    names.sort();
    names.dedup();
    names
}

impl<C: crate::Coefficient> GradedMap<C> {
    /// Coefficient-wise conversion to another coefficient type.
    pub fn map_entries_into<D: crate::Coefficient>(&self, f: impl Fn(&C) -> D) -> GradedMap<D> {
        self.try_map_entries(|x| Ok::<_, ()>(x.map_coeffs(&f)))
            .expect("infallible")
    }
}
