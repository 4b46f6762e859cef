//! Seidel map families indexed by the action level, weighted Seidel maps and
//! the intertwining residual.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::coeff::Coefficient;
use crate::module::{GradedMap, ModuleElem, ModuleError};
use crate::product::ProductTable;
use crate::ring::{RingElem, RingError};
use crate::template::{self, Seed, TemplateError};
use crate::{IntMap, SymbolicMap, TemplateMap};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeidelError {
    #[error("weighted coefficient leaves the coefficient domain at {0}")]
    NonIntegralWeight(String),
    #[error("class {label} has degree {degree}; only degree-2 classes are supported")]
    UnsupportedClass { label: String, degree: i64 },
    #[error("instantiated map has shift {found}, family declares {expected}")]
    ShiftMismatch { expected: i64, found: i64 },
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Level-indexed family of maps from level `r` to level `r + 1`.
#[derive(Clone, Debug)]
pub struct SeidelFamily {
    pub space: String,
    pub maslov_shift: i64,
    pub template: TemplateMap,
    pub seeds: Vec<Seed>,
}

impl SeidelFamily {
    pub fn new(space: &str, template: TemplateMap, seeds: Vec<Seed>) -> Self {
        SeidelFamily {
            space: space.to_string(),
            maslov_shift: template.shift(),
            template,
            seeds,
        }
    }

    /// Numeric map at level `r`, checked for gradedness.
    pub fn instantiate(&self, r: i64) -> Result<IntMap, SeidelError> {
        let m = template::instantiate_numeric(&self.template, r, &self.seeds)?;
        self.checked(m)
    }

    pub fn instantiate_symbolic(&self, r: i64) -> Result<SymbolicMap, SeidelError> {
        let m = template::instantiate_symbolic(&self.template, r, &self.seeds)?;
        self.checked(m)
    }

    fn checked<C: Coefficient>(&self, m: GradedMap<C>) -> Result<GradedMap<C>, SeidelError> {
        if m.shift() != self.maslov_shift {
            return Err(SeidelError::ShiftMismatch {
                expected: self.maslov_shift,
                found: m.shift(),
            });
        }
        let report = m.check_grading();
        if !report.passed() {
            return Err(ModuleError::Grading(report).into());
        }
        Ok(m)
    }

    /// `S_{r+count-1} ∘ … ∘ S_r`, from level `r` to level `r + count`.
    pub fn compose_levels(&self, r: i64, count: usize) -> Result<IntMap, SeidelError> {
        let first = self.instantiate(r)?;
        let mut acc = IntMap::identity(first.source(), first.config());
        for k in 0..count as i64 {
            acc = self.instantiate(r + k)?.compose(&acc)?;
        }
        Ok(acc)
    }
}

pub fn seidel_instantiate(family: &SeidelFamily, r: i64) -> Result<IntMap, SeidelError> {
    family.instantiate(r)
}

/// Weight assigned to a section class from its `q`-exponent:
/// `slope * a + offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightRule {
    pub slope: BigRational,
    pub offset: BigRational,
}

impl Default for WeightRule {
    fn default() -> Self {
        WeightRule {
            slope: BigRational::one(),
            offset: BigRational::zero(),
        }
    }
}

impl WeightRule {
    pub fn new(slope: i64, offset: i64) -> Self {
        WeightRule {
            slope: BigRational::from_integer(BigInt::from(slope)),
            offset: BigRational::from_integer(BigInt::from(offset)),
        }
    }

    pub fn weight(&self, q_exponent: i64) -> BigRational {
        &self.slope * BigRational::from_integer(BigInt::from(q_exponent)) + &self.offset
    }

    pub fn add(&self, other: &WeightRule) -> WeightRule {
        WeightRule {
            slope: &self.slope + &other.slope,
            offset: &self.offset + &other.offset,
        }
    }
}

/// Reweight every term `c q^a u^b` of every entry by `w(a)`.
///
/// Only degree-2 classes are supported, so the degree shift is unchanged.
pub fn weighted_seidel<C: Coefficient>(
    map: &GradedMap<C>,
    w: &WeightRule,
) -> Result<GradedMap<C>, SeidelError> {
    map.try_map_entries(|x| {
        x.try_map_terms(|m, c| {
            c.scale_rational(&w.weight(m.q)).ok_or_else(|| {
                SeidelError::NonIntegralWeight(format!("{} in {}", m.render(), x.render()))
            })
        })
    })
}

fn degree_two(table_basis: &crate::BasisSpec, label: &str) -> Result<(), SeidelError> {
    let degree = table_basis.degree(table_basis.index_of(label)?);
    if degree != 2 {
        return Err(SeidelError::UnsupportedClass {
            label: label.to_string(),
            degree,
        });
    }
    Ok(())
}

/// Classes used on the two sides of the intertwining relation.
#[derive(Debug, Clone, PartialEq)]
pub struct Intertwining {
    pub alpha_plus: String,
    pub alpha_minus: String,
    pub weight: WeightRule,
}

impl Intertwining {
    pub fn along(label: &str, weight: WeightRule) -> Self {
        Intertwining {
            alpha_plus: label.to_string(),
            alpha_minus: label.to_string(),
            weight,
        }
    }
}

/// The operator `x ↦ S(x ∗_r α⁺) − S(x) ∗_{r+1} α⁻ − u·S_α(x)`.
pub fn intertwining_operator<C: Coefficient>(
    seidel: &GradedMap<C>,
    product_r: &ProductTable<C>,
    product_next: &ProductTable<C>,
    data: &Intertwining,
) -> Result<GradedMap<C>, SeidelError> {
    degree_two(product_r.basis(), &data.alpha_plus)?;
    degree_two(product_next.basis(), &data.alpha_minus)?;
    let plus = product_r.multiplication_operator(&data.alpha_plus)?;
    let minus = product_next.multiplication_operator(&data.alpha_minus)?;
    let lhs = seidel.compose(&plus)?;
    let mid = minus.compose(seidel)?;
    let weighted = weighted_seidel(seidel, &data.weight)?;
    let correction = weighted.scale(&RingElem::u(seidel.config()))?;
    Ok(lhs.try_sub(&mid)?.try_sub(&correction)?)
}

pub fn intertwining_residual<C: Coefficient>(
    seidel: &GradedMap<C>,
    product_r: &ProductTable<C>,
    product_next: &ProductTable<C>,
    data: &Intertwining,
    x: &ModuleElem<C>,
) -> Result<ModuleElem<C>, SeidelError> {
    Ok(intertwining_operator(seidel, product_r, product_next, data)?.apply(x)?)
}

/// A composite entry that differs from the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseFailure {
    pub composite: &'static str,
    pub row: String,
    pub col: String,
    pub entry: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct InverseReport {
    pub failures: Vec<InverseFailure>,
}

impl InverseReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn identity_failures(map: &IntMap, name: &'static str, out: &mut Vec<InverseFailure>) {
    for (l, row) in map.matrix().iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            let ok = if l == k { x.is_one() } else { x.is_zero() };
            if !ok {
                out.push(InverseFailure {
                    composite: name,
                    row: map.target().label(l).to_string(),
                    col: map.source().label(k).to_string(),
                    entry: x.render(),
                });
            }
        }
    }
}

/// Check that the family from level `r+1` back to level `r` inverts the
/// forward family at level `r` on both sides.
pub fn verify_inverse_pair(
    forward: &SeidelFamily,
    inverse: &SeidelFamily,
    r: i64,
) -> Result<InverseReport, SeidelError> {
    let f = forward.instantiate(r)?;
    let g = inverse.instantiate(r)?;
    Ok(check_inverse_maps(&f, &g)?)
}

pub fn check_inverse_maps(forward: &IntMap, inverse: &IntMap) -> Result<InverseReport, ModuleError> {
    let mut failures = Vec::new();
    identity_failures(&inverse.compose(forward)?, "inverse∘forward", &mut failures);
    identity_failures(&forward.compose(inverse)?, "forward∘inverse", &mut failures);
    if forward.shift() + inverse.shift() != 0 {
        failures.push(InverseFailure {
            composite: "shift",
            row: String::new(),
            col: String::new(),
            entry: format!("{} + {}", forward.shift(), inverse.shift()),
        });
    }
    Ok(InverseReport { failures })
}
