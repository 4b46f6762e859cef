//! Exact computations with equivariant quantum products, equivariant quantum
//! Seidel maps and the direct limits built from them.
//!
//! The core types are generic over an exact [`Coefficient`] type; the
//! aliases below fix the common choices.

pub mod catalog;
pub mod coeff;
pub mod export;
pub mod groebner;
pub mod limit;
pub mod linalg;
pub mod module;
pub mod poly;
pub mod product;
pub mod props;
pub mod ring;
pub mod seidel;
pub mod snf;
pub mod solver;
pub mod template;
pub mod unipoly;
pub mod zhao;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use coeff::{CoeffDomain, Coefficient};
pub use module::{BasisChange, BasisSpec, GradedMap, ModuleElem};
pub use ring::{Mono, RingConfig, RingElem, RingError};
pub use solver::Unknown;
pub use template::TVar;

/// Ring element with integer coefficients.
pub type IntElem = RingElem<BigInt>;
/// Ring element with rational coefficients (needed once `u` is inverted).
pub type RatElem = RingElem<BigRational>;
/// Polynomial in solver unknowns with rational coefficients.
pub type PolyExpr = poly::Poly<Unknown, BigRational>;
/// Polynomial in the level `r` and named unknowns, as written in templates.
pub type TemplateCoeff = poly::Poly<TVar, BigInt>;

pub type IntModuleElem = ModuleElem<BigInt>;
pub type RatModuleElem = ModuleElem<BigRational>;
pub type IntMap = GradedMap<BigInt>;
pub type RatMap = GradedMap<BigRational>;
pub type SymbolicMap = GradedMap<PolyExpr>;
pub type TemplateMap = GradedMap<TemplateCoeff>;
