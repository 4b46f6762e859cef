//! Direct limits of injective Seidel families: determinants, adjugates,
//! generator sequences, localization and the non-equivariant limit.

mod det;
mod nonequivariant;
mod rank_one;
mod sequence;

use thiserror::Error;

use crate::module::ModuleError;
use crate::ring::RingError;
use crate::seidel::SeidelError;

pub use det::{adjugate, det_division_free, det_two_ways};
pub use nonequivariant::{nonequivariant_limit, NonEquivariantLimit};
pub use rank_one::{recognize_rank_one, RankOneLimit};
pub use sequence::{
    chain_strictness, generator_sequence, normalized_generators, presentation_generators,
    trajectory_valuations, ChainReport, ChainStep, GeneratorSequence, PresentationGenerator,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LimitError {
    #[error("map at level {0} is not injective (zero determinant)")]
    NotInjective(i64),
    #[error("determinant algorithms disagree at level {level}: {first} vs {second}")]
    RouteMismatch {
        level: i64,
        first: String,
        second: String,
    },
    #[error("generator routes disagree at p = {p}, k = {k}")]
    GeneratorMismatch { p: usize, k: usize },
    #[error("adjugate check A·adj(A) = det(A)·Id failed")]
    VerificationFailed,
    #[error("presentation generator at p = {p} does not match the next level")]
    PresentationMismatch { p: usize },
    #[error("first column of the level-{0} map is not concentrated in the last basis vector")]
    NotTriangularColumn(usize),
    #[error(transparent)]
    Seidel(#[from] SeidelError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Ring(#[from] RingError),
}
