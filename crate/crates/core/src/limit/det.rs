use super::LimitError;
use crate::coeff::Coefficient;
use crate::linalg::{self, Matrix};
use crate::ring::{RingConfig, RingElem};

/// Determinant without ring division (Samuelson–Berkowitz).
pub fn det_division_free<C: Coefficient>(config: RingConfig, m: &Matrix<C>) -> RingElem<C> {
    linalg::det_berkowitz(config, m)
}

/// Determinant by both Bareiss elimination and Berkowitz; errors if they differ.
pub fn det_two_ways<C: Coefficient>(
    config: RingConfig,
    m: &Matrix<C>,
    level: i64,
) -> Result<RingElem<C>, LimitError> {
    let a = linalg::det_bareiss(config, m)?;
    let b = linalg::det_berkowitz(config, m);
    if a != b {
        return Err(LimitError::RouteMismatch {
            level,
            first: a.render(),
            second: b.render(),
        });
    }
    Ok(a)
}

/// Adjugate, by cofactors up to size 6 and Cayley–Hamilton above, checked
/// against `A·adj = adj·A = det·Id`.
pub fn adjugate<C: Coefficient>(config: RingConfig, m: &Matrix<C>) -> Result<Matrix<C>, LimitError> {
    let adj = if m.len() <= 6 {
        linalg::adjugate_cofactor(config, m)
    } else {
        linalg::adjugate_berkowitz(config, m)
    };
    let det = linalg::det_berkowitz(config, m);
    let expected = linalg::scale(&linalg::identity(config, m.len()), &det);
    if linalg::mat_mul(config, m, &adj) != expected || linalg::mat_mul(config, &adj, m) != expected {
        return Err(LimitError::VerificationFailed);
    }
    Ok(adj)
}
