use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::IntElem;

/// Classification of a direct limit `ℤ[u] → ℤ[u] → …` of rank-1 maps given
/// by multiplication with the listed factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankOneLimit {
    /// Every factor is a unit: the limit is `ℤ[u]` itself.
    Polynomial,
    /// Factors `±u^m`, `m ≥ 1`: the limit is `ℤ[u, u⁻¹]`.
    IntegerLaurent,
    /// Factors `±(s+1) u^m`, `m ≥ 1`: every integer is eventually inverted,
    /// so the limit is `ℚ[u, u⁻¹]`.
    RationalLaurent,
    Unrecognized,
}

impl RankOneLimit {
    pub fn render(&self) -> &'static str {
        match self {
            RankOneLimit::Polynomial => "Z[u]",
            RankOneLimit::IntegerLaurent => "Z[u, u^-1]",
            RankOneLimit::RationalLaurent => "Q[u, u^-1]",
            RankOneLimit::Unrecognized => "unrecognized",
        }
    }
}

fn monomial_parts(x: &IntElem) -> Option<(BigInt, i64)> {
    let mut terms = x.terms();
    let (m, c) = terms.next()?;
    if terms.next().is_some() || m.q != 0 {
        return None;
    }
    Some((c.abs(), m.u))
}

/// Recognize the limit from the factors `κ_0, κ_1, …`.
pub fn recognize_rank_one(factors: &[IntElem]) -> RankOneLimit {
    let Some(parts) = factors.iter().map(monomial_parts).collect::<Option<Vec<_>>>() else {
        return RankOneLimit::Unrecognized;
    };
    if parts.is_empty() {
        return RankOneLimit::Unrecognized;
    }
    if parts.iter().all(|(c, m)| c.is_one() && *m == 0) {
        return RankOneLimit::Polynomial;
    }
    if parts.iter().any(|(_, m)| *m < 1) {
        return RankOneLimit::Unrecognized;
    }
    if parts.iter().all(|(c, _)| c.is_one()) {
        return RankOneLimit::IntegerLaurent;
    }
    if parts
        .iter()
        .enumerate()
        .all(|(s, (c, _))| *c == BigInt::from(s + 1))
    {
        return RankOneLimit::RationalLaurent;
    }
    RankOneLimit::Unrecognized
}
