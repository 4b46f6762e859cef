use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::LimitError;
use crate::linalg::{self, Matrix};
use crate::module::{BasisSpec, GradedMap, ModuleElem};
use crate::ring::{RingConfig, RingError};
use crate::seidel::SeidelFamily;
use crate::unipoly::UniPoly;
use crate::{IntElem, IntMap, IntModuleElem};

/// Direct limit of the `u = 0` Seidel map `S_0` over `ℤ[q^±]`: the limit is
/// the quotient by the stable kernel, on which `S_0` is invertible.
#[derive(Debug, Clone)]
pub struct NonEquivariantLimit {
    pub space: String,
    /// Power of `S_0` whose kernel is reported.
    pub power: usize,
    /// Primitive generators of `ker S_0^power`.
    pub kernel: Vec<IntModuleElem>,
    pub quotient_rank: usize,
    pub quotient_labels: Vec<String>,
    /// `S_0` induced on the quotient, in the basis of the remaining labels.
    pub induced: Option<IntMap>,
    pub induced_det: Option<IntElem>,
}

impl NonEquivariantLimit {
    /// Whether the induced map is an isomorphism of the quotient.
    pub fn induced_is_unit(&self) -> bool {
        match &self.induced_det {
            Some(d) => d.is_unit(),
            None => self.quotient_rank == 0,
        }
    }
}

fn submatrix(m: &Matrix<BigInt>, rows: &[usize], cols: &[usize]) -> Matrix<BigInt> {
    rows.iter()
        .map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect())
        .collect()
}

/// Largest nonvanishing minor, as (rows, columns).
fn pivot_minor(config: RingConfig, m: &Matrix<BigInt>) -> (Vec<usize>, Vec<usize>) {
    let (nr, nc) = (m.len(), m.first().map_or(0, |r| r.len()));
    for size in (1..=nr.min(nc)).rev() {
        for rows in (0..nr).combinations(size) {
            for cols in (0..nc).combinations(size) {
                if !linalg::det_cofactor(config, &submatrix(m, &rows, &cols)).is_zero() {
                    return (rows, cols);
                }
            }
        }
    }
    (Vec::new(), Vec::new())
}

fn min_q(x: &IntElem) -> Option<i64> {
    x.terms().map(|(m, _)| m.q).min()
}

fn to_unipoly(x: &IntElem, base: i64) -> UniPoly {
    let top = x.terms().map(|(m, _)| m.q).max().unwrap_or(base);
    let mut coeffs = vec![BigRational::zero(); (top - base + 1).max(0) as usize];
    for (m, c) in x.terms() {
        coeffs[(m.q - base) as usize] = BigRational::from_integer(c.clone());
    }
    UniPoly::new(coeffs)
}

fn from_unipoly(config: RingConfig, p: &UniPoly, base: i64) -> Result<IntElem, RingError> {
    IntElem::from_terms(
        config,
        p.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (c.to_integer(), base + i as i64, 0)),
    )
}

/// Remove the common `ℚ[q]` factor and integer content, then fix signs and
/// `q`-shift so the last nonzero coordinate has positive leading coefficient
/// and the lowest `q`-power is `0`.
fn normalize(v: &IntModuleElem) -> Result<IntModuleElem, LimitError> {
    let config = v.config();
    let Some(base) = v.coords().iter().filter_map(min_q).min() else {
        return Ok(v.clone());
    };
    let polys: Vec<UniPoly> = v.coords().iter().map(|c| to_unipoly(c, base)).collect();
    let g = polys
        .iter()
        .filter(|p| !p.is_zero())
        .fold(UniPoly::zero(), |acc, p| acc.gcd(p));
    let reduced: Vec<UniPoly> = polys.iter().map(|p| p.div_rem(&g).0).collect();
    let lcm = reduced
        .iter()
        .flat_map(|p| p.coeffs().iter())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scale = BigRational::from_integer(lcm);
    let scaled: Vec<UniPoly> = reduced
        .iter()
        .map(|p| UniPoly::new(p.coeffs().iter().map(|c| c * &scale).collect()))
        .collect();
    let content = scaled
        .iter()
        .flat_map(|p| p.coeffs().iter())
        .fold(BigInt::zero(), |acc, c| acc.gcd(&c.to_integer()));
    let last_lead = scaled
        .iter()
        .rev()
        .find_map(|p| p.lead().cloned())
        .expect("nonzero vector");
    let divisor = BigRational::from_integer(if last_lead.is_negative() { -content } else { content });
    let coords = scaled
        .iter()
        .map(|p| {
            let p = UniPoly::new(p.coeffs().iter().map(|c| c / &divisor).collect());
            from_unipoly(config, &p, 0)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let shift = coords.iter().filter_map(min_q).min().unwrap_or(0);
    let coords = coords
        .iter()
        .map(|c| c.shift(-shift, 0))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ModuleElem::from_coords(v.basis(), config, coords)?)
}

/// Generators of the kernel of `m` over `ℤ[q^±]`, one per non-pivot column.
fn kernel(basis: &BasisSpec, config: RingConfig, m: &Matrix<BigInt>) -> Result<Vec<IntModuleElem>, LimitError> {
    let (rows, pivots) = pivot_minor(config, m);
    let minor = submatrix(m, &rows, &pivots);
    let det = linalg::det_cofactor(config, &minor);
    let adj = linalg::adjugate_cofactor(config, &minor);
    let mut out = Vec::new();
    for free in (0..basis.len()).filter(|c| !pivots.contains(c)) {
        let mut coords = vec![IntElem::zero(config); basis.len()];
        coords[free] = det.clone();
        for (a, &p) in pivots.iter().enumerate() {
            let mut acc = IntElem::zero(config);
            for (b, &row) in rows.iter().enumerate() {
                acc = &acc + &(&adj[a][b] * &m[row][free]);
            }
            coords[p] = -acc;
        }
        out.push(normalize(&ModuleElem::from_coords(basis, config, coords)?)?);
    }
    Ok(out)
}

/// Reduce `x` modulo the kernel using one unit pivot per kernel vector.
fn reduce(x: &IntModuleElem, kernel: &[(usize, IntModuleElem)]) -> Result<IntModuleElem, LimitError> {
    let mut x = x.clone();
    for (p, v) in kernel {
        let c = x.coord(*p).clone();
        if !c.is_zero() {
            let factor = c.exact_div(v.coord(*p))?;
            x = x.try_sub(&v.scale(&factor)?)?;
        }
    }
    Ok(x)
}

/// Kernel and quotient of `S_0^m`, `m` the module rank, together with the
/// map `S_0` induces on the quotient.
pub fn nonequivariant_limit(family: &SeidelFamily) -> Result<NonEquivariantLimit, LimitError> {
    let s0 = family.instantiate(0)?.at_u_zero()?;
    let basis = s0.source().clone();
    let config = s0.config();
    let power = basis.len();
    let mut composite = GradedMap::identity(&basis, config);
    for _ in 0..power {
        composite = s0.compose(&composite)?;
    }
    let kernel_vecs = kernel(&basis, config, composite.matrix())?;

    let mut taken = Vec::new();
    let mut pivoted = Vec::new();
    for v in &kernel_vecs {
        let p = (0..basis.len())
            .rev()
            .find(|i| !taken.contains(i) && v.coord(*i).is_unit())
            .ok_or(LimitError::VerificationFailed)?;
        taken.push(p);
        pivoted.push((p, v.clone()));
    }
    let kept: Vec<usize> = (0..basis.len()).filter(|i| !taken.contains(i)).collect();
    let quotient_labels: Vec<String> = kept.iter().map(|&i| basis.label(i).to_string()).collect();

    let (induced, induced_det) = if kept.is_empty() {
        (None, None)
    } else {
        let qbasis = BasisSpec::new(
            quotient_labels.clone(),
            kept.iter().map(|&i| basis.degree(i)).collect(),
        )?;
        let mut matrix = linalg::zeros(config, kept.len(), kept.len());
        for (col, &j) in kept.iter().enumerate() {
            let image = reduce(&s0.column(j), &pivoted)?;
            for (row, &i) in kept.iter().enumerate() {
                matrix[row][col] = image.coord(i).clone();
            }
        }
        let map = GradedMap::new(qbasis.clone(), qbasis, config, s0.shift(), matrix)?;
        let det = linalg::det_cofactor(config, map.matrix());
        (Some(map), Some(det))
    };

    Ok(NonEquivariantLimit {
        space: family.space.clone(),
        power,
        quotient_rank: kept.len(),
        kernel: kernel_vecs,
        quotient_labels,
        induced,
        induced_det,
    })
}
