use num_bigint::BigInt;
use num_rational::BigRational;

use super::det::{adjugate, det_two_ways};
use super::LimitError;
use crate::linalg::{self, Matrix};
use crate::module::{BasisChange, BasisSpec, ModuleElem};
use crate::ring::RingConfig;
use crate::seidel::SeidelFamily;
use crate::{IntElem, IntMap, IntModuleElem, RatElem, RatModuleElem};

/// Adjugate-product generators `x_k^p = (A_0* ⋯ A_{p-1}*) e_k` of an
/// injective family, written in an ordered basis.
#[derive(Debug, Clone)]
pub struct GeneratorSequence {
    pub space: String,
    pub basis: BasisSpec,
    pub config: RingConfig,
    /// `A_r` in the ordered basis, `r < p_max`.
    pub maps: Vec<IntMap>,
    pub adjugates: Vec<Matrix<BigInt>>,
    /// `det(A_r)`.
    pub dets: Vec<IntElem>,
    /// `D_p = det(A_0) ⋯ det(A_{p-1})` for `p = 0..=p_max`.
    pub det_products: Vec<IntElem>,
    /// `generators[p][k] = x_k^p`.
    pub generators: Vec<Vec<IntModuleElem>>,
}

impl GeneratorSequence {
    pub fn p_max(&self) -> usize {
        self.maps.len()
    }
}

fn columns(basis: &BasisSpec, config: RingConfig, m: &Matrix<BigInt>) -> Vec<IntModuleElem> {
    (0..basis.len())
        .map(|k| {
            ModuleElem::from_coords(basis, config, m.iter().map(|row| row[k].clone()).collect())
                .expect("square matrix over the basis")
        })
        .collect()
}

/// Build the sequence up to `p_max`, computing every `x^p` both as a direct
/// adjugate product and through the step recurrence
/// `x_k^{p+1} = Σ_j (A_p*)_{jk} x_j^p`.
pub fn generator_sequence(
    family: &SeidelFamily,
    change: Option<&BasisChange<BigInt>>,
    p_max: usize,
) -> Result<GeneratorSequence, LimitError> {
    let first = family.instantiate(0)?;
    let config = first.config();
    let basis = match change {
        Some(c) => c.new_basis().clone(),
        None => first.source().clone(),
    };
    let mut maps = Vec::new();
    let mut adjugates = Vec::new();
    let mut dets = Vec::new();
    for r in 0..p_max {
        let raw = family.instantiate(r as i64)?;
        let a = match change {
            Some(c) => raw.change_basis(c)?,
            None => raw,
        };
        let det = det_two_ways(config, a.matrix(), r as i64)?;
        if det.is_zero() {
            return Err(LimitError::NotInjective(r as i64));
        }
        adjugates.push(adjugate(config, a.matrix())?);
        dets.push(det);
        maps.push(a);
    }

    let mut det_products = vec![IntElem::one(config)];
    for d in &dets {
        let next = det_products.last().unwrap() * d;
        det_products.push(next);
    }

    let n = basis.len();
    let mut direct = linalg::identity(config, n);
    let mut generators = vec![columns(&basis, config, &direct)];
    for (p, adj) in adjugates.iter().enumerate() {
        direct = linalg::mat_mul(config, &direct, adj);
        let prev = &generators[p];
        let mut step = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = ModuleElem::zero(&basis, config);
            for (j, row) in adj.iter().enumerate() {
                if !row[k].is_zero() {
                    acc = acc.try_add(&prev[j].scale(&row[k])?)?;
                }
            }
            step.push(acc);
        }
        let by_product = columns(&basis, config, &direct);
        if let Some(k) = (0..n).find(|&k| by_product[k] != step[k]) {
            return Err(LimitError::GeneratorMismatch { p: p + 1, k });
        }
        generators.push(step);
    }
    Ok(GeneratorSequence {
        space: family.space.clone(),
        basis,
        config,
        maps,
        adjugates,
        dets,
        det_products,
        generators,
    })
}

fn localize(x: &IntElem) -> RatElem {
    x.map_coeffs(|c| BigRational::from_integer(c.clone()))
        .with_config(x.config().localized())
        .expect("localization admits every integer element")
}

fn localize_vec(x: &IntModuleElem) -> RatModuleElem {
    let coords: Vec<RatElem> = x.coords().iter().map(localize).collect();
    ModuleElem::from_coords(x.basis(), x.config().localized(), coords).expect("same shape")
}

fn divide(x: &IntModuleElem, d: &IntElem) -> Result<RatModuleElem, LimitError> {
    let d = localize(d);
    let lx = localize_vec(x);
    let coords = lx
        .coords()
        .iter()
        .map(|c| c.exact_div(&d))
        .collect::<Result<Vec<_>, _>>()?;
    let out = ModuleElem::from_coords(x.basis(), d.config(), coords)?;
    if out.scale(&d)? != lx {
        return Err(LimitError::VerificationFailed);
    }
    Ok(out)
}

/// `x_k^p / D_p` in the localized ring, checked by multiplying back.
pub fn normalized_generators(seq: &GeneratorSequence) -> Result<Vec<Vec<RatModuleElem>>, LimitError> {
    seq.generators
        .iter()
        .zip(&seq.det_products)
        .map(|(gens, d)| gens.iter().map(|x| divide(x, d)).collect())
        .collect()
}

/// The level-`p` presentation generator `x_0^p / (D_p · a_p)`, where `a_p`
/// is the only nonzero entry of the first column of `A_p`.
#[derive(Debug, Clone)]
pub struct PresentationGenerator {
    pub p: usize,
    pub denominator: IntElem,
    pub value: RatModuleElem,
}

/// Presentation generators for `p < p_max`, each checked against
/// `x_n^{p+1} / D_{p+1}`.
pub fn presentation_generators(seq: &GeneratorSequence) -> Result<Vec<PresentationGenerator>, LimitError> {
    let n = seq.basis.len();
    let mut out = Vec::new();
    for p in 0..seq.p_max() {
        let col = seq.maps[p].column(0);
        if col.coords()[..n - 1].iter().any(|c| !c.is_zero()) || col.coord(n - 1).is_zero() {
            return Err(LimitError::NotTriangularColumn(p));
        }
        let denominator = &seq.det_products[p] * col.coord(n - 1);
        let value = divide(&seq.generators[p][0], &denominator)?;
        let next = divide(&seq.generators[p + 1][n - 1], &seq.det_products[p + 1])?;
        if value != next {
            return Err(LimitError::PresentationMismatch { p });
        }
        out.push(PresentationGenerator {
            p,
            denominator,
            value,
        });
    }
    Ok(out)
}

/// Whether the level-`(p+1)` generators escape the level-`p` span.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainStep {
    pub p: usize,
    pub strict: bool,
    /// Index of a witnessing generator and the `u`-valuation of its
    /// coordinates over the level-`p` generators, when computable.
    pub witness: Option<(usize, Option<i64>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub steps: Vec<ChainStep>,
    /// First `p` at which the chain stops growing.
    pub stabilizes_at: Option<usize>,
}

impl ChainReport {
    pub fn strict_everywhere(&self) -> bool {
        self.stabilizes_at.is_none()
    }
}

/// In level-`p` coordinates the normalized level-`(p+1)` generators are the
/// columns of `adj(A_p) / det(A_p)`; the step is strict when some column
/// leaves the unlocalized integer ring.
pub fn chain_strictness(seq: &GeneratorSequence) -> ChainReport {
    let mut steps = Vec::new();
    for p in 0..seq.p_max() {
        let det = &seq.dets[p];
        let adj = &seq.adjugates[p];
        let mut witness = None;
        for k in 0..seq.basis.len() {
            let integral = adj.iter().all(|row| row[k].exact_div(det).is_ok());
            if integral {
                continue;
            }
            let ld = localize(det);
            let valuation = adj
                .iter()
                .filter(|row| !row[k].is_zero())
                .map(|row| localize(&row[k]).exact_div(&ld).ok().and_then(|x| x.u_valuation().ok()))
                .collect::<Option<Vec<_>>>()
                .and_then(|v| v.into_iter().min());
            witness = Some((k, valuation));
            break;
        }
        steps.push(ChainStep {
            p,
            strict: witness.is_some(),
            witness,
        });
    }
    let stabilizes_at = steps.iter().find(|s| !s.strict).map(|s| s.p);
    ChainReport {
        steps,
        stabilizes_at,
    }
}

/// `u`-valuation and `u = 0` part of `S_{p-1} ∘ … ∘ S_0 (e_label)`, `p = 1..=p_max`.
pub fn trajectory_valuations(
    family: &SeidelFamily,
    label: &str,
    p_max: usize,
) -> Result<Vec<(usize, i64, String)>, LimitError> {
    let first = family.instantiate(0)?;
    let mut x = ModuleElem::labelled(first.source(), first.config(), label)?;
    let mut out = Vec::new();
    for p in 1..=p_max {
        x = family.instantiate(p as i64 - 1)?.apply(&x)?;
        let v = x.u_valuation()?;
        let lead = x.map_coords(|c| c.truncate_u(v + 1)).render();
        out.push((p, v, lead));
    }
    Ok(out)
}
