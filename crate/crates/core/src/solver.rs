//! Re-deriving unknown product and Seidel coefficients from the intertwining
//! relation by sequential elimination, level by level.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::catalog::{check_slot, slot_covered, MapKind, SpaceSpec};
use crate::coeff::{rational_to_integer, Coefficient};
use crate::module::{ModuleElem, ModuleError};
use crate::poly::Poly;
use crate::product::{product_expand, GeneratorProduct, ProductError, ProductTable};
use crate::ring::{RingElem, RingError};
use crate::seidel::{intertwining_operator, Intertwining, SeidelError};
use crate::template::{self, Seed, TVar, TemplateError};
use crate::unipoly::UniPoly;
use crate::{IntMap, PolyExpr, SymbolicMap, TemplateCoeff};

/// A named unknown attached to a level. Ordered by level, then name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Unknown {
    pub level: i64,
    pub name: String,
}

impl Unknown {
    pub fn new(name: &str, level: i64) -> Self {
        Unknown {
            level,
            name: name.to_string(),
        }
    }
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.name, self.level)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("no solvable equation remains; residual system: {}; undetermined: {}", residual.join("; "), undetermined.join(", "))]
    Stuck {
        residual: Vec<String>,
        undetermined: Vec<String>,
    },
    #[error("inconsistent equation {0} = 0")]
    Inconsistent(String),
    #[error("solved value {unknown} = {value} is not an integer")]
    NonIntegral { unknown: String, value: String },
    #[error("slot {0}")]
    DegreeViolation(String),
    #[error("space has no degree-2 generator to intertwine with")]
    NoGenerator,
    #[error("at level {level}: {source}")]
    AtLevel {
        level: i64,
        #[source]
        source: Box<SolveError>,
    },
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Seidel(#[from] SeidelError),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// One coefficient of the residual required to vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct Equation {
    pub poly: PolyExpr,
    pub input: String,
    pub target: String,
    pub q_exp: i64,
    pub u_exp: i64,
}

impl Equation {
    /// Scale so that the largest monomial has a positive coefficient.
    pub fn normalized(mut self) -> Self {
        if self.poly.leading_coeff().is_some_and(|c| c.is_negative()) {
            self.poly = -self.poly;
        }
        self
    }

    pub fn render(&self) -> String {
        let mono = crate::ring::Mono::new(self.q_exp, self.u_exp).render();
        let slot = if mono.is_empty() {
            self.target.clone()
        } else {
            format!("{mono}*{}", self.target)
        };
        format!("{} = 0  [x = {}, coefficient of {slot}]", self.poly.render(), self.input)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConstraintSystem {
    pub equations: Vec<Equation>,
    pub seeds: BTreeMap<Unknown, BigRational>,
}

impl ConstraintSystem {
    pub fn unknowns(&self) -> BTreeSet<Unknown> {
        self.equations.iter().flat_map(|e| e.poly.vars()).collect()
    }

    pub fn listing(&self) -> Vec<String> {
        self.equations.iter().map(Equation::render).collect()
    }
}

/// Templates with unknowns, ready for constraint extraction.
#[derive(Debug, Clone)]
pub struct Ansatz {
    pub spec: SpaceSpec,
    pub unknowns: Vec<String>,
}

/// Add an unknown for every graded-legal `u`-correction slot that is
/// neither already present in the templates nor listed as a structural zero.
pub fn ansatz_build(base: &SpaceSpec, zeros: &[crate::catalog::Slot]) -> Result<Ansatz, SolveError> {
    for z in zeros {
        check_slot(base, z).map_err(SolveError::DegreeViolation)?;
    }
    let mut spec = base.clone();
    spec.zeros = zeros.to_vec();
    for slot in crate::catalog::correction_slots(base) {
        if zeros.contains(&slot) || slot_covered(base, &slot) {
            continue;
        }
        let name = format!(
            "{}_{}_{}_q{}u{}",
            match slot.map {
                MapKind::Product => "p",
                MapKind::Seidel => "s",
            },
            slot.input,
            slot.target,
            slot.q,
            slot.u
        );
        let t = match slot.map {
            MapKind::Product => spec.product.as_mut().expect("slot implies template"),
            MapKind::Seidel => &mut spec.seidel,
        };
        let k = spec.basis.index_of(&slot.input)?;
        let l = spec.basis.index_of(&slot.target)?;
        let term = RingElem::monomial(
            spec.config,
            TemplateCoeff::var(TVar::Unknown(name)),
            slot.q,
            slot.u,
        )?;
        let mut m = t.matrix().clone();
        m[l][k] = &m[l][k] + &term;
        *t = crate::GradedMap::new(t.source().clone(), t.target().clone(), t.config(), t.shift(), m)?;
    }
    let unknowns = spec.unknowns();
    Ok(Ansatz { spec, unknowns })
}

fn symbolic_product(spec: &SpaceSpec, r: i64) -> Result<ProductTable<PolyExpr>, SolveError> {
    let t = spec.product.as_ref().ok_or(SolveError::NoGenerator)?;
    let op = template::instantiate_symbolic(t, r, &spec.seeds)?;
    let g = GeneratorProduct {
        basis: spec.basis.clone(),
        unit: spec.unit_index(),
        generator: Some(spec.basis.index_of(spec.generator.as_ref().ok_or(SolveError::NoGenerator)?)?),
        op,
        level: r,
    };
    Ok(product_expand(&g)?)
}

/// Intertwining residual coefficients at level `r` for each input label.
pub fn extract_constraints(
    ansatz: &Ansatz,
    r: i64,
    alpha: &str,
    inputs: &[&str],
) -> Result<ConstraintSystem, SolveError> {
    let spec = &ansatz.spec;
    let seidel: SymbolicMap = spec.seidel_family().instantiate_symbolic(r)?;
    let p_r = symbolic_product(spec, r)?;
    let p_next = symbolic_product(spec, r + 1)?;
    let op = intertwining_operator(
        &seidel,
        &p_r,
        &p_next,
        &Intertwining::along(alpha, spec.weight.clone()),
    )?;
    let mut equations = Vec::new();
    for label in inputs {
        let x = ModuleElem::labelled(&spec.basis, spec.config, label)?;
        let res = op.apply(&x)?;
        for (l, c) in res.coords().iter().enumerate() {
            for (m, p) in c.terms() {
                equations.push(
                    Equation {
                        poly: p.clone(),
                        input: label.to_string(),
                        target: spec.basis.label(l).to_string(),
                        q_exp: m.q,
                        u_exp: m.u,
                    }
                    .normalized(),
                );
            }
        }
    }
    let mut seeds = BTreeMap::new();
    for s in spec.seeds.iter() {
        if let Some(level) = s.level {
            if level == r || level == r + 1 {
                let v = s.value.constant_value().expect("level seeds are numeric");
                seeds.insert(Unknown::new(&s.name, level), BigRational::from_integer(v));
            }
        }
    }
    Ok(ConstraintSystem { equations, seeds })
}

pub type Assignment = BTreeMap<Unknown, BigRational>;

fn substitute(eqs: &mut Vec<PolyExpr>, v: &Unknown, value: &PolyExpr) {
    for e in eqs.iter_mut() {
        if e.vars().contains(v) {
            *e = e.substitute(v, value);
        }
    }
    eqs.retain(|e| !e.is_zero());
}

fn univariate(p: &PolyExpr, v: &Unknown) -> UniPoly {
    UniPoly::new(
        p.coefficients_in(v)
            .iter()
            .map(|c| c.constant_value().unwrap_or_else(BigRational::zero))
            .collect(),
    )
}

/// Solve by repeated pivoting:
///
/// 1. an equation linear in a single unknown fixes it;
/// 2. an equation linear in an unknown with a constant coefficient eliminates it;
/// 3. univariate equations in one unknown are combined by gcd and reduced to
///    their squarefree part, which must be linear.
/// 4. otherwise a lexicographic Gröbner basis of the remaining equations
///    yields a univariate polynomial in the smallest unknown, treated as in 3.
///
/// Candidates are scanned in `(level, name)` order.
pub fn solve_sequential(system: &ConstraintSystem) -> Result<Assignment, SolveError> {
    let all: BTreeSet<Unknown> = system
        .unknowns()
        .into_iter()
        .chain(system.seeds.keys().cloned())
        .collect();
    let mut eqs: Vec<PolyExpr> = system.equations.iter().map(|e| e.poly.clone()).collect();
    // unknown -> value, possibly in terms of later-eliminated unknowns
    let mut bindings: Vec<(Unknown, PolyExpr)> = Vec::new();
    for (v, val) in &system.seeds {
        let p = PolyExpr::constant(val.clone());
        substitute(&mut eqs, v, &p);
        bindings.push((v.clone(), p));
    }
    loop {
        if let Some(bad) = eqs.iter().find(|e| e.is_constant()) {
            return Err(SolveError::Inconsistent(bad.render()));
        }
        if eqs.is_empty() {
            break;
        }
        match find_pivot(&eqs) {
            Some((v, value)) => {
                substitute(&mut eqs, &v, &value);
                bindings.push((v, value));
            }
            None => {
                return Err(SolveError::Stuck {
                    residual: eqs.iter().map(|e| format!("{} = 0", e.render())).collect(),
                    undetermined: Vec::new(),
                })
            }
        }
    }
    // back-substitute in reverse elimination order
    let mut solved: BTreeMap<Unknown, PolyExpr> = BTreeMap::new();
    for (v, value) in bindings.iter().rev() {
        let resolved = value.substitute_all(&solved);
        solved.insert(v.clone(), resolved);
    }
    let mut out = Assignment::new();
    let mut undetermined = Vec::new();
    for v in &all {
        match solved.get(v).and_then(|p| p.constant_value()) {
            Some(c) => {
                out.insert(v.clone(), c);
            }
            None => undetermined.push(v.to_string()),
        }
    }
    if !undetermined.is_empty() {
        return Err(SolveError::Stuck {
            residual: Vec::new(),
            undetermined,
        });
    }
    Ok(out)
}

fn find_pivot(eqs: &[PolyExpr]) -> Option<(Unknown, PolyExpr)> {
    // 1. single unknown, linear
    let mut single: Vec<(Unknown, &PolyExpr)> = eqs
        .iter()
        .filter_map(|e| {
            let vars = e.vars();
            (vars.len() == 1).then(|| (vars.into_iter().next().unwrap(), e))
        })
        .collect();
    single.sort_by(|a, b| a.0.cmp(&b.0));
    for (v, e) in &single {
        if let Some((a, b)) = e.split_linear(v) {
            if let Some(a) = a.constant_value() {
                return Some((v.clone(), b.scale_rational(&(-a.recip()))?));
            }
        }
    }
    // 2. linear elimination with a constant coefficient
    let mut candidates: Vec<(Unknown, usize)> = Vec::new();
    for (i, e) in eqs.iter().enumerate() {
        for v in e.vars() {
            if let Some((a, _)) = e.split_linear(&v) {
                if a.is_constant() {
                    candidates.push((v, i));
                }
            }
        }
    }
    candidates.sort();
    if let Some((v, i)) = candidates.into_iter().next() {
        let (a, b) = eqs[i].split_linear(&v)?;
        let a = a.constant_value()?;
        return Some((v, b.scale_rational(&(-a.recip()))?));
    }
    // 3. squarefree part of the gcd of univariate equations
    let mut by_var: BTreeMap<Unknown, UniPoly> = BTreeMap::new();
    for (v, e) in &single {
        let p = univariate(e, v);
        let g = match by_var.get(v) {
            Some(prev) => prev.gcd(&p),
            None => p,
        };
        by_var.insert(v.clone(), g);
    }
    for (v, p) in by_var {
        let sf = p.squarefree_part();
        if sf.degree() == Some(1) {
            let c = sf.coeffs();
            return Some((v, PolyExpr::constant(-(&c[0] / &c[1]))));
        }
    }
    // 4. lexicographic elimination down to one unknown
    crate::groebner::eliminate_to_root(eqs).map(|(v, c)| (v, PolyExpr::constant(c)))
}

/// Numeric families produced by the level induction.
#[derive(Debug, Clone)]
pub struct SolvedFamilies {
    pub space: String,
    pub values: BTreeMap<Unknown, BigInt>,
    /// Generator operator at levels `0..=r_max + 1`.
    pub products: Vec<IntMap>,
    /// Seidel map at levels `0..=r_max`.
    pub seidel: Vec<IntMap>,
    pub systems: Vec<ConstraintSystem>,
}

impl SolvedFamilies {
    /// Solved values of one unknown, by level.
    pub fn series(&self, name: &str) -> Vec<(i64, BigInt)> {
        self.values
            .iter()
            .filter(|(u, _)| u.name == name)
            .map(|(u, v)| (u.level, v.clone()))
            .collect()
    }
}

/// Extract, solve and carry values forward for `r = 0..=r_max`.
pub fn induct_over_r(ansatz: &Ansatz, r_max: i64) -> Result<SolvedFamilies, SolveError> {
    induct_with_inputs(ansatz, r_max, None)
}

/// As [`induct_over_r`], processing the input basis labels in the given order.
pub fn induct_with_inputs(
    ansatz: &Ansatz,
    r_max: i64,
    inputs: Option<&[&str]>,
) -> Result<SolvedFamilies, SolveError> {
    let spec = &ansatz.spec;
    let alpha = spec.generator.clone().ok_or(SolveError::NoGenerator)?;
    let labels: Vec<&str> = match inputs {
        Some(i) => i.to_vec(),
        None => spec.basis.labels().iter().map(String::as_str).collect(),
    };
    let mut known = Assignment::new();
    let mut systems = Vec::new();
    for r in 0..=r_max {
        let at = |e: SolveError| SolveError::AtLevel {
            level: r,
            source: Box::new(e),
        };
        let mut sys = extract_constraints(ansatz, r, &alpha, &labels).map_err(at)?;
        for (u, v) in &known {
            if u.level == r || u.level == r + 1 {
                sys.seeds.insert(u.clone(), v.clone());
            }
        }
        let solved = solve_sequential(&sys).map_err(at)?;
        known.extend(solved);
        let missing: Vec<String> = ansatz
            .unknowns
            .iter()
            .filter(|n| !spec.seeds.iter().any(|s| s.level.is_none() && &s.name == *n))
            .map(|n| Unknown::new(n, r))
            .filter(|u| !known.contains_key(u))
            .map(|u| u.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(at(SolveError::Stuck {
                residual: sys.listing(),
                undetermined: missing,
            }));
        }
        systems.push(sys);
    }
    let mut values = BTreeMap::new();
    for (u, v) in &known {
        let i = rational_to_integer(v).ok_or_else(|| SolveError::NonIntegral {
            unknown: u.to_string(),
            value: v.to_string(),
        })?;
        values.insert(u.clone(), i);
    }
    let bound: BTreeMap<Unknown, PolyExpr> = known
        .iter()
        .map(|(u, v)| (u.clone(), Poly::constant(v.clone())))
        .collect();
    let numeric = |t: &crate::TemplateMap, r: i64| -> Result<IntMap, SolveError> {
        let s = template::instantiate_symbolic(t, r, &spec.seeds)?;
        Ok(template::to_numeric(&template::bind(&s, &bound))?)
    };
    let product_t = spec.product.as_ref().ok_or(SolveError::NoGenerator)?;
    let products = (0..=r_max + 1)
        .map(|r| numeric(product_t, r))
        .collect::<Result<Vec<_>, _>>()?;
    let seidel = (0..=r_max)
        .map(|r| numeric(&spec.seidel, r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SolvedFamilies {
        space: spec.id.clone(),
        values,
        products,
        seidel,
        systems,
    })
}

/// Seeds that fix a value at one level only.
pub fn level_seeds(seeds: &[Seed]) -> Vec<&Seed> {
    seeds.iter().filter(|s| s.level.is_some()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn stuck_on_pure_quadratic() {
        let x = Unknown::new("X", 0);
        let p = PolyExpr::var(x.clone()) * PolyExpr::var(x) - PolyExpr::from_int(1);
        let sys = ConstraintSystem {
            equations: vec![Equation {
                poly: p,
                input: "e0".into(),
                target: "e0".into(),
                q_exp: 0,
                u_exp: 0,
            }],
            seeds: BTreeMap::new(),
        };
        assert!(matches!(solve_sequential(&sys), Err(SolveError::Stuck { .. })));
    }

    #[test]
    fn inconsistent_constant() {
        let x = Unknown::new("X", 0);
        let sys = ConstraintSystem {
            equations: vec![Equation {
                poly: PolyExpr::var(x.clone()) - PolyExpr::var(x) + PolyExpr::from_int(2),
                input: "e0".into(),
                target: "e0".into(),
                q_exp: 0,
                u_exp: 0,
            }],
            seeds: BTreeMap::new(),
        };
        assert!(matches!(solve_sequential(&sys), Err(SolveError::Inconsistent(_))));
    }

    #[test]
    fn projective_plane_equations() {
        let spec = catalog::projective_space_ansatz(2);
        let ansatz = ansatz_build(&spec, &spec.zeros).unwrap();
        let sys = extract_constraints(&ansatz, 3, "e1", &["e1"]).unwrap();
        assert_eq!(sys.equations.len(), 1);
        assert_eq!(sys.equations[0].poly.render(), "alpha[3] + F[3] - 1");
        let sys = extract_constraints(&ansatz, 3, "e1", &["e0"]).unwrap();
        let rendered: Vec<String> = sys.equations.iter().map(|e| e.poly.render()).collect();
        assert!(rendered.contains(&"gamma[4] + A[3]".to_string()), "{rendered:?}");
        assert!(rendered.contains(&"A[3]*alpha[4] + 16".to_string()), "{rendered:?}");
    }

    #[test]
    fn projective_plane_level_with_seeds() {
        let spec = catalog::projective_space_ansatz(2);
        let ansatz = ansatz_build(&spec, &spec.zeros).unwrap();
        let r = 2;
        let mut sys = extract_constraints(&ansatz, r, "e1", &["e0", "e1", "e2"]).unwrap();
        sys.seeds.insert(Unknown::new("alpha", r), q(-r));
        sys.seeds.insert(Unknown::new("gamma", r), q(-r));
        let sol = solve_sequential(&sys).unwrap();
        assert_eq!(sol[&Unknown::new("F", r)], q(r + 1));
        assert_eq!(sol[&Unknown::new("A", r)], q(r + 1));
        assert_eq!(sol[&Unknown::new("alpha", r + 1)], q(-(r + 1)));
        assert_eq!(sol[&Unknown::new("gamma", r + 1)], q(-(r + 1)));
    }

    #[test]
    fn empty_zero_list_registers_every_slot() {
        let spec = catalog::projective_space(2);
        let ansatz = ansatz_build(&spec, &[]).unwrap();
        let slots = catalog::correction_slots(&spec);
        let covered = slots.iter().filter(|s| slot_covered(&spec, s)).count();
        assert_eq!(ansatz.unknowns.len(), slots.len() - covered);
    }
}
