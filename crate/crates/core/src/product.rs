//! Equivariant quantum products generated by multiplication with a single
//! degree-2 class.

use std::fmt;

use thiserror::Error;

use crate::coeff::Coefficient;
use crate::module::{BasisSpec, GradedMap, ModuleElem, ModuleError};
use crate::ring::{RingConfig, RingElem};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProductError {
    #[error("basis element {label} is not generated by powers of the generator applied to the unit")]
    NotGenerated { label: String },
    #[error("rank-1 product expected without a generator, basis has {0} elements")]
    NoGenerator(usize),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// A product specified by the operator `x ↦ generator ∗ x`.
#[derive(Clone, Debug)]
pub struct GeneratorProduct<C: Coefficient> {
    pub basis: BasisSpec,
    pub unit: usize,
    /// Index of the generating class; `None` for a rank-1 module.
    pub generator: Option<usize>,
    pub op: GradedMap<C>,
    pub level: i64,
}

impl<C: Coefficient> GeneratorProduct<C> {
    pub fn config(&self) -> RingConfig {
        self.op.config()
    }
}

/// All structure constants `e_i ∗ e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductTable<C: Coefficient> {
    basis: BasisSpec,
    config: RingConfig,
    unit: usize,
    entries: Vec<Vec<ModuleElem<C>>>,
}

/// Expand a generator product into a full table.
///
/// Each `e_j` is written as `p_j(L) e_unit` by peeling the highest basis index
/// first; then `e_i ∗ e_j = p_j(L) e_i`.
pub fn product_expand<C: Coefficient>(
    g: &GeneratorProduct<C>,
) -> Result<ProductTable<C>, ProductError> {
    let basis = &g.basis;
    let config = g.config();
    let n = basis.len();
    let Some(_) = g.generator else {
        if n != 1 {
            return Err(ProductError::NoGenerator(n));
        }
        let unit = ModuleElem::basis_vector(basis, config, 0);
        return Ok(ProductTable {
            basis: basis.clone(),
            config,
            unit: 0,
            entries: vec![vec![unit]],
        });
    };

    // powers[k] = L^k(e_unit)
    let mut powers = vec![ModuleElem::basis_vector(basis, config, g.unit)];
    for k in 1..n {
        powers.push(g.op.apply(&powers[k - 1])?);
    }

    let mut polys: Vec<Vec<RingElem<C>>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut rest = ModuleElem::basis_vector(basis, config, j);
        let mut coeffs = vec![RingElem::zero(config); n];
        for k in (0..n).rev() {
            let c = rest.coord(k);
            if c.is_zero() {
                continue;
            }
            let lead = powers[k].coord(k);
            let not_gen = || ProductError::NotGenerated {
                label: basis.label(j).to_string(),
            };
            if !lead.is_unit() || powers[k].coords()[k + 1..].iter().any(|x| !x.is_zero()) {
                return Err(not_gen());
            }
            let factor = c.exact_div(lead).map_err(|_| not_gen())?;
            rest = rest.try_sub(&powers[k].scale(&factor)?)?;
            coeffs[k] = &coeffs[k] + &factor;
        }
        polys.push(coeffs);
    }

    let mut entries = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = ModuleElem::basis_vector(basis, config, i);
        let mut ops = vec![acc.clone()];
        for _ in 1..n {
            acc = g.op.apply(&acc)?;
            ops.push(acc.clone());
        }
        let row = polys
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&ops)
                    .filter(|(c, _)| !c.is_zero())
                    .try_fold(ModuleElem::zero(basis, config), |s, (c, v)| {
                        s.try_add(&v.scale(c)?)
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        entries.push(row);
    }
    Ok(ProductTable {
        basis: basis.clone(),
        config,
        unit: g.unit,
        entries,
    })
}

/// One failed product axiom.
#[derive(Debug, Clone, PartialEq)]
pub enum AxiomViolation {
    Unit { label: String, found: String },
    Commutativity { left: String, right: String },
    Associativity { i: String, j: String, k: String, lhs: String, rhs: String },
    Linearity { left: String, right: String, scalar: String },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Unit { label, found } => {
                write!(f, "unit: unit * {label} = {found}")
            }
            AxiomViolation::Commutativity { left, right } => {
                write!(f, "commutativity: {left} * {right}")
            }
            AxiomViolation::Associativity { i, j, k, lhs, rhs } => {
                write!(f, "associativity at ({i}, {j}, {k}): {lhs} vs {rhs}")
            }
            AxiomViolation::Linearity {
                left,
                right,
                scalar,
            } => write!(f, "linearity: ({scalar}*{left}) * {right}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl<C: Coefficient> ProductTable<C> {
    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn config(&self) -> RingConfig {
        self.config
    }

    pub fn entry(&self, i: usize, j: usize) -> &ModuleElem<C> {
        &self.entries[i][j]
    }

    pub fn entry_by_label(&self, i: &str, j: &str) -> Result<&ModuleElem<C>, ModuleError> {
        Ok(&self.entries[self.basis.index_of(i)?][self.basis.index_of(j)?])
    }

    /// Overwrite one structure constant (and its mirror); used for fault injection.
    pub fn set_entry(&mut self, i: usize, j: usize, value: ModuleElem<C>) {
        self.entries[j][i] = value.clone();
        self.entries[i][j] = value;
    }

    pub fn multiply(
        &self,
        x: &ModuleElem<C>,
        y: &ModuleElem<C>,
    ) -> Result<ModuleElem<C>, ModuleError> {
        if x.basis() != &self.basis || y.basis() != &self.basis {
            let found = if x.basis() != &self.basis { x.basis() } else { y.basis() };
            return Err(ModuleError::BasisMismatch {
                expected: self.basis.labels().join(","),
                found: found.labels().join(","),
            });
        }
        let mut acc = ModuleElem::zero(&self.basis, self.config);
        for (i, a) in x.coords().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coords().iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                acc = acc.try_add(&self.entries[i][j].scale(&a.try_mul(b)?)?)?;
            }
        }
        Ok(acc)
    }

    /// The operator `x ↦ e_label ∗ x` as a graded map.
    pub fn multiplication_operator(&self, label: &str) -> Result<GradedMap<C>, ModuleError> {
        let i = self.basis.index_of(label)?;
        let columns: Vec<_> = (0..self.basis.len())
            .map(|j| self.entries[i][j].clone())
            .collect();
        GradedMap::from_columns(
            self.basis.clone(),
            self.basis.clone(),
            self.config,
            self.basis.degree(i),
            &columns,
        )
    }

    /// Check unitality, graded commutativity and associativity on all basis
    /// elements, and linearity on a fixed set of sample scalars.
    pub fn check_axioms(&self) -> AxiomReport {
        let mut violations = Vec::new();
        let n = self.basis.len();
        let label = |i: usize| self.basis.label(i).to_string();
        let e = |i: usize| ModuleElem::basis_vector(&self.basis, self.config, i);

        for j in 0..n {
            if self.entries[self.unit][j] != e(j) {
                violations.push(AxiomViolation::Unit {
                    label: label(j),
                    found: self.entries[self.unit][j].render(),
                });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let sign_odd = (self.basis.degree(i) * self.basis.degree(j)) % 2 != 0;
                let swapped = if sign_odd {
                    self.entries[j][i].neg()
                } else {
                    self.entries[j][i].clone()
                };
                if self.entries[i][j] != swapped {
                    violations.push(AxiomViolation::Commutativity {
                        left: label(i),
                        right: label(j),
                    });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.multiply(&self.entries[i][j], &e(k));
                    let rhs = self.multiply(&e(i), &self.entries[j][k]);
                    match (lhs, rhs) {
                        (Ok(l), Ok(r)) if l == r => {}
                        (l, r) => violations.push(AxiomViolation::Associativity {
                            i: label(i),
                            j: label(j),
                            k: label(k),
                            lhs: l.map(|x| x.render()).unwrap_or_else(|e| e.to_string()),
                            rhs: r.map(|x| x.render()).unwrap_or_else(|e| e.to_string()),
                        }),
                    }
                }
            }
        }
        for s in sample_scalars(self.config) {
            for i in 0..n {
                for j in 0..n {
                    let sx = e(i).scale(&s).expect("same configuration");
                    let lhs = self.multiply(&sx, &e(j));
                    let rhs = self.entries[i][j].scale(&s);
                    if lhs.ok() != rhs.ok() {
                        violations.push(AxiomViolation::Linearity {
                            left: label(i),
                            right: label(j),
                            scalar: s.render(),
                        });
                    }
                }
            }
        }
        AxiomReport { violations }
    }

    /// Set `u = 0` in every structure constant.
    pub fn at_u_zero(&self) -> Result<Self, crate::ring::RingError> {
        let entries = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        let coords = x
                            .coords()
                            .iter()
                            .map(|c| c.at_u_zero())
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(ModuleElem::from_coords(&self.basis, self.config, coords)
                            .expect("same shape"))
                    })
                    .collect::<Result<Vec<_>, crate::ring::RingError>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ProductTable {
            entries,
            ..self.clone()
        })
    }

    /// Whether any structure constant involves `u`.
    pub fn has_u_terms(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .flat_map(|x| x.coords())
            .any(|c| c.terms().any(|(m, _)| m.u != 0))
    }

    /// `(left, right, rendered product)` rows for `i ≤ j`.
    pub fn rows(&self) -> Vec<(String, String, String)> {
        let n = self.basis.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                out.push((
                    self.basis.label(i).to_string(),
                    self.basis.label(j).to_string(),
                    self.entries[i][j].render(),
                ));
            }
        }
        out
    }
}

fn sample_scalars<C: Coefficient>(config: RingConfig) -> Vec<RingElem<C>> {
    let u = RingElem::u(config);
    let mut out = vec![RingElem::from_int(config, 3), &u + &RingElem::from_int(config, 2)];
    if let Ok(q) = RingElem::q(config) {
        out.push(&q * &u);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type Z = RingElem<BigInt>;

    // projective plane at level r: e1*e0 = e1, e1*e1 = e2 - r u e1, e1*e2 = q e0 - r u e2
    fn p2(r: i64) -> GeneratorProduct<BigInt> {
        let cfg = RingConfig::with_q(6).unwrap();
        let b = BasisSpec::standard(2);
        let m = |c: i64, q: i64, u: i64| Z::monomial(cfg, BigInt::from(c), q, u).unwrap();
        let zero = Z::zero(cfg);
        let matrix = vec![
            vec![zero.clone(), zero.clone(), m(1, 1, 0)],
            vec![m(1, 0, 0), m(-r, 0, 1), zero.clone()],
            vec![zero, m(1, 0, 0), m(-r, 0, 1)],
        ];
        GeneratorProduct {
            op: GradedMap::new(b.clone(), b.clone(), cfg, 2, matrix).unwrap(),
            basis: b,
            unit: 0,
            generator: Some(1),
            level: r,
        }
    }

    #[test]
    fn expand_projective_plane() {
        let t = product_expand(&p2(1)).unwrap();
        assert_eq!(t.entry(1, 1).render(), "-u*e1 + e2");
        assert_eq!(t.entry(0, 2).render(), "e2");
        assert!(t.check_axioms().passed());
        assert_eq!(t.multiplication_operator("e1").unwrap(), p2(1).op);
    }

    #[test]
    fn level_zero_is_nonequivariant() {
        let t = product_expand(&p2(0)).unwrap();
        assert_eq!(t.entry(2, 2).render(), "q*e1");
        assert!(!t.has_u_terms());
    }

    #[test]
    fn zero_product() {
        let t = product_expand(&p2(2)).unwrap();
        let z = ModuleElem::zero(t.basis(), t.config());
        let e2 = ModuleElem::basis_vector(t.basis(), t.config(), 2);
        assert!(t.multiply(&z, &e2).unwrap().is_zero());
    }

    #[test]
    fn perturbation_breaks_associativity() {
        let mut t = product_expand(&p2(0)).unwrap();
        let cfg = t.config();
        let bad = t
            .entry(1, 2)
            .try_add(
                &ModuleElem::basis_vector(t.basis(), cfg, 0)
                    .scale(&Z::monomial(cfg, BigInt::from(1), 1, 1).unwrap())
                    .unwrap(),
            )
            .unwrap();
        t.set_entry(1, 2, bad);
        let report = t.check_axioms();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, AxiomViolation::Associativity { .. })));
    }

    #[test]
    fn not_generated_detected() {
        let mut g = p2(0);
        let cfg = g.config();
        let b = g.basis.clone();
        // L(e0) = 2 e1: leading coefficient is not a unit over the integers
        let mut m = g.op.matrix().clone();
        m[1][0] = Z::from_int(cfg, 2);
        g.op = GradedMap::new(b.clone(), b, cfg, 2, m).unwrap();
        assert!(matches!(
            product_expand(&g),
            Err(ProductError::NotGenerated { .. })
        ));
    }
}
