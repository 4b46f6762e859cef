//! Space definitions: the built-in example spaces and a plain-text
//! definition format (`.eqh`).

mod parse;
mod render;

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::module::{BasisChange, BasisSpec, GradedMap, ModuleElem, ModuleError};
use crate::product::GeneratorProduct;
use crate::ring::{RingConfig, RingElem};
use crate::seidel::{SeidelFamily, WeightRule};
use crate::template::{self, level_plus, unknown, Seed, TVar};
use crate::{IntModuleElem, TemplateCoeff, TemplateMap};

pub use parse::parse_space;
pub use render::render_space;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown space `{0}`")]
    UnknownSpace(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("syntax error at {line}:{col}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        line: usize,
        col: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("semantic error at line {line}: {message}")]
    Semantic { line: usize, message: String },
    #[error("invalid space: {0}")]
    Invalid(String),
}

/// Which map a slot belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MapKind {
    Product,
    Seidel,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapKind::Product => f.write_str("product"),
            MapKind::Seidel => f.write_str("seidel"),
        }
    }
}

/// A single coefficient position: monomial `q^q u^u` at `target` in the
/// image of `input`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub map: MapKind,
    pub input: String,
    pub target: String,
    pub q: i64,
    pub u: i64,
}

impl Slot {
    pub fn render(&self) -> String {
        let mono = crate::ring::Mono::new(self.q, self.u).render();
        if mono.is_empty() {
            format!("{} {} -> {}", self.map, self.input, self.target)
        } else {
            format!("{} {} -> {}*{}", self.map, self.input, mono, self.target)
        }
    }
}

/// Ordered basis used for limit computations, written in the standard basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitBasis {
    pub labels: Vec<String>,
    pub vectors: Vec<IntModuleElem>,
}

impl LimitBasis {
    pub fn change(&self) -> Result<BasisChange<BigInt>, ModuleError> {
        BasisChange::new(self.labels.clone(), &self.vectors)
    }
}

/// Everything known about one space.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSpec {
    pub id: String,
    pub config: RingConfig,
    pub basis: BasisSpec,
    pub unit: String,
    /// Degree-2 class generating the product; `None` for rank-1 spaces.
    pub generator: Option<String>,
    /// Template for `x ↦ generator ∗ x` at level `r`.
    pub product: Option<TemplateMap>,
    /// Template for the Seidel map from level `r` to `r + 1`.
    pub seidel: TemplateMap,
    /// Template for the inverse map from level `r + 1` back to `r`.
    pub inverse: Option<TemplateMap>,
    pub seeds: Vec<Seed>,
    pub zeros: Vec<Slot>,
    pub limit: Option<LimitBasis>,
    pub weight: WeightRule,
}

impl SpaceSpec {
    pub fn maslov_shift(&self) -> i64 {
        self.seidel.shift()
    }

    pub fn seidel_family(&self) -> SeidelFamily {
        SeidelFamily::new(&self.id, self.seidel.clone(), self.seeds.clone())
    }

    pub fn inverse_family(&self) -> Option<SeidelFamily> {
        self.inverse
            .as_ref()
            .map(|t| SeidelFamily::new(&self.id, t.clone(), self.seeds.clone()))
    }

    pub fn unit_index(&self) -> usize {
        self.basis.index_of(&self.unit).expect("validated unit label")
    }

    /// Numeric generator product at level `r`.
    pub fn product_at(&self, r: i64) -> Result<GeneratorProduct<BigInt>, crate::template::TemplateError> {
        let op = match &self.product {
            Some(t) => template::instantiate_numeric(t, r, &self.seeds)?,
            None => GradedMap::identity(&self.basis, self.config),
        };
        Ok(GeneratorProduct {
            basis: self.basis.clone(),
            unit: self.unit_index(),
            generator: self
                .generator
                .as_ref()
                .map(|g| self.basis.index_of(g).expect("validated generator")),
            op,
            level: r,
        })
    }

    /// Names of unknowns occurring in any template.
    pub fn unknowns(&self) -> Vec<String> {
        let mut names = Vec::new();
        for t in [Some(&self.seidel), self.product.as_ref(), self.inverse.as_ref()]
            .into_iter()
            .flatten()
        {
            names.extend(template::unknown_names(t));
        }
        names.sort();
        names.dedup();
        names
    }

    pub fn template(&self, kind: MapKind) -> Option<&TemplateMap> {
        match kind {
            MapKind::Product => self.product.as_ref(),
            MapKind::Seidel => Some(&self.seidel),
        }
    }

    /// Check all structural invariants.
    pub fn validate(&self) -> Result<(), CatalogError> {
        let invalid = |m: String| CatalogError::Invalid(m);
        self.basis
            .index_of(&self.unit)
            .map_err(|e| invalid(e.to_string()))?;
        match (&self.generator, &self.product) {
            (Some(g), Some(p)) => {
                let i = self.basis.index_of(g).map_err(|e| invalid(e.to_string()))?;
                if self.basis.degree(i) != 2 || p.shift() != 2 {
                    return Err(invalid(format!("generator {g} must have degree 2")));
                }
            }
            (None, None) => {
                if self.basis.len() != 1 {
                    return Err(invalid("spaces of rank above 1 need a generator".into()));
                }
            }
            _ => return Err(invalid("generator and [product] go together".into())),
        }
        for (name, t) in [
            ("seidel", Some(&self.seidel)),
            ("product", self.product.as_ref()),
            ("inverse", self.inverse.as_ref()),
        ] {
            let Some(t) = t else { continue };
            if t.source() != &self.basis || t.target() != &self.basis || t.config() != self.config {
                return Err(invalid(format!("[{name}] does not match the space")));
            }
            let report = t.check_grading();
            if !report.passed() {
                return Err(invalid(format!("[{name}] {report}")));
            }
        }
        if let Some(inv) = &self.inverse {
            if inv.shift() != -self.maslov_shift() {
                return Err(invalid("inverse shift must negate the Maslov shift".into()));
            }
        }
        let names = self.unknowns();
        for s in &self.seeds {
            if !names.contains(&s.name) {
                return Err(invalid(format!("seed for unregistered unknown {}", s.name)));
            }
        }
        for z in &self.zeros {
            check_slot(self, z).map_err(invalid)?;
        }
        if let Some(l) = &self.limit {
            l.change().map_err(|e| invalid(e.to_string()))?;
        }
        Ok(())
    }
}

/// Slot degree requirement and exponent legality.
pub(crate) fn check_slot(spec: &SpaceSpec, slot: &Slot) -> Result<(), String> {
    let t = spec
        .template(slot.map)
        .ok_or_else(|| format!("no {} map for slot {}", slot.map, slot.render()))?;
    let k = spec.basis.index_of(&slot.input).map_err(|e| e.to_string())?;
    let l = spec.basis.index_of(&slot.target).map_err(|e| e.to_string())?;
    let mono = crate::ring::Mono::new(slot.q, slot.u);
    if !spec.config.is_legal(mono) {
        return Err(format!("slot {} is not a legal monomial", slot.render()));
    }
    let expected = t.shift() + spec.basis.degree(k) - spec.basis.degree(l);
    if spec.config.monomial_degree(mono) != expected {
        return Err(format!(
            "slot {} has degree {}, expected {expected}",
            slot.render(),
            spec.config.monomial_degree(mono)
        ));
    }
    Ok(())
}

/// Identifiers accepted by [`builtin_by_name`].
pub const BUILTIN_IDS: [&str; 4] = [
    "complex_plane",
    "complex_space(n)",
    "projective_space(n)",
    "taut_line_bundle(n)",
];

/// Look up a builtin by `name` or `name(n)`.
pub fn builtin_by_name(name: &str) -> Result<SpaceSpec, CatalogError> {
    let name = name.trim();
    let (base, param) = match name.find('(') {
        Some(i) if name.ends_with(')') => {
            let p = name[i + 1..name.len() - 1]
                .trim()
                .parse::<usize>()
                .map_err(|_| CatalogError::BadParam(name.to_string()))?;
            (&name[..i], Some(p))
        }
        Some(_) => return Err(CatalogError::BadParam(name.to_string())),
        None => (name, None),
    };
    builtin(base, param)
}

/// Built-in space with closed-form product and Seidel data.
pub fn builtin(id: &str, param: Option<usize>) -> Result<SpaceSpec, CatalogError> {
    let need = |p: Option<usize>| match p {
        Some(n) if n >= 1 => Ok(n),
        Some(n) => Err(CatalogError::BadParam(format!("{id}({n}): n must be at least 1"))),
        None => Err(CatalogError::BadParam(format!("{id} needs a dimension, e.g. {id}(2)"))),
    };
    match id {
        "complex_plane" => match param {
            None => Ok(complex_plane()),
            Some(_) => Err(CatalogError::BadParam("complex_plane takes no dimension".into())),
        },
        "complex_space" => Ok(complex_space(need(param)?)),
        "projective_space" => Ok(projective_space(need(param)?)),
        "taut_line_bundle" => Ok(taut_line_bundle(need(param)?)),
        _ => Err(CatalogError::UnknownSpace(id.to_string())),
    }
}

/// Builtins with the unknown-coefficient ansatz used by the solver.
pub fn builtin_ansatz_by_name(name: &str) -> Result<SpaceSpec, CatalogError> {
    let spec = builtin_by_name(name)?;
    let n = spec.basis.len() - 1;
    if spec.id.starts_with("projective_space") {
        Ok(projective_space_ansatz(n))
    } else if spec.id.starts_with("taut_line_bundle") {
        Ok(taut_line_bundle_ansatz(n))
    } else {
        Ok(spec)
    }
}

type Entry = (TemplateCoeff, i64, i64, usize);

/// Helper building a template from per-column `(coeff, q, u, target)` lists.
struct TemplateBuilder {
    config: RingConfig,
    basis: BasisSpec,
}

impl TemplateBuilder {
    fn map(&self, shift: i64, columns: Vec<Vec<Entry>>) -> TemplateMap {
        let n = self.basis.len();
        let mut matrix = vec![vec![RingElem::zero(self.config); n]; n];
        for (k, col) in columns.into_iter().enumerate() {
            for (c, q, u, l) in col {
                let t = RingElem::from_terms(self.config, [(c, q, u)]).expect("legal builtin term");
                matrix[l][k] = &matrix[l][k] + &t;
            }
        }
        GradedMap::new(self.basis.clone(), self.basis.clone(), self.config, shift, matrix)
            .expect("builtin template is graded")
    }
}

fn int(n: i64) -> TemplateCoeff {
    TemplateCoeff::from_int(n)
}

fn r_power(k: i64, e: usize) -> TemplateCoeff {
    (0..e).fold(int(1), |acc, _| acc * level_plus(k))
}

fn neg_r() -> TemplateCoeff {
    -TemplateCoeff::var(TVar::Level)
}

fn rank_one(id: &str, n: usize) -> SpaceSpec {
    let config = RingConfig::without_q();
    let basis = BasisSpec::standard(0);
    let b = TemplateBuilder {
        config,
        basis: basis.clone(),
    };
    let seidel = b.map(2 * n as i64, vec![vec![(r_power(1, n), 0, n as i64, 0)]]);
    SpaceSpec {
        id: id.to_string(),
        config,
        basis,
        unit: "e0".into(),
        generator: None,
        product: None,
        seidel,
        inverse: None,
        seeds: Vec::new(),
        zeros: Vec::new(),
        limit: None,
        weight: WeightRule::default(),
    }
}

/// ℂ: the Seidel map multiplies the point class by `(r+1)u`.
pub fn complex_plane() -> SpaceSpec {
    rank_one("complex_plane", 1)
}

/// ℂⁿ: the Seidel map multiplies the point class by `((r+1)u)^n`.
pub fn complex_space(n: usize) -> SpaceSpec {
    if n == 1 {
        return complex_plane();
    }
    rank_one(&format!("complex_space({n})"), n)
}

fn projective_common(n: usize) -> (RingConfig, BasisSpec, TemplateBuilder) {
    let config = RingConfig::with_q(2 * (n as i64 + 1)).expect("positive even degree");
    let basis = BasisSpec::standard(n);
    let b = TemplateBuilder {
        config,
        basis: basis.clone(),
    };
    (config, basis, b)
}

fn projective_inverse(b: &TemplateBuilder, n: usize) -> TemplateMap {
    let mut cols: Vec<Vec<Entry>> = vec![vec![(int(1), -1, 0, 1.min(n))]];
    for k in 1..=n {
        let mut col = vec![(-level_plus(1), -1, 1, k)];
        if k < n {
            col.push((int(1), -1, 0, k + 1));
        } else {
            col.push((int(1), 0, 0, 0));
        }
        cols.push(col);
    }
    b.map(-2 * n as i64, cols)
}

/// ℙⁿ with closed-form product, Seidel map and inverse.
pub fn projective_space(n: usize) -> SpaceSpec {
    let (config, basis, b) = projective_common(n);
    let mut product: Vec<Vec<Entry>> = vec![vec![(int(1), 0, 0, 1)]];
    for k in 1..=n {
        let mut col = vec![(neg_r(), 0, 1, k)];
        col.push(if k < n {
            (int(1), 0, 0, k + 1)
        } else {
            (int(1), 1, 0, 0)
        });
        product.push(col);
    }
    let mut seidel: Vec<Vec<Entry>> = vec![(0..=n)
        .map(|l| (r_power(1, n - l), 0, (n - l) as i64, l))
        .collect()];
    for k in 1..=n {
        seidel.push(
            (0..k)
                .map(|l| (r_power(1, k - 1 - l), 1, (k - 1 - l) as i64, l))
                .collect(),
        );
    }
    SpaceSpec {
        id: format!("projective_space({n})"),
        config,
        unit: "e0".into(),
        generator: Some("e1".into()),
        product: Some(b.map(2, product)),
        seidel: b.map(2 * n as i64, seidel),
        inverse: Some(projective_inverse(&b, n)),
        seeds: Vec::new(),
        zeros: Vec::new(),
        limit: None,
        weight: WeightRule::default(),
        basis,
    }
}

fn taut_common(n: usize) -> (RingConfig, BasisSpec, TemplateBuilder, LimitBasis) {
    let config = RingConfig::with_q(2 * n as i64).expect("positive even degree");
    let basis = BasisSpec::standard(n);
    let b = TemplateBuilder {
        config,
        basis: basis.clone(),
    };
    let mut g0 = ModuleElem::basis_vector(&basis, config, n);
    g0 = g0
        .try_add(
            &ModuleElem::basis_vector(&basis, config, 0)
                .scale(&RingElem::q(config).expect("q present"))
                .expect("same ring"),
        )
        .expect("same basis");
    let mut vectors = vec![g0];
    vectors.extend((1..=n).map(|k| ModuleElem::basis_vector(&basis, config, k)));
    let limit = LimitBasis {
        labels: (0..=n).map(|k| format!("g{k}")).collect(),
        vectors,
    };
    (config, basis, b, limit)
}

fn taut_seidel(b: &TemplateBuilder, n: usize, corner: TemplateCoeff) -> TemplateMap {
    let mut cols: Vec<Vec<Entry>> = (0..n)
        .map(|k| vec![(int(-1), 0, 0, k + 1), (level_plus(1), 0, 1, k)])
        .collect();
    cols.push(vec![
        (int(1), 1, 0, 1),
        (level_plus(1), 0, 1, n),
        (corner, 1, 1, 0),
    ]);
    b.map(2, cols)
}

fn taut_product(b: &TemplateBuilder, n: usize, corner: TemplateCoeff) -> TemplateMap {
    let mut cols: Vec<Vec<Entry>> = (0..n).map(|k| vec![(int(1), 0, 0, k + 1)]).collect();
    cols.push(vec![(int(-1), 1, 0, 1), (corner, 1, 1, 0)]);
    b.map(2, cols)
}

/// The tautological line bundle over ℙⁿ.
pub fn taut_line_bundle(n: usize) -> SpaceSpec {
    let (config, basis, b, limit) = taut_common(n);
    SpaceSpec {
        id: format!("taut_line_bundle({n})"),
        config,
        unit: "e0".into(),
        generator: Some("e1".into()),
        product: Some(taut_product(&b, n, TemplateCoeff::var(TVar::Level))),
        seidel: taut_seidel(&b, n, -level_plus(1)),
        inverse: None,
        seeds: Vec::new(),
        zeros: Vec::new(),
        limit: Some(limit),
        weight: WeightRule::default(),
        basis,
    }
}

/// Every graded-legal `u`-correction slot (`q`-exponent ≥ 0, `u`-exponent ≥ 1)
/// of the product and Seidel templates.
pub fn correction_slots(spec: &SpaceSpec) -> Vec<Slot> {
    let mut out = Vec::new();
    for kind in [MapKind::Product, MapKind::Seidel] {
        let Some(t) = spec.template(kind) else { continue };
        for k in 0..spec.basis.len() {
            for l in 0..spec.basis.len() {
                let d = t.shift() + spec.basis.degree(k) - spec.basis.degree(l);
                for (q, u) in monomials_of_degree(spec.config, d) {
                    out.push(Slot {
                        map: kind,
                        input: spec.basis.label(k).to_string(),
                        target: spec.basis.label(l).to_string(),
                        q,
                        u,
                    });
                }
            }
        }
    }
    out
}

fn monomials_of_degree(config: RingConfig, d: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let qd = config.q_degree().unwrap_or(0);
    let max_a = if qd > 0 { d.max(0) / qd } else { 0 };
    for a in 0..=max_a {
        let rest = d - a * qd;
        if rest >= 2 && rest % 2 == 0 {
            out.push((a, rest / 2));
        }
    }
    out
}

/// Whether the template entry at the slot already has that monomial.
pub(crate) fn slot_covered(spec: &SpaceSpec, slot: &Slot) -> bool {
    let Some(t) = spec.template(slot.map) else {
        return false;
    };
    let (Ok(k), Ok(l)) = (
        spec.basis.index_of(&slot.input),
        spec.basis.index_of(&slot.target),
    ) else {
        return false;
    };
    !num_traits::Zero::is_zero(&t.entry(l, k).coeff(slot.q, slot.u))
}

fn with_complement_zeros(mut spec: SpaceSpec) -> SpaceSpec {
    spec.zeros = correction_slots(&spec)
        .into_iter()
        .filter(|s| !slot_covered(&spec, s))
        .collect();
    spec
}

fn alpha_name(k: usize) -> String {
    if k == 1 {
        "alpha".into()
    } else {
        format!("alpha{k}")
    }
}

/// ℙⁿ with unknown `u`-corrections; for n = 2 the unknowns are
/// `alpha, gamma, A, B, F`.
pub fn projective_space_ansatz(n: usize) -> SpaceSpec {
    let (_, _, b) = projective_common(n);
    let mut spec = projective_space(n);
    let mut product: Vec<Vec<Entry>> = vec![vec![(int(1), 0, 0, 1)]];
    let mut seeds = Vec::new();
    for k in 1..=n {
        let name = if k == n { "gamma".to_string() } else { alpha_name(k) };
        let mut col = vec![(unknown(&name), 0, 1, k)];
        col.push(if k < n {
            (int(1), 0, 0, k + 1)
        } else {
            (int(1), 1, 0, 0)
        });
        product.push(col);
        seeds.push(Seed::at_level(&name, 0, 0));
    }
    let mut s0: Vec<Entry> = vec![(int(1), 0, 0, n), (unknown("B"), 0, n as i64, 0)];
    for l in 1..n {
        let name = if l == n - 1 { "A".to_string() } else { format!("A{l}") };
        s0.push((unknown(&name), 0, (n - l) as i64, l));
    }
    seeds.push(Seed::family("B", r_power(1, n)));
    let mut seidel = vec![s0];
    for k in 1..=n {
        let mut col: Vec<Entry> = vec![(int(1), 1, 0, k - 1)];
        for l in 0..k.saturating_sub(1) {
            let name = if k == n && l == 0 {
                "F".to_string()
            } else {
                format!("F{k}{l}")
            };
            col.push((unknown(&name), 1, (k - 1 - l) as i64, l));
        }
        seidel.push(col);
    }
    spec.product = Some(b.map(2, product));
    spec.seidel = b.map(2 * n as i64, seidel);
    spec.seeds = seeds;
    with_complement_zeros(spec)
}

/// O(−1) → ℙⁿ with unknown product coefficient `c` and Seidel coefficient `d`
/// in the `u q e0` slots; the fibre diagonals `(r+1)u` are given.
pub fn taut_line_bundle_ansatz(n: usize) -> SpaceSpec {
    let (_, _, b, _) = taut_common(n);
    let mut spec = taut_line_bundle(n);
    spec.product = Some(taut_product(&b, n, unknown("c")));
    spec.seidel = taut_seidel(&b, n, unknown("d"));
    spec.seeds = vec![Seed::at_level("c", 0, 0)];
    with_complement_zeros(spec)
}

pub fn all_builtins(max_n: usize) -> Vec<SpaceSpec> {
    let mut out = vec![complex_plane()];
    for n in 2..=max_n {
        out.push(complex_space(n));
    }
    for n in 1..=max_n {
        out.push(projective_space(n));
        out.push(taut_line_bundle(n));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_degrees() {
        let p2 = builtin_by_name("projective_space(2)").unwrap();
        assert_eq!(p2.config.q_degree(), Some(6));
        assert_eq!(p2.basis.degrees(), &[0, 2, 4]);
        assert_eq!(p2.maslov_shift(), 4);
        let t2 = builtin_by_name("taut_line_bundle(2)").unwrap();
        assert_eq!(t2.config.q_degree(), Some(4));
        assert_eq!(t2.maslov_shift(), 2);
        assert_eq!(builtin_by_name("complex_space(1)").unwrap(), complex_plane());
    }

    #[test]
    fn builtins_validate() {
        for s in all_builtins(4) {
            s.validate().unwrap();
        }
        for n in 1..=4 {
            projective_space_ansatz(n).validate().unwrap();
            taut_line_bundle_ansatz(n).validate().unwrap();
        }
    }

    #[test]
    fn lookup_errors() {
        assert!(matches!(
            builtin_by_name("klein_bottle"),
            Err(CatalogError::UnknownSpace(_))
        ));
        assert!(matches!(
            builtin_by_name("projective_space(0)"),
            Err(CatalogError::BadParam(_))
        ));
        assert!(matches!(
            builtin_by_name("projective_space"),
            Err(CatalogError::BadParam(_))
        ));
    }

    #[test]
    fn paper_unknown_names() {
        let a = projective_space_ansatz(2);
        assert_eq!(a.unknowns(), vec!["A", "B", "F", "alpha", "gamma"]);
        let t = taut_line_bundle_ansatz(2);
        assert_eq!(t.unknowns(), vec!["c", "d"]);
    }
}
