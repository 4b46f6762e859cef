//! Graded free modules over the coefficient ring and degree-shifting maps
//! between them.

use std::fmt;

use thiserror::Error;

use crate::coeff::Coefficient;
use crate::linalg::{self, Matrix};
use crate::ring::{RingConfig, RingElem, RingError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModuleError {
    #[error("basis mismatch: expected [{expected}], found [{found}]")]
    BasisMismatch { expected: String, found: String },
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("map is not graded: {0}")]
    Grading(GradingReport),
    #[error("shift mismatch: {0} vs {1}")]
    ShiftMismatch(i64, i64),
    #[error("basis change is not invertible: determinant {0}")]
    NotInvertible(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Ordered basis labels with a degree per basis element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisSpec {
    labels: Vec<String>,
    degrees: Vec<i64>,
}

impl BasisSpec {
    pub fn new(labels: Vec<String>, degrees: Vec<i64>) -> Result<Self, ModuleError> {
        if labels.len() != degrees.len() {
            return Err(ModuleError::InvalidBasis(format!(
                "{} labels but {} degrees",
                labels.len(),
                degrees.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(ModuleError::InvalidBasis(format!("duplicate label `{l}`")));
            }
        }
        Ok(BasisSpec { labels, degrees })
    }

    /// `e0, …, en` with `|e_k| = 2k`.
    pub fn standard(n: usize) -> Self {
        BasisSpec {
            labels: (0..=n).map(|k| format!("e{k}")).collect(),
            degrees: (0..=n).map(|k| 2 * k as i64).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, ModuleError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| ModuleError::UnknownLabel(label.to_string()))
    }

    fn check_same(&self, other: &BasisSpec) -> Result<(), ModuleError> {
        if self != other {
            return Err(ModuleError::BasisMismatch {
                expected: self.labels.join(","),
                found: other.labels.join(","),
            });
        }
        Ok(())
    }
}

/// An element of a graded free module, one ring coordinate per basis label.
#[derive(Clone, PartialEq)]
pub struct ModuleElem<C> {
    basis: BasisSpec,
    config: RingConfig,
    coords: Vec<RingElem<C>>,
}

impl<C: Coefficient> ModuleElem<C> {
    pub fn zero(basis: &BasisSpec, config: RingConfig) -> Self {
        ModuleElem {
            basis: basis.clone(),
            config,
            coords: vec![RingElem::zero(config); basis.len()],
        }
    }

    pub fn basis_vector(basis: &BasisSpec, config: RingConfig, index: usize) -> Self {
        let mut v = Self::zero(basis, config);
        v.coords[index] = RingElem::one(config);
        v
    }

    pub fn labelled(basis: &BasisSpec, config: RingConfig, label: &str) -> Result<Self, ModuleError> {
        Ok(Self::basis_vector(basis, config, basis.index_of(label)?))
    }

    pub fn from_coords(
        basis: &BasisSpec,
        config: RingConfig,
        coords: Vec<RingElem<C>>,
    ) -> Result<Self, ModuleError> {
        if coords.len() != basis.len() {
            return Err(ModuleError::InvalidBasis(format!(
                "{} coordinates for a basis of size {}",
                coords.len(),
                basis.len()
            )));
        }
        if let Some(c) = coords.iter().find(|c| c.config() != config) {
            return Err(RingError::ConfigMismatch(config, c.config()).into());
        }
        Ok(ModuleElem {
            basis: basis.clone(),
            config,
            coords,
        })
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn config(&self) -> RingConfig {
        self.config
    }

    pub fn coords(&self) -> &[RingElem<C>] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &RingElem<C> {
        &self.coords[i]
    }

    pub fn coord_of(&self, label: &str) -> Result<&RingElem<C>, ModuleError> {
        Ok(&self.coords[self.basis.index_of(label)?])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ModuleError> {
        self.basis.check_same(&other.basis)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_, _>>()?;
        Ok(ModuleElem {
            coords,
            ..self.clone()
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ModuleError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ModuleElem {
            coords: self.coords.iter().map(|c| -c).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, s: &RingElem<C>) -> Result<Self, ModuleError> {
        let coords = self
            .coords
            .iter()
            .map(|c| c.try_mul(s))
            .collect::<Result<_, _>>()?;
        Ok(ModuleElem {
            coords,
            ..self.clone()
        })
    }

    /// Multiply every coordinate by `u^k`.
    pub fn u_act(&self, k: u32) -> Self {
        let uk = RingElem::u(self.config).pow(k);
        self.scale(&uk).expect("same configuration")
    }

    pub fn map_coords(&self, f: impl Fn(&RingElem<C>) -> RingElem<C>) -> Self {
        ModuleElem {
            coords: self.coords.iter().map(f).collect(),
            ..self.clone()
        }
    }

    pub fn truncate_u(&self, order: i64) -> Self {
        self.map_coords(|c| c.truncate_u(order))
    }

    /// Degree of a homogeneous element: `None` for zero, error otherwise.
    pub fn degree(&self) -> Result<Option<i64>, RingError> {
        let mut deg = None;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = c.degree()? + self.basis.degree(i);
            match deg {
                None => deg = Some(d),
                Some(e) if e == d => {}
                Some(_) => return Err(RingError::NotHomogeneous(self.render())),
            }
        }
        Ok(deg)
    }

    /// Minimal `u`-exponent over all coordinates.
    pub fn u_valuation(&self) -> Result<i64, RingError> {
        self.coords
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.u_valuation())
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .min()
            .ok_or(RingError::ZeroElement)
    }

    /// Flattened canonical text: basis order, then ring-term order within
    /// each coordinate, e.g. `q*e0 + 2*u*e0 - u*e1`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coords.iter().enumerate() {
            for (m, coeff) in c.terms() {
                let (neg, mag) = coeff.render_parts();
                let mono = m.render();
                let label = self.basis.label(i);
                let body = match (mag.as_str(), mono.is_empty()) {
                    ("1", true) => label.to_string(),
                    ("1", false) => format!("{mono}*{label}"),
                    (_, true) => format!("{mag}*{label}"),
                    (_, false) => format!("{mag}*{mono}*{label}"),
                };
                match (out.is_empty(), neg) {
                    (true, true) => out.push('-'),
                    (true, false) => {}
                    (false, true) => out.push_str(" - "),
                    (false, false) => out.push_str(" + "),
                }
                out.push_str(&body);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl<C: Coefficient> fmt::Display for ModuleElem<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<C: Coefficient> fmt::Debug for ModuleElem<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleElem({})", self.render())
    }
}

/// A located gradedness violation.
#[derive(Debug, Clone, PartialEq)]
pub struct GradingIssue {
    pub row: String,
    pub col: String,
    pub entry: String,
    pub expected: i64,
    pub found: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GradingReport {
    pub issues: Vec<GradingIssue>,
}

impl GradingReport {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for GradingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return f.write_str("graded");
        }
        let parts: Vec<String> = self
            .issues
            .iter()
            .map(|i| match i.found {
                Some(d) => format!(
                    "entry ({} <- {}) = {} has degree {d}, expected {}",
                    i.row, i.col, i.entry, i.expected
                ),
                None => format!(
                    "entry ({} <- {}) = {} is not homogeneous, expected degree {}",
                    i.row, i.col, i.entry, i.expected
                ),
            })
            .collect();
        f.write_str(&parts.join("; "))
    }
}

/// Module homomorphism of a fixed degree shift, stored as a
/// target × source matrix.
#[derive(Clone, PartialEq)]
pub struct GradedMap<C> {
    source: BasisSpec,
    target: BasisSpec,
    config: RingConfig,
    shift: i64,
    matrix: Matrix<C>,
}

impl<C: Coefficient> GradedMap<C> {
    /// Build a map, rejecting any entry of the wrong degree.
    pub fn new(
        source: BasisSpec,
        target: BasisSpec,
        config: RingConfig,
        shift: i64,
        matrix: Matrix<C>,
    ) -> Result<Self, ModuleError> {
        let map = Self::new_unchecked(source, target, config, shift, matrix)?;
        let report = map.check_grading();
        if report.passed() {
            Ok(map)
        } else {
            Err(ModuleError::Grading(report))
        }
    }

    /// Build a map checking only its shape; used for ansatz matrices.
    pub fn new_unchecked(
        source: BasisSpec,
        target: BasisSpec,
        config: RingConfig,
        shift: i64,
        matrix: Matrix<C>,
    ) -> Result<Self, ModuleError> {
        if matrix.len() != target.len() || matrix.iter().any(|r| r.len() != source.len()) {
            return Err(ModuleError::InvalidBasis(format!(
                "matrix shape does not match {}x{}",
                target.len(),
                source.len()
            )));
        }
        if let Some(c) = matrix.iter().flatten().find(|c| c.config() != config) {
            return Err(RingError::ConfigMismatch(config, c.config()).into());
        }
        Ok(GradedMap {
            source,
            target,
            config,
            shift,
            matrix,
        })
    }

    /// Build from images of the source basis vectors.
    pub fn from_columns(
        source: BasisSpec,
        target: BasisSpec,
        config: RingConfig,
        shift: i64,
        columns: &[ModuleElem<C>],
    ) -> Result<Self, ModuleError> {
        let mut matrix = linalg::zeros(config, target.len(), source.len());
        for (k, col) in columns.iter().enumerate() {
            target.check_same(col.basis())?;
            for (l, c) in col.coords().iter().enumerate() {
                matrix[l][k] = c.clone();
            }
        }
        Self::new(source, target, config, shift, matrix)
    }

    pub fn identity(basis: &BasisSpec, config: RingConfig) -> Self {
        GradedMap {
            source: basis.clone(),
            target: basis.clone(),
            config,
            shift: 0,
            matrix: linalg::identity(config, basis.len()),
        }
    }

    pub fn zero(source: &BasisSpec, target: &BasisSpec, config: RingConfig, shift: i64) -> Self {
        GradedMap {
            source: source.clone(),
            target: target.clone(),
            config,
            shift,
            matrix: linalg::zeros(config, target.len(), source.len()),
        }
    }

    pub fn source(&self) -> &BasisSpec {
        &self.source
    }

    pub fn target(&self) -> &BasisSpec {
        &self.target
    }

    pub fn config(&self) -> RingConfig {
        self.config
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn matrix(&self) -> &Matrix<C> {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> &RingElem<C> {
        &self.matrix[row][col]
    }

    pub fn column(&self, k: usize) -> ModuleElem<C> {
        ModuleElem {
            basis: self.target.clone(),
            config: self.config,
            coords: self.matrix.iter().map(|row| row[k].clone()).collect(),
        }
    }

    pub fn columns(&self) -> Vec<ModuleElem<C>> {
        (0..self.source.len()).map(|k| self.column(k)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self.matrix.iter().enumerate().all(|(i, row)| {
                row.iter()
                    .enumerate()
                    .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|x| x.is_zero())
    }

    pub fn apply(&self, x: &ModuleElem<C>) -> Result<ModuleElem<C>, ModuleError> {
        self.source.check_same(&x.basis)?;
        let mut coords = vec![RingElem::zero(self.config); self.target.len()];
        for (l, row) in self.matrix.iter().enumerate() {
            for (k, m) in row.iter().enumerate() {
                if !m.is_zero() && !x.coords[k].is_zero() {
                    coords[l] = coords[l].try_add(&m.try_mul(&x.coords[k])?)?;
                }
            }
        }
        Ok(ModuleElem {
            basis: self.target.clone(),
            config: self.config,
            coords,
        })
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Self) -> Result<Self, ModuleError> {
        self.source.check_same(&first.target)?;
        if self.config != first.config {
            return Err(RingError::ConfigMismatch(self.config, first.config).into());
        }
        Ok(GradedMap {
            source: first.source.clone(),
            target: self.target.clone(),
            config: self.config,
            shift: self.shift + first.shift,
            matrix: linalg::mat_mul(self.config, &self.matrix, &first.matrix),
        })
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), ModuleError> {
        self.source.check_same(&other.source)?;
        self.target.check_same(&other.target)?;
        if self.shift != other.shift {
            return Err(ModuleError::ShiftMismatch(self.shift, other.shift));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ModuleError> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (ro, rb) in out.matrix.iter_mut().zip(&other.matrix) {
            for (x, y) in ro.iter_mut().zip(rb) {
                *x = x.try_add(y)?;
            }
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ModuleError> {
        self.try_add(&other.map_entries(|x| -x))
    }

    /// Multiply by a homogeneous scalar, adding its degree to the shift.
    pub fn scale(&self, s: &RingElem<C>) -> Result<Self, ModuleError> {
        let deg = if s.is_zero() { 0 } else { s.degree()? };
        let mut out = self.map_entries(|x| x * s);
        out.shift += deg;
        Ok(out)
    }

    pub fn map_entries(&self, f: impl Fn(&RingElem<C>) -> RingElem<C>) -> Self {
        GradedMap {
            matrix: self
                .matrix
                .iter()
                .map(|row| row.iter().map(&f).collect())
                .collect(),
            ..self.clone()
        }
    }

    pub fn try_map_entries<D: Coefficient, E>(
        &self,
        f: impl Fn(&RingElem<C>) -> Result<RingElem<D>, E>,
    ) -> Result<GradedMap<D>, E> {
        let matrix = self
            .matrix
            .iter()
            .map(|row| row.iter().map(&f).collect::<Result<Vec<_>, E>>())
            .collect::<Result<Vec<_>, E>>()?;
        Ok(GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            config: self.config,
            shift: self.shift,
            matrix,
        })
    }

    /// Specialize `u = 0`.
    pub fn at_u_zero(&self) -> Result<Self, RingError> {
        self.try_map_entries(|x| x.at_u_zero())
    }

    pub fn with_basis(&self, source: BasisSpec, target: BasisSpec) -> Result<Self, ModuleError> {
        Self::new_unchecked(source, target, self.config, self.shift, self.matrix.clone())
    }

    /// Every nonzero entry `M[l][k]` must be homogeneous of degree
    /// `shift + |source_k| − |target_l|`.
    pub fn check_grading(&self) -> GradingReport {
        let mut issues = Vec::new();
        for (l, row) in self.matrix.iter().enumerate() {
            for (k, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let expected = self.shift + self.source.degree(k) - self.target.degree(l);
                let found = x.degree().ok();
                if found != Some(expected) {
                    issues.push(GradingIssue {
                        row: self.target.label(l).to_string(),
                        col: self.source.label(k).to_string(),
                        entry: x.render(),
                        expected,
                        found,
                    });
                }
            }
        }
        GradingReport { issues }
    }

    /// Rewrite in a new ordered basis (of both source and target).
    ///
    /// The change matrix `P` has the new basis vectors, written in the old
    /// basis, as columns; the result is `P⁻¹ M P` with `P⁻¹ = adj(P) / det(P)`.
    pub fn change_basis(&self, change: &BasisChange<C>) -> Result<Self, ModuleError> {
        self.source.check_same(&change.old)?;
        self.target.check_same(&change.old)?;
        let inv = change.inverse_matrix()?;
        let m = linalg::mat_mul(self.config, &self.matrix, &change.matrix);
        let m = linalg::mat_mul(self.config, &inv, &m);
        Self::new_unchecked(
            change.new.clone(),
            change.new.clone(),
            self.config,
            self.shift,
            m,
        )
    }

    /// Text form with one line per source basis vector.
    pub fn render_columns(&self) -> Vec<String> {
        self.columns()
            .iter()
            .enumerate()
            .map(|(k, c)| format!("{} -> {}", self.source.label(k), c.render()))
            .collect()
    }
}

impl<C: Coefficient> fmt::Debug for GradedMap<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GradedMap(shift {}; {})",
            self.shift,
            self.render_columns().join("; ")
        )
    }
}

/// An invertible change of ordered basis.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisChange<C: Coefficient> {
    old: BasisSpec,
    new: BasisSpec,
    matrix: Matrix<C>,
}

impl<C: Coefficient> BasisChange<C> {
    /// `vectors[i]` is the i-th new basis vector written in the old basis; each
    /// must be homogeneous, and its degree becomes the new basis degree.
    pub fn new(labels: Vec<String>, vectors: &[ModuleElem<C>]) -> Result<Self, ModuleError> {
        let first = vectors
            .first()
            .ok_or_else(|| ModuleError::InvalidBasis("empty basis change".into()))?;
        let old = first.basis().clone();
        let config = first.config();
        let mut degrees = Vec::new();
        for v in vectors {
            old.check_same(v.basis())?;
            degrees.push(
                v.degree()?
                    .ok_or_else(|| ModuleError::InvalidBasis("zero basis vector".into()))?,
            );
        }
        let new = BasisSpec::new(labels, degrees)?;
        let n = old.len();
        if vectors.len() != n {
            return Err(ModuleError::InvalidBasis(format!(
                "{} new vectors for a basis of size {n}",
                vectors.len()
            )));
        }
        let matrix = (0..n)
            .map(|l| (0..n).map(|k| vectors[k].coord(l).clone()).collect())
            .collect();
        let change = BasisChange { old, new, matrix };
        let det = linalg::det_cofactor(config, &change.matrix);
        if !det.is_unit() {
            return Err(ModuleError::NotInvertible(det.render()));
        }
        Ok(change)
    }

    pub fn identity(basis: &BasisSpec, config: RingConfig) -> Self {
        BasisChange {
            old: basis.clone(),
            new: basis.clone(),
            matrix: linalg::identity(config, basis.len()),
        }
    }

    pub fn old_basis(&self) -> &BasisSpec {
        &self.old
    }

    pub fn new_basis(&self) -> &BasisSpec {
        &self.new
    }

    pub fn matrix(&self) -> &Matrix<C> {
        &self.matrix
    }

    fn config(&self) -> RingConfig {
        self.matrix[0][0].config()
    }

    pub fn inverse_matrix(&self) -> Result<Matrix<C>, ModuleError> {
        let config = self.config();
        let det = linalg::det_cofactor(config, &self.matrix);
        if !det.is_unit() {
            return Err(ModuleError::NotInvertible(det.render()));
        }
        let adj = linalg::adjugate_cofactor(config, &self.matrix);
        adj.iter()
            .map(|row| {
                row.iter()
                    .map(|x| x.exact_div(&det).map_err(ModuleError::from))
                    .collect()
            })
            .collect()
    }

    /// The reverse change, from the new basis back to the old one.
    pub fn inverse(&self) -> Result<Self, ModuleError> {
        Ok(BasisChange {
            old: self.new.clone(),
            new: self.old.clone(),
            matrix: self.inverse_matrix()?,
        })
    }

    /// Coordinates in the old basis of a vector given in the new basis.
    pub fn to_old(&self, x: &ModuleElem<C>) -> Result<ModuleElem<C>, ModuleError> {
        self.new.check_same(x.basis())?;
        let m = GradedMap::new_unchecked(
            self.new.clone(),
            self.old.clone(),
            x.config(),
            0,
            self.matrix.clone(),
        )?;
        m.apply(x)
    }
}
