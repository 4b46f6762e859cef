//! The explicit equivariant cochain complex for `ℂ` at slope index `s`,
//! truncated at `c_K`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ring::{RingConfig, RingError};
use crate::snf::{smith_normal_form, IntMatrix};
use crate::IntElem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZhaoError {
    #[error("truncation bound must be at least 1")]
    BadBound,
    #[error("degree {degree} needs c_k with k + 1 < K for k = {needed_k}, but K = {k_max}")]
    TruncationTooSmall { degree: i64, needed_k: i64, k_max: usize },
    #[error("perturbation target {0} is not an even generator of the complex")]
    BadPerturbation(ZhaoGen),
    #[error("continuation at s = {s}: expected {expected}, found {found}")]
    UnexpectedFactor { s: usize, expected: String, found: String },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Generator `(c_k, x_j)` of degree `2k − j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZhaoGen {
    pub k: usize,
    pub j: usize,
}

impl ZhaoGen {
    pub fn new(k: usize, j: usize) -> Self {
        ZhaoGen { k, j }
    }

    pub fn degree(&self) -> i64 {
        2 * self.k as i64 - self.j as i64
    }
}

impl fmt::Display for ZhaoGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(c{}, x{})", self.k, self.j)
    }
}

/// Sparse cochain with integer coefficients.
pub type Cochain = BTreeMap<ZhaoGen, BigInt>;

pub fn render_cochain(x: &Cochain) -> String {
    if x.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (g, c)) in x.iter().enumerate() {
        let neg = c.is_negative();
        if i > 0 {
            out.push_str(if neg { " - " } else { " + " });
        } else if neg {
            out.push('-');
        }
        if !c.abs().is_one() {
            out.push_str(&format!("{}*", c.abs()));
        }
        out.push_str(&g.to_string());
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZhaoComplex {
    pub s: usize,
    pub k_max: usize,
    /// Sorted by degree, then `k`.
    pub generators: Vec<ZhaoGen>,
    /// Fault injection: this even generator gets `d = (c_k, x_{j-1})`.
    pub perturbation: Option<ZhaoGen>,
}

pub fn build_complex(s: usize, k_max: usize) -> Result<ZhaoComplex, ZhaoError> {
    if k_max < 1 {
        return Err(ZhaoError::BadBound);
    }
    let mut generators: Vec<ZhaoGen> = (0..=k_max)
        .flat_map(|k| (0..=2 * s).map(move |j| ZhaoGen::new(k, j)))
        .collect();
    generators.sort_by_key(|g| (g.degree(), g.k));
    Ok(ZhaoComplex {
        s,
        k_max,
        generators,
        perturbation: None,
    })
}

impl ZhaoComplex {
    pub fn with_perturbation(mut self, target: ZhaoGen) -> Result<Self, ZhaoError> {
        if !target.j.is_multiple_of(2) || target.j == 0 || target.j > 2 * self.s || target.k > self.k_max {
            return Err(ZhaoError::BadPerturbation(target));
        }
        self.perturbation = Some(target);
        Ok(self)
    }

    pub fn contains(&self, g: ZhaoGen) -> bool {
        g.k <= self.k_max && g.j <= 2 * self.s
    }

    /// `d(c_k, x_{2j−1}) = (c_k, x_{2j−2}) − j (c_{k+1}, x_{2j})`, dropping
    /// `c_{K+1}`; even generators are closed.
    pub fn differential(&self, g: ZhaoGen) -> Cochain {
        let mut out = Cochain::new();
        if g.j % 2 == 1 {
            let half = g.j.div_ceil(2);
            out.insert(ZhaoGen::new(g.k, g.j - 1), BigInt::one());
            if g.k < self.k_max {
                out.insert(ZhaoGen::new(g.k + 1, g.j + 1), -BigInt::from(half));
            }
        } else if self.perturbation == Some(g) {
            out.insert(ZhaoGen::new(g.k, g.j - 1), BigInt::one());
        }
        out
    }

    pub fn apply(&self, x: &Cochain) -> Cochain {
        let mut out = Cochain::new();
        for (g, c) in x {
            for (h, e) in self.differential(*g) {
                let slot = out.entry(h).or_insert_with(BigInt::zero);
                *slot += c * e;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn generators_in_degree(&self, degree: i64) -> Vec<ZhaoGen> {
        self.generators
            .iter()
            .copied()
            .filter(|g| g.degree() == degree)
            .collect()
    }

    /// Matrix of `d: C^degree → C^{degree+1}`, rows indexed by the target.
    pub fn differential_matrix(&self, degree: i64) -> IntMatrix<BigInt> {
        let source = self.generators_in_degree(degree);
        let target = self.generators_in_degree(degree + 1);
        let mut m = vec![vec![BigInt::zero(); source.len()]; target.len()];
        for (col, g) in source.iter().enumerate() {
            for (h, c) in self.differential(*g) {
                if let Some(row) = target.iter().position(|t| *t == h) {
                    m[row][col] = c;
                }
            }
        }
        m
    }

    /// Largest `k` among generators of degree `degree`, ignoring the cap `K`.
    fn top_k(&self, degree: i64) -> i64 {
        (degree + 2 * self.s as i64).div_euclid(2)
    }

    fn check_window(&self, degree: i64) -> Result<(), ZhaoError> {
        let needed_k = self.top_k(degree);
        if needed_k + 1 >= self.k_max as i64 {
            return Err(ZhaoError::TruncationTooSmall {
                degree,
                needed_k,
                k_max: self.k_max,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DSquaredFailure {
    pub generator: ZhaoGen,
    pub image: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DSquaredReport {
    pub checked: usize,
    pub failures: Vec<DSquaredFailure>,
}

impl DSquaredReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `d ∘ d` on every generator.
pub fn verify_d_squared(complex: &ZhaoComplex) -> DSquaredReport {
    let mut checked = 0;
    let mut failures = Vec::new();
    for g in &complex.generators {
        checked += 1;
        let once = complex.differential(*g);
        let twice = complex.apply(&once);
        if !twice.is_empty() {
            failures.push(DSquaredFailure {
                generator: *g,
                image: render_cochain(&twice),
            });
        }
    }
    DSquaredReport { checked, failures }
}

/// Free rank and torsion of `H^degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyDegree {
    pub degree: i64,
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

fn smith_rank_and_torsion(m: &IntMatrix<BigInt>, cols: usize) -> (usize, Vec<BigInt>) {
    let snf = smith_normal_form(m, cols);
    (snf.rank(), snf.torsion())
}

/// `H^d = ker d_d / im d_{d−1}` over `ℤ` for each requested degree.
pub fn cohomology(
    complex: &ZhaoComplex,
    degrees: impl IntoIterator<Item = i64>,
) -> Result<Vec<CohomologyDegree>, ZhaoError> {
    degrees
        .into_iter()
        .map(|degree| {
            complex.check_window(degree)?;
            let dim = complex.generators_in_degree(degree).len();
            let prev_dim = complex.generators_in_degree(degree - 1).len();
            let (out_rank, _) = smith_rank_and_torsion(&complex.differential_matrix(degree), dim);
            let (in_rank, torsion) =
                smith_rank_and_torsion(&complex.differential_matrix(degree - 1), prev_dim);
            Ok(CohomologyDegree {
                degree,
                rank: dim - out_rank - in_rank,
                torsion,
            })
        })
        .collect()
}

/// Verified continuation factor `coefficient · u^u_power`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuationFactor {
    pub s: usize,
    pub coefficient: BigInt,
    pub u_power: i64,
}

impl ContinuationFactor {
    pub fn as_ring_elem(&self, config: RingConfig) -> Result<IntElem, RingError> {
        IntElem::monomial(config, self.coefficient.clone(), 0, self.u_power)
    }

    pub fn render(&self) -> String {
        match self.u_power {
            0 => self.coefficient.to_string(),
            1 => format!("{}*u", self.coefficient),
            p => format!("{}*u^{}", self.coefficient, p),
        }
    }
}

/// Class of `(c_0, x_{2s})` in the slope-`(s+1)` complex, expressed as a
/// multiple of the generator class `[(c_1, x_{2s+2})] = u·[x_{2s+2}]`.
pub fn continuation_action(s: usize) -> Result<ContinuationFactor, ZhaoError> {
    let complex = build_complex(s + 1, 3)?;
    let degree = -2 * s as i64;
    let unexpected = |found: String| ZhaoError::UnexpectedFactor {
        s,
        expected: format!("{}*u", s + 1),
        found,
    };
    let h = cohomology(&complex, [degree])?;
    if h[0].rank != 1 || !h[0].torsion.is_empty() {
        return Err(unexpected(format!("cohomology {:?}", h[0])));
    }
    let gens = complex.generators_in_degree(degree);
    if complex.differential_matrix(degree).iter().flatten().any(|c| !c.is_zero()) {
        return Err(unexpected("cocycles are not the whole degree".into()));
    }
    let incoming = complex.differential_matrix(degree - 1);
    let prev_dim = complex.generators_in_degree(degree - 1).len();
    let snf = smith_normal_form(&incoming, prev_dim);
    let functional = &snf.u[snf.rank()];
    let at = |g: ZhaoGen| {
        gens.iter()
            .position(|x| *x == g)
            .map(|i| functional[i].clone())
            .unwrap_or_else(BigInt::zero)
    };
    let source = at(ZhaoGen::new(0, 2 * s));
    let generator = at(ZhaoGen::new(1, 2 * s + 2));
    if generator.is_zero() || !(&source % &generator).is_zero() {
        return Err(unexpected(format!("{source}/{generator}")));
    }
    let factor = ContinuationFactor {
        s,
        coefficient: &source / &generator,
        u_power: 1,
    };
    if factor.coefficient != BigInt::from(s + 1) {
        return Err(unexpected(factor.render()));
    }
    Ok(factor)
}
