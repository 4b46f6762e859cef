//! Closed-form oracles written out term by term, independent of the
//! catalog templates.
#![allow(dead_code)]

use eqseidel::{BasisSpec, IntElem, IntMap, IntModuleElem, RingConfig, RingElem};
use num_bigint::BigInt;

/// `Σ c q^a u^b` from `(c, a, b)` triples.
pub fn elem(config: RingConfig, terms: &[(i64, i64, i64)]) -> IntElem {
    RingElem::from_terms(config, terms.iter().map(|&(c, q, u)| (BigInt::from(c), q, u)))
        .expect("legal exponents")
}

/// Column vector with the given `(row, (c, a, b))` entries.
pub fn column(basis: &BasisSpec, config: RingConfig, entries: &[(usize, (i64, i64, i64))]) -> IntModuleElem {
    let mut coords = vec![RingElem::zero(config); basis.len()];
    for &(row, term) in entries {
        coords[row] = coords[row].try_add(&elem(config, &[term])).unwrap();
    }
    IntModuleElem::from_coords(basis, config, coords).unwrap()
}

fn map(basis: &BasisSpec, config: RingConfig, shift: i64, cols: Vec<IntModuleElem>) -> IntMap {
    IntMap::from_columns(basis.clone(), basis.clone(), config, shift, &cols).unwrap()
}

fn pow(base: i64, e: usize) -> i64 {
    base.pow(e as u32)
}

fn standard(n: usize) -> BasisSpec {
    BasisSpec::standard(n)
}

pub fn projective_config(n: usize) -> RingConfig {
    RingConfig::with_q(2 * n as i64 + 2).unwrap()
}

pub fn taut_config(n: usize) -> RingConfig {
    RingConfig::with_q(2 * n as i64).unwrap()
}

/// ℂⁿ at level `r`: `1 ↦ ((r+1)u)^n`.
pub fn complex_space_seidel(n: usize, r: i64) -> IntMap {
    let config = RingConfig::without_q();
    let b = standard(0);
    let col = column(&b, config, &[(0, (pow(r + 1, n), 0, n as i64))]);
    map(&b, config, 2 * n as i64, vec![col])
}

/// ℙⁿ: `e1 ∗_{-r} e_k = e_{k+1} − r u e_k`, with `e_{n+1}` read as `q e_0`.
pub fn projective_product(n: usize, r: i64) -> IntMap {
    let config = projective_config(n);
    let b = standard(n);
    let mut cols = vec![column(&b, config, &[(1, (1, 0, 0))])];
    for k in 1..=n {
        let up = if k < n { (k + 1, (1, 0, 0)) } else { (0, (1, 1, 0)) };
        cols.push(column(&b, config, &[up, (k, (-r, 0, 1))]));
    }
    map(&b, config, 2, cols)
}

/// ℙⁿ Seidel map from level `r`:
/// `e_0 ↦ Σ_l ((r+1)u)^{n-l} e_l` and `e_k ↦ q Σ_{l<k} ((r+1)u)^{k-1-l} e_l`.
pub fn projective_seidel(n: usize, r: i64) -> IntMap {
    let config = projective_config(n);
    let b = standard(n);
    let mut cols = vec![column(
        &b,
        config,
        &(0..=n)
            .map(|l| (l, (pow(r + 1, n - l), 0, (n - l) as i64)))
            .collect::<Vec<_>>(),
    )];
    for k in 1..=n {
        cols.push(column(
            &b,
            config,
            &(0..k)
                .map(|l| (l, (pow(r + 1, k - 1 - l), 1, (k - 1 - l) as i64)))
                .collect::<Vec<_>>(),
        ));
    }
    map(&b, config, 2 * n as i64, cols)
}

/// O(−1): `e1 ∗ e_k = e_{k+1}` for `k < n`, `e1 ∗ e_n = −q e1 + r u q e0`.
pub fn taut_product(n: usize, r: i64) -> IntMap {
    let config = taut_config(n);
    let b = standard(n);
    let mut cols: Vec<_> = (0..n).map(|k| column(&b, config, &[(k + 1, (1, 0, 0))])).collect();
    cols.push(column(&b, config, &[(1, (-1, 1, 0)), (0, (r, 1, 1))]));
    map(&b, config, 2, cols)
}

/// O(−1) Seidel map: `e_k ↦ −e_{k+1} + (r+1)u e_k` for `k < n` and
/// `e_n ↦ q e1 + (r+1)u e_n − (r+1)u q e0`.
pub fn taut_seidel(n: usize, r: i64) -> IntMap {
    let config = taut_config(n);
    let b = standard(n);
    let mut cols: Vec<_> = (0..n)
        .map(|k| column(&b, config, &[(k + 1, (-1, 0, 0)), (k, (r + 1, 0, 1))]))
        .collect();
    cols.push(column(
        &b,
        config,
        &[(1, (1, 1, 0)), (n, (r + 1, 0, 1)), (0, (-(r + 1), 1, 1))],
    ));
    map(&b, config, 2, cols)
}

/// O(−1) at `u = 0`: `e_k ↦ −e_{k+1}` and `e_n ↦ q e1`.
pub fn taut_seidel_nonequivariant(n: usize) -> IntMap {
    let config = taut_config(n);
    let b = standard(n);
    let mut cols: Vec<_> = (0..n).map(|k| column(&b, config, &[(k + 1, (-1, 0, 0))])).collect();
    cols.push(column(&b, config, &[(1, (1, 1, 0))]));
    map(&b, config, 2, cols)
}
