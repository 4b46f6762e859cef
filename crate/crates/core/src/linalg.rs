//! Dense matrices over the coefficient ring, with division-free determinant
//! and adjugate routines.
//!
//! Two independent determinant algorithms are provided: Laplace (cofactor)
//! expansion and the Samuelson–Berkowitz characteristic polynomial. Neither
//! divides in the ring, so both are exact over any commutative coefficient
//! ring including symbolic ones.

use crate::coeff::Coefficient;
use crate::ring::{RingConfig, RingElem, RingError};

/// Row-major matrix of ring elements.
pub type Matrix<C> = Vec<Vec<RingElem<C>>>;

pub fn identity<C: Coefficient>(config: RingConfig, n: usize) -> Matrix<C> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        RingElem::one(config)
                    } else {
                        RingElem::zero(config)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn zeros<C: Coefficient>(config: RingConfig, rows: usize, cols: usize) -> Matrix<C> {
    vec![vec![RingElem::zero(config); cols]; rows]
}

pub fn mat_mul<C: Coefficient>(config: RingConfig, a: &Matrix<C>, b: &Matrix<C>) -> Matrix<C> {
    let rows = a.len();
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = zeros(config, rows, cols);
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), inner, "matrix dimension mismatch");
        for (k, aik) in row.iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..cols {
                if !b[k][j].is_zero() {
                    out[i][j] = &out[i][j] + &(aik * &b[k][j]);
                }
            }
        }
    }
    out
}

pub fn mat_sub<C: Coefficient>(a: &Matrix<C>, b: &Matrix<C>) -> Matrix<C> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn scale<C: Coefficient>(a: &Matrix<C>, s: &RingElem<C>) -> Matrix<C> {
    a.iter()
        .map(|row| row.iter().map(|x| x * s).collect())
        .collect()
}

pub fn is_square<C>(a: &Matrix<C>) -> bool {
    a.iter().all(|row| row.len() == a.len())
}

fn minor<C: Coefficient>(a: &Matrix<C>, skip_row: usize, skip_col: usize) -> Matrix<C> {
    a.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_row)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != skip_col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Determinant by Laplace expansion along the first row.
pub fn det_cofactor<C: Coefficient>(config: RingConfig, a: &Matrix<C>) -> RingElem<C> {
    assert!(is_square(a), "determinant of a non-square matrix");
    match a.len() {
        0 => RingElem::one(config),
        1 => a[0][0].clone(),
        2 => &(&a[0][0] * &a[1][1]) - &(&a[0][1] * &a[1][0]),
        n => {
            let mut acc = RingElem::zero(config);
            for j in 0..n {
                if a[0][j].is_zero() {
                    continue;
                }
                let term = &a[0][j] * &det_cofactor(config, &minor(a, 0, j));
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Determinant by fraction-free (Bareiss) elimination with row swaps; every
/// division is exact in the coefficient ring.
pub fn det_bareiss<C: Coefficient>(config: RingConfig, a: &Matrix<C>) -> Result<RingElem<C>, RingError> {
    assert!(is_square(a), "determinant of a non-square matrix");
    let n = a.len();
    if n == 0 {
        return Ok(RingElem::one(config));
    }
    let mut m = a.clone();
    let mut negate = false;
    let mut prev = RingElem::one(config);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(RingElem::zero(config)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// Coefficients of `det(x·I − A)`, highest power first (Samuelson–Berkowitz).
pub fn charpoly_berkowitz<C: Coefficient>(config: RingConfig, a: &Matrix<C>) -> Vec<RingElem<C>> {
    assert!(is_square(a), "characteristic polynomial of a non-square matrix");
    let n = a.len();
    if n == 0 {
        return vec![RingElem::one(config)];
    }
    let a11 = &a[0][0];
    let row: Vec<_> = a[0][1..].to_vec();
    let col: Matrix<C> = a[1..].iter().map(|r| vec![r[0].clone()]).collect();
    let sub: Matrix<C> = a[1..].iter().map(|r| r[1..].to_vec()).collect();

    // Toeplitz column: 1, -a11, -R C, -R A1 C, ..., -R A1^{n-2} C
    let mut toeplitz = vec![RingElem::one(config), -a11];
    let mut v = col;
    for _ in 0..n.saturating_sub(1) {
        let rv: RingElem<C> = row
            .iter()
            .zip(&v)
            .fold(RingElem::zero(config), |acc, (r, x)| &acc + &(r * &x[0]));
        toeplitz.push(-rv);
        v = mat_mul(config, &sub, &v);
    }

    let inner = charpoly_berkowitz(config, &sub);
    (0..=n)
        .map(|i| {
            (0..n)
                .filter(|&j| j <= i)
                .fold(RingElem::zero(config), |acc, j| {
                    &acc + &(&toeplitz[i - j] * &inner[j])
                })
        })
        .collect()
}

pub fn det_berkowitz<C: Coefficient>(config: RingConfig, a: &Matrix<C>) -> RingElem<C> {
    let p = charpoly_berkowitz(config, a);
    let c = p.last().unwrap().clone();
    if a.len().is_multiple_of(2) {
        c
    } else {
        -c
    }
}

/// Adjugate via cofactors: `adj[i][j] = (-1)^(i+j) det(minor(j, i))`.
pub fn adjugate_cofactor<C: Coefficient>(config: RingConfig, a: &Matrix<C>) -> Matrix<C> {
    let n = a.len();
    if n == 1 {
        return vec![vec![RingElem::one(config)]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = det_cofactor(config, &minor(a, j, i));
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        -d
                    }
                })
                .collect()
        })
        .collect()
}

/// Adjugate from the characteristic polynomial via Cayley–Hamilton:
/// `adj(A) = (-1)^(n+1) (A^(n-1) + c1 A^(n-2) + ... + c_(n-1) I)`.
pub fn adjugate_berkowitz<C: Coefficient>(config: RingConfig, a: &Matrix<C>) -> Matrix<C> {
    let n = a.len();
    let p = charpoly_berkowitz(config, a);
    // Horner: B = I; B = B*A + c_k I
    let mut b = identity(config, n);
    for c in p.iter().take(n).skip(1) {
        b = mat_mul(config, &b, a);
        for (i, row) in b.iter_mut().enumerate() {
            row[i] = &row[i] + c;
        }
    }
    if n.is_multiple_of(2) {
        b.iter().map(|row| row.iter().map(|x| -x).collect()).collect()
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn cfg() -> RingConfig {
        RingConfig::with_q(2).unwrap()
    }

    fn e(c: i64, q: i64, u: i64) -> RingElem<BigInt> {
        RingElem::monomial(cfg(), BigInt::from(c), q, u).unwrap()
    }

    fn z() -> RingElem<BigInt> {
        RingElem::zero(cfg())
    }

    fn sample() -> Matrix<BigInt> {
        // [[0, -u], [u, q + 2u]]
        vec![vec![z(), e(-1, 0, 1)], vec![e(1, 0, 1), &e(1, 1, 0) + &e(2, 0, 1)]]
    }

    #[test]
    fn two_by_two_det() {
        // cofactor by hand: 0*(q+2u) - (-u)(u) = u^2
        assert_eq!(det_cofactor(cfg(), &sample()), e(1, 0, 2));
        assert_eq!(det_berkowitz(cfg(), &sample()), e(1, 0, 2));
        assert_eq!(det_bareiss(cfg(), &sample()).unwrap(), e(1, 0, 2));
    }

    #[test]
    fn bareiss_swaps_rows_and_detects_singularity() {
        let swapped = vec![vec![z(), e(1, 0, 0)], vec![e(1, 0, 0), z()]];
        assert_eq!(det_bareiss(cfg(), &swapped).unwrap(), e(-1, 0, 0));
        let singular = vec![vec![e(1, 0, 1), e(1, 1, 0)], vec![e(2, 0, 1), e(2, 1, 0)]];
        assert!(det_bareiss(cfg(), &singular).unwrap().is_zero());
    }

    #[test]
    fn adjugate_matches_by_hand() {
        let expected = vec![
            vec![&e(1, 1, 0) + &e(2, 0, 1), e(1, 0, 1)],
            vec![e(-1, 0, 1), z()],
        ];
        assert_eq!(adjugate_cofactor(cfg(), &sample()), expected);
        assert_eq!(adjugate_berkowitz(cfg(), &sample()), expected);
    }

    #[test]
    fn diagonal_adjugate_swaps() {
        let a = vec![vec![e(3, 0, 0), z()], vec![z(), e(5, 0, 1)]];
        let adj = adjugate_cofactor(cfg(), &a);
        assert_eq!(adj, vec![vec![e(5, 0, 1), z()], vec![z(), e(3, 0, 0)]]);
    }

    #[test]
    fn identity_det_and_adjugate() {
        for n in 0..5 {
            let id = identity::<BigInt>(cfg(), n);
            assert!(det_cofactor(cfg(), &id).is_one());
            assert!(det_berkowitz(cfg(), &id).is_one());
            if n > 0 {
                assert_eq!(adjugate_berkowitz(cfg(), &id), id);
                assert_eq!(adjugate_cofactor(cfg(), &id), id);
            }
        }
    }

    #[test]
    fn three_by_three_routes_agree() {
        let a = vec![
            vec![e(2, 0, 0), e(1, 1, 0), e(-1, 0, 1)],
            vec![e(1, 0, 2), e(3, 0, 0), e(4, 1, 1)],
            vec![e(5, 0, 0), e(-2, 0, 1), e(1, 0, 0)],
        ];
        assert_eq!(det_cofactor(cfg(), &a), det_berkowitz(cfg(), &a));
        assert_eq!(det_cofactor(cfg(), &a), det_bareiss(cfg(), &a).unwrap());
        assert_eq!(adjugate_cofactor(cfg(), &a), adjugate_berkowitz(cfg(), &a));
        let d = det_cofactor(cfg(), &a);
        let prod = mat_mul(cfg(), &a, &adjugate_cofactor(cfg(), &a));
        assert_eq!(prod, scale(&identity(cfg(), 3), &d));
    }
}
