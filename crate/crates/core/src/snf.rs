//! Smith normal form over a Euclidean integer type.

use num_integer::Integer;
use num_traits::Signed;

/// Dense row-major integer matrix.
pub type IntMatrix<T> = Vec<Vec<T>>;

/// Unimodular `u`, `v` and diagonal `d` with `u · a · v = d`, where each
/// nonzero diagonal entry divides the next.
#[derive(Debug, Clone, PartialEq)]
pub struct Smith<T> {
    pub u: IntMatrix<T>,
    pub d: IntMatrix<T>,
    pub v: IntMatrix<T>,
}

impl<T: Clone + Integer + Signed> Smith<T> {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<T> {
        (0..self.d.len().min(self.d.first().map_or(0, |r| r.len())))
            .map(|i| self.d[i][i].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Invariant factors other than `±1`.
    pub fn torsion(&self) -> Vec<T> {
        self.invariant_factors()
            .into_iter()
            .filter(|x| !x.abs().is_one())
            .collect()
    }
}

pub fn identity<T: Clone + Integer>(n: usize) -> IntMatrix<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

pub fn mat_mul<T: Clone + Integer>(a: &IntMatrix<T>, b: &IntMatrix<T>, inner: usize) -> IntMatrix<T> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(T::zero(), |acc, k| acc + row[k].clone() * b[k][j].clone())
                })
                .collect()
        })
        .collect()
}

fn row_axpy<T: Clone + Integer>(m: &mut IntMatrix<T>, target: usize, source: usize, factor: &T) {
    for j in 0..m[target].len() {
        let delta = m[source][j].clone() * factor.clone();
        m[target][j] = m[target][j].clone() - delta;
    }
}

fn col_axpy<T: Clone + Integer>(m: &mut IntMatrix<T>, target: usize, source: usize, factor: &T) {
    for row in m.iter_mut() {
        let delta = row[source].clone() * factor.clone();
        row[target] = row[target].clone() - delta;
    }
}

fn swap_cols<T>(m: &mut IntMatrix<T>, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Smith normal form of an `rows × cols` matrix.
pub fn smith_normal_form<T: Clone + Integer + Signed>(a: &IntMatrix<T>, cols: usize) -> Smith<T> {
    let rows = a.len();
    let mut d = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs(&d, t..rows, t..cols) else {
            break;
        };
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !d[i][t].is_zero() {
                    let f = d[i][t].div_floor(&d[t][t]);
                    row_axpy(&mut d, i, t, &f);
                    row_axpy(&mut u, i, t, &f);
                    clean &= d[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !d[t][j].is_zero() {
                    let f = d[t][j].div_floor(&d[t][t]);
                    col_axpy(&mut d, j, t, &f);
                    col_axpy(&mut v, j, t, &f);
                    clean &= d[t][j].is_zero();
                }
            }
            if !clean {
                let row_best = min_abs(&d, t..rows, t..t + 1);
                let col_best = min_abs(&d, t..t + 1, t..cols);
                let (bi, bj) = match (row_best, col_best) {
                    (Some(a), Some(b)) if d[b.0][b.1].abs() < d[a.0][a.1].abs() => b,
                    (Some(a), _) => a,
                    (None, Some(b)) => b,
                    (None, None) => unreachable!("pivot is nonzero"),
                };
                d.swap(t, bi);
                u.swap(t, bi);
                swap_cols(&mut d, t, bj);
                swap_cols(&mut v, t, bj);
                continue;
            }
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d[i][j].is_multiple_of(&d[t][t]));
            match bad {
                Some((i, _)) => {
                    let minus_one = T::zero() - T::one();
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = T::zero() - x.clone();
            }
            for x in u[t].iter_mut() {
                *x = T::zero() - x.clone();
            }
        }
    }
    Smith { u, d, v }
}

fn min_abs<T: Clone + Integer + Signed>(
    m: &IntMatrix<T>,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if m[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}
