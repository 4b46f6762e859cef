//! Lexicographic Gröbner bases for the small polynomial systems left over
//! after linear elimination.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::Poly;
use crate::unipoly::UniPoly;

/// Exponent vector; index 0 is the most significant variable.
type Exps = Vec<u32>;
type Dense = Vec<(Exps, BigRational)>;

/// Upper bound on processed S-pairs before giving up.
const PAIR_LIMIT: usize = 4000;

fn normalize(mut p: Dense) -> Dense {
    p.sort_by(|a, b| b.0.cmp(&a.0));
    let mut out: Dense = Vec::with_capacity(p.len());
    for (e, c) in p {
        match out.last_mut() {
            Some((le, lc)) if *le == e => *lc = &*lc + &c,
            _ => out.push((e, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

fn monic(p: Dense) -> Dense {
    let Some(lead) = p.first().map(|t| t.1.clone()) else {
        return p;
    };
    p.into_iter().map(|(e, c)| (e, c / &lead)).collect()
}

fn divides(a: &Exps, b: &Exps) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn sub(a: &Exps, b: &Exps) -> Exps {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn lcm(a: &Exps, b: &Exps) -> Exps {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// `p − c · x^shift · g`.
fn sub_scaled(p: &Dense, g: &Dense, c: &BigRational, shift: &Exps) -> Dense {
    let mut out = p.clone();
    for (e, gc) in g {
        let e: Exps = e.iter().zip(shift).map(|(x, y)| x + y).collect();
        out.push((e, -(c * gc)));
    }
    normalize(out)
}

fn reduce(p: &Dense, basis: &[Dense]) -> Dense {
    let mut p = p.clone();
    let mut rest: Dense = Vec::new();
    while let Some((e, c)) = p.first().cloned() {
        match basis.iter().find(|g| divides(&g[0].0, &e)) {
            Some(g) => {
                let factor = &c / &g[0].1;
                p = sub_scaled(&p, g, &factor, &sub(&e, &g[0].0));
            }
            None => {
                rest.push((e, c));
                p.remove(0);
            }
        }
    }
    normalize(rest)
}

fn s_poly(f: &Dense, g: &Dense) -> Dense {
    let l = lcm(&f[0].0, &g[0].0);
    let a = sub_scaled(&Vec::new(), f, &(-(BigRational::one() / &f[0].1)), &sub(&l, &f[0].0));
    sub_scaled(&a, g, &(BigRational::one() / &g[0].1), &sub(&l, &g[0].0))
}

/// Buchberger's algorithm with the coprime-leading-term criterion; `None`
/// when the pair budget is exhausted.
fn buchberger(input: Vec<Dense>) -> Option<Vec<Dense>> {
    let mut basis: Vec<Dense> = input.into_iter().filter(|p| !p.is_empty()).map(monic).collect();
    let mut pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    let mut processed = 0;
    while let Some((i, j)) = pairs.pop() {
        processed += 1;
        if processed > PAIR_LIMIT {
            return None;
        }
        let (fi, fj) = (&basis[i][0].0, &basis[j][0].0);
        if fi.iter().zip(fj).all(|(x, y)| *x == 0 || *y == 0) {
            continue;
        }
        let r = reduce(&s_poly(&basis[i], &basis[j]), &basis);
        if !r.is_empty() {
            basis.push(monic(r));
            let k = basis.len() - 1;
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }
    Some(basis)
}

/// Find the smallest variable whose elimination ideal is generated by a
/// polynomial with a single (possibly repeated) rational root, and return
/// that root.
pub fn eliminate_to_root<V: crate::poly::Variable>(eqs: &[Poly<V, BigRational>]) -> Option<(V, BigRational)> {
    let vars: Vec<V> = eqs
        .iter()
        .flat_map(|e| e.vars())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .rev()
        .collect();
    if vars.is_empty() {
        return None;
    }
    let dense: Vec<Dense> = eqs
        .iter()
        .map(|e| {
            normalize(
                e.terms()
                    .map(|(m, c)| (vars.iter().map(|v| m.degree_in(v)).collect(), c.clone()))
                    .collect(),
            )
        })
        .collect();
    let basis = buchberger(dense)?;
    let last = vars.len() - 1;
    let univariate: Vec<UniPoly> = basis
        .iter()
        .filter(|p| p.iter().all(|(e, _)| e[..last].iter().all(|x| *x == 0)))
        .map(|p| {
            let deg = p[0].0[last] as usize;
            let mut coeffs = vec![BigRational::zero(); deg + 1];
            for (e, c) in p {
                coeffs[e[last] as usize] = c.clone();
            }
            UniPoly::new(coeffs)
        })
        .collect();
    let g = univariate.iter().fold(UniPoly::zero(), |acc, p| acc.gcd(p));
    let sf = g.squarefree_part();
    if sf.degree() != Some(1) {
        return None;
    }
    let c = sf.coeffs();
    Some((vars[last].clone(), -(&c[0] / &c[1])))
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Poly<&'static str, BigRational>;

    fn var(v: &'static str) -> P {
        P::var(v)
    }

    #[test]
    fn coupled_cubic_collapses_to_a_triple_root() {
        let (a, g) = (var("a"), var("g"));
        let three = P::from_int(3);
        let f1 = P::from_int(1)
            - a.clone() * a.clone() * g.clone()
            - a.clone() * g.clone() * g.clone()
            - three.clone() * a.clone() * g.clone();
        let f2 = g.clone() * g.clone() + three.clone() * g.clone() + a.clone() * a.clone()
            + a.clone() * g.clone()
            + three.clone() * a
            + three;
        let (v, root) = eliminate_to_root(&[f1, f2]).unwrap();
        assert_eq!(v, "a");
        assert_eq!(root, BigRational::from_integer((-1).into()));
    }

    #[test]
    fn two_distinct_roots_are_not_resolved() {
        let x = var("x");
        assert!(eliminate_to_root(&[x.clone() * x - P::from_int(1)]).is_none());
    }
}
