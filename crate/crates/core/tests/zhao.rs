use eqseidel::limit::{recognize_rank_one, RankOneLimit};
use eqseidel::zhao::{build_complex, cohomology, continuation_action, verify_d_squared, Cochain, ZhaoError, ZhaoGen};
use eqseidel::RingConfig;
use num_bigint::BigInt;

/// The differential written straight from its defining formula.
fn oracle_differential(g: ZhaoGen, k_max: usize) -> Cochain {
    let mut out = Cochain::new();
    if g.j % 2 == 1 {
        let j = g.j.div_ceil(2);
        out.insert(ZhaoGen::new(g.k, 2 * j - 2), BigInt::from(1));
        if g.k < k_max {
            out.insert(ZhaoGen::new(g.k + 1, 2 * j), BigInt::from(-(j as i64)));
        }
    }
    out
}

#[test]
fn differential_follows_the_formula() {
    for s in 0..=4 {
        for k_max in 1..=10 {
            let c = build_complex(s, k_max).unwrap();
            assert_eq!(c.generators.len(), (k_max + 1) * (2 * s + 1));
            for &g in &c.generators {
                assert_eq!(c.differential(g), oracle_differential(g, k_max), "{g} s={s} K={k_max}");
            }
        }
    }
}

#[test]
fn d_squared_vanishes() {
    for s in 0..=4 {
        for k_max in 1..=10 {
            let report = verify_d_squared(&build_complex(s, k_max).unwrap());
            assert!(report.passed(), "s={s} K={k_max}: {:?}", report.failures);
            assert_eq!(report.checked, (k_max + 1) * (2 * s + 1));
        }
    }
}

#[test]
fn injected_fault_is_detected() {
    let c = build_complex(2, 6).unwrap().with_perturbation(ZhaoGen::new(1, 2)).unwrap();
    let report = verify_d_squared(&c);
    assert!(!report.passed());
    assert!(report.failures.iter().any(|f| f.generator == ZhaoGen::new(1, 3)));
    assert!(build_complex(2, 6).unwrap().with_perturbation(ZhaoGen::new(1, 3)).is_err());
}

#[test]
fn cohomology_is_free_of_rank_one_in_even_degrees() {
    for s in 0..=4usize {
        let k_max = 10;
        let c = build_complex(s, k_max).unwrap();
        let lowest = -2 * s as i64;
        let top = 2 * (k_max as i64 - 2) - 2 * s as i64 + 1;
        let groups = cohomology(&c, lowest - 3..=top).unwrap();
        for h in groups {
            let expected = usize::from(h.degree >= lowest && h.degree % 2 == 0);
            assert_eq!(h.rank, expected, "s={s} degree {}", h.degree);
            assert!(h.torsion.is_empty(), "s={s} degree {}", h.degree);
        }
        assert!(matches!(
            cohomology(&c, [top + 1]),
            Err(ZhaoError::TruncationTooSmall { .. })
        ));
    }
}

#[test]
fn continuation_multiplies_by_s_plus_one_u() {
    let factors: Vec<_> = (0..=4).map(|s| continuation_action(s).unwrap()).collect();
    for (s, f) in factors.iter().enumerate() {
        assert_eq!(f.coefficient, BigInt::from(s + 1));
        assert_eq!(f.u_power, 1);
        assert_eq!(f.render(), format!("{}*u", s + 1));
    }
    let config = RingConfig::without_q();
    let elems: Vec<_> = factors.iter().map(|f| f.as_ring_elem(config).unwrap()).collect();
    assert_eq!(recognize_rank_one(&elems), RankOneLimit::RationalLaurent);
    assert_eq!(recognize_rank_one(&elems).render(), "Q[u, u^-1]");
}

#[test]
fn rank_one_recognizer_cases() {
    let config = RingConfig::without_q();
    let mono = |c: i64, u: i64| eqseidel::RingElem::from_terms(config, [(BigInt::from(c), 0, u)]).unwrap();
    assert_eq!(recognize_rank_one(&[mono(1, 0), mono(-1, 0)]), RankOneLimit::Polynomial);
    assert_eq!(recognize_rank_one(&[mono(1, 1), mono(-1, 2)]), RankOneLimit::IntegerLaurent);
    assert_eq!(recognize_rank_one(&[mono(2, 1), mono(2, 1)]), RankOneLimit::Unrecognized);
    assert_eq!(recognize_rank_one(&[]), RankOneLimit::Unrecognized);
}
