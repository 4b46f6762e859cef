mod common;

use common::elem;
use eqseidel::catalog;
use eqseidel::limit::{
    adjugate, chain_strictness, det_division_free, det_two_ways, generator_sequence, nonequivariant_limit,
    normalized_generators, presentation_generators, trajectory_valuations, GeneratorSequence,
};
use eqseidel::linalg::{det_bareiss, det_cofactor};
use eqseidel::seidel::SeidelFamily;
use eqseidel::template::template_from_numeric;
use eqseidel::{BasisSpec, IntElem, IntMap, IntModuleElem, ModuleElem, RingConfig, RingElem};
use num_bigint::BigInt;

fn taut_sequence(n: usize, p_max: usize) -> GeneratorSequence {
    let spec = catalog::taut_line_bundle(n);
    let change = spec.limit.as_ref().unwrap().change().unwrap();
    generator_sequence(&spec.seidel_family(), Some(&change), p_max).unwrap()
}

fn ordered(config: RingConfig, g0: IntElem, g1: IntElem) -> IntModuleElem {
    let basis = BasisSpec::new(vec!["g0".into(), "g1".into()], vec![2, 2]).unwrap();
    ModuleElem::from_coords(&basis, config, vec![g0, g1]).unwrap()
}

fn identity_family(n: usize) -> SeidelFamily {
    let config = RingConfig::with_q(2 * n as i64).unwrap();
    let id = IntMap::identity(&BasisSpec::standard(n), config);
    SeidelFamily::new("identity", template_from_numeric(&id), Vec::new())
}

#[test]
fn taut_determinant_law() {
    for n in 1..=3 {
        let spec = catalog::taut_line_bundle(n);
        for r in 0..=5i64 {
            let m = spec.seidel_family().instantiate(r).unwrap();
            let expected = elem(spec.config, &[((r + 1).pow(n as u32 + 1), 0, n as i64 + 1)]);
            assert_eq!(det_two_ways(spec.config, m.matrix(), r).unwrap(), expected, "n={n} r={r}");
        }
    }
    let m = catalog::taut_line_bundle(2).seidel_family().instantiate(1).unwrap();
    assert_eq!(det_division_free(m.config(), m.matrix()).render(), "8*u^3");
}

#[test]
fn determinant_routes_agree_on_every_builtin() {
    for spec in catalog::all_builtins(4) {
        for r in 0..=5 {
            let m = spec.seidel_family().instantiate(r).unwrap();
            let d = det_division_free(spec.config, m.matrix());
            assert_eq!(d, det_cofactor(spec.config, m.matrix()));
            assert_eq!(d, det_bareiss(spec.config, m.matrix()).unwrap());
        }
    }
}

#[test]
fn two_by_two_adjugate() {
    let config = RingConfig::with_q(2).unwrap();
    let m = vec![
        vec![RingElem::zero(config), elem(config, &[(-1, 0, 1)])],
        vec![elem(config, &[(1, 0, 1)]), elem(config, &[(1, 1, 0), (2, 0, 1)])],
    ];
    assert_eq!(det_two_ways(config, &m, 0).unwrap(), elem(config, &[(1, 0, 2)]));
    let expected = vec![
        vec![elem(config, &[(1, 1, 0), (2, 0, 1)]), elem(config, &[(1, 0, 1)])],
        vec![elem(config, &[(-1, 0, 1)]), RingElem::zero(config)],
    ];
    assert_eq!(adjugate(config, &m).unwrap(), expected);
}

#[test]
fn trivial_adjugates() {
    let config = RingConfig::with_q(2).unwrap();
    let id = eqseidel::linalg::identity::<BigInt>(config, 3);
    assert_eq!(adjugate(config, &id).unwrap(), id);
    assert!(det_two_ways(config, &id, 0).unwrap().is_one());
    let (a, b) = (elem(config, &[(3, 0, 1)]), elem(config, &[(1, 1, 0)]));
    let zero = RingElem::zero(config);
    let diag = vec![vec![a.clone(), zero.clone()], vec![zero.clone(), b.clone()]];
    assert_eq!(adjugate(config, &diag).unwrap(), vec![vec![b, zero.clone()], vec![zero, a]]);
}

#[test]
fn recurrence_matches_direct_products() {
    let seq = taut_sequence(1, 4);
    let config = seq.config;
    for p in 0..4usize {
        let (x0, x1) = (&seq.generators[p][0], &seq.generators[p][1]);
        let k = p as i64 + 1;
        let u_k = elem(config, &[(k, 0, 1)]);
        assert_eq!(seq.generators[p + 1][1], x0.scale(&u_k).unwrap(), "x1 at p={}", p + 1);
        let next0 = x0
            .scale(&elem(config, &[(1, 1, 0), (2 * k, 0, 1)]))
            .unwrap()
            .try_sub(&x1.scale(&u_k).unwrap())
            .unwrap();
        assert_eq!(seq.generators[p + 1][0], next0, "x0 at p={}", p + 1);
    }
    for (p, d) in seq.det_products.iter().enumerate() {
        let factorial: i64 = (1..=p as i64).product();
        assert_eq!(*d, elem(config, &[(factorial * factorial, 0, 2 * p as i64)]));
    }
}

#[test]
fn generators_mod_u_squared() {
    let seq = taut_sequence(1, 4);
    let config = seq.config;
    assert_eq!(
        seq.generators[1][0],
        ordered(config, elem(config, &[(1, 1, 0), (2, 0, 1)]), elem(config, &[(-1, 0, 1)]))
    );
    for p in 1..=4i64 {
        let expected = ordered(
            config,
            elem(config, &[(1, p, 0), (p * (p + 1), p - 1, 1)]),
            elem(config, &[(-1, p - 1, 1)]),
        );
        assert_eq!(seq.generators[p as usize][0].truncate_u(2), expected, "p={p}");
    }
}

#[test]
fn zero_steps_give_the_ordered_basis() {
    let seq = taut_sequence(1, 0);
    let normalized = normalized_generators(&seq).unwrap();
    assert_eq!(normalized.len(), 1);
    for (k, g) in normalized[0].iter().enumerate() {
        assert_eq!(g, &ModuleElem::basis_vector(&seq.basis, seq.config.localized(), k));
    }
}

#[test]
fn presentation_denominators() {
    let seq = taut_sequence(1, 4);
    let pres = presentation_generators(&seq).unwrap();
    for g in &pres {
        let p = g.p as i64;
        let factorial: i64 = (1..=p).product();
        let expected = elem(seq.config, &[(factorial * factorial * (p + 1), 0, 2 * p + 1)]);
        assert_eq!(g.denominator, expected);
    }
    assert_eq!(pres[1].denominator.render(), "2*u^3");
}

#[test]
fn chain_is_strict() {
    for n in 1..=3 {
        let report = chain_strictness(&taut_sequence(n, 3));
        assert!(report.strict_everywhere(), "n={n}: {report:?}");
        assert_eq!(report.steps.len(), 3);
    }
}

#[test]
fn identity_chain_stabilizes_immediately() {
    let seq = generator_sequence(&identity_family(2), None, 3).unwrap();
    assert_eq!(chain_strictness(&seq).stabilizes_at, Some(0));
}

#[test]
fn top_class_never_gains_u_divisibility() {
    for n in 1..=3 {
        let label = format!("e{n}");
        let traj = trajectory_valuations(&catalog::taut_line_bundle(n).seidel_family(), &label, 4).unwrap();
        assert!(traj.iter().all(|(_, v, _)| *v == 0), "n={n}: {traj:?}");
    }
}

#[test]
fn taut_nonequivariant_limit() {
    for n in 1..=3 {
        let spec = catalog::taut_line_bundle(n);
        let lim = nonequivariant_limit(&spec.seidel_family()).unwrap();
        let mut coords = vec![RingElem::zero(spec.config); n + 1];
        coords[0] = elem(spec.config, &[(1, 1, 0)]);
        coords[n] = elem(spec.config, &[(1, 0, 0)]);
        let expected = ModuleElem::from_coords(&spec.basis, spec.config, coords).unwrap();
        assert_eq!(lim.kernel.len(), 1);
        assert!(lim.kernel[0] == expected || lim.kernel[0] == expected.neg(), "n={n}");
        assert_eq!(lim.quotient_rank, n);
        assert!(lim.induced_is_unit());
    }
}

#[test]
fn complex_plane_limit_vanishes() {
    let lim = nonequivariant_limit(&catalog::complex_plane().seidel_family()).unwrap();
    assert_eq!(lim.quotient_rank, 0);
}

#[test]
fn identity_limit_is_everything() {
    let lim = nonequivariant_limit(&identity_family(2)).unwrap();
    assert!(lim.kernel.is_empty());
    assert_eq!(lim.quotient_rank, 3);
    assert!(lim.induced_is_unit());
}
