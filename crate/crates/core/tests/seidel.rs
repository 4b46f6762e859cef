mod common;

use common::{column, elem};
use eqseidel::catalog::{self, parse_space, render_space};
use eqseidel::product::product_expand;
use eqseidel::seidel::{
    check_inverse_maps, intertwining_residual, seidel_instantiate, weighted_seidel, Intertwining, WeightRule,
};
use eqseidel::{IntMap, ModuleElem, RingConfig};
use num_bigint::BigInt;

fn slope_one() -> WeightRule {
    WeightRule::new(1, 0)
}

#[test]
fn instantiation_examples() {
    let c = seidel_instantiate(&catalog::complex_plane().seidel_family(), 2).unwrap();
    assert_eq!(c.entry(0, 0), &elem(RingConfig::without_q(), &[(3, 0, 1)]));
    let c3 = seidel_instantiate(&catalog::complex_space(3).seidel_family(), 0).unwrap();
    assert_eq!(c3.entry(0, 0), &elem(RingConfig::without_q(), &[(1, 0, 3)]));
    let spec = catalog::taut_line_bundle(2);
    let m = seidel_instantiate(&spec.seidel_family(), 1).unwrap();
    let expected = column(&spec.basis, spec.config, &[(1, (1, 1, 0)), (2, (2, 0, 1)), (0, (-2, 1, 1))]);
    assert_eq!(m.column(2), expected);
}

#[test]
fn instantiated_maps_carry_the_maslov_shift() {
    for spec in catalog::all_builtins(4) {
        for r in 0..=5 {
            let m = spec.seidel_family().instantiate(r).unwrap();
            assert_eq!(m.shift(), spec.maslov_shift());
            assert!(m.check_grading().passed(), "{} r={r}", spec.id);
        }
    }
}

#[test]
fn nonequivariant_part_is_level_independent() {
    for spec in catalog::all_builtins(4) {
        let base = spec.seidel_family().instantiate(0).unwrap().at_u_zero().unwrap();
        for r in 1..=5 {
            let m = spec.seidel_family().instantiate(r).unwrap().at_u_zero().unwrap();
            assert_eq!(m, base, "{} r={r}", spec.id);
        }
    }
}

#[test]
fn weighted_projective_plane() {
    let spec = catalog::projective_space(2);
    for r in 0..=4 {
        let w = weighted_seidel(&spec.seidel_family().instantiate(r).unwrap(), &slope_one()).unwrap();
        assert!(w.column(0).is_zero());
        assert_eq!(w.column(1), column(&spec.basis, spec.config, &[(0, (1, 1, 0))]));
        assert_eq!(w.shift(), spec.maslov_shift());
    }
}

#[test]
fn weighted_taut_columns_below_the_top_vanish() {
    for n in 1..=3 {
        let spec = catalog::taut_line_bundle(n);
        let w = weighted_seidel(&spec.seidel_family().instantiate(2).unwrap(), &slope_one()).unwrap();
        for k in 0..n {
            assert!(w.column(k).is_zero(), "n={n} e{k}");
        }
    }
}

#[test]
fn weighting_is_additive_and_vanishes_at_zero() {
    let m = catalog::taut_line_bundle(2).seidel_family().instantiate(3).unwrap();
    assert!(weighted_seidel(&m, &WeightRule::new(0, 0)).unwrap().is_zero());
    let (a, b) = (WeightRule::new(2, -1), WeightRule::new(-3, 5));
    let sum = weighted_seidel(&m, &a.add(&b)).unwrap();
    let parts = weighted_seidel(&m, &a).unwrap().try_add(&weighted_seidel(&m, &b).unwrap()).unwrap();
    assert_eq!(sum, parts);
}

#[test]
fn residual_examples() {
    let p2 = catalog::projective_space(2);
    let data = Intertwining::along("e1", slope_one());
    let now = product_expand(&p2.product_at(3).unwrap()).unwrap();
    let next = product_expand(&p2.product_at(4).unwrap()).unwrap();
    let s = p2.seidel_family().instantiate(3).unwrap();
    let e2 = ModuleElem::labelled(&p2.basis, p2.config, "e2").unwrap();
    assert!(intertwining_residual(&s, &now, &next, &data, &e2).unwrap().is_zero());
    let zero = ModuleElem::zero(&p2.basis, p2.config);
    assert!(intertwining_residual(&s, &now, &next, &data, &zero).unwrap().is_zero());

    let o2 = catalog::taut_line_bundle(2);
    let now = product_expand(&o2.product_at(0).unwrap()).unwrap();
    let next = product_expand(&o2.product_at(1).unwrap()).unwrap();
    let s = o2.seidel_family().instantiate(0).unwrap();
    let e2 = ModuleElem::labelled(&o2.basis, o2.config, "e2").unwrap();
    assert!(intertwining_residual(&s, &now, &next, &data, &e2).unwrap().is_zero());
}

#[test]
fn wrong_weight_breaks_the_relation() {
    let p2 = catalog::projective_space(2);
    let data = Intertwining::along("e1", WeightRule::new(2, 0));
    let now = product_expand(&p2.product_at(1).unwrap()).unwrap();
    let next = product_expand(&p2.product_at(2).unwrap()).unwrap();
    let s = p2.seidel_family().instantiate(1).unwrap();
    let e1 = ModuleElem::labelled(&p2.basis, p2.config, "e1").unwrap();
    assert!(!intertwining_residual(&s, &now, &next, &data, &e1).unwrap().is_zero());
}

#[test]
fn flipped_inverse_entry_is_located() {
    let spec = catalog::projective_space(2);
    let forward = spec.seidel_family().instantiate(1).unwrap();
    let inverse = spec.inverse_family().unwrap().instantiate(1).unwrap();
    assert!(check_inverse_maps(&forward, &inverse).unwrap().passed());
    let mut matrix = inverse.matrix().clone();
    matrix[0][2] = -matrix[0][2].clone();
    let broken = IntMap::new(
        inverse.source().clone(),
        inverse.target().clone(),
        inverse.config(),
        inverse.shift(),
        matrix,
    )
    .unwrap();
    let report = check_inverse_maps(&forward, &broken).unwrap();
    assert!(!report.passed());
    assert!(report
        .failures
        .iter()
        .any(|f| f.composite == "inverse∘forward" && f.row == "e0"));
}

#[test]
fn plane_has_no_unlocalized_inverse() {
    let config = RingConfig::without_q();
    assert!(eqseidel::RingElem::<BigInt>::from_terms(config, [(BigInt::from(1), 0, -1)]).is_err());
    let text = format!("{}\n[inverse]\ne0 -> u^-1*e0\n", render_space(&catalog::complex_plane()));
    assert!(parse_space(&text).is_err());
}
