//! Seeded randomized property suites, shared by the test targets and the
//! `props` command.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{self, correction_slots, parse_space, render_space, LimitBasis, SpaceSpec};
use crate::module::BasisSpec;
use crate::product::{product_expand, ProductTable};
use crate::seidel::WeightRule;
use crate::template::{level_plus, unknown, Seed};
use crate::{IntElem, IntModuleElem, ModuleElem, RatElem, RingConfig, TemplateCoeff, TemplateMap};

/// Outcome of one suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub seed: u64,
    pub cases: u32,
    pub elapsed: Duration,
    /// Minimal failing input and message.
    pub failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn summary(&self) -> String {
        let status = if self.passed() { "ok" } else { "FAILED" };
        format!(
            "{:<14} {status:<6} cases={} seed={} time={:.2}s",
            self.name,
            self.cases,
            self.seed,
            self.elapsed.as_secs_f64()
        )
    }
}

pub const SUITES: [&str; 4] = ["ring", "axioms", "gradedness", "parse_render"];

/// Deterministic runner for `seed`.
pub fn runner(seed: u64, cases: u32) -> TestRunner {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    let config = Config {
        cases,
        failure_persistence: None,
        max_shrink_iters: 512,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &bytes))
}

fn run<S: Strategy>(
    name: &'static str,
    seed: u64,
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> SuiteReport
where
    S::Value: std::fmt::Debug,
{
    let start = Instant::now();
    let result = runner(seed, cases).run(&strategy, test);
    SuiteReport {
        name,
        seed,
        cases,
        elapsed: start.elapsed(),
        failure: result.err().map(|e| e.to_string()),
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn ring_config() -> RingConfig {
    RingConfig::with_q(4).expect("positive even degree")
}

/// Elements with up to `max_terms` terms, `q`-exponents in `-2..=3` (when
/// `q` is present) and `u`-exponents in `0..=3`.
pub fn int_elem(config: RingConfig, max_terms: usize) -> impl Strategy<Value = IntElem> {
    let q_hi: i64 = if config.has_q() { 3 } else { 0 };
    let q_lo = -q_hi.min(2);
    prop::collection::vec((-6i64..=6, q_lo..=q_hi, 0i64..=3), 0..=max_terms).prop_map(move |terms| {
        IntElem::from_terms(config, terms.into_iter().map(|(c, q, u)| (BigInt::from(c), q, u)))
            .expect("legal exponents")
    })
}

/// Localized elements with rational coefficients and `u`-exponents in `-2..=2`.
pub fn rat_elem(max_terms: usize) -> impl Strategy<Value = RatElem> {
    let config = ring_config().localized();
    prop::collection::vec((-6i64..=6, 1i64..=4, -2i64..=2, -2i64..=2), 0..=max_terms).prop_map(
        move |terms| {
            RatElem::from_terms(
                config,
                terms
                    .into_iter()
                    .map(|(n, d, q, u)| (BigRational::new(n.into(), d.into()), q, u)),
            )
            .expect("legal exponents")
        },
    )
}

/// Exact division undoes multiplication; addition and distributivity hold.
pub fn ring_suite(seed: u64, cases: u32) -> SuiteReport {
    let config = ring_config();
    let strategy = (
        int_elem(config, 4),
        int_elem(config, 3),
        int_elem(config, 3),
        rat_elem(3),
        rat_elem(3),
    );
    run("ring", seed, cases, strategy, |(a, b, c, x, y)| {
        let ab = &a * &b;
        if !b.is_zero() {
            let back = ab.exact_div(&b).map_err(|e| TestCaseError::fail(e.to_string()))?;
            check(back == a, || format!("({a})*({b}) / ({b}) = {back}"))?;
        }
        let sum = &(&a + &b) - &b;
        check(sum == a, || format!("({a}) + ({b}) - ({b}) = {sum}"))?;
        let lhs = &a * &(&b + &c);
        let rhs = &(&a * &b) + &(&a * &c);
        check(lhs == rhs, || format!("distributivity fails: {lhs} vs {rhs}"))?;
        if !y.is_zero() {
            let xy = &x * &y;
            let back = xy.exact_div(&y).map_err(|e| TestCaseError::fail(e.to_string()))?;
            check(back == x, || format!("localized ({x})*({y}) / ({y}) = {back}"))?;
        }
        Ok(())
    })
}

/// Builtins exercised by the suites: every builtin with `n ≤ 3`.
pub fn suite_builtins() -> Vec<SpaceSpec> {
    catalog::all_builtins(3)
}

/// Expanded product tables of every builtin with a product, `r ≤ 5`.
pub fn builtin_tables() -> Vec<(String, i64, ProductTable<BigInt>)> {
    let mut out = Vec::new();
    for spec in suite_builtins().into_iter().filter(|s| s.product.is_some()) {
        for r in 0..=5 {
            let g = spec.product_at(r).expect("builtin product instantiates");
            out.push((spec.id.clone(), r, product_expand(&g).expect("builtin product expands")));
        }
    }
    out
}

fn module_elem(table: &ProductTable<BigInt>, coords: &[IntElem]) -> IntModuleElem {
    let n = table.basis().len();
    ModuleElem::from_coords(table.basis(), table.config(), coords[..n].to_vec()).expect("shape")
}

/// Unit, commutativity, associativity and linearity of every builtin
/// product on random elements.
pub fn axioms_suite(seed: u64, cases: u32) -> SuiteReport {
    let tables = builtin_tables();
    let count = tables.len();
    let config = tables[0].2.config();
    let coords = move || prop::collection::vec(int_elem(config, 2), 4);
    let strategy = (0..count, coords(), coords(), coords(), int_elem(config, 2));
    run("axioms", seed, cases, strategy, move |(i, xs, ys, zs, s)| {
        let (id, r, table) = &tables[i];
        // Rings differ between spaces; rebuild the sampled elements in this one.
        let here = |v: &[IntElem]| -> Vec<IntElem> {
            v.iter()
                .map(|c| rehome(c, table.config()))
                .collect()
        };
        let (x, y, z) = (
            module_elem(table, &here(&xs)),
            module_elem(table, &here(&ys)),
            module_elem(table, &here(&zs)),
        );
        let s = rehome(&s, table.config());
        let fail = |e: crate::module::ModuleError| TestCaseError::fail(e.to_string());
        let xy = table.multiply(&x, &y).map_err(fail)?;
        let yx = table.multiply(&y, &x).map_err(fail)?;
        check(xy == yx, || format!("{id} r={r}: x*y != y*x for x={x}, y={y}"))?;
        let lhs = table.multiply(&xy, &z).map_err(fail)?;
        let yz = table.multiply(&y, &z).map_err(fail)?;
        let rhs = table.multiply(&x, &yz).map_err(fail)?;
        check(lhs == rhs, || format!("{id} r={r}: associativity fails for {x}, {y}, {z}"))?;
        let unit = ModuleElem::basis_vector(table.basis(), table.config(), 0);
        let ux = table.multiply(&unit, &x).map_err(fail)?;
        check(ux == x, || format!("{id} r={r}: unit*x = {ux} for x={x}"))?;
        let sx = x.scale(&s).map_err(fail)?;
        let lin = table.multiply(&sx, &y).map_err(fail)?;
        let expected = xy.scale(&s).map_err(fail)?;
        check(lin == expected, || format!("{id} r={r}: linearity fails for s={s}"))?;
        Ok(())
    })
}

/// Move an element into `config`, dropping `q` when it is absent.
fn rehome(x: &IntElem, config: RingConfig) -> IntElem {
    IntElem::from_terms(
        config,
        x.terms()
            .filter(|(m, _)| config.has_q() || m.q == 0)
            .map(|(m, c)| (c.clone(), m.q, m.u)),
    )
    .expect("exponents legal in every unlocalized ring")
}

/// Every instantiated builtin matrix is graded, and maps homogeneous
/// elements to homogeneous elements of the shifted degree.
pub fn gradedness_suite(seed: u64, cases: u32) -> SuiteReport {
    let specs = suite_builtins();
    let count = specs.len();
    let strategy = (0..count, 0i64..=5, 0usize..3, 0usize..5, -1i64..=2, 0i64..=3, -5i64..=5);
    run("gradedness", seed, cases, strategy, move |(i, r, kind, k, a, b, c)| {
        let spec = &specs[i];
        let template = match kind {
            0 => Some(&spec.seidel),
            1 => spec.product.as_ref(),
            _ => spec.inverse.as_ref(),
        };
        let Some(t) = template else { return Ok(()) };
        let map = crate::template::instantiate_numeric(t, r, &spec.seeds)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let report = map.check_grading();
        check(report.passed(), || format!("{} r={r} kind={kind}: {report}", spec.id))?;
        let k = k % spec.basis.len();
        let a = if spec.config.has_q() { a } else { 0 };
        let scalar = IntElem::from_terms(spec.config, [(BigInt::from(c), a, b)])
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let x = ModuleElem::basis_vector(&spec.basis, spec.config, k)
            .scale(&scalar)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let y = map.apply(&x).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let (dx, dy) = (x.degree(), y.degree());
        match (dx, dy) {
            (Ok(Some(dx)), Ok(Some(dy))) => {
                check(dy == dx + map.shift(), || format!("{}: degree {dx} -> {dy}", spec.id))
            }
            (Ok(_), Ok(None)) | (Ok(None), _) => Ok(()),
            _ => Err(TestCaseError::fail(format!("{}: image {y} not homogeneous", spec.id))),
        }
    })
}

const NAMES: [&str; 4] = ["a", "b", "c", "d"];

fn random_coeff(rng: &mut ChaCha8Rng) -> TemplateCoeff {
    let c = TemplateCoeff::from_int(rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 });
    match rng.gen_range(0..4) {
        0 => c,
        1 => c * level_plus(rng.gen_range(-2..=2)),
        2 => unknown(NAMES[rng.gen_range(0..NAMES.len())]),
        _ => c * unknown(NAMES[rng.gen_range(0..NAMES.len())]) + TemplateCoeff::from_int(1),
    }
}

fn random_map(
    rng: &mut ChaCha8Rng,
    basis: &BasisSpec,
    config: RingConfig,
    shift: i64,
    q_half: i64,
) -> TemplateMap {
    let n = basis.len();
    let mut m = vec![vec![crate::RingElem::zero(config); n]; n];
    for (k, _) in basis.labels().iter().enumerate() {
        for (l, row) in m.iter_mut().enumerate() {
            let d = shift + basis.degree(k) - basis.degree(l);
            for a in -1i64..=2 {
                let rest = d - 2 * q_half * a;
                if rest < 0 || rest % 2 != 0 || !rng.gen_bool(0.35) {
                    continue;
                }
                let term = crate::RingElem::from_terms(config, [(random_coeff(rng), a, rest / 2)])
                    .expect("legal exponents");
                row[k] = &row[k] + &term;
            }
        }
    }
    TemplateMap::new(basis.clone(), basis.clone(), config, shift, m).expect("graded by construction")
}

/// A random valid space specification derived from `seed`.
pub fn random_spec(seed: u64) -> SpaceSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=3usize);
    let q_half = rng.gen_range(1..=4i64);
    let config = RingConfig::with_q(2 * q_half).expect("positive even degree");
    let basis = BasisSpec::standard(n);
    let maslov = 2 * rng.gen_range(0..=n as i64);
    let product = random_map(&mut rng, &basis, config, 2, q_half);
    let seidel = random_map(&mut rng, &basis, config, maslov, q_half);
    let inverse = rng
        .gen_bool(0.3)
        .then(|| random_map(&mut rng, &basis, config, -maslov, q_half));
    let mut spec = SpaceSpec {
        id: format!("random_{seed}"),
        config,
        basis: basis.clone(),
        unit: "e0".into(),
        generator: Some("e1".into()),
        product: Some(product),
        seidel,
        inverse,
        seeds: Vec::new(),
        zeros: Vec::new(),
        limit: None,
        weight: WeightRule::default(),
    };
    for name in spec.unknowns() {
        match rng.gen_range(0..3) {
            0 => spec.seeds.push(Seed::at_level(&name, rng.gen_range(0..3), rng.gen_range(-3..=3))),
            1 => spec.seeds.push(Seed::family(&name, level_plus(rng.gen_range(0..3)))),
            _ => {}
        }
    }
    let slots = correction_slots(&spec);
    for s in slots {
        if rng.gen_bool(0.2) {
            spec.zeros.push(s);
        }
    }
    if rng.gen_bool(0.5) {
        spec.weight = WeightRule {
            slope: BigRational::new(rng.gen_range(-3..=3).into(), rng.gen_range(1..=3).into()),
            offset: BigRational::new(rng.gen_range(-3..=3).into(), rng.gen_range(1..=3).into()),
        };
    }
    if q_half == n as i64 && rng.gen_bool(0.5) {
        let last = ModuleElem::basis_vector(&basis, config, n);
        let q = IntElem::q(config).expect("q present");
        let g0 = last
            .try_add(&ModuleElem::basis_vector(&basis, config, 0).scale(&q).expect("same ring"))
            .expect("same basis");
        let mut vectors = vec![g0];
        vectors.extend((1..=n).map(|k| ModuleElem::basis_vector(&basis, config, k)));
        spec.limit = Some(LimitBasis {
            labels: (0..=n).map(|k| format!("g{k}")).collect(),
            vectors,
        });
    }
    spec.validate().expect("random spec is valid by construction");
    spec
}

/// `parse ∘ render` is the identity on random specs and `render` is a fixpoint.
pub fn parse_render_suite(seed: u64, cases: u32) -> SuiteReport {
    run("parse_render", seed, cases, any::<u64>(), |spec_seed| {
        let spec = random_spec(spec_seed);
        let text = render_space(&spec);
        let parsed = parse_space(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        check(parsed == spec, || format!("reparse differs for spec seed {spec_seed}:\n{text}"))?;
        let again = render_space(&parsed);
        check(again == text, || format!("render not a fixpoint:\n{text}\n---\n{again}"))
    })
}

/// Run the named suite, or `None` if the name is unknown.
pub fn run_suite(name: &str, seed: u64, cases: u32) -> Option<SuiteReport> {
    Some(match name {
        "ring" => ring_suite(seed, cases),
        "axioms" => axioms_suite(seed, cases),
        "gradedness" => gradedness_suite(seed, cases),
        "parse_render" => parse_render_suite(seed, cases),
        _ => return None,
    })
}

pub fn run_all(seed: u64, cases: u32) -> Vec<SuiteReport> {
    SUITES
        .iter()
        .map(|s| run_suite(s, seed, cases).expect("listed suite"))
        .collect()
}
