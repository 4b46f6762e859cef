//! One function per subcommand, each producing a [`Report`].

use std::path::{Path, PathBuf};

use clap::Args;
use eqseidel::catalog::{self, CatalogError, SpaceSpec};
use eqseidel::export::Table;
use eqseidel::limit::{
    chain_strictness, generator_sequence, nonequivariant_limit, presentation_generators, recognize_rank_one,
    LimitError,
};
use eqseidel::product::{product_expand, GeneratorProduct};
use eqseidel::seidel::{
    check_inverse_maps, intertwining_operator, weighted_seidel, Intertwining, SeidelError,
};
use eqseidel::solver::{ansatz_build, induct_over_r, SolveError};
use eqseidel::zhao::{
    build_complex, cohomology, continuation_action, render_cochain, verify_d_squared, ZhaoError, ZhaoGen,
};
use eqseidel::{IntMap, ModuleElem, RingConfig};
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

/// A builtin by name, or a definition file.
#[derive(Debug, Clone, Args)]
pub struct SpaceArgs {
    /// Builtin space, e.g. `projective_space(2)`.
    #[arg(long, required_unless_present = "spec", conflicts_with = "spec")]
    pub space: Option<String>,
    /// Space definition file (`.eqh`).
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

impl SpaceArgs {
    fn describe(&self) -> String {
        match (&self.space, &self.spec) {
            (Some(s), _) => s.clone(),
            (None, Some(p)) => p.display().to_string(),
            (None, None) => String::new(),
        }
    }

    /// Load the space; `ansatz` selects the unknown-coefficient builtin.
    fn load(&self, ansatz: bool) -> Result<SpaceSpec, CliError> {
        match (&self.space, &self.spec) {
            (Some(name), _) if ansatz => Ok(catalog::builtin_ansatz_by_name(name)?),
            (Some(name), _) => Ok(catalog::builtin_by_name(name)?),
            (None, Some(path)) => read_spec(path),
            (None, None) => Err(CliError::Usage("one of --space or --spec is required".into())),
        }
    }

    /// Load a space with every coefficient known.
    fn load_closed(&self) -> Result<SpaceSpec, CliError> {
        let spec = self.load(false)?;
        let unknowns = spec.unknowns();
        if !unknowns.is_empty() {
            return Err(CliError::Usage(format!(
                "{} has unknown coefficients ({}); run `solve` first",
                spec.id,
                unknowns.join(", ")
            )));
        }
        Ok(spec)
    }
}

fn read_spec(path: &Path) -> Result<SpaceSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    catalog::parse_space(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn need_product(spec: &SpaceSpec, r: i64) -> Result<GeneratorProduct<num_bigint::BigInt>, CliError> {
    spec.product_at(r).map_err(internal)
}

pub fn spaces() -> Result<Report, CliError> {
    let mut report = Report::new("spaces", json!({}));
    let mut t = Table::new(["id", "q_degree", "rank", "degrees", "maslov", "generator", "inverse", "ansatz"])
        .titled("Builtin spaces");
    for spec in catalog::all_builtins(3) {
        let ansatz = catalog::builtin_ansatz_by_name(&spec.id)?.unknowns().join(" ");
        t.push([
            spec.id.clone(),
            spec.config.q_degree().map_or("-".into(), |d| d.to_string()),
            spec.basis.len().to_string(),
            spec.basis.degrees().iter().map(i64::to_string).collect::<Vec<_>>().join(" "),
            spec.maslov_shift().to_string(),
            spec.generator.clone().unwrap_or_else(|| "-".into()),
            if spec.inverse.is_some() { "yes" } else { "no" }.to_string(),
            if ansatz.is_empty() { "-".into() } else { ansatz },
        ]);
    }
    report.section("spaces", t);
    Ok(report)
}

pub fn product(space: &SpaceArgs, r: i64) -> Result<Report, CliError> {
    let spec = space.load_closed()?;
    let table = product_expand(&need_product(&spec, r)?).map_err(internal)?;
    let mut report = Report::new("product", json!({"space": spec.id, "r": r}));
    let mut t = Table::new(["left", "right", "product"]).titled(format!("{} product at level {r}", spec.id));
    for (i, j, value) in table.rows() {
        t.push([i, j, value]);
    }
    report.section("product", t);
    Ok(report)
}

pub fn seidel(space: &SpaceArgs, r: i64, weighted: bool) -> Result<Report, CliError> {
    let spec = space.load_closed()?;
    let mut map = spec.seidel_family().instantiate(r).map_err(internal)?;
    if weighted {
        map = weighted_seidel(&map, &spec.weight).map_err(internal)?;
    }
    let kind = if weighted { "weighted Seidel map" } else { "Seidel map" };
    let mut report = Report::new("seidel", json!({"space": spec.id, "r": r, "weighted": weighted}));
    let mut t = Table::new(["input", "image"]).titled(format!(
        "{} {kind} from level {r} (shift {})",
        spec.id,
        map.shift()
    ));
    for (k, col) in map.columns().iter().enumerate() {
        t.push([map.source().label(k).to_string(), col.render()]);
    }
    report.section("seidel", t);
    Ok(report)
}

/// `(check, passed, detail)` rows for one level.
fn checks_at(spec: &SpaceSpec, r: i64) -> Vec<(&'static str, bool, String)> {
    let mut out = Vec::new();
    let seidel = spec.seidel_family().instantiate(r);
    match &seidel {
        Ok(m) => {
            let g = m.check_grading();
            out.push(("seidel grading", g.passed(), format!("{} issues", g.issues.len())));
        }
        Err(e) => out.push(("seidel grading", false, e.to_string())),
    }
    if spec.generator.is_some() {
        let tables = [r, r + 1].map(|level| {
            spec.product_at(level)
                .map_err(|e| e.to_string())
                .and_then(|p| {
                    let g = p.op.check_grading();
                    if !g.passed() {
                        return Err(format!("product at level {level} is not graded"));
                    }
                    product_expand(&p).map_err(|e| e.to_string())
                })
        });
        match &tables[0] {
            Ok(t) => {
                let a = t.check_axioms();
                out.push(("product axioms", a.passed(), format!("{} violations", a.violations.len())));
            }
            Err(e) => out.push(("product axioms", false, e.clone())),
        }
        let residual = match (&seidel, &tables[0], &tables[1]) {
            (Ok(s), Ok(now), Ok(next)) => residual_detail(spec, s, now, next),
            _ => Err("inputs unavailable".to_string()),
        };
        match residual {
            Ok(()) => out.push(("intertwining", true, "residual 0".into())),
            Err(e) => out.push(("intertwining", false, e)),
        }
    }
    if let Some(inverse) = spec.inverse_family() {
        let outcome = seidel
            .as_ref()
            .map_err(|e| e.to_string())
            .and_then(|f| {
                let g = inverse.instantiate(r).map_err(|e| e.to_string())?;
                check_inverse_maps(f, &g).map_err(|e| e.to_string())
            });
        match outcome {
            Ok(rep) => out.push(("inverse pair", rep.passed(), format!("{} entries off", rep.failures.len()))),
            Err(e) => out.push(("inverse pair", false, e)),
        }
    }
    out
}

fn residual_detail(
    spec: &SpaceSpec,
    seidel: &IntMap,
    now: &eqseidel::product::ProductTable<num_bigint::BigInt>,
    next: &eqseidel::product::ProductTable<num_bigint::BigInt>,
) -> Result<(), String> {
    let label = spec.generator.as_deref().expect("checked by caller");
    let op = intertwining_operator(seidel, now, next, &Intertwining::along(label, spec.weight.clone()))
        .map_err(|e: SeidelError| e.to_string())?;
    let bad: Vec<String> = (0..spec.basis.len())
        .filter_map(|k| {
            let x = ModuleElem::basis_vector(&spec.basis, spec.config, k);
            let image = op.apply(&x).ok()?;
            (!image.is_zero()).then(|| format!("{} -> {}", spec.basis.label(k), image.render()))
        })
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad.join("; "))
    }
}

pub fn verify(space: &SpaceArgs, r_max: i64) -> Result<Report, CliError> {
    let spec = space.load_closed()?;
    spec.validate()?;
    let rows: Vec<Vec<_>> = (0..=r_max).into_par_iter().map(|r| checks_at(&spec, r)).collect();
    let mut report = Report::new("verify", json!({"space": spec.id, "rmax": r_max}));
    let mut t = Table::new(["r", "check", "status", "detail"]).titled(format!("{} checks for r <= {r_max}", spec.id));
    for (r, level) in rows.into_iter().enumerate() {
        for (check, ok, detail) in level {
            report.passed &= ok;
            t.push([r.to_string(), check.into(), if ok { "pass" } else { "FAIL" }.into(), detail]);
        }
    }
    report.section("checks", t);
    Ok(report)
}

fn solve_error(e: SolveError) -> CliError {
    let mut root = &e;
    while let SolveError::AtLevel { source, .. } = root {
        root = source;
    }
    match root {
        SolveError::Stuck { .. }
        | SolveError::Inconsistent(_)
        | SolveError::NonIntegral { .. }
        | SolveError::DegreeViolation(_) => CliError::Failed(e.to_string()),
        SolveError::NoGenerator => CliError::Usage(e.to_string()),
        _ => CliError::Internal(e.to_string()),
    }
}

pub fn solve(space: &SpaceArgs, r_max: i64) -> Result<Report, CliError> {
    let spec = space.load(true)?;
    let ansatz = ansatz_build(&spec, &spec.zeros).map_err(solve_error)?;
    let solved = induct_over_r(&ansatz, r_max).map_err(solve_error)?;
    let mut report = Report::new("solve", json!({"space": space.describe(), "rmax": r_max}));
    let mut t = Table::new(["unknown", "r", "value"]).titled(format!("{} solved coefficients", spec.id));
    for (u, v) in &solved.values {
        t.push([u.name.clone(), u.level.to_string(), v.to_string()]);
    }
    report.section("coefficients", t);
    let mut s = Table::new(["r", "input", "image"]).titled("Solved Seidel maps");
    for (r, map) in solved.seidel.iter().enumerate() {
        for line in map.columns().iter().enumerate() {
            s.push([r.to_string(), map.source().label(line.0).to_string(), line.1.render()]);
        }
    }
    report.section("seidel", s);
    Ok(report)
}

fn limit_error(e: LimitError) -> CliError {
    match e {
        LimitError::NotInjective(_)
        | LimitError::RouteMismatch { .. }
        | LimitError::GeneratorMismatch { .. }
        | LimitError::VerificationFailed
        | LimitError::PresentationMismatch { .. } => CliError::Failed(e.to_string()),
        _ => CliError::Internal(e.to_string()),
    }
}

pub fn esh(space: &SpaceArgs, p_max: usize, truncate_u: Option<i64>) -> Result<Report, CliError> {
    let spec = space.load_closed()?;
    let change = spec.limit.as_ref().map(|l| l.change()).transpose().map_err(internal)?;
    let family = spec.seidel_family();
    let seq = generator_sequence(&family, change.as_ref(), p_max).map_err(limit_error)?;
    let mut report = Report::new(
        "esh",
        json!({"space": spec.id, "pmax": p_max, "truncate_u": truncate_u}),
    );
    let trunc = |x: &eqseidel::IntModuleElem| match truncate_u {
        Some(k) => x.truncate_u(k),
        None => x.clone(),
    };

    let mut dets = Table::new(["p", "det", "product"]).titled("Determinants det(A_p) and D_(p+1)");
    for (p, d) in seq.dets.iter().enumerate() {
        dets.push([p.to_string(), d.render(), seq.det_products[p + 1].render()]);
    }
    report.section("determinants", dets);

    let title = match truncate_u {
        Some(k) => format!("Generators x_k^p mod u^{k}"),
        None => "Generators x_k^p".to_string(),
    };
    let mut gens = Table::new(["p", "k", "generator"]).titled(title);
    for (p, level) in seq.generators.iter().enumerate() {
        for (k, x) in level.iter().enumerate() {
            gens.push([p.to_string(), seq.basis.label(k).to_string(), trunc(x).render()]);
        }
    }
    report.section("generators", gens);

    if let Ok(pres) = presentation_generators(&seq) {
        let mut t = Table::new(["p", "denominator", "generator"]).titled("Presentation generators x_0^p / (D_p a_p)");
        for g in pres {
            t.push([g.p.to_string(), g.denominator.render(), g.value.render()]);
        }
        report.section("presentation", t);
    }

    let chain = chain_strictness(&seq);
    let mut c = Table::new(["p", "strict", "witness", "valuation"]).titled("Chain of images");
    for step in &chain.steps {
        let (w, v) = match step.witness {
            Some((k, v)) => (seq.basis.label(k).to_string(), v.map_or("-".into(), |v| v.to_string())),
            None => ("-".into(), "-".into()),
        };
        c.push([step.p.to_string(), step.strict.to_string(), w, v]);
    }
    report.section("chain", c);

    let lim = nonequivariant_limit(&family).map_err(limit_error)?;
    let mut n = Table::new(["kernel", "quotient_rank", "quotient_basis", "induced_det"]).titled("Limit at u = 0");
    n.push([
        lim.kernel.iter().map(|k| k.render()).collect::<Vec<_>>().join("; "),
        lim.quotient_rank.to_string(),
        lim.quotient_labels.join(" "),
        lim.induced_det.as_ref().map_or("-".into(), |d| d.render()),
    ]);
    report.section("nonequivariant", n);
    Ok(report)
}

fn zhao_error(e: ZhaoError) -> CliError {
    match e {
        ZhaoError::UnexpectedFactor { .. } => CliError::Failed(e.to_string()),
        ZhaoError::Ring(_) => CliError::Internal(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    }
}

pub fn zhao(s: usize, k_max: usize, perturb: Option<(usize, usize)>) -> Result<Report, CliError> {
    let mut complex = build_complex(s, k_max).map_err(zhao_error)?;
    if let Some((k, j)) = perturb {
        complex = complex.with_perturbation(ZhaoGen::new(k, j)).map_err(zhao_error)?;
    }
    let mut report = Report::new("zhao", json!({"s": s, "K": k_max, "perturb": perturb}));

    let mut d = Table::new(["generator", "degree", "differential"]).titled(format!("Complex for s = {s}, K = {k_max}"));
    for &g in &complex.generators {
        d.push([g.to_string(), g.degree().to_string(), render_cochain(&complex.differential(g))]);
    }
    report.section("complex", d);

    let sq = verify_d_squared(&complex);
    report.passed &= sq.passed();
    let mut t = Table::new(["generator", "d_squared"]).titled(format!(
        "d^2 checked on {} generators: {} failures",
        sq.checked,
        sq.failures.len()
    ));
    for f in &sq.failures {
        t.push([f.generator.to_string(), f.image.clone()]);
    }
    report.section("d_squared", t);

    let lowest = -2 * s as i64;
    let top = 2 * (k_max as i64 - 2) - 2 * s as i64 + 1;
    let mut h = Table::new(["degree", "rank", "torsion"]).titled("Cohomology within the truncation window");
    if top >= lowest - 1 && sq.passed() {
        for c in cohomology(&complex, lowest - 1..=top).map_err(zhao_error)? {
            let torsion = c.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ");
            h.push([c.degree.to_string(), c.rank.to_string(), torsion]);
        }
    }
    report.section("cohomology", h);

    let factors = (0..=s).map(continuation_action).collect::<Result<Vec<_>, _>>().map_err(zhao_error)?;
    let config = RingConfig::without_q();
    let elems = factors
        .iter()
        .map(|f| f.as_ring_elem(config))
        .collect::<Result<Vec<_>, _>>()
        .map_err(internal)?;
    let mut c = Table::new(["s", "factor"]).titled("Continuation factors");
    for f in &factors {
        c.push([f.s.to_string(), f.render()]);
    }
    report.section("continuation", c);
    let mut l = Table::new(["limit"]).titled("Rank-one direct limit");
    l.push([recognize_rank_one(&elems).render()]);
    report.section("limit", l);
    Ok(report)
}

pub fn props(seed: u64, cases: u32, suite: Option<&str>) -> Result<Report, CliError> {
    let reports = match suite {
        Some(name) => vec![eqseidel::props::run_suite(name, seed, cases).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown suite `{name}`; expected one of {}",
                eqseidel::props::SUITES.join(", ")
            ))
        })?],
        None => eqseidel::props::run_all(seed, cases),
    };
    let mut report = Report::new("props", json!({"seed": seed, "cases": cases, "suite": suite}));
    let mut t = Table::new(["suite", "status", "cases", "seed", "seconds", "failure"])
        .titled(format!("Property suites, seed {seed}"));
    for r in &reports {
        report.passed &= r.passed();
        t.push([
            r.name.to_string(),
            if r.passed() { "ok" } else { "FAILED" }.to_string(),
            r.cases.to_string(),
            r.seed.to_string(),
            format!("{:.2}", r.elapsed.as_secs_f64()),
            r.failure.clone().unwrap_or_default(),
        ]);
    }
    report.section("suites", t);
    Ok(report)
}
