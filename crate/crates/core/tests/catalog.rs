//! Golden definition files and parser round trips. Run with
//! `EQSEIDEL_BLESS=1` to rewrite the golden files.

mod common;

use std::path::PathBuf;

use eqseidel::catalog::{self, parse_space, render_space, CatalogError, SpaceSpec};

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn goldens() -> Vec<(&'static str, SpaceSpec)> {
    vec![
        ("complex_plane", catalog::complex_plane()),
        ("complex_space_3", catalog::complex_space(3)),
        ("projective_space_2", catalog::projective_space(2)),
        ("projective_space_3", catalog::projective_space(3)),
        ("taut_line_bundle_1", catalog::taut_line_bundle(1)),
        ("taut_line_bundle_2", catalog::taut_line_bundle(2)),
        ("projective_space_2_ansatz", catalog::projective_space_ansatz(2)),
        ("taut_line_bundle_2_ansatz", catalog::taut_line_bundle_ansatz(2)),
    ]
}

#[test]
fn builtins_match_golden_files() {
    let bless = std::env::var_os("EQSEIDEL_BLESS").is_some();
    for (name, spec) in goldens() {
        let path = golden_dir().join(format!("{name}.eqh"));
        let rendered = render_space(&spec);
        if bless {
            std::fs::write(&path, &rendered).unwrap();
            continue;
        }
        let stored = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}; rerun with EQSEIDEL_BLESS=1", path.display()));
        assert_eq!(rendered, stored, "{name} drifted from its golden file");
    }
}

#[test]
fn golden_files_parse_back_to_the_builtins() {
    for (name, spec) in goldens() {
        let text = std::fs::read_to_string(golden_dir().join(format!("{name}.eqh"))).unwrap();
        let parsed = parse_space(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parsed, spec, "{name}");
        assert_eq!(render_space(&parsed), text, "{name} is not a render fixpoint");
    }
}

#[test]
fn every_builtin_round_trips() {
    for spec in catalog::all_builtins(4) {
        assert_eq!(parse_space(&render_space(&spec)).unwrap(), spec, "{}", spec.id);
        spec.validate().unwrap();
    }
}

const SMALL: &str = "\
# one-dimensional fibre over a point pair
[space]
id = small
q_degree = 2
basis = e0 e1
degrees = 0 2
maslov = 2
unit = e0
generator = e1

[product]
e0 -> e1
e1 -> r*q*u*e0 - q*e1

[seidel]
e0 -> -1*e1 + (r+1)*u*e0
e1 -> (-r - 1)*q*u*e0 + q*e1 + (r + 1)*u*e1
";

#[test]
fn hand_written_entries_evaluate_like_the_closed_form() {
    let spec = parse_space(SMALL).unwrap();
    for r in 0..=5 {
        assert_eq!(
            spec.seidel_family().instantiate(r).unwrap().matrix(),
            common::taut_seidel(1, r).matrix(),
            "r={r}"
        );
    }
}

#[test]
fn fractional_exponent_is_a_syntax_error() {
    let text = SMALL.replace("e0 -> e1\n", "e0 -> q^(1/2)*e1\n");
    match parse_space(&text) {
        Err(CatalogError::Syntax { line, .. }) => assert_eq!(line, 12),
        other => panic!("expected a syntax error, got {other:?}"),
    }
}

#[test]
fn wrong_degree_is_a_semantic_error() {
    let text = SMALL.replace("e0 -> e1\n", "e0 -> u*u*e0\n");
    assert!(matches!(parse_space(&text), Err(CatalogError::Semantic { .. })));
}

#[test]
fn unknowns_render_with_a_question_mark() {
    let text = render_space(&catalog::taut_line_bundle_ansatz(1));
    assert!(text.contains("?c"));
    assert!(text.contains("?d"));
}

#[test]
fn empty_sections_are_omitted() {
    let text = render_space(&catalog::complex_plane());
    for header in ["[product]", "[inverse]", "[seeds]", "[zeros]", "[limit]"] {
        assert!(!text.contains(header), "{header}");
    }
}
