//! End-to-end runs of the binary. Golden outputs live in `tests/golden`;
//! set `EQSEIDEL_BLESS=1` to rewrite them.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqseidel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("EQSEIDEL_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e}; rerun with EQSEIDEL_BLESS=1", path.display()));
    assert_eq!(actual, expected, "{name} drifted");
}

const BROKEN_SEIDEL: &str = "\
[space]
id = broken
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
e0 -> (r + 2)*u*e0 - e1
e1 -> (-r - 1)*q*u*e0 + q*e1 + (r + 1)*u*e1
";

#[test]
fn verify_projective_plane_succeeds() {
    let out = run(&["verify", "--space", "projective_space(2)", "--rmax", "5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.matches(" pass ").count(), 24);
    assert!(!text.contains("FAIL"));
    golden("verify_projective_space_2.txt", &text);
}

#[test]
fn verify_output_order_is_deterministic() {
    let args = ["verify", "--space", "taut_line_bundle(3)", "--rmax", "5", "--format", "csv"];
    let first = stdout(&run(&args));
    for _ in 0..3 {
        assert_eq!(stdout(&run(&args)), first);
    }
}

#[test]
fn solve_taut_line_bundle_reports_known_coefficients() {
    let v = json(&["solve", "--space", "taut_line_bundle(2)", "--rmax", "4"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "solve");
    assert_eq!(v["inputs"]["rmax"], 4);
    let rows = v["results"]["coefficients"].as_array().unwrap();
    // c at levels 0..=5 (the product is needed one level ahead), d at 0..=4
    assert_eq!(rows.len(), 11);
    for row in rows {
        let r: i64 = row["r"].as_str().unwrap().parse().unwrap();
        let value: i64 = row["value"].as_str().unwrap().parse().unwrap();
        match row["unknown"].as_str().unwrap() {
            "c" => assert_eq!(value, r),
            "d" => assert_eq!(value, -(r + 1)),
            other => panic!("unexpected unknown {other}"),
        }
    }
}

#[test]
fn esh_generators_mod_u_squared() {
    let v = json(&["esh", "--space", "taut_line_bundle(1)", "--pmax", "3", "--truncate-u", "2"]);
    let rows = v["results"]["generators"].as_array().unwrap();
    for p in 1..=3i64 {
        let row = rows
            .iter()
            .find(|r| r["p"] == p.to_string().as_str() && r["k"] == "g0")
            .unwrap();
        let q_pow = |e: i64| match e {
            0 => String::new(),
            1 => "q*".to_string(),
            e => format!("q^{e}*"),
        };
        let expected = format!(
            "{}g0 + {}*{}u*g0 - {}u*g1",
            q_pow(p),
            p * (p + 1),
            q_pow(p - 1),
            q_pow(p - 1)
        );
        assert_eq!(row["generator"], expected.as_str(), "p={p}");
    }
    assert!(v["results"]["chain"].as_array().unwrap().iter().all(|s| s["strict"] == "true"));
}

#[test]
fn esh_text_matches_golden() {
    let out = run(&["esh", "--space", "taut_line_bundle(1)", "--pmax", "3", "--truncate-u", "2"]);
    assert_eq!(code(&out), 0);
    golden("esh_taut_line_bundle_1.txt", &stdout(&out));
}

#[test]
fn text_and_json_carry_the_same_cells() {
    let args = ["product", "--space", "projective_space(3)", "--r", "2"];
    let text = stdout(&run(&args));
    let v = json(&args);
    for row in v["results"]["product"].as_array().unwrap() {
        let cell = row["product"].as_str().unwrap();
        assert!(text.contains(cell), "{cell} missing from text output");
    }
    assert!(text.contains("q*e0 - 2*u*e3"));
}

#[test]
fn csv_has_a_header_row() {
    let out = run(&["seidel", "--space", "complex_space(2)", "--r", "1", "--format", "csv"]);
    assert_eq!(stdout(&out), "input,image\ne0,4*u^2*e0\n");
}

#[test]
fn zhao_reports_cohomology_and_factors() {
    let v = json(&["zhao", "--s", "2", "--K", "8"]);
    for h in v["results"]["cohomology"].as_array().unwrap() {
        let d: i64 = h["degree"].as_str().unwrap().parse().unwrap();
        let expected = if d >= -4 && d % 2 == 0 { "1" } else { "0" };
        assert_eq!(h["rank"], expected, "degree {d}");
        assert_eq!(h["torsion"], "");
    }
    let factors: Vec<_> = v["results"]["continuation"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["factor"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(factors, ["1*u", "2*u", "3*u"]);
    assert_eq!(v["results"]["limit"][0]["limit"], "Q[u, u^-1]");
}

#[test]
fn spaces_lists_every_family() {
    let text = stdout(&run(&["spaces"]));
    for id in ["complex_plane", "complex_space(2)", "projective_space(3)", "taut_line_bundle(1)"] {
        assert!(text.contains(id), "{id}");
    }
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["seidel", "--space", "complex_plane", "--r", "3", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["results"]["seidel"][0]["image"], "4*u*e0");
}

#[test]
fn spec_file_runs_through_the_same_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("good.eqh");
    std::fs::write(&path, BROKEN_SEIDEL.replace("(r + 2)*u*e0", "(r + 1)*u*e0")).unwrap();
    let out = run(&["verify", "--spec", path.to_str().unwrap(), "--rmax", "3"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn broken_seidel_map_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.eqh");
    std::fs::write(&path, BROKEN_SEIDEL).unwrap();
    let out = run(&["verify", "--spec", path.to_str().unwrap(), "--rmax", "2"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn perturbed_complex_exits_one() {
    assert_eq!(code(&run(&["zhao", "--s", "2", "--K", "6", "--perturb", "1,2"])), 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["product", "--space", "sphere(2)"])), 2);
    assert_eq!(code(&run(&["product"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["product", "--space", "projective_space(2)", "--format", "yaml"])), 2);
    assert_eq!(code(&run(&["zhao", "--s", "1", "--K", "0"])), 2);
    assert_eq!(code(&run(&["props", "--suite", "nope", "--cases", "1"])), 2);
    assert_eq!(code(&run(&["verify", "--spec", "/nonexistent/space.eqh"])), 2);
}

#[test]
fn unwritable_output_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.txt");
    assert_eq!(code(&run(&["spaces", "--out", path.to_str().unwrap()])), 3);
}

#[test]
fn props_prints_its_seed() {
    let out = run(&["props", "--seed", "7", "--cases", "20"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("seed 7"));
    assert_eq!(text.matches(" ok ").count(), 4);
}
