//! End-to-end tests driving the built binary over the shipped fixtures.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jacobi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_fixture(cmd: &str, name: &str, extra: &[&str]) -> Output {
    let f = fixture(name);
    let mut args = vec![cmd, "--in", f.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn check_jacobi_pass_and_fail() {
    let ok = run_fixture("check-jacobi", "zero_pair.json", &[]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    assert!(stdout(&ok).contains("result: PASS"));

    let ok = run_fixture("check-jacobi", "contact_pair.json", &[]);
    assert_eq!(code(&ok), 0);

    let bad = run_fixture("check-jacobi", "contact_pair_perturbed.json", &[]);
    assert_eq!(code(&bad), 1);
    let out = stdout(&bad);
    assert!(out.contains("check bivector_equation: FAIL"), "{out}");
    assert!(out.contains("result: FAIL"));
}

#[test]
fn homogenize_dehomogenize_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let hp = dir.path().join("hp.json");
    let pair = dir.path().join("pair.json");
    let o = run_fixture(
        "homogenize",
        "contact_pair.json",
        &["--out", hp.to_str().unwrap()],
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = run(&[
        "dehomogenize",
        "--in",
        hp.to_str().unwrap(),
        "--out",
        pair.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    // The emitted pair equals the canonical emission of the original
    // fixture's tensors.
    let file = jacobi_cli::input::ProblemFile::load(&fixture("contact_pair.json")).unwrap();
    let chart = file.chart().unwrap();
    let jp = file.jacobi_pair(&chart).unwrap();
    let expected = jacobi_cli::emit::pair_file(&chart, jp.bivector(), jp.reeb());
    let produced = std::fs::read_to_string(&pair).unwrap();
    assert_eq!(
        produced, expected,
        "round trip must restore canonical bytes"
    );
}

#[test]
fn homogenize_of_non_jacobi_input_fails_but_emits() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("hp.json");
    let o = run_fixture(
        "homogenize",
        "contact_pair_perturbed.json",
        &["--out", out.to_str().unwrap()],
    );
    assert_eq!(code(&o), 1);
    assert!(out.exists(), "defective structures are still emitted");
    let text = stdout(&o);
    assert!(
        text.contains("check poisson_equation: FAIL") || text.contains("check homogeneity: FAIL")
    );
}

#[test]
fn homogenize_variable_collision_is_invalid_input() {
    // Reusing an existing chart variable as homogeneity variable: exit 2.
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("collide.json");
    let text = std::fs::read_to_string(fixture("contact_pair.json"))
        .unwrap()
        .replace("\"var\": \"s\"", "\"var\": \"q\"");
    std::fs::write(&f, text).unwrap();
    let o = run(&["homogenize", "--in", f.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn split_contact_emits_canonical_model() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    let o = run_fixture(
        "split",
        "split_contact_k1.json",
        &["--out", model.to_str().unwrap()],
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    // The emitted model is itself a passing check-jacobi input …
    let o = run(&["check-jacobi", "--in", model.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    // … and a passing dirac input at the origin of the base transversal.
    let points = dir.path().join("points.json");
    std::fs::write(&points, r#"[{"u": "0", "q1": "0", "p1": "0", "y": "0"}]"#).unwrap();
    let o = run(&[
        "dirac",
        "--in",
        model.to_str().unwrap(),
        "--points",
        points.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("cocontact"));
}

#[test]
fn split_failing_input_exits_one_with_defect() {
    let o = run_fixture("split", "split_cosymplectic_failing.json", &[]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("check model_defect: FAIL"), "{out}");
    assert!(out.contains("Lie_E Λ"), "defect tensor printed: {out}");
    assert!(out.contains("check defect_equivalence: PASS"), "{out}");
}

#[test]
fn split_homogeneous_case_i_displays() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    let o = run_fixture(
        "split",
        "split_hompoi_case_i.json",
        &["--out", model.to_str().unwrap()],
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = std::fs::read_to_string(&model).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(
        v["tensors"]["Z"]["components"][0][1].as_str().unwrap(),
        "p1 + 1"
    );
}

#[test]
fn split_bad_kind_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    let text = std::fs::read_to_string(fixture("split_contact_k1.json"))
        .unwrap()
        .replace("\"contact\"", "\"sideways\"");
    std::fs::write(&f, text).unwrap();
    let o = run(&["split", "--in", f.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn dirac_cosymplectic_fixture() {
    let o = run_fixture("dirac", "cosymplectic_dirac.json", &[]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(
        out.contains("cosymplectic, rank(DL_N ∩ B_I(L)) = 0"),
        "{out}"
    );
    assert!(out.contains("Θ = [0, 1] [-1, 0]"), "{out}");
}

#[test]
fn dirac_contact_fixture() {
    let o = run_fixture("dirac", "contact_dirac.json", &[]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("cocontact, rank(DL_N ∩ B_I(L)) = 1"), "{out}");
    assert!(out.contains("generator: 1·𝟙"), "{out}");
    assert!(out.contains("generator: -1·∂y + 1·𝟙"), "{out}");
}

#[test]
fn dirac_transversality_failure_is_invalid_input() {
    let o = run_fixture("dirac", "dirac_nontransversal.json", &[]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr).into_owned();
    assert!(err.contains("transversality fails"), "{err}");
}

#[test]
fn dirac_point_off_submanifold_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.json");
    std::fs::write(&points, r#"[{"q1": "1", "p1": "0", "y": "0"}]"#).unwrap();
    let o = run_fixture(
        "dirac",
        "cosymplectic_dirac.json",
        &["--points", points.to_str().unwrap()],
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn moser_fixture_with_flow_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("drift.csv");
    let o = run_fixture("moser", "moser_r2.json", &["--out", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("check point0_exact_derivative_identity: PASS"));
    assert!(out.contains("check point0_flow_drift: PASS"));
    let table = std::fs::read_to_string(&csv).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("t,drift"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() >= 100, "rows: {}", rows.len());
    for r in rows {
        let (t, d) = r.split_once(',').expect("two columns");
        let t: f64 = t.parse().unwrap();
        let d: f64 = d.parse().unwrap();
        assert!((0.0..=1.0).contains(&t));
        assert!(d < 1e-6);
    }
}

#[test]
fn moser_singular_family_exits_one_naming_the_time() {
    let o = run_fixture("moser", "moser_singular.json", &[]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("singular at t = 1/2"), "{out}");
}

#[test]
fn moser_tolerance_flag_can_fail_the_flow() {
    // An absurdly tight tolerance turns the scheme error into a failure.
    let o = run_fixture("moser", "moser_r2.json", &["--tol", "1e-30"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn reports_are_deterministic_modulo_timing() {
    for (cmd, fixture_name, json) in [
        ("check-jacobi", "contact_pair.json", false),
        ("check-jacobi", "contact_pair.json", true),
        ("dirac", "contact_dirac.json", false),
        ("moser", "moser_r2.json", true),
        ("split", "split_contact_k1.json", false),
    ] {
        let extra: &[&str] = if json { &["--json"] } else { &[] };
        let a = run_fixture(cmd, fixture_name, extra);
        let b = run_fixture(cmd, fixture_name, extra);
        let strip = |o: &Output| {
            stdout(o)
                .lines()
                .filter(|l| !l.contains("time_ms"))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(strip(&a), strip(&b), "{cmd} {fixture_name} json={json}");
        assert_eq!(code(&a), code(&b));
    }
}

#[test]
fn missing_file_and_malformed_json_are_invalid_input() {
    let o = run(&["check-jacobi", "--in", "/nonexistent/path.json"]);
    assert_eq!(code(&o), 2);
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("broken.json");
    std::fs::write(&f, "{ not json").unwrap();
    let o = run(&["check-jacobi", "--in", f.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn unknown_variable_in_expression_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("unknown_var.json");
    let text = std::fs::read_to_string(fixture("contact_pair.json"))
        .unwrap()
        .replace(
            "\"p\"]], [[\"q\", \"p\"], \"1\"]",
            "\"w\"]], [[\"q\", \"p\"], \"1\"]",
        );
    // Fall back: just patch an expression to use an unknown name.
    let text = if text.contains('w') {
        text
    } else {
        text.replace("\"1\"", "\"w\"")
    };
    std::fs::write(&f, text).unwrap();
    let o = run(&["check-jacobi", "--in", f.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}
