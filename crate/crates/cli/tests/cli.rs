use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn data(name: &str) -> String {
    root().join("tests/data").join(name).display().to_string()
}

fn equichar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equichar"))
        .env_remove("EQUICHAR_TOL")
        .args(args)
        .output()
        .expect("failed to spawn equichar")
}

/// Compares stdout with `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it instead.
fn assert_golden(name: &str, args: &[&str], code: i32) {
    let out = equichar(args);
    assert_eq!(
        out.status.code(),
        Some(code),
        "{args:?}\nstderr:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path = root().join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &out.stdout).unwrap();
        return;
    }
    let expected = fs::read(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&expected),
        "stdout differs from {name}"
    );
}

#[test]
fn golden_classify() {
    assert_golden("classify_z2.json", &["classify", &data("z2.json")], 0);
    assert_golden("classify_p3.json", &["classify", &data("p3.json")], 0);
    assert_golden("classify_m3.json", &["classify", &data("m3.json")], 0);
    assert_golden("classify_rot60.json", &["classify", &data("rot60.json")], 0);
    assert_golden("classify_rotation4.json", &["classify", "--builtin", "rotation:4"], 0);
    assert_golden("classify_rotation6.json", &["classify", "--builtin", "rotation:6"], 0);
}

#[test]
fn golden_normalize() {
    assert_golden("normalize_z2.json", &["normalize", &data("z2.json")], 0);
    assert_golden("normalize_diag.json", &["normalize", &data("diag.json")], 4);
}

#[test]
fn golden_basis_and_verify() {
    assert_golden("basis_sym3.json", &["basis", "--n", "3", "--group", "sym"], 0);
    assert_golden("verify_s3_relu.json", &["verify", &data("s3.json"), "--activation", "relu", "--trials", "100"], 1);
    assert_golden(
        "export_bump.csv",
        &["export-activation", "--eta-file", &data("eta_bump.json"), "--min", "-4", "--max", "4", "--count", "9"],
        0,
    );
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["verify", &data("m3.json"), "--activation", "tanh", "--trials", "50", "--seed", "7"];
    let (a, b) = (equichar(&args), equichar(&args));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

fn family(out: &Output) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    v["family"].clone()
}

#[test]
fn classify_examples() {
    assert_eq!(family(&equichar(&["classify", &data("p3.json")]))["kind"], "Continuous");
    let z2 = family(&equichar(&["classify", &data("z2.json")]));
    assert_eq!(z2["kind"], "BMultiplicative");
    assert_eq!(z2["b"], 2.0);
    assert_eq!(family(&equichar(&["classify", &data("rot60.json")]))["kind"], "LinearOnly");
}

#[test]
fn dense_reports_carry_the_heuristic_warning() {
    for file in ["rot60.json", "semilinear.json"] {
        let out = equichar(&["classify", &data(file)]);
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(v["classification"]["tclass"]["kind"].as_str().unwrap().starts_with("Dense"));
        let warnings = v["warnings"].as_array().unwrap();
        assert!(warnings.iter().any(|w| w.as_str().unwrap().starts_with("density heuristic")), "{file}");
    }
}

#[test]
fn unbounded_report_names_the_cycle() {
    let out = equichar(&["normalize", &data("diag.json")]);
    assert_eq!(out.status.code(), Some(4));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let msg = v["error"]["message"].as_str().unwrap();
    assert!(msg.starts_with("self-loop at index 1, log-weight 0.693"), "{msg}");

    let out = equichar(&["normalize", &data("m3.json")]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| equichar(args).status.code();
    assert_eq!(code(&["classify", "/does/not/exist.json"]), Some(2));
    assert_eq!(code(&["classify", &data("no_generators.json")]), Some(2));
    assert_eq!(code(&["classify"]), Some(2));
    assert_eq!(code(&["verify", &data("p3.json"), "--activation", "softplus"]), Some(2));
    assert_eq!(code(&["basis", "--n", "200", "--k-in", "3"]), Some(3));
    assert_eq!(code(&["normalize", &data("rot60.json")]), Some(5));
    assert_eq!(code(&["export-activation", "--eta-file", &data("eta_bad_endpoint.json")]), Some(6));
    assert_eq!(code(&["verify", &data("s3.json"), "--activation", "tanh"]), Some(0));
    assert_eq!(code(&["verify", &data("s3.json"), "--activation", "relu"]), Some(1));
    assert_eq!(code(&["verify", &data("p3.json"), "--activation", "relu"]), Some(0));
}

#[test]
fn basis_counts_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let export = dir.path().join("basis.json");
    let out = equichar(&[
        "basis", "--n", "4", "--k-in", "2", "--k-out", "2", "--group", "sym", "--export", export.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["basis"]["count"], 15);
    let file: serde_json::Value = serde_json::from_str(&fs::read_to_string(&export).unwrap()).unwrap();
    assert_eq!(file["shape"], serde_json::json!([16, 16]));
    assert_eq!(file["elements"].as_array().unwrap().len(), 15);

    let out = equichar(&["basis", "--n", "2", "--group", "file", "--generators", &data("no_generators.json")]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["basis"]["count"], 4);
}

#[test]
fn failed_commands_leave_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("f.csv");
    let out = equichar(&[
        "export-activation", "--eta-file", &data("eta_bad_endpoint.json"), "--out", csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(6));
    assert!(!csv.exists());

    let export = dir.path().join("basis.json");
    let out = equichar(&["basis", "--n", "200", "--k-in", "3", "--export", export.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!export.exists());
}

#[test]
fn export_activation_rows() {
    let out = equichar(&["export-activation", "--eta-file", &data("eta_identity.json"), "--min", "-2", "--max", "2", "--count", "5"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "x,f_x\n-2,-2\n-1,-1\n0,0\n1,1\n2,2\n");

    let out = equichar(&["export-activation", "--eta-file", &data("eta_bump.json"), "--min", "-3", "--max", "3", "--count", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "0,0"), "{text}");
    assert!(text.lines().any(|l| l == "3,3.75"), "{text}");
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_equichar"))
        .env("EQUICHAR_TOL", "1e-6")
        .args(["classify", "--builtin", "sym:2"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["input"]["tolerance"], 1e-6);

    let out = Command::new(env!("CARGO_BIN_EXE_equichar"))
        .env("EQUICHAR_TOL", "1e-6")
        .args(["classify", "--builtin", "sym:2", "--tol", "1e-3"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["input"]["tolerance"], 1e-3);
}
