use std::process::Command;

fn kquot(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_kquot"))
        .args(args)
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
        .output()
        .expect("kquot runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("kquot-commands-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn bundled_problems_succeed() {
    for entry in std::fs::read_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../../problems")).unwrap() {
        let path = entry.unwrap().path();
        let (code, out) = kquot(&["quotient-class", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{}:\n{out}", path.display());
        assert!(out.contains("status: ok (exit 0)"));
    }
}

#[test]
fn split_class_text_output() {
    let (code, out) = kquot(&["quotient-class", "problems/sign-plane.toml"]);
    assert_eq!(code, 0);
    assert_eq!(out, "route: split\nclass: 1*L^2\nstatus: ok (exit 0)\n");
}

#[test]
fn forced_route_violation_exits_one() {
    let (code, out) = kquot(&["quotient-class", "problems/rotation-pair.toml", "--route", "split"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("hypothesis-violation"));
}

#[test]
fn unknown_route_is_reported() {
    let (code, _) = kquot(&["quotient-class", "problems/rotation-pair.toml", "--route", "nowhere"]);
    assert_ne!(code, 0);
}

#[test]
fn malformed_problem_exits_three() {
    let path = scratch("ragged.toml", "[group]\norders = [2]\ngenerators = [[[\"1\",\"0\"],[\"0\"]]]\n");
    let (code, out) = kquot(&["quotient-class", &path]);
    assert_eq!(code, 3, "{out}");
    assert!(out.contains("parse-error (exit 3)"));

    let path = scratch("syntax.toml", "[group\norders = 2\n");
    let (code, out) = kquot(&["quotient-class", &path]);
    assert_eq!(code, 3, "{out}");
    assert!(out.contains("line 1"));
}

#[test]
fn missing_file_exits_three() {
    let (code, _) = kquot(&["quotient-class", "problems/absent.toml"]);
    assert_eq!(code, 3);
}

#[test]
fn wrong_certificate_target_is_inconclusive() {
    let (code, out) = kquot(&["quotient-class", "problems/sign-plane.toml", "--certify-not", "L^2"]);
    assert_eq!(code, 2, "{out}");
}

#[test]
fn canonical_output_is_json() {
    let (code, out) = kquot(&["--format", "canonical", "quotient-class", "problems/quarter-turn-descent.toml"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).expect("valid JSON");
    assert_eq!(doc["status"], "ok");
    assert_eq!(doc["expression"], "1*L*C(-1,-1) - 1*C(-1,-1) + 1");
}

#[test]
fn output_is_deterministic() {
    let args = ["--trace", "quotient-class", "problems/rotation-pair.toml"];
    let (_, first) = kquot(&args);
    let (_, second) = kquot(&args);
    assert_eq!(first, second);
    assert!(first.contains("recursion-base"));
}

#[test]
fn conic_signs() {
    let (code, out) = kquot(&["conic", "--a", "-1", "--b", "-1"]);
    assert_eq!(code, 0);
    assert!(out.contains("(-1, -1)_2 = -1"));
    let (code, out) = kquot(&["conic", "--a", "2", "--b", "7"]);
    assert_eq!(code, 0);
    assert!(out.contains("split"), "{out}");
}

#[test]
fn count_and_specialize_agree() {
    let (code, count) = kquot(&["count", "problems/order-three-companion.toml", "--q", "7"]);
    assert_eq!(code, 0, "{count}");
    let (code, spec) = kquot(&["specialize", "problems/order-three-companion.toml", "--prime", "7"]);
    assert_eq!(code, 0, "{spec}");
    assert!(count.contains("343") && spec.contains("343"), "{count}\n{spec}");
}

#[test]
fn verify_suite_passes() {
    let (code, out) = kquot(&["verify-suite"]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("FAIL"));
}
