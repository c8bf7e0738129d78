use std::io::Write;
use std::process::{Command, Output, Stdio};

fn so3inv(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_so3inv"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut input = child.stdin.take().unwrap();
    input.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(input);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn wrt_lens_is_integral() {
    let o = so3inv(&["wrt", "lens 3 1", "--orders", "5"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("integral: yes"));
}

#[test]
fn unified_pipes_into_eval() {
    let u = so3inv(&["unified", "lens 2 1", "--truncate", "4"], None);
    assert_eq!(u.status.code(), Some(0));
    let e = so3inv(&["eval", "--order", "5", "--manifold", "lens 2 1"], Some(&stdout(&u)));
    assert_eq!(e.status.code(), Some(0));
    assert!(stdout(&e).contains("consistency PASS"));
}

#[test]
fn eval_without_enough_terms_fails() {
    let u = so3inv(&["unified", "twist 1 f=-1", "--truncate", "2"], None);
    let e = so3inv(&["eval", "--order", "7"], Some(&stdout(&u)));
    assert_eq!(e.status.code(), Some(1));
}

#[test]
fn ohtsuki_of_lens() {
    let u = so3inv(&["unified", "lens 3 1", "--truncate", "5"], None);
    let o = so3inv(&["ohtsuki", "--order", "2", "--format", "json"], Some(&stdout(&u)));
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coefficients"], serde_json::json!(["1/3", "1/9", "1/162"]));
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "binomial-sum", "--r", "9", "--d", "3"][..],
        &["verify", "lemma33", "--r", "7", "--d", "-3"],
        &["verify", "reciprocity", "--a", "20"],
        &["verify", "andrews", "--k", "2", "--n", "2", "--points", "3"],
        &["verify", "watson", "--a", "3", "--b", "2", "--k", "1"],
        &["verify", "root-identity", "--a", "2", "--b", "3", "--k", "1", "--r", "7"],
        &["verify", "consistency", "--manifold", "sum{ lens 2 1 ; twist 1 f=-1 }", "--orders", "5,7"],
    ] {
        let o = so3inv(args, None);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).trim_end().lines().last().unwrap().starts_with("PASS"), "{args:?}");
    }
}

#[test]
fn input_errors_exit_two() {
    for args in [
        &["wrt", "lens 4 2"][..],
        &["wrt", "lens 4"],
        &["wrt", "klein 1"],
        &["wrt", "lens 3 1", "--orders", "4"],
        &["unified", "twist 1 f=0"],
        &["check-integrality", "seifert -1 (2,1) (2,1)"],
    ] {
        let o = so3inv(args, None);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"), "{args:?}");
    }
}

#[test]
fn parse_error_reports_position() {
    let o = so3inv(&["wrt", "lens 4 x"], None);
    assert!(String::from_utf8_lossy(&o.stderr).contains("at 7"));
}

#[test]
fn check_integrality_and_json_are_deterministic() {
    let args = ["--format", "json", "check-integrality", "seifert -1 (2,1) (3,1) (5,1)", "--orders", "3,5,7"];
    let a = so3inv(&args, None);
    let b = so3inv(&args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["passed"], serde_json::json!(true));
}

#[test]
fn twist_table_feeds_algsplit() {
    let dir = std::env::temp_dir().join(format!("so3inv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let table = dir.join("twist2.json");
    let t = so3inv(&["table", "twist", "--p", "-2", "--kmax", "6", "--out", table.to_str().unwrap()], None);
    assert_eq!(t.status.code(), Some(0));
    let m = format!("algsplit [f1=-3] table={}", table.display());
    let a = so3inv(&["wrt", &m, "--orders", "5,7"], None);
    let b = so3inv(&["wrt", "twist -2 f=-3", "--orders", "5,7"], None);
    assert_eq!(stdout(&a), stdout(&b));
    let c = so3inv(&["verify", "consistency", "--manifold", &m, "--orders", "5,7"], None);
    assert_eq!(c.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn fcoeff_table() {
    let o = so3inv(&["table", "fcoeff", "--k", "1", "--a", "3", "--b", "2"], None);
    let s = stdout(&o);
    assert!(s.contains("w-free: yes") && s.contains("integral: yes") && s.contains("unit: q^0"), "{s}");
}
