use std::process::{Command, Output};

fn ogq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ogq"))
        .args(args)
        .env_remove("OGQ_REPORT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn minimal_is_v1() {
    let o = ogq(&["weyl", "minimal", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["command"], "weyl minimal");
    assert_eq!(r["status"], "pass");
    assert_eq!(r["details"]["minimal"], serde_json::json!([2, 4, 7, 8, 10, 12]));
}

#[test]
fn bruhat_and_enumerate() {
    let o = ogq(&["weyl", "bruhat", "--n", "1", "v1", "v6", "--format", "text"]);
    assert!(stdout(&o).starts_with("true\n"));
    let o = ogq(&["weyl", "bruhat", "--n", "1", "v2", "v3"]);
    assert_eq!(json(&o)["details"]["leq"], false);
    let o = ogq(&["weyl", "enumerate", "--n", "1"]);
    assert_eq!(json(&o)["details"]["count"], 32);
}

#[test]
fn explicit_tuple_selector() {
    let o = ogq(&["weyl", "coset", "--n", "1", "--v", "(2,6,8,9,10,12)", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("(2,6,8,9,10,12)\n"));
    let o = ogq(&["weyl", "coset", "--n", "1", "--v", "1,2,3,4,5,7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_targets_pass() {
    for args in [
        &["verify", "thm23", "--n", "1", "--seed", "7"][..],
        &["verify", "prop11", "--case", "iv", "--n", "1", "--kmax", "5"],
        &["verify", "diamond", "--case", "P3"],
        &["verify", "veronese", "--kmax", "6"],
        &["verify", "lemma52", "--case", "ii"],
        &["verify", "lemma53"],
        &["verify", "lemma51"],
        &["verify", "thm51", "--kmax", "2"],
    ] {
        let o = ogq(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(json(&o)["status"], "pass", "{args:?}");
    }
}

#[test]
fn identical_config_gives_identical_bytes() {
    let args = ["verify", "lemma52", "--n", "1", "--seed", "3"];
    let a = ogq(&args);
    let b = ogq(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("timing"));
    let t = ogq(&["verify", "diamond", "--timing"]);
    assert!(json(&t)["timing"]["seconds"].is_number());
}

#[test]
fn hilbert_csv() {
    let o = ogq(&["hilbert", "--n", "1", "--v", "v2", "--kmax", "4", "--format", "csv"]);
    assert_eq!(stdout(&o), "k,dim\n0,1\n1,3\n2,5\n3,7\n4,9\n");
    let o = ogq(&["hilbert", "--n", "1", "--v", "v1", "--kmax", "4", "--format", "csv"]);
    assert_eq!(stdout(&o), "k,dim\n0,1\n1,1\n2,1\n3,1\n4,1\n");
    let o = ogq(&["hilbert", "--n", "1", "--v", "v4", "--kmax", "2"]);
    let dims: Vec<u64> = json(&o)["details"]["dims"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p[1].as_u64().unwrap())
        .collect();
    assert_eq!(dims, vec![1, 10, 35]);
}

#[test]
fn exit_codes() {
    assert_eq!(ogq(&["weyl", "enumerate", "--n", "5"]).status.code(), Some(2));
    assert_eq!(ogq(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(ogq(&["verify", "prop11", "--kmax", "0"]).status.code(), Some(2));
    assert_eq!(ogq(&["verify", "thm23", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(ogq(&["hilbert", "--kmax", "40"]).status.code(), Some(2));
}

#[test]
fn rules_file_and_failing_system() {
    let dir = std::env::temp_dir().join(format!("ogq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("p1.rules");
    std::fs::write(&good, "# conic\nz0 z2 -> z1^2\n").unwrap();
    let o = ogq(&["verify", "diamond", "--rules", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let bad = dir.join("bad.rules");
    std::fs::write(&bad, "vars: a b c\na b -> c^2\na c -> b^2\n").unwrap();
    let o = ogq(&["verify", "diamond", "--rules", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["status"], "fail");
    let o = ogq(&["verify", "diamond", "--rules", dir.join("missing").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn report_dir() {
    let dir = std::env::temp_dir().join(format!("ogq-reports-{}", std::process::id()));
    let o = Command::new(env!("CARGO_BIN_EXE_ogq"))
        .args(["verify", "diamond", "--case", "P1"])
        .env("OGQ_REPORT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read(dir.join("verify-diamond.json")).unwrap();
    assert_eq!(written, o.stdout);
    std::fs::remove_dir_all(&dir).ok();
}
