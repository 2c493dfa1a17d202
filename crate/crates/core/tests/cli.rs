use std::io::Write;
use std::process::{Command, Output};

fn alexinv(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_alexinv"));
    cmd.args(args).env_remove("ALEXINV_MAX_ENTRIES");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn file(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

#[test]
fn chen_and_witt() {
    let o = alexinv(&["chen", "-n", "3", "-q", "2"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!((v["computed"].as_u64(), v["match"].as_bool()), (Some(15), Some(true)));
    let v = json(&alexinv(&["witt", "-n", "2", "-q", "4"], &[]));
    assert_eq!(v["dim"], 3);
}

#[test]
fn csv_output() {
    let o = alexinv(&["--csv", "witt", "-n", "3", "-q", "2"], &[]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("key,value\n"));
    assert!(text.lines().any(|l| l == "dim,3"));
}

#[test]
fn budget_exit_code() {
    let o = alexinv(&["johnson", "--genus", "3", "--max-degree", "1"], &[("ALEXINV_MAX_ENTRIES", "10")]);
    assert_eq!(o.status.code(), Some(3));
    let v = json(&o);
    assert_eq!(v["error"], "budget_exceeded");
    assert_eq!(v["limit"], 10);
    assert_eq!(alexinv(&["johnson", "--genus", "5", "--max-degree", "1"], &[]).status.code(), Some(3));
}

#[test]
fn usage_errors() {
    assert_eq!(alexinv(&["bogus"], &[]).status.code(), Some(2));
    assert_eq!(alexinv(&["johnson", "--genus", "3"], &[]).status.code(), Some(2));
    let f = file(r#"{"generators":2,"relators":[[1,3]]}"#);
    assert_eq!(alexinv(&["fox", "--presentation", f.path().to_str().unwrap()], &[]).status.code(), Some(2));
    assert_eq!(alexinv(&["--help"], &[]).status.code(), Some(0));
}

#[test]
fn group_commands() {
    let f = file(r#"{"generators":2,"relators":[[1,2,-1,-2]]}"#);
    let path = f.path().to_str().unwrap();
    let v = json(&alexinv(&["fox", "--presentation", path], &[]));
    assert_eq!(v["alexander_matrix"][0][0], "-t2 + 1");
    assert_eq!(v["betti_1"], 2);
    let v = json(&alexinv(&["cv", "--presentation", path, "--character", "-1,1"], &[]));
    assert_eq!((v["h1_dim"].as_u64(), v["member"].as_bool()), (Some(0), Some(false)));
    let v = json(&alexinv(&["cv", "--presentation", path, "--torsion", "3"], &[]));
    assert_eq!(v["count"], 1);
    assert_eq!(v["characters"][0][0], "1");
}

#[test]
fn nilpotence_command() {
    let f = file(r#"{"dim":2,"actions":[[[1,1],[0,1]]]}"#);
    let v = json(&alexinv(&["nilpotence", "--module", f.path().to_str().unwrap()], &[]));
    assert_eq!(v["nilpotent"], true);
    assert_eq!(v["exponent"], 2);
}
