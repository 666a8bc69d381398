//! End-to-end runs of the `klo` binary: exit codes, formats and stability.

use std::process::{Command, Output};

fn klo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klo")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

#[test]
fn count_totals() {
    for (t, n) in [("A1", 3), ("A2", 19), ("A3", 211), ("A4", 3651), ("B2", 33), ("G2", 73)] {
        let o = klo(&["count", "--type", t]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).lines().last().unwrap(), format!("total,{n}"));
    }
}

#[test]
fn count_json_breakdown() {
    let o = klo(&["count", "--type", "B2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["total"], 33);
    let sum: u64 = v["breakdown"].as_array().unwrap().iter().map(|r| r["cosets"].as_u64().unwrap()).sum();
    assert_eq!(sum, 33);
}

#[test]
fn table_rows() {
    let o = klo(&["table"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 20);
    assert!(text.contains("j_s2!*(IC_s2),0,0,IC_s2,IC_s2,0,0\n"));
    assert!(text.contains("j_e!*(IC_e),IC_e,IC_e,IC_e,IC_e,IC_e,IC_e\n"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["count", "--type", "Z9"][..],
        &["table", "--type", "B2"],
        &["figure", "--type", "A3"],
        &["count", "--floor", "3"],
        &["count", "--radius", "2"],
        &["count", "--format", "svg"],
        &["verify", "a1", "--v-value", "x"],
        &["verify", "nope"],
        &["verify", "m0", "--type", "A3"],
    ] {
        assert_eq!(klo(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_report_schema() {
    let o = klo(&["verify", "padic"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = v.as_array().unwrap();
    let ids: Vec<&str> = checks.iter().map(|c| c["check_id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    for c in checks {
        let keys: Vec<&str> = c.as_object().unwrap().keys().map(String::as_str).collect();
        assert!(keys.iter().all(|k| ["check_id", "status", "floor", "witness"].contains(k)), "{keys:?}");
        assert!(["pass", "xfail"].contains(&c["status"].as_str().unwrap()));
    }
    let psi0 = checks.iter().find(|c| c["check_id"] == "padic.intertwine_psi0_negative").unwrap();
    assert_eq!(psi0["witness"]["vector"], "A_-1^#");
}

#[test]
fn verify_all_writes_out_file() {
    let path = std::env::temp_dir().join(format!("klo-report-{}.json", std::process::id()));
    let o = klo(&["verify", "all", "--type", "B2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v.as_array().unwrap().len() > 20);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn verify_failure_exits_1() {
    // A window too small to see all generators: the rank identity fails, it is not a usage error.
    let o = klo(&["verify", "m0", "--type", "G2", "--radius", "12", "--floor", "16"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rank = v.as_array().unwrap().iter().find(|c| c["check_id"] == "m0.G2.window_rank").unwrap();
    assert_eq!(rank["status"], "fail");
    assert_eq!(rank["witness"]["expected"], 73);
}

#[test]
fn figure_is_byte_stable() {
    for (t, n) in [("A2", 19), ("B2", 33), ("G2", 73)] {
        let a = klo(&["figure", "--type", t]);
        let b = klo(&["figure", "--type", t]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(stdout(&a).matches(r#"class="alcove shaded""#).count(), n);
        assert_eq!(stdout(&a).matches(r#"class="tag""#).count(), 1);
    }
}
