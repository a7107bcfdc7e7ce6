use std::process::Command;

fn iwadec(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_iwadec"))
        .args(args)
        .env_remove("IWADEC_CAP")
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn table_listing() {
    let (code, out, _) = iwadec(&["table", "builtin:heisenberg27"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("chi")).count(), 11);
    let (code, out, _) = iwadec(&["table", "builtin:cyclic9", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["values"].as_array().unwrap().len(), 9);
}

#[test]
fn parse_errors_exit_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.toml");
    std::fs::write(&p, "kind = \"cyclic\"\nl = 3\norders = [9]\naction = \"four\"\n").unwrap();
    let (code, _, err) = iwadec(&["decompose", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("bad.toml:4:"), "{err}");

    std::fs::write(&p, "kind = \"cyclic\"\nl = 3\norders = [7]\naction = 3\n").unwrap();
    let (code, _, err) = iwadec(&["sk1", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains(":4:"), "{err}");

    let (code, _, _) = iwadec(&["table", "/nonexistent/spec.toml"]);
    assert_eq!(code, 2);
    let (code, _, _) = iwadec(&["table", "builtin:nope"]);
    assert_eq!(code, 2);
}

#[test]
fn sk1_exit_codes() {
    assert_eq!(iwadec(&["sk1", "builtin:z7_s2"]).0, 0);
    assert_eq!(iwadec(&["sk1", "builtin:heisenberg27_twisted"]).0, 0);
    assert_eq!(iwadec(&["sk1", "builtin:heisenberg27_twisted", "--cap", "50"]).0, 11);
    let out = Command::new(env!("CARGO_BIN_EXE_iwadec"))
        .args(["sk1", "builtin:heisenberg27_twisted"])
        .env("IWADEC_CAP", "50")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(11));
    // quotient level below m is malformed only when the reduction needs it
    assert_eq!(iwadec(&["sk1", "builtin:z9_h4", "--quotient-level", "2"]).0, 0);
}

#[test]
fn decompose_report_shape() {
    let (code, out, _) = iwadec(&["decompose", "builtin:z9_h4", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], 1);
    let mut idx: Vec<(u64, u64)> = v["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["dim"].as_u64().unwrap(), c["schur_index"]["value"].as_u64().unwrap()))
        .collect();
    idx.sort_unstable();
    assert_eq!(idx, vec![(3, 1), (6, 1), (18, 3)]);
    assert!(v["components"][0]["schur_index"]["status"]
        .as_str()
        .unwrap()
        .contains("not surrogate-verified"));
    assert!(!v["deviations"].as_array().unwrap().is_empty());
    assert!(out.find("timing").is_none());
}

#[test]
fn selfcheck_on_small_dirs() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = iwadec(&["selfcheck", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("warnings: 1"));

    let src = include_str!("../corpus/z9_h4.toml");
    std::fs::write(dir.path().join("z9_h4.toml"), src).unwrap();
    let (code, out, _) = iwadec(&["selfcheck", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("warnings: 0"));

    let (code, out, _) = iwadec(&["selfcheck", dir.path().to_str().unwrap(), "--inject-bad-idempotent"]);
    assert_ne!(code, 0);
    assert!(out.contains("suite crossed: FAILED"), "{out}");
    assert!(out.contains("selfcheck failed in suite crossed"));
}
