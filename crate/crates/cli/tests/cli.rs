use std::process::Command;

fn mwlab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_mwlab")).args(args).output().expect("binary runs")
}

#[test]
fn lists_every_table_family() {
    let out = mwlab(&["list-scenarios"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["table1_panelA", "table5_panelC", "tableA9_panelD", "tableA11_panelF"] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn small_run_writes_csv() {
    let dir = std::env::temp_dir().join(format!("mwlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t1.csv");
    let out = mwlab(&[
        "run", "--scenario", "table1_panelA", "--reps", "3", "--regions", "40", "--threads", "2", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], mwlab::harness::CSV_HEADER.join(","));
    // header, one truth row and one estimate row per outcome
    assert!(lines.len() > 4);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn config_file_and_bad_input() {
    let dir = std::env::temp_dir().join(format!("mwlab-cli-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cfg.json");
    std::fs::write(
        &path,
        r#"{"name":"custom","dgp":{"model":"normal-markdown","markdown":0.7,"meta":"eff-baseline"},
           "policy":{"mw0":-1.0,"mw1":-0.8},"outcomes":["emp","p10-p50"],
           "estimators":[{"design":{"kind":"effective-mw"}}],"regions":30,"replications":2}"#,
    )
    .unwrap();
    let out = mwlab(&["run", "--scenario", path.to_str().unwrap(), "--format", "markdown"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stdout).unwrap().contains('|'));

    let out = mwlab(&["run", "--scenario", "no_such_thing"]);
    assert!(!out.status.success());
    let out = mwlab(&["reproduce", "--table", "99"]);
    assert!(!out.status.success());
    std::fs::remove_dir_all(&dir).ok();
}
