use std::path::PathBuf;
use std::process::{Command, Output};

fn conemod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conemod"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("conemod-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn dim_on_the_fs_preset() {
    let out = conemod(&[
        "dim",
        "--preset",
        "fubini-study",
        "--points",
        "2",
        "--mu",
        "-1/2",
        "--ker-hypothesis",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["results"]["virt_dim"], 0);
    assert_eq!(v["results"]["rigidity"]["verdict"], "zero-dimensional-fs");
    assert_eq!(v["results"]["obstruction"]["coker_dim"], 0);
}

#[test]
fn rates_over_the_laplacian_gap_are_empty() {
    let out = conemod(&[
        "rates",
        "--preset",
        "scalar-laplacian-s5",
        "--window",
        "-4",
        "0",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["results"]["critical_rates"], serde_json::json!([]), "{v}");
    assert_eq!(v["results"]["complete"], true);
}

#[test]
fn cohomology_of_the_anchor() {
    let out = conemod(&["cohomology", "--expr", "End(T)(-1)"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let h = &v["results"]["cohomology"];
    assert_eq!(
        (h["h0"].as_u64(), h["h1"].as_u64(), h["h2"].as_u64()),
        (Some(0), Some(3), Some(0)),
        "{v}"
    );
}

#[test]
fn user_errors_exit_with_one() {
    for args in [
        &[
            "dim",
            "--preset",
            "fubini-study",
            "--points",
            "1",
            "--mu",
            "-0.05",
        ][..],
        &["cohomology", "--expr", "End(T"][..],
        &["rates", "--preset", "no-such-preset"][..],
    ] {
        let out = conemod(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn out_writes_the_report_to_a_file() {
    let dir = scratch("out");
    let path = dir.join("report.json");
    let out = conemod(&[
        "cohomology",
        "--expr",
        "O(2)",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["results"]["cohomology"]["h0"], 6);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn dim_from_a_config_file() {
    let dir = scratch("config");
    let path = dir.join("config.json");
    let doc = r#"{
        "schema_version": 1,
        "moduli": {
            "points": [
                {"source": {"preset": "fubini-study"}, "stab_dim": 8, "mu": "-1/2"},
                {"source": {"bundle": "abstract(r=2,c1=0,c2=2,stable)"}, "stab_dim": 0, "mu": "-1/2"}
            ],
            "group": {"kind": "pu", "n": 2}
        },
        "ker_hypothesis": true
    }"#;
    std::fs::write(&path, doc).unwrap();
    let out = conemod(&["dim", "--config", path.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["results"]["virt_dim"], -12);
    assert_eq!(v["results"]["obstruction"]["coker_dim"], 12);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    let args = [
        "dim",
        "--preset",
        "fubini-study",
        "--points",
        "3",
        "--mu",
        "-0.5",
    ];
    assert_eq!(conemod(&args).stdout, conemod(&args).stdout);
}
