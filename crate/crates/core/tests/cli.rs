use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkm-quadric"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gkm-quadric-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn graph_q4() {
    let o = bin(&["graph", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["m"], 3);
    assert_eq!(v["vertices"], 6);
    let edges = v["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 24);
    assert_eq!(edges[0]["from"], 1);
    assert_eq!(edges[0]["to"], 2);
    assert_eq!(edges[0]["alpha"], serde_json::json!([1, 0, 0]));
}

#[test]
fn gen_m1_matches_example() {
    let o = bin(&["gen", "--n", "2", "--class", "M", "--vertex", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let exp = |k: &str| v["values"][k]["terms"][0]["exp"].clone();
    assert_eq!(exp("1"), serde_json::json!([0, 0, 0]));
    assert_eq!(exp("2"), serde_json::json!([-1, 0, 0]));
    assert_eq!(exp("5"), serde_json::json!([1, -1, -1]));
    assert_eq!(exp("6"), serde_json::json!([0, -1, -1]));
}

#[test]
fn gen_every_class() {
    for args in [
        &["gen", "--n", "1", "--class", "Minv", "--vertex", "3"][..],
        &["gen", "--n", "2", "--class", "Delta", "--subset", "2,4,6"],
        &["gen", "--n", "2", "--class", "X"],
        &["gen", "--n", "2", "--class", "F", "--subset", "1,2,3,4,5"],
        &["gen", "--n", "2", "--class", "F", "--subset", "4,5"],
    ] {
        assert_eq!(bin(args).status.code(), Some(0), "{args:?}");
    }
    let basis = json(&bin(&["gen", "--n", "1", "--class", "basis"]));
    assert_eq!(basis["elements"].as_array().unwrap().len(), 4);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["bogus"][..],
        &["graph"],
        &["graph", "--n", "0"],
        &["gen", "--n", "2", "--class", "M"],
        &["gen", "--n", "2", "--class", "Delta", "--subset", "1,6"],
        &["gen", "--n", "2", "--class", "Q"],
        &["verify", "--n", "2", "--relations", "5"],
        &["check", "--n", "2", "--in", "/nonexistent/file.json"],
        &["graph", "--n", "2", "--frobnicate"],
    ] {
        let o = bin(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
        assert!(o.stdout.is_empty());
    }
    let help = bin(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("selfcheck"));
}

#[test]
fn check_indicator_fails_with_edges() {
    let one = r#"{"m":3,"terms":[{"exp":[0,0,0],"coef":"1"}]}"#;
    let zero = r#"{"m":3,"terms":[]}"#;
    let doc = format!(
        r#"{{"n":2,"values":{{"1":{one},"2":{zero},"3":{zero},"4":{zero},"5":{zero},"6":{zero}}}}}"#
    );
    let path = scratch("indicator.json");
    std::fs::write(&path, doc).unwrap();
    let o = bin(&["check", "--n", "2", "--in", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["k_class"], false);
    assert_eq!(
        v["failing_edges"],
        serde_json::json!([[1, 2], [1, 3], [1, 4], [1, 5]])
    );
    let d = bin(&["decompose", "--n", "2", "--in", path.to_str().unwrap()]);
    assert_eq!(d.status.code(), Some(1));
}

#[test]
fn gen_check_decompose_pipeline() {
    let class = scratch("delta.json");
    let coeffs = scratch("coeffs.json");
    let o = bin(&[
        "gen",
        "--n",
        "2",
        "--class",
        "Delta",
        "--subset",
        "5,6",
        "--out",
        class.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let c = bin(&["check", "--n", "2", "--in", class.to_str().unwrap()]);
    assert_eq!(c.status.code(), Some(0));
    assert_eq!(json(&c)["k_class"], true);
    let d = bin(&[
        "decompose",
        "--n",
        "2",
        "--in",
        class.to_str().unwrap(),
        "--out",
        coeffs.to_str().unwrap(),
    ]);
    assert_eq!(d.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&coeffs).unwrap()).unwrap();
    assert_eq!(v["n"], 2);
    assert_eq!(v["coeffs"].as_array().unwrap().len(), 6);
    let wrong_n = bin(&["check", "--n", "3", "--in", class.to_str().unwrap()]);
    assert_eq!(wrong_n.status.code(), Some(2));
}

#[test]
fn verify_and_selfcheck_pass() {
    let v = bin(&["verify", "--n", "2", "--relations", "3"]);
    assert_eq!(v.status.code(), Some(0));
    let r = json(&v);
    assert_eq!(r["summary"]["fail"], 0);
    assert!(r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["kind"] == "delta_peel"));
    assert_eq!(
        bin(&["verify", "--n", "2", "--family-bound", "2", "--seed", "9"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        bin(&["selfcheck", "--max-n", "1", "--trials", "1"])
            .status
            .code(),
        Some(0)
    );
    let s = bin(&["selfcheck", "--max-n", "2", "--trials", "50", "--seed", "7"]);
    assert_eq!(s.status.code(), Some(0));
    assert_eq!(json(&s)["pass"], true);
}

#[test]
fn output_is_deterministic_and_pretty_only_adds_whitespace() {
    let args = ["verify", "--n", "2", "--seed", "3"];
    let a = bin(&args);
    let b = bin(&args);
    assert_eq!(a.stdout, b.stdout);
    let mut pretty_args = args.to_vec();
    pretty_args.push("--pretty");
    let p = bin(&pretty_args);
    let strip = |s: String| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
    assert_eq!(strip(stdout(&p)), strip(stdout(&a)));
    assert_ne!(stdout(&p), stdout(&a));
}
