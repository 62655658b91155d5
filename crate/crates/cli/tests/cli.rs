use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn lpcb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpcb")).args(args).output().expect("lpcb runs")
}

fn fixture(name: &str) -> String {
    let p: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(format!("{name}.json"));
    p.to_string_lossy().into_owned()
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn validate_accepts_fixtures() {
    for name in ["a43_150", "a42_200", "a84_150"] {
        let out = lpcb(&["validate", &fixture(name)]);
        assert!(out.status.success());
        assert!(String::from_utf8_lossy(&out.stdout).contains("valid"));
    }
}

#[test]
fn invalid_input_exits_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.json");
    fs::write(&bad, "{\"M\": 4}").unwrap();
    assert_eq!(lpcb(&["validate", bad.to_str().unwrap()]).status.code(), Some(2));

    let out = tmp.path().join("o");
    let res = lpcb(&["design", "-M", "16", "-T", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("ceil(M^(1/N)) <= T <= M"));

    assert_eq!(lpcb(&["design", "--overload", "175", "--out", out.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(lpcb(&["eval", "--out", out.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(lpcb(&["simulate", "--kappa", "-1", "--codebook", &fixture("a43_150")]).status.code(), Some(2));

    let cfg = tmp.path().join("cfg.json");
    fs::write(&cfg, "{\"eval\": {\"bogus\": 1}}").unwrap();
    let res = lpcb(&["eval", "--config", cfg.to_str().unwrap(), "--codebook", &fixture("a43_150")]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn flags_override_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("cfg.json");
    fs::write(&cfg, r#"{"simulate": {"frames": 50, "ebn0_db": [0.0], "kappa": [3.0], "seed": 9}}"#).unwrap();
    let out = tmp.path().join("sim");
    let res = lpcb(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--codebook",
        &fixture("a43_150"),
        "--ebn0",
        "2:4:2",
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let ber = read_json(&out.join("ber.json"));
    assert_eq!(ber["config"]["frames"], 50);
    assert_eq!(ber["config"]["seed"], 1);
    assert_eq!(ber["config"]["ebn0_db"], serde_json::json!([2.0, 4.0]));
    let rows = ber["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["kappa"] == 3.0 && r["frames"] == 50));

    let csv = fs::read_to_string(out.join("ber.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# config: "));
    assert!(lines.next().unwrap().starts_with("ebn0_db,kappa,frames,bit_errors,ber,ci_low,ci_high"));
}

#[test]
fn design_output_is_self_describing() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("d");
    let res = lpcb(&["design", "-M", "4", "-T", "2", "--restarts", "3", "--seed", "2", "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let cb = read_json(&out.join("codebook.json"));
    assert_eq!(cb["design_meta"]["seed"], 2);
    assert_eq!(cb["design_meta"]["config"]["design"]["restarts"], 3);
    let val = lpcb(&["validate", out.join("codebook.json").to_str().unwrap()]);
    assert!(val.status.success());

    let eval_out = tmp.path().join("e");
    let res = lpcb(&[
        "eval",
        "--codebook",
        out.join("codebook.json").to_str().unwrap(),
        "--kappa",
        "inf",
        "--out",
        eval_out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let m = read_json(&eval_out.join("metrics.json"));
    assert_eq!(m["report"]["kappa"], "inf");
    assert!(m["report"]["med"].as_f64().unwrap() > 0.9);
}

#[test]
fn complexity_reads_codebook_shape() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("c");
    let res = lpcb(&["complexity", "--codebook", &fixture("a43_150"), "--i-t", "4", "--out", out.to_str().unwrap()]);
    assert!(res.status.success());
    let c = read_json(&out.join("complexity.json"));
    assert_eq!(c["report"]["lp"]["t"], 3);
    assert_eq!(c["report"]["lp"]["d_f"], 3);
    assert_eq!(c["report"]["lp"]["i_t"], 4);
}

#[test]
fn label_keeps_codewords() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("l");
    let res = lpcb(&["label", "--codebook", &fixture("a84_150"), "--label-restarts", "2", "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let before = read_json(Path::new(&fixture("a84_150")));
    let after = read_json(&out.join("labeled.json"));
    assert_eq!(before["users"].as_array().unwrap().len(), after["users"].as_array().unwrap().len());
    for (a, b) in before["users"].as_array().unwrap().iter().zip(after["users"].as_array().unwrap()) {
        assert_eq!(a["codewords"], b["codewords"]);
    }
    let report = read_json(&out.join("labeling.json"));
    for user in report["users"].as_array().unwrap() {
        let trace: Vec<f64> = user["trace"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
        assert!(trace.windows(2).all(|w| w[1] <= w[0]));
    }
}
