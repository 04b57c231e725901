use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../accessory/corpus").join(sub)
}

fn knot(name: &str) -> PathBuf {
    corpus("rolfsen").join(format!("{name}.pd"))
}

fn accessory(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_accessory")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn poly(v: &Value) -> Vec<(i64, i64)> {
    let mut terms: Vec<(i64, i64)> =
        v.as_object().unwrap().iter().map(|(k, c)| (k.parse().unwrap(), c.as_i64().unwrap())).collect();
    terms.sort();
    terms
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compute_trefoil() {
    let out = accessory(&["compute", "--pd", path(&knot("3_1")), "--auto-unknot", "descending", "--json"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(poly(&report["delta"]), vec![(0, 1), (1, -1), (2, 1)]);
    assert_eq!(report["arf"], 1);
    for field in ["psi", "lambda", "epsilon", "tau", "seed", "verdicts"] {
        assert!(report.get(field).is_some(), "missing {field}");
    }
    assert_eq!(report["verdicts"]["determinant_matches_oracle"], true);
}

#[test]
fn compute_minimal_twist_knot() {
    let pd = corpus("twist").join("twist_m3.pd");
    let out = accessory(&["compute", "--pd", path(&pd), "--auto-unknot", "minimal", "--json"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    // 1 - 2n + nt + nt^-1 with n = -3, shifted to start at t^0.
    assert_eq!(poly(&report["delta"]), vec![(0, 3), (1, -7), (2, 3)]);
    assert_eq!(report["psi"]["rows"], 1);
}

#[test]
fn compute_unknot_and_gauss_input() {
    let dir = tempfile::tempdir().unwrap();
    let unknot = dir.path().join("unknot.pd");
    fs::write(&unknot, "[]").unwrap();
    let out = accessory(&["compute", "--pd", path(&unknot), "--json"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(poly(&report["delta"]), vec![(0, 1)]);
    assert_eq!(report["arf"], 0);
    assert_eq!(report["psi"]["rows"], 0);

    let gauss = dir.path().join("trefoil.gauss");
    fs::write(&gauss, "O1- U2- O3- U1- O2- U3-").unwrap();
    let out = accessory(&["compute", "--gauss", path(&gauss)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("arf: 1"));
}

#[test]
fn input_and_pipeline_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.pd");
    fs::write(&bad, "[[1,2,3]]").unwrap();
    for cmd in ["compute", "oracle", "compare"] {
        let out = accessory(&[cmd, "--pd", path(&bad)]);
        assert_eq!(code(&out), 2, "{cmd}");
    }
    let out = accessory(&["compute", "--pd", path(&dir.path().join("missing.pd"))]);
    assert_eq!(code(&out), 2);
    let out = accessory(&["compute", "--pd", path(&knot("3_1")), "--marked", "9"]);
    assert_eq!(code(&out), 2);
    let out = accessory(&["compute", "--pd", path(&knot("3_1")), "--marked", "1,2,3"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("certification"));
    let out = accessory(&["compute"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn oracle_subcommand() {
    let out = accessory(&["oracle", "--pd", path(&knot("4_1")), "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(poly(&v["delta"]), vec![(0, 1), (1, -3), (2, 1)]);
    assert_eq!(v["arf"], 1);
}

#[test]
fn compare_over_seeds() {
    for name in ["3_1", "4_1", "7_4"] {
        let out = accessory(&["compare", "--pd", path(&knot(name)), "--trials", "10", "--json"]);
        assert_eq!(code(&out), 0, "{name}");
        let v = json(&out);
        assert_eq!(v["mismatches"], 0);
        assert_eq!(v["trials"].as_array().unwrap().len(), 10);
    }
}

#[test]
fn omega_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (-1, vec![(0, 1), (1, -3), (2, 1)], 1),
        (1, vec![(0, 1), (1, -1), (2, 1)], 1),
        (0, vec![(0, 1)], 0),
    ];
    for (a, delta, arf) in cases {
        let file = dir.path().join(format!("tower{a}.json"));
        let text = format!(r#"{{"pairs":[{{"a":{a},"b":0,"sign":1,"p_ww":{{}},"p_aa":{{}},"p_wa":{{}}}}],"cross":{{}}}}"#);
        fs::write(&file, text).unwrap();
        let out = accessory(&["omega", "--tower", path(&file), "--json"]);
        assert_eq!(code(&out), 0);
        let v = json(&out);
        assert_eq!(poly(&v["delta"]), delta);
        assert_eq!(v["arf_levine"], arf);
        assert_eq!(v["arf_tower"], arf);
        assert_eq!(v["consistent"], true);
    }
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"pairs":[{"a":1,"b":0,"sign":1}],"cross":{"(1,2)":{"0":1}}}"#).unwrap();
    assert_eq!(code(&accessory(&["omega", "--tower", path(&bad)])), 2);
    fs::write(&bad, r#"{"pairs":[{"a":"x"}]}"#).unwrap();
    assert_eq!(code(&accessory(&["omega", "--tower", path(&bad)])), 2);
}

#[test]
fn shipped_corpus_passes() {
    for sub in ["rolfsen", "twist"] {
        let out = accessory(&["corpus", "--dir", path(&corpus(sub)), "--jobs", "2", "--json"]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
        assert_eq!(json(&out)["failures"], 0);
    }
}

#[test]
fn corrupted_expectation_fails_once() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["3_1", "4_1", "5_2"] {
        for ext in ["pd", "json"] {
            let from = corpus("rolfsen").join(format!("{name}.{ext}"));
            fs::copy(from, dir.path().join(format!("{name}.{ext}"))).unwrap();
        }
    }
    fs::write(dir.path().join("4_1.json"), r#"{"knot":"4_1","delta":{"0":1,"1":-1,"2":1},"arf":1}"#).unwrap();
    let out = accessory(&["corpus", "--dir", path(dir.path()), "--json"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["failures"], 1);
    let failed: Vec<&str> = v["knots"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|k| k["passed"] == false)
        .map(|k| k["knot"].as_str().unwrap())
        .collect();
    assert_eq!(failed, vec!["4_1"]);
}

#[test]
fn empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let out = accessory(&["corpus", "--dir", path(dir.path())]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 knots, 0 failures"));
    assert_eq!(code(&accessory(&["corpus", "--dir", path(&dir.path().join("nope"))])), 2);
}

#[test]
fn blanchfield_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("report.json");
    let out = accessory(&["compute", "--pd", path(&knot("7_4")), "--seed", "5", "--json"]);
    assert_eq!(code(&out), 0);
    fs::write(&dump, &out.stdout).unwrap();
    let d = json(&out)["psi"]["rows"].as_u64().unwrap() as usize;
    for i in 0..d {
        for j in 0..d {
            let (i, j) = (i.to_string(), j.to_string());
            let direct = accessory(&["blanchfield", "--pd", path(&knot("7_4")), "--seed", "5", "--i", &i, "--j", &j, "--json"]);
            let replay = accessory(&["blanchfield", "--psi", path(&dump), "--i", &i, "--j", &j, "--json"]);
            assert_eq!(code(&direct), 0);
            assert_eq!(json(&direct), json(&replay));
        }
    }
    let out = accessory(&["blanchfield", "--psi", path(&dump), "--i", "9", "--j", "0"]);
    assert_eq!(code(&out), 2);
}
