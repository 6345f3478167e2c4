//! The `helperrate` binary end to end: exit codes, CSV output, witnesses.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn helperrate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_helperrate"))
        .args(args)
        .env_remove("HELPERRATE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Data rows of a CSV written by the binary, header comment and column
/// names dropped.
fn rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn body(path: &Path) -> String {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

fn validate_every_witness(csv: &Path) -> usize {
    let rows = rows(csv);
    let dir = csv.parent().unwrap();
    for row in &rows {
        let file = dir.join(&row[5]);
        let o = helperrate(&["validate", "--witness", file.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}: {}", row[5], stderr(&o));
    }
    rows.len()
}

#[test]
fn validates_every_bundled_source() {
    for entry in std::fs::read_dir(data("")).unwrap() {
        let path = entry.unwrap().path();
        let o = helperrate(&["validate", "--src", path.to_str().unwrap()]);
        if path.file_name().unwrap() == "bsc025.json" {
            // a test channel, not a source
            assert_eq!(o.status.code(), Some(2));
        } else {
            assert_eq!(o.status.code(), Some(0), "{}: {}", path.display(), stderr(&o));
        }
    }
}

#[test]
fn accinfo_of_orthogonal_states_is_one_bit() {
    let o = helperrate(&["accinfo", "--src", data("orthogonal.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("I_acc = 1.000000"), "{}", stdout(&o));
    assert!(stdout(&o).contains("accinfo points=1 seed=0"));
}

#[test]
fn bb84_pair_curve_with_defaults() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("curve.csv");
    let o = helperrate(&[
        "region-qhelper",
        "--src",
        data("bb84pair.json").to_str().unwrap(),
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = rows(&out);
    assert!(rows.len() >= 35, "{} rows", rows.len());
    assert!(stdout(&o).starts_with(&format!("region-qhelper points={} seed=1", rows.len())));
    let leftmost = rows.iter().map(|r| r[1].parse::<f64>().unwrap()).fold(f64::INFINITY, f64::min);
    assert!((leftmost - 0.60094).abs() <= 3e-3, "leftmost r1 {leftmost}");
    assert_eq!(validate_every_witness(&out), rows.len());
}

#[test]
fn chelper_rows_and_staircase_revalidate() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("c.csv");
    let stairs = tmp.path().join("s.csv");
    let o = helperrate(&[
        "region-chelper",
        "--src",
        data("dsbs.json").to_str().unwrap(),
        "--restarts",
        "4",
        "--out",
        out.to_str().unwrap(),
        "--staircase",
        stairs.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let header = std::fs::read_to_string(&out).unwrap();
    assert!(header.starts_with("# helperrate region-chelper"));
    assert!(header.contains("restarts=4"));
    assert!(validate_every_witness(&out) >= 35);
    assert!(validate_every_witness(&stairs) >= 2);
}

#[test]
fn tampered_witness_is_a_numerical_failure() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("c.csv");
    let o = helperrate(&[
        "region-chelper",
        "--src",
        data("copy.json").to_str().unwrap(),
        "--restarts",
        "1",
        "--mu",
        "0,1",
        "--refine-rounds",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let file = out.parent().unwrap().join(&rows(&out)[0][5]);
    let mut w: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let r1 = w["r1"].as_f64().unwrap();
    w["r1"] = serde_json::json!(r1 + 0.01);
    std::fs::write(&file, w.to_string()).unwrap();
    let o = helperrate(&["validate", "--witness", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("RateMismatch"), "{}", stderr(&o));
}

#[test]
fn input_errors_exit_two_and_name_the_field() {
    let tmp = TempDir::new().unwrap();
    let bad = tmp.path().join("bad.json");
    std::fs::write(&bad, r#"{"type":"cq","p":[0.5,0.6],"states":[[[1,0],[0,0]],[[0,0],[0,1]]]}"#).unwrap();
    let o = helperrate(&["validate", "--src", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("p"), "{}", stderr(&o));

    std::fs::write(&bad, r#"{"type":"classical","p":[[1]],"colour":1}"#).unwrap();
    let o = helperrate(&["validate", "--src", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"), "{}", stderr(&o));

    let o = helperrate(&["validate", "--src", tmp.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = helperrate(&["accinfo", "--src", data("dsbs.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "classical source is not an ensemble");

    let o = helperrate(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seed_falls_back_to_environment() {
    let tmp = TempDir::new().unwrap();
    let with_env = tmp.path().join("env.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_helperrate"))
        .args(["simulate-sw", "--src", data("dsbs.json").to_str().unwrap()])
        .args(["--n", "8", "--r1", "0.6", "--trials", "200", "--out", with_env.to_str().unwrap()])
        .env("HELPERRATE_SEED", "17")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("seed=17"));
    let explicit = tmp.path().join("flag.csv");
    let o = helperrate(&[
        "simulate-sw",
        "--src",
        data("dsbs.json").to_str().unwrap(),
        "--n",
        "8",
        "--r1",
        "0.6",
        "--trials",
        "200",
        "--seed",
        "17",
        "--out",
        explicit.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(body(&with_env), body(&explicit));
}

#[test]
fn simulation_schemas() {
    let tmp = TempDir::new().unwrap();
    let syn = tmp.path().join("syn.csv");
    let o = helperrate(&[
        "simulate-synthesis",
        "--src",
        data("dsbs.json").to_str().unwrap(),
        "--bsc",
        "0.25",
        "--n",
        "4",
        "--rate",
        "0.5,1.0",
        "--out",
        syn.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(body(&syn).starts_with("n,rate,mode,tv\n4,0.5,exact,"));

    let pipe = tmp.path().join("pipe.csv");
    let o = helperrate(&[
        "simulate-pipeline",
        "--src",
        data("dsbs.json").to_str().unwrap(),
        "--channel",
        data("bsc025.json").to_str().unwrap(),
        "--n",
        "8",
        "--r1",
        "1.0",
        "--r2",
        "0.4",
        "--trials",
        "100",
        "--out",
        pipe.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(body(&pipe).starts_with("n,r1,r2,trials,seed,error_rate\n8,1,0.4,100,0,"), "{}", body(&pipe));
}
