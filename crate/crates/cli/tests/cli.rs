use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quasilattice"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn fib_scheme(dir: &Path) {
    write(dir, "fib.json", r#"{"m": 1, "group": {"d": 1}, "form": "sturmian"}"#);
    let out = run(dir, &["scheme", "build", "--spec", "fib.json", "--out", "scheme.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn exists_exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "z2cubed.json", r#"{"d": 1, "torus": 0, "torsion": [2, 2, 2]}"#);
    write(d, "z2squared.json", r#"{"d": 1, "torsion": [2, 2]}"#);

    let out = run(d, &["exists", "--spec", "z2cubed.json", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("obstructed at p=2"));
    assert_eq!(run(d, &["exists", "--spec", "z2squared.json", "--m", "1"]).status.code(), Some(0));
    assert_eq!(run(d, &["exists", "--spec", "z2cubed.json", "--m", "2"]).status.code(), Some(0));
}

#[test]
fn obstructed_build_exits_2() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "desc.json", r#"{"m": 1, "group": {"d": 1, "torsion": [2, 2, 2]}}"#);
    let out = run(d, &["scheme", "build", "--spec", "desc.json", "--out", "s.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!d.join("s.json").exists());
}

#[test]
fn input_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "bad.json", "{\"d\": 1, ");
    assert_eq!(run(d, &["exists", "--spec", "bad.json", "--m", "1"]).status.code(), Some(1));
    assert_eq!(run(d, &["exists", "--spec", "missing.json", "--m", "1"]).status.code(), Some(1));
    assert_eq!(run(d, &["scheme", "build", "--spec", "bad.json", "--out", "s.json"]).status.code(), Some(1));
    assert_eq!(run(d, &["no-such-command"]).status.code(), Some(1));

    fib_scheme(d);
    let reversed = run(d, &["points", "--scheme", "scheme.json", "--interval", "1:-1", "--obs", "0:10", "--out", "p.csv"]);
    assert_eq!(reversed.status.code(), Some(1));
    write(d, "k.json", r#"{"real_boxes": [{"lo": [0, 0], "hi": [1, 1]}]}"#);
    let wrong_dim = run(d, &["points", "--scheme", "scheme.json", "--spectrum", "k.json", "--obs", "0:10", "--out", "p.csv"]);
    assert_eq!(wrong_dim.status.code(), Some(1));
}

#[test]
fn tampered_scheme_is_rejected() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fib_scheme(d);
    let mut v: Value = serde_json::from_str(&fs::read_to_string(d.join("scheme.json")).unwrap()).unwrap();
    v["basis"][0][0] = Value::from(3.0);
    fs::write(d.join("scheme.json"), v.to_string()).unwrap();
    let out = run(d, &["poisson", "--scheme", "scheme.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn poisson_identity_holds_and_violation_exits_3() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fib_scheme(d);
    let out = run(d, &["poisson", "--scheme", "scheme.json", "--sigma", "0.8", "--out", "p.csv"]);
    assert!(out.status.success());
    let csv = fs::read_to_string(d.join("p.csv")).unwrap();
    let mut rows = 0;
    for line in csv.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let diff: f64 = line.split(',').nth(5).unwrap().parse().unwrap();
        assert!(diff < 1e-10, "{line}");
        rows += 1;
    }
    assert_eq!(rows, 8);

    let strict = run(d, &["poisson", "--scheme", "scheme.json", "--tol", "0"]);
    assert_eq!(strict.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("Poisson summation"));
}

#[test]
fn density_matches_inverse_covolume() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fib_scheme(d);
    let out = run(d, &["density", "--scheme", "scheme.json", "--interval", "0:1", "--lmax", "1000", "--out", "d.json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(d.join("d.json")).unwrap()).unwrap();
    let gap = 1.0 / 3f64.sqrt() - 1.0 / 2f64.sqrt();
    let theo = v["report"]["theoretical"].as_f64().unwrap();
    assert!((theo * gap.abs() - 1.0).abs() < 1e-12);
    let densities = v["report"]["rows"][2]["densities"].as_array().unwrap();
    assert_eq!(densities.len(), 16);
    for x in densities {
        assert!((x.as_f64().unwrap() / theo - 1.0).abs() < 0.02);
    }
    assert_eq!(v["header"]["tool"], "quasilattice");
    assert_eq!(v["header"]["inputs"][0]["name"], "scheme.json");
}

#[test]
fn headers_carry_version_seed_and_hashes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fib_scheme(d);
    let out = run(d, &["nl", "--scheme", "scheme.json", "--rs", "10,100", "--translates", "2", "--seed", "5", "--out", "nl.csv"]);
    assert!(out.status.success());
    let csv = fs::read_to_string(d.join("nl.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], format!("# quasilattice {}", env!("CARGO_PKG_VERSION")));
    assert_eq!(lines[2], "# seed: 5");
    let hash = lines[3].strip_prefix("# input: scheme.json sha256=").unwrap();
    assert_eq!(hash.len(), 64);
    assert!(hash.chars().all(|c| c.is_ascii_hexdigit()));
    assert!(csv.contains("\nr,translate,a,error\n"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fib_scheme(d);
    write(d, "k.json", r#"{"real_boxes": [{"lo": [0], "hi": [0.4]}, {"lo": [1], "hi": [1.3]}]}"#);
    let sweep = |out: &str, seq: bool| {
        let mut args = vec![
            "sweep", "--scheme", "scheme.json", "--ratios", "0.8,1.25", "--trials", "3", "--L", "80", "--seed", "7",
            "--out", out, "--svg",
        ];
        let svg = format!("{out}.svg");
        args.push(&svg);
        if seq {
            args.push("--sequential");
        }
        assert!(run(d, &args).status.success());
    };
    sweep("a.csv", false);
    sweep("b.csv", false);
    sweep("c.csv", true);
    let a = fs::read(d.join("a.csv")).unwrap();
    assert_eq!(a, fs::read(d.join("b.csv")).unwrap());
    assert_eq!(a, fs::read(d.join("c.csv")).unwrap());
    assert_eq!(fs::read(d.join("a.csv.svg")).unwrap(), fs::read(d.join("b.csv.svg")).unwrap());

    for name in ["p1.csv", "p2.csv"] {
        let out = run(d, &["points", "--scheme", "scheme.json", "--spectrum", "k.json", "--obs", "-30:30", "--out", name]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(d.join("p1.csv")).unwrap(), fs::read(d.join("p2.csv")).unwrap());
}

#[test]
fn sweep_rows_and_verdicts() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fib_scheme(d);
    let out = run(d, &["sweep", "--scheme", "scheme.json", "--ratios", "0.5,1.5", "--trials", "2", "--L", "100", "--out", "s.csv"]);
    assert!(out.status.success());
    let csv = fs::read_to_string(d.join("s.csv")).unwrap();
    let rows: Vec<Vec<&str>> =
        csv.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert_eq!(r.len(), 7);
        let expected = if r[0] == "0.5" { "sampling-like" } else { "interpolation-like" };
        assert_eq!(r[6], expected, "{r:?}");
    }
}

#[test]
fn points_csv_and_svg() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "z2.json", r#"{"m": 1, "group": {"d": 1, "torsion": [2]}}"#);
    assert!(run(d, &["scheme", "build", "--spec", "z2.json", "--out", "s.json"]).status.success());
    let out = run(d, &["points", "--scheme", "s.json", "--interval", "-1:1", "--obs", "-10:10", "--out", "p.csv", "--svg", "p.svg"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(d.join("p.csv")).unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "z0,z1,z2,p1_0,real_0,disc_0");
    let svg = fs::read_to_string(d.join("p.svg")).unwrap();
    assert!(svg.contains("disc [0]") && svg.contains("disc [1]"));
    let n = csv.lines().filter(|l| !l.starts_with('#')).count() - 1;
    assert_eq!(svg.matches("<circle").count(), n);
}

#[test]
fn duality_writes_both_probes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fib_scheme(d);
    let s = fs::read_to_string(d.join("scheme.json")).unwrap();
    let sh: f64 = serde_json::from_str::<Value>(&s).unwrap()["section_mass"].as_f64().unwrap();
    write(d, "k.json", &format!(r#"{{"real_boxes": [{{"lo": [0], "hi": [{}]}}]}}"#, 0.3 / sh));
    let out = run(d, &["duality", "--scheme", "scheme.json", "--interval", "0:1", "--spectrum", "k.json", "--L", "60", "--out", "du.csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(d.join("du.csv")).unwrap();
    let body: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body.len(), 3);
    assert!(body[1].starts_with("interpolation,"));
    assert!(body[2].starts_with("sampling,"));
    assert_eq!(csv.matches("# input: ").count(), 2);
}
