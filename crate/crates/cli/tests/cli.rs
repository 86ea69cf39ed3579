use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn psdcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psdcone"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn membership_exit_codes() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "3\n2 -1 -1\n-1 2 -1\n-1 -1 2\n");
    assert_eq!(psdcone(&["membership", "--cone", "sdd-star", "--input", &g]).status.code(), Some(0));

    let swap = write(&dir, "swap.txt", "2\n0 1\n1 0\n");
    let o = psdcone(&["membership", "--cone", "dd-star", "--input", &swap]);
    assert_eq!(o.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["verdict"], false);
    assert_eq!(report["violations"][0]["constraint"]["kind"], "dd-pair");
    assert_eq!(report["violations"][0]["constraint"]["sign"], "-");
    assert_eq!(report["violations"][0]["residual"], -2.0);

    let asym = write(&dir, "asym.txt", "2\n0 1\n0 0\n");
    let o = psdcone(&["membership", "--cone", "psd", "--input", &asym]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not symmetric"));

    let bad = write(&dir, "bad.txt", "2\n1 0\n0 x\n");
    let o = psdcone(&["membership", "--cone", "psd", "--input", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn k_psd_needs_k() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "3\n2 -1 -1\n-1 2 -1\n-1 -1 2\n");
    assert_eq!(psdcone(&["membership", "--cone", "k-psd", "--input", &g]).status.code(), Some(1));
    assert_eq!(
        psdcone(&["membership", "--cone", "k-psd", "--k", "3", "--input", &g]).status.code(),
        Some(0)
    );
    assert_eq!(
        psdcone(&["membership", "--cone", "psd", "--k", "2", "--input", &g]).status.code(),
        Some(1)
    );
}

#[test]
fn project_writes_projection() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "x.txt", "2\n1 0\n0 -1\n");
    let out = path(&dir, "p.txt");
    let o = psdcone(&["project", "--input", &input, "--output", &out]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1\n");
    assert_eq!(fs::read_to_string(&out).unwrap(), "2\n1 0\n0 0\n");
}

#[test]
fn make_matrices() {
    let o = psdcone(&["make", "g", "--a", "1", "--b", "2", "--n", "3"]);
    assert_eq!(stdout(&o), "3\n2 -1 -1\n-1 2 -1\n-1 -1 2\n");
    let o = psdcone(&["make", "worst-sdd", "--n", "4"]);
    assert_eq!(
        stdout(&o),
        "4\n0.25 -0.25 -0.25 -0.25\n-0.25 0.25 -0.25 -0.25\n-0.25 -0.25 0.25 -0.25\n-0.25 -0.25 -0.25 0.25\n"
    );
    let o = psdcone(&["make", "star", "--n", "3", "--signs", "+-"]);
    assert_eq!(stdout(&o), "3\n0 0 0.5\n0 0 -0.5\n0.5 -0.5 1\n");
    let o = psdcone(&["make", "candidate", "--n", "3", "--q", "2", "--signs", "-+"]);
    assert_eq!(stdout(&o), "3\n0 -0.5 0\n-0.5 1 0.5\n0 0.5 0\n");

    let o = psdcone(&["make", "star", "--n", "3", "--signs", "+"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage: psdcone make star"));
    assert_eq!(psdcone(&["make", "candidate", "--n", "3", "--q", "4", "--signs", "++"]).status.code(), Some(1));
}

#[test]
fn stars_are_dd_star_but_not_sdd_star() {
    let dir = TempDir::new().unwrap();
    for (n, signs) in [(3, "+-"), (4, "-+-"), (5, "++++")] {
        let file = path(&dir, &format!("star{n}.txt"));
        let n = n.to_string();
        assert!(psdcone(&["make", "star", "--n", &n, "--signs", signs, "--output", &file]).status.success());
        assert_eq!(psdcone(&["membership", "--cone", "dd-star", "--input", &file]).status.code(), Some(0));
        assert_eq!(psdcone(&["membership", "--cone", "sdd-star", "--input", &file]).status.code(), Some(2));
    }
}

#[test]
fn verify_tables() {
    let o = psdcone(&["verify", "--theorem", "3", "--n", "2..12", "--samples", "200", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 12);
    assert_eq!(lines[0], "n,set,normalization,theory,witness,sampled_max,cert_pass_rate,violation");
    assert!(lines[1..].iter().all(|l| l.ends_with(",1,false")));
    assert!(lines[8].starts_with("9,dd-star,trace,1,1,"));

    let o = psdcone(&["verify", "--theorem", "2", "--n", "2..2", "--samples", "10", "--seed", "1"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("2,sdd-star,trace,0,0,0,1,false"));

    let o = psdcone(&["verify", "--theorem", "1", "--n", "3..5", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(psdcone(&["verify", "--theorem", "4", "--n", "4", "--seed", "1"]).status.code(), Some(1));
    assert_eq!(psdcone(&["verify", "--theorem", "1", "--n", "4"]).status.code(), Some(1));

    let o = psdcone(&[
        "verify", "--theorem", "1", "--n", "4..6", "--samples", "100", "--seed", "7", "--format", "json",
    ]);
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 6);
    assert_eq!(rows[0]["theory"], 0.5);
}

#[test]
fn bounds_output() {
    let get = |n: &str, k: &str| -> serde_json::Value {
        serde_json::from_slice(&psdcone(&["bounds", "--n", n, "--k", k]).stdout).unwrap()
    };
    let b = get("6", "2");
    assert_eq!(b["lower"], 0.666666666666667);
    assert_eq!(b["upper"], 0.666666666666667);
    let b = get("6", "6");
    assert_eq!(b["lower"], 0.0);
    assert_eq!(b["upper"], 0.0);
    let b = get("6", "3");
    assert_eq!(b["lower"], 0.408248290463863);
    assert_eq!(b["upper"], 0.428571428571429);
    assert_eq!(psdcone(&["bounds", "--n", "6", "--k", "7"]).status.code(), Some(1));
}

#[test]
fn sample_without_reference_value() {
    let o = psdcone(&[
        "sample", "--set", "dd-star", "--normalization", "frobenius", "--n", "3", "--samples", "20", "--seed", "1",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["theory"].is_null());
    assert_eq!(v["note"], "no theoretical reference");
    assert_eq!(v["stats"]["count"], 20);
}

fn manifest(dir: &Path, args: &[&str]) -> (serde_json::Value, Vec<u8>) {
    let m = dir.join("m.json");
    let mut full = vec!["--manifest", m.to_str().unwrap()];
    full.extend_from_slice(args);
    let o = psdcone(&full);
    assert!(o.status.success());
    (serde_json::from_slice(&fs::read(&m).unwrap()).unwrap(), o.stdout)
}

#[test]
fn manifests_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let args = ["sample", "--set", "sdd-star", "--normalization", "trace", "--n", "5", "--samples", "50", "--seed", "9"];
    let (m1, out1) = manifest(dir.path(), &args);
    let (m2, out2) = manifest(dir.path(), &args);
    assert_eq!(out1, out2);
    assert_eq!(m1, m2);
    assert_eq!(m1["command"], "sample");
    assert_eq!(m1["seed"], 9);
    assert_eq!(m1["parameters"]["n"], "5");
    assert_eq!(m1["output_sha256"].as_str().unwrap().len(), 64);

    let (m3, _) = manifest(dir.path(), &["bounds", "--n", "6", "--k", "3"]);
    assert!(m3["seed"].is_null());
    assert_ne!(m3["output_sha256"], m1["output_sha256"]);
}
