use std::path::Path;
use std::process::{Command, Output};

use imcurve::certificate;
use imcurve::gaussian::GaussianRational as GR;

fn imcurve(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_imcurve"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn seed_file(dir: &Path) -> String {
    let o = imcurve(&["seed", "--seed", "42", "-o", "s.cert"], dir);
    assert_eq!(o.status.code(), Some(0));
    std::fs::read_to_string(dir.join("s.cert")).unwrap()
}

#[test]
fn seed_then_verify_and_idempotence() {
    let d = tempfile::tempdir().unwrap();
    let a = seed_file(d.path());
    let o = imcurve(&["verify", "s.cert"], d.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("[pass]")));
    assert_eq!(a, seed_file(d.path()));
}

#[test]
fn tampered_certificates_fail_with_named_checks() {
    let d = tempfile::tempdir().unwrap();
    let text = seed_file(d.path());
    let (mut c, _) = certificate::from_json(&text).unwrap();
    let m = *c.poly.terms().next().unwrap().0;
    c.poly.add_term(m, GR::from_int(1));

    // stale digest
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["polynomial"] = serde_json::Value::String(c.poly.to_string());
    std::fs::write(
        d.path().join("t1.cert"),
        serde_json::to_string_pretty(&v).unwrap(),
    )
    .unwrap();
    let o = imcurve(&["verify", "t1.cert"], d.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL] digest"));

    // fresh digest: the claims themselves no longer hold
    std::fs::write(d.path().join("t2.cert"), certificate::to_json(&c)).unwrap();
    let o = imcurve(&["verify", "t2.cert"], d.path());
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("[pass] digest"));
    assert!(
        out.contains("[FAIL] census") || out.contains("[FAIL] singularities"),
        "{out}"
    );
}

#[test]
fn usage_errors_exit_2() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(imcurve(&["bogus"], d.path()).status.code(), Some(2));
    assert_eq!(
        imcurve(&["topology", "report"], d.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        imcurve(&["verify", "missing.cert"], d.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        imcurve(&["seed", "--seed", "x"], d.path()).status.code(),
        Some(2)
    );
    std::fs::write(d.path().join("junk.cert"), "{").unwrap();
    assert_eq!(
        imcurve(&["verify", "junk.cert"], d.path()).status.code(),
        Some(2)
    );
}

#[test]
fn topology_report_k1() {
    let d = tempfile::tempdir().unwrap();
    let o = imcurve(
        &["topology", "report", "--k", "1", "-o", "r.json"],
        d.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("σ = 16") && out.contains("w2 = 0"), "{out}");
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["sigma_Y"], 16);
    assert_eq!(v["simply_connected"], "assumed");
}

#[test]
fn plots() {
    let d = tempfile::tempdir().unwrap();
    seed_file(d.path());
    assert_eq!(
        imcurve(&["plot", "s.cert", "-o", "a.svg"], d.path())
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        imcurve(&["plot", "s.cert", "-o", "b.svg"], d.path())
            .status
            .code(),
        Some(0)
    );
    let a = std::fs::read_to_string(d.path().join("a.svg")).unwrap();
    assert_eq!(a, std::fs::read_to_string(d.path().join("b.svg")).unwrap());
    assert_eq!(imcurve::plot::box_count(&a), 9);

    let (mut c, _) =
        certificate::from_json(&std::fs::read_to_string(d.path().join("s.cert")).unwrap()).unwrap();
    c.census.boxes.clear();
    c.census.count = 0;
    std::fs::write(d.path().join("e.cert"), certificate::to_json(&c)).unwrap();
    assert_eq!(
        imcurve(&["plot", "e.cert", "-o", "e.svg"], d.path())
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        imcurve::plot::box_count(&std::fs::read_to_string(d.path().join("e.svg")).unwrap()),
        0
    );
}

#[test]
fn square_perturb_and_jobs_determinism() {
    let d = tempfile::tempdir().unwrap();
    seed_file(d.path());
    assert_eq!(
        imcurve(
            &["--jobs", "1", "square", "s.cert", "-o", "q1.cert"],
            d.path()
        )
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        imcurve(
            &["square", "s.cert", "--jobs", "2", "-o", "q2.cert"],
            d.path()
        )
        .status
        .code(),
        Some(0)
    );
    let q1 = std::fs::read(d.path().join("q1.cert")).unwrap();
    assert_eq!(q1, std::fs::read(d.path().join("q2.cert")).unwrap());
    assert_eq!(
        imcurve(&["verify", "q1.cert"], d.path()).status.code(),
        Some(0)
    );
    assert_eq!(
        imcurve(&["perturb", "s.cert", "-o", "p.cert"], d.path())
            .status
            .code(),
        Some(0)
    );
    let o = imcurve(&["verify", "p.cert"], d.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[pass] ovals: 9 disjoint ovals"));
}

#[test]
fn pipeline_run_writes_five_certificates() {
    let d = tempfile::tempdir().unwrap();
    let o = imcurve(
        &[
            "pipeline", "run", "--rounds", "1", "--n", "0", "--seed", "42", "-o", "out",
        ],
        d.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("degrees: 3, 6, 12, 12, 24"));
    let mut files: Vec<_> = std::fs::read_dir(d.path().join("out"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert_eq!(files.len(), 5);
    // each certificate names its predecessor
    let certs: Vec<_> = files
        .iter()
        .map(|p| certificate::from_json(&std::fs::read_to_string(p).unwrap()).unwrap())
        .collect();
    for w in certs.windows(2) {
        assert_eq!(w[1].0.parent.as_deref(), Some(w[0].1.as_str()));
    }
}
