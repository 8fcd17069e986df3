use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use leaky_spectra::output::sha256_hex;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leaky-spectra"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

const STUDY: &str =
    "[shape]\nname = circle\nradius = 1.0\n\n[coupling]\nalpha = 20, 40, 80, 160\n\n[discretization]\nj_max = 3\n";

#[test]
fn asymptotic_study_columns_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "study.conf", STUDY);
    let out = dir.path().join("out");
    let o = bin(&["asymptotic-study", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = out.join("asymptotic-study.csv");
    assert_eq!(
        header(&csv),
        "alpha,j,lambda,mu,residual,residual_times_alpha_over_logalpha"
    );
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 4 * 3);
    let first: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first[0], "2.0000000000000000e1");
    assert_eq!(first[1], "0");
    assert!(first[2..]
        .iter()
        .all(|c| c.split('e').next().unwrap().trim_start_matches('-').len() == 18));
    let manifest = fs::read_to_string(out.join("asymptotic-study.manifest")).unwrap();
    assert!(manifest.contains(&format!("config_sha256 = {}", sha256_hex(STUDY))));
    assert!(manifest.contains("alpha[160].discretization = circle modes R=1"));
}

#[test]
fn counting_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "count.conf",
        "[shape]\nname = sphere\nradius = 1\n[coupling]\nalpha = 20, 40\n",
    );
    let o = bin(&["counting", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(dir.path().join("counting.csv")).unwrap();
    assert_eq!(
        text,
        "alpha,count,weyl,diff\n\
         2.0000000000000000e1,100,1.0000000000000000e2,0.0000000000000000e0\n\
         4.0000000000000000e1,400,4.0000000000000000e2,0.0000000000000000e0\n"
    );
}

#[test]
fn invalid_shape_names_supported_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.conf",
        "[shape]\nname = hexagon\n[coupling]\nalpha = 3\n",
    );
    let o = bin(&["bound-states", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.contains("line 2") && err.contains("circle") && err.contains("torus"),
        "{err}"
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        bin(&["counting", "--config", "/nonexistent.conf"]).status.code(),
        Some(1)
    );
    assert_eq!(bin(&["bogus"]).status.code(), Some(1));
    assert_eq!(bin(&[]).status.code(), Some(1));
    // loop wider than the period
    let cfg = write(
        dir.path(),
        "chain.conf",
        "[shape]\nname = circle\nradius = 1\n[coupling]\nalpha = 10\n[chain]\nperiod = 1.5\n",
    );
    let o = bin(&["bands", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    let cfg = write(dir.path(), "ok.conf", "[coupling]\nalpha = 10, 20\n");
    let o = bin(&[
        "transverse-check",
        "--config",
        &cfg,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(header(&dir.path().join("transverse-check.csv")).starts_with("alpha,half_width,c_a,kappa_minus,kappa_plus"));
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.conf",
        "[shape]\nname = ellipse\na = 1.2\nb = 0.9\n[coupling]\nalpha = 8, 12\n[discretization]\nnodes = 128\nj_max = 4\n",
    );
    let mut outputs = Vec::new();
    for sub in ["a", "b"] {
        let out = dir.path().join(sub);
        for kind in ["bound-states", "comparison"] {
            let o = bin(&[kind, "--config", &cfg, "--out", out.to_str().unwrap()]);
            assert!(o.status.success(), "{kind}: {}", String::from_utf8_lossy(&o.stderr));
        }
        outputs.push(
            ["bound-states.csv", "comparison.csv", "bound-states.manifest"].map(|f| fs::read(out.join(f)).unwrap()),
        );
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn bands_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bands.conf",
        "[shape]\nname = circle\nradius = 1\n[coupling]\nalpha = 6\n[chain]\nperiod = 3\n[discretization]\ntheta_samples = 9\nnodes = 96\n",
    );
    let o = bin(&["bands", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        fs::read_to_string(dir.path().join("bands.csv"))
            .unwrap()
            .lines()
            .count(),
        1 + 2 * 9
    );
    assert_eq!(
        header(&dir.path().join("bands_gaps.csv")),
        "alpha,below,above,lower,upper,width,tentative"
    );
    let gaps = fs::read_to_string(dir.path().join("bands_gaps.csv")).unwrap();
    assert_eq!(gaps.lines().count(), 2);
    assert!(gaps.lines().nth(1).unwrap().starts_with("6.0000000000000000e0,0,1,"));
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["--selftest", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout)
        .lines()
        .all(|l| l.starts_with("PASS")));
}
