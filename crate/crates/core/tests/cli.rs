//! End-to-end tests of the `ris-outage` binary.

// reference values are quoted from a 50-digit evaluation
#![allow(clippy::excessive_precision)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const HEADER: &str = "sweep_value,op_exact,op_asymptotic,op_floor,op_mc,mc_stderr,flags";

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ris-outage"));
    c.env_remove("RIS_OUTAGE_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Writes a scenario file into `dir`.
fn scenario(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

const SMALL: &str = r#"
[fading.hop1]
kind = "nakagami"
m = 2.0

[fading.hop2]
kind = "rice"
k_r_db = 5.0

[ris]
n_elements = 8

[hardware]
kappa_s = 0.1
kappa_d = 0.1

[link]
gamma_th = 1.0

[sweep]
variable = "gamma_over_gamma_th_db"
range = { start = -12.0, stop = -4.0, points = 5 }

[mc]
samples = 200000
seed = 3
chunk_size = 20000
"#;

fn field(row: &str, i: usize) -> &str {
    row.split(',').nth(i).unwrap()
}

#[test]
fn run_writes_the_curve() {
    let dir = TempDir::new().unwrap();
    let s = scenario(&dir, "small.toml", SMALL);
    let out = dir.path().join("out");
    let o = run(&["run", s.to_str().unwrap(), "-o", out.to_str().unwrap(), "--svg", "--mc"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(out.join("curve.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], HEADER);
    assert_eq!(lines.len(), 6);
    assert!(!csv.contains('\r'));
    for row in &lines[1..] {
        assert_eq!(row.split(',').count(), 7);
        assert_eq!(field(row, 3), "", "no floor without misalignment");
        let (exact, mc, se): (f64, f64, f64) =
            (field(row, 1).parse().unwrap(), field(row, 4).parse().unwrap(), field(row, 5).parse().unwrap());
        assert!((exact - mc).abs() <= 5.0 * se.max(1e-6), "{row}");
    }
    let svg = fs::read_to_string(out.join("curve.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("Monte Carlo"));
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let dir = TempDir::new().unwrap();
    let s = scenario(&dir, "small.toml", SMALL);
    let csv = |threads: &str, sub: &str| {
        let out = dir.path().join(sub);
        let o = bin()
            .env("RIS_OUTAGE_THREADS", threads)
            .args(["run", s.to_str().unwrap(), "-o", out.to_str().unwrap(), "--mc"])
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        fs::read(out.join("curve.csv")).unwrap()
    };
    let first = csv("1", "a");
    assert_eq!(first, csv("1", "b"));
    assert_eq!(first, csv("4", "c"));
}

#[test]
fn malformed_sweep_is_a_parse_error_without_output() {
    let dir = TempDir::new().unwrap();
    let bad = SMALL.replace("points = 5", "points = 0");
    let s = scenario(&dir, "bad.toml", &bad);
    let out = dir.path().join("out");
    let o = run(&["run", s.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("sweep"), "{}", stderr(&o));
    assert!(!out.join("curve.csv").exists());

    let unknown = SMALL.replace("variable = \"gamma_over_gamma_th_db\"", "variable = \"temperature\"");
    let s = scenario(&dir, "unknown.toml", &unknown);
    let o = run(&["run", s.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "diagnostic names the line: {}", stderr(&o));
    assert!(!out.join("curve.csv").exists());
}

#[test]
fn failed_moment_match_is_a_numeric_error() {
    let dir = TempDir::new().unwrap();
    let text = SMALL
        .replace("kind = \"nakagami\"\nm = 2.0", "kind = \"rayleigh\"")
        .replace("kind = \"rice\"\nk_r_db = 5.0", "kind = \"rayleigh\"");
    let s = scenario(&dir, "rr.toml", &text);
    let out = dir.path().join("out");
    let o = run(&["run", s.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("moment matching"), "{}", stderr(&o));
    assert!(!out.join("curve.csv").exists());
}

#[test]
fn io_failures_exit_with_4() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.toml");
    let o = run(&["run", missing.to_str().unwrap(), "-o", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    let s = scenario(&dir, "small.toml", SMALL);
    let blocker = dir.path().join("file");
    fs::write(&blocker, "not a directory").unwrap();
    let o = run(&["run", s.to_str().unwrap(), "-o", blocker.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn invalid_thread_override_is_rejected() {
    let dir = TempDir::new().unwrap();
    let s = scenario(&dir, "small.toml", SMALL);
    let o = bin()
        .env("RIS_OUTAGE_THREADS", "0")
        .args(["run", s.to_str().unwrap(), "-o", dir.path().join("o").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let o = run(&["run", "--selftest"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 7, "{text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn report_prints_the_derived_quantities() {
    let o = run(&["report", example("fig6.scenario").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let value = |key: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(key)).unwrap_or_else(|| panic!("no `{key}` in\n{text}"));
        line.split('=').nth(1).unwrap().trim().parse().unwrap()
    };
    // independent 50-digit evaluation of the reference geometry
    assert!((value("B_o =") / 5.378_071_822_907_559e-4 - 1.0).abs() < 1e-10);
    assert!((value("zeta =") / 4_174.765_708_119_215_8 - 1.0).abs() < 1e-10);
    assert!((value("w(L2) =") / 4.771_345_328_769_603_6 - 1.0).abs() < 1e-12);
    assert!((value("k_A =") / 34.664_034_343_150_724 - 1.0).abs() < 1e-9);
    assert!((value("m_A =") / 13.034_774_551_266_551 - 1.0).abs() < 1e-9);
    assert!((value("Xi =") / 1.566_626_437_431_746_4 - 1.0).abs() < 1e-9);
    assert!(text.contains("gamma_th^m = infinity"), "{text}");
    assert!(text.contains("floor: UNDEFINED (Γ-argument condition violated"), "{text}");
}

#[test]
fn report_applies_the_rate_threshold() {
    let dir = TempDir::new().unwrap();
    let s = scenario(&dir, "small.toml", SMALL);
    let o = run(&["report", s.to_str().unwrap(), "--rate-threshold", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("gamma_th = 3\n"), "{}", stdout(&o));
    let gmax: f64 = stdout(&o).lines().find_map(|l| l.trim().strip_prefix("gamma_th^m = ")).unwrap().parse().unwrap();
    assert!((gmax - 50.0).abs() < 1e-12);
    let o = run(&["report", dir.path().join("nope.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    let bad = scenario(&dir, "bad.toml", "[ris]\nn_elements = -1\n");
    assert_eq!(run(&["report", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn bundled_scenarios_complete() {
    let dir = TempDir::new().unwrap();
    for entry in fs::read_dir(example("")).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("scenario") {
            continue;
        }
        let out = dir.path().join(path.file_stem().unwrap());
        let o = run(&["run", path.to_str().unwrap(), "-o", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}: {}", path.display(), stderr(&o));
        assert!(fs::read_to_string(out.join("curve.csv")).unwrap().starts_with(HEADER));
    }
}

#[test]
fn reference_scenario_row_at_5_db() {
    let dir = TempDir::new().unwrap();
    let o = run(&["run", example("fig6.scenario").to_str().unwrap(), "-o", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    let row = csv.lines().skip(1).find(|r| field(r, 0) == "5").expect("row at 5 dB");
    let op: f64 = field(row, 1).parse().unwrap();
    assert!((op / 4.07e-6 - 1.0).abs() <= 0.25, "row `{row}`: expected about 4.07e-6");
}
