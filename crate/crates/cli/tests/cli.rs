use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn invext(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invext"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn run(sub: &str, name: &str, out: &Path) -> Output {
    invext(&[sub, scenario(name).to_str().unwrap()], out)
}

fn read(path: PathBuf) -> String {
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn grid_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn reflection_grid_is_symmetric() {
    let dir = tempfile::tempdir().unwrap();
    let out = run("run", "reflection.toml", dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = read(dir.path().join("grid.csv"));
    assert!(csv.starts_with("x1,phi_value,witness_index,error_bound\n"));
    let rows = grid_rows(&csv);
    assert_eq!(rows.len(), 41);
    for (row, mirror) in rows.iter().zip(rows.iter().rev()) {
        let x: f64 = row[0].parse().unwrap();
        let mx: f64 = mirror[0].parse().unwrap();
        assert!((x + mx).abs() < 1e-12);
        assert_eq!(row[1], mirror[1], "phi({x}) != phi({mx})");
    }
    // phi = 5 on A and the data are constant, so the extension is constant.
    assert!(rows.iter().all(|r| r[1] == "5.0"));
    let report = read(dir.path().join("report.txt"));
    assert!(report.contains("invariance: PASS"));
    assert!(report.contains("restriction: PASS"));
    assert!(report.ends_with("verdict: PASS\n"));
}

#[test]
fn non_invariant_data_exits_one_and_names_the_pair() {
    let dir = tempfile::tempdir().unwrap();
    let out = run("run", "non_invariant.toml", dir.path());
    assert_eq!(out.status.code(), Some(1));
    let report = read(dir.path().join("report.txt"));
    assert!(
        report.contains("orbit pair: sample 0 at (1.0) with value 1.0 maps under net element 1 to (-1.0) = sample 1 with value 2.0"),
        "{report}"
    );
    assert!(!dir.path().join("grid.csv").exists());
    assert_eq!(String::from_utf8_lossy(&out.stdout), report);
}

#[test]
fn so2_benchmark_records_the_oracle_gap() {
    let dir = tempfile::tempdir().unwrap();
    let out = run("run", "so2_benchmark.toml", dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report = read(dir.path().join("report.txt"));
    let line = report.lines().find(|l| l.starts_with("oracle: PASS")).expect("oracle line");
    let gap: f64 = line
        .split("max |phi - oracle| = ")
        .nth(1)
        .and_then(|s| s.split(',').next())
        .unwrap()
        .parse()
        .unwrap();
    assert!(gap <= 1e-3, "{line}");

    let rows = grid_rows(&read(dir.path().join("grid.csv")));
    for r in &rows {
        let (x, y, phi): (f64, f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap());
        let bound: f64 = r[4].parse().unwrap();
        let oracle = -(x * x + y * y).sqrt();
        assert!(phi - oracle >= -1e-12 && phi - oracle <= bound, "({x}, {y}): {phi} vs {oracle}");
    }
}

#[test]
fn exact_tolerance_on_a_continuous_group_fails() {
    let dir = tempfile::tempdir().unwrap();
    let src = read(scenario("so2_benchmark.toml")).replace("tolerance = \"auto\"", "tolerance = 0.0");
    let path = dir.path().join("exact.toml");
    std::fs::write(&path, src).unwrap();
    let out = invext(&["audit", path.to_str().unwrap(), "--epsilon", "0.05"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let report = read(dir.path().join("report.txt"));
    assert!(report.contains("invariance: FAIL"), "{report}");
    assert!(!dir.path().join("grid.csv").exists(), "audit writes no grid");
}

#[test]
fn punctured_plane_skips_the_frontier() {
    let dir = tempfile::tempdir().unwrap();
    let out = run("run", "punctured_plane.toml", dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = read(dir.path().join("grid.csv"));
    assert!(csv.contains("\n0.0,0.0,nan,,\n"));
    assert_eq!(csv.matches("nan").count(), 1);
}

#[test]
fn zeroset_scenarios_pass() {
    for name in ["zeroset_pair.toml", "zeroset_origin_so2.toml"] {
        let dir = tempfile::tempdir().unwrap();
        let out = run("zeroset", name, dir.path());
        let report = read(dir.path().join("report.txt"));
        assert_eq!(out.status.code(), Some(0), "{report}");
        assert!(report.contains("zero-set audit: PASS"));
        let rows = grid_rows(&read(dir.path().join("grid.csv")));
        assert!(rows.iter().all(|r| r[2].parse::<f64>().unwrap() >= 0.0));
    }
}

#[test]
fn zeroset_without_section_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run("zeroset", "reflection.toml", dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[zeroset]"));
}

#[test]
fn validation_errors_are_line_anchored() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("counts = [41]", "counts = [1]", ":16: grid counts must be at least 2"),
        ("kind = \"sign\"", "kind = \"sgn\"", ":7: unknown variant `sgn`"),
        ("version = 1", "version = 7", ":2: unsupported scenario version 7"),
        ("values = [5.0, 5.0]", "values = [5.0, 6.0]", ""),
    ];
    for (from, to, expected) in cases {
        let src = read(scenario("reflection.toml")).replace(from, to);
        let path = dir.path().join("case.toml");
        std::fs::write(&path, &src).unwrap();
        let out = invext(&["run", path.to_str().unwrap()], dir.path());
        if expected.is_empty() {
            // Inconsistent but well-formed data is an audit failure, not a parse error.
            assert_eq!(out.status.code(), Some(1));
            continue;
        }
        assert_eq!(out.status.code(), Some(2), "{to}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains(&format!("case.toml{expected}")), "{stderr}");
    }
}

#[test]
fn bad_epsilon_override_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = invext(&["run", scenario("reflection.toml").to_str().unwrap(), "--epsilon", "-1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--epsilon must be positive"));
}

#[test]
fn seed_changes_audit_samples_but_not_the_grid() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let path = scenario("so2_benchmark.toml");
    let path = path.to_str().unwrap();
    assert_eq!(invext(&["run", path, "--seed", "1", "--epsilon", "0.01"], a.path()).status.code(), Some(0));
    assert_eq!(invext(&["run", path, "--seed", "2", "--epsilon", "0.01"], b.path()).status.code(), Some(0));
    assert_eq!(read(a.path().join("grid.csv")), read(b.path().join("grid.csv")));
    let (ra, rb) = (read(a.path().join("report.txt")), read(b.path().join("report.txt")));
    assert!(ra.contains("seed: 1") && rb.contains("seed: 2"));
    assert!(ra.contains("epsilon: 0.01"));
}

#[test]
fn rerun_gives_identical_artifacts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for name in ["square_boundary.toml", "punctured_plane.toml"] {
        run("run", name, a.path());
        run("run", name, b.path());
        assert_eq!(read(a.path().join("grid.csv")), read(b.path().join("grid.csv")), "{name}");
        assert_eq!(read(a.path().join("report.txt")), read(b.path().join("report.txt")), "{name}");
    }
}
