use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

fn biqap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biqap")).args(args).env_remove("BIQAP_THREADS").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bounds_on_cnot_reports_both_forms() {
    let o = biqap(&["bounds", "--input", &fixture("cnot.json"), "--restarts", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 7);
    assert!(v["gamma_relative_gap"].as_f64().unwrap() <= 1e-6);
    let names: Vec<&str> = v["bounds"].as_array().unwrap().iter().map(|b| b["name"].as_str().unwrap()).collect();
    assert!(names.iter().any(|n| n.contains("primal")));
    assert!(names.iter().any(|n| n.contains("dual")));
    assert!(names.iter().any(|n| n.starts_with("E_max")));
}

#[test]
fn bounds_with_reps_adds_resource_state_bounds() {
    let o = biqap(&["bounds", "--input", &fixture("swap.json"), "--reps", &fixture("pauli.json"), "--restarts", "0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("name,kind,value_bits,linear,gap,status,iterations\n"));
    assert!(s.contains("fw-upper-estimate"));
    assert!(s.contains("ppt-relaxation"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let o = biqap(&["bounds", "--input", &fixture("cnot.json"), "--restarts", "3", "--seed", "11", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn erasure_scan_csv() {
    let o = biqap(&["erasure-scan", "--d", "2", "--q-grid", "0:1:0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "q,analytic,computed_rate,upper_bound");
    assert_eq!(lines.len(), 4);
    assert!(lines[2].starts_with("0.5,1,1,"));
}

#[test]
fn empty_grid_gives_header_only() {
    for g in ["", "1:0:0.1"] {
        let o = biqap(&["erasure-scan", "--q-grid", g]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), "q,analytic,computed_rate,upper_bound\n");
    }
}

#[test]
fn simulate_teleport_on_cnot() {
    let o = biqap(&["simulate-teleport", "--input", &fixture("cnot.json"), "--reps", &fixture("pauli.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["report"]["diamond_distance"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn property_suite_passes() {
    let o = biqap(&["property-suite", "--trials", "5", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["seed"], 3);
}

#[test]
fn zero_trials_warns() {
    let o = biqap(&["property-suite", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let cases: [&[&str]; 5] = [
        &["bounds", "--input", "/nonexistent/channel.json"],
        &["bounds", "--input", "BROKEN", "--tol", "1e-8"],
        &["bounds", "--input", "CNOT", "--tol", "-1"],
        &["erasure-scan", "--d", "4"],
        &["simulate-teleport", "--input", "ERASURE", "--reps", "PAULI"],
    ];
    for args in cases {
        let args: Vec<String> = args
            .iter()
            .map(|a| match *a {
                "BROKEN" => fixture("broken.json"),
                "CNOT" => fixture("cnot.json"),
                "ERASURE" => fixture("erasure_q03.json"),
                "PAULI" => fixture("pauli.json"),
                other => other.to_string(),
            })
            .collect();
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = biqap(&refs);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn parse_errors_carry_line_and_column() {
    let o = biqap(&["bounds", "--input", &fixture("broken.json")]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("column"), "{err}");
}

#[test]
fn dump_sdp_writes_program() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("prog.txt");
    let o = biqap(&["bounds", "--input", &fixture("cnot.json"), "--restarts", "0", "--dump-sdp", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!std::fs::read_to_string(&p).unwrap().is_empty());
}
