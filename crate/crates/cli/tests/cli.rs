use std::process::{Command, Output};

use serde_json::Value;

fn nilflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilflow"))
        .args(args)
        .env_remove("NILFLOW_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn casimir_v6_prints_f6() {
    let v = json(&nilflow(&["casimir", "--family", "vn", "--dim", "6"]));
    assert_eq!(v["generators"][1], "x3*x6^2 - 1/2*x4*x5*x6 + 1/8*x5^3");
    assert_eq!(v["nu"], 2);
    let text = nilflow(&[
        "casimir", "--family", "vn", "--dim", "6", "--format", "text",
    ]);
    assert_eq!(
        String::from_utf8(text.stdout).unwrap(),
        "x6\nx3*x6^2 - 1/2*x4*x5*x6 + 1/8*x5^3\n"
    );
}

#[test]
fn rank_q9() {
    let v = json(&nilflow(&["rank", "--family", "qn", "--dim", "9"]));
    assert_eq!(v["rank"], 2);
    assert_eq!(v["nu"], 7);
    let raw = String::from_utf8(nilflow(&["rank", "--family", "qn", "--dim", "9"]).stdout).unwrap();
    assert!(raw.starts_with(r#"{"rank":2,"nu":7,"#));
}

#[test]
fn reports_carry_provenance_and_are_reproducible() {
    let a = nilflow(&["rank", "--family", "vn", "--dim", "7", "--symbolic"]);
    let b = nilflow(&["rank", "--family", "vn", "--dim", "7", "--symbolic"]);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["seed"], 0xC0FFEE);
    assert_eq!(v["algebra_hash"].as_str().unwrap().len(), 64);
    assert_eq!(v["certificate"]["certified"], true);
}

#[test]
fn seed_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_nilflow"))
        .args(["rank", "--family", "vn", "--dim", "5"])
        .env("NILFLOW_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(json(&out)["seed"], 42);
    let flag = nilflow(&["--seed", "7", "rank", "--family", "vn", "--dim", "5"]);
    assert_eq!(json(&flag)["seed"], 7);
}

#[test]
fn algebra_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("vn5.json");
    let p = path.to_str().unwrap();
    let v = json(&nilflow(&[
        "algebra", "--family", "vn", "--dim", "5", "--out", p,
    ]));
    assert_eq!(v["derived_dims"], serde_json::json!([5, 3, 0]));
    let g = json(&nilflow(&[
        "group",
        "--algebra",
        p,
        "--mul",
        "1,0,0,0,0",
        "0,1,0,0,0",
    ]));
    assert_eq!(
        g["product"],
        serde_json::json!(["1", "1", "1/2", "1/6", "-1/12"])
    );
    let from_file = json(&nilflow(&["rank", "--algebra", p]));
    let from_family = json(&nilflow(&["rank", "--family", "vn", "--dim", "5"]));
    assert_eq!(from_file["algebra_hash"], from_family["algebra_hash"]);
}

#[test]
fn extension_builds_v4_from_v3() {
    let v = json(&nilflow(&[
        "algebra", "--family", "vn", "--dim", "3", "--extend", "1,3,2",
    ]));
    assert_eq!(v["family"], "vn");
    assert_eq!(v["dim"], 4);
    assert_eq!(v["is_filiform"], true);
}

#[test]
fn orbit_report() {
    let v = json(&nilflow(&[
        "orbit", "--family", "vn", "--dim", "4", "--point", "1,1,1,2",
    ]));
    assert_eq!(v["dimension"], 2);
    assert_eq!(v["equations"][1]["value"], "7/4");
}

#[test]
fn flow_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let v = json(&nilflow(&[
        "flow",
        "--family",
        "vn",
        "--dim",
        "6",
        "--metric",
        "identity",
        "--x0",
        "1,0,0,1,0,2",
        "--dt",
        "1e-3",
        "--steps",
        "1000",
        "--monitor",
        "casimirs",
        "--out",
        out.to_str().unwrap(),
    ]));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "t,x_1,x_2,x_3,x_4,x_5,x_6,H,C1,C2"
    );
    assert_eq!(csv.lines().count(), 1002);
    for m in v["runs"][0]["monitors"].as_array().unwrap() {
        assert!(m["max_drift"].as_f64().unwrap() <= 1e-6);
    }
}

#[test]
fn magnetic_sweep_and_equivalence() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let v = json(&nilflow(&[
        "flow",
        "--family",
        "vn",
        "--dim",
        "3",
        "--x0",
        "1,0,1",
        "--steps",
        "50",
        "--cocycle",
        "1,3,2",
        "--charges",
        "0,1,-1/2",
        "--check-equivalence",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_eq!(v["system"], "magnetic");
    assert_eq!(v["runs"].as_array().unwrap().len(), 3);
    assert!(dir.path().join("m_c2.csv").exists());
    assert_eq!(v["equivalence"]["magnetic"], true);
    assert_eq!(v["equivalence"]["sub_riemannian"], true);
}

#[test]
fn forms_certificates() {
    let v = json(&nilflow(&[
        "forms",
        "--family",
        "vn",
        "--dim",
        "4",
        "--symplectic",
        "standard",
        "--betti",
        "2",
    ]));
    assert_eq!(v["symplectic"]["closed"], true);
    assert_eq!(v["symplectic"]["nondegenerate"], true);
    let d = json(&nilflow(&[
        "forms",
        "--family",
        "vn",
        "--dim",
        "5",
        "--differential",
        "w5",
    ]));
    assert_eq!(d["differential"], "3*w1^w4 + w2^w3");
}

#[test]
fn heisenberg_lattice_is_not_closed() {
    let v = json(&nilflow(&[
        "group",
        "--family",
        "vn",
        "--dim",
        "3",
        "--lattice",
        "1",
        "--axioms",
        "3",
    ]));
    assert_eq!(v["lattice"]["closed"], false);
    assert_eq!(v["axioms"]["associativity_failures"], 0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(nilflow(&["rank", "--dim", "4"]).status.code(), Some(2));
    assert_eq!(nilflow(&["bogus"]).status.code(), Some(2));
    assert_eq!(
        nilflow(&["orbit", "--family", "vn", "--dim", "4", "--point", "1,2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        nilflow(&["flow", "--family", "vn", "--dim", "3", "--x0", "1,x,0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn computation_errors_exit_1_with_json() {
    let out = nilflow(&[
        "algebra", "--family", "vn", "--dim", "4", "--extend", "2,4,1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "computation");
    let out = nilflow(&[
        "orbit",
        "--family",
        "qn",
        "--dim",
        "6",
        "--point",
        "1,1,1,1,1,1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reproduce_tables() {
    let v = json(&nilflow(&["reproduce", "paper-tables"]));
    let checks = v["checks"].as_object().unwrap();
    for key in [
        "casimir_property",
        "rank_table",
        "det_btilde",
        "solvable_steps",
        "symplectic",
        "contact",
    ] {
        assert_eq!(checks[key], "pass", "{key}");
    }
    // The reference F8 differs from the computed one in the x7^4 coefficient only.
    assert_eq!(checks["casimir_reference_match"], "fail");
    assert_eq!(v["casimirs"][2]["mismatches"].as_array().unwrap().len(), 1);
}

#[test]
fn forms_check_flags_write_report() {
    let dir = tempfile::tempdir().unwrap();
    let alg = dir.path().join("vn8.json");
    let report = dir.path().join("report.json");
    nilflow(&[
        "algebra",
        "--family",
        "vn",
        "--dim",
        "8",
        "--out",
        alg.to_str().unwrap(),
    ]);
    let out = nilflow(&[
        "forms",
        "--algebra",
        alg.to_str().unwrap(),
        "--check",
        "symplectic",
        "--check",
        "cohomology",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read(&report).unwrap(), out.stdout);
    let v = json(&out);
    assert_eq!(v["symplectic"]["nondegenerate"], true);
    assert_eq!(v["betti"], serde_json::json!([1, 2, 3, 5, 6, 5, 3, 2, 1]));
    let c = json(&nilflow(&[
        "forms", "--family", "vn", "--dim", "7", "--check", "contact",
    ]));
    assert_eq!(c["contact"]["contact"], true);
}
