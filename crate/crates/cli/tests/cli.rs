//! End-to-end runs of the binary against the shipped problem files.

use std::path::PathBuf;
use std::process::{Command, Output};

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../problems")
        .join(name)
}

fn npd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_npd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn dual_command_reports_dims() {
    let out = npd(&[
        "dual",
        problem("cusp_embedded.json").to_str().unwrap(),
        "-k",
        "4",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["results"][0]["dims"], serde_json::json!([1, 3, 6, 8, 10]));
}

#[test]
fn corners_command_reports_staircase() {
    let out = npd(&[
        "corners",
        problem("monomial_staircase.json").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["results"][0]["rho0"], 5);
    assert_eq!(v["results"][0]["mu0"], 10);
}

#[test]
fn hilbert_command() {
    let out = npd(&[
        "hilbert",
        problem("cusp_embedded.json").to_str().unwrap(),
        "-k",
        "4",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(
        v["results"][0]["values"],
        serde_json::json!([1, 2, 3, 2, 2])
    );
}

#[test]
fn member_command_and_exit_codes() {
    let path = problem("cusp_embedded.json");
    let out = npd(&["member", path.to_str().unwrap(), "--poly", "x(y^2 - x^3)"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["member"], true);
    let out = npd(&["member", path.to_str().unwrap(), "--poly", "y^2 - x^3"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["member"], false);
}

#[test]
fn embedded_command_cusp() {
    let out = npd(&["embedded", problem("cusp_embedded.json").to_str().unwrap()]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["verdicts"][0]["verdict"], true);
    assert_eq!(v["verdicts"][0]["certificate_type"], "witness");
}

#[test]
fn truncate_command_family_value() {
    let out = npd(&[
        "truncate",
        problem("fat_line.json").to_str().unwrap(),
        "-d",
        "1",
        "-e",
        "2",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["space"]["dim"], 1);
    assert_eq!(v["space"]["basis"][0]["string"], "y");
}

#[test]
fn deflate_command_emits_parseable_system() {
    let out = npd(&[
        "deflate",
        problem("fat_line.json").to_str().unwrap(),
        "-d",
        "1",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let vars: Vec<String> = v["variables"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap().to_string())
        .collect();
    // original system plus the operator applied to each generator
    let gens = v["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 2 + 2);
    assert_eq!(vars.len(), 3 + 4);
    // emitted strings parse back in the extended ring
    let ring = npd_core::ring::ring_from_names(vars);
    for g in gens {
        npd_core::parse::parse_poly(g.as_str().unwrap(), &ring).unwrap();
    }
}

#[test]
fn interpolate_command() {
    let out = npd(&[
        "interpolate",
        problem("cusp_embedded.json").to_str().unwrap(),
        "--component",
        "cusp",
        "-e",
        "3",
        "-k",
        "4",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["dual_dims"], serde_json::json!([1, 3, 5, 7, 9]));
}

#[test]
fn error_paths_exit_one() {
    // no generators
    let dir = std::env::temp_dir().join("npd_cli_tests");
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty-system.json");
    std::fs::write(&empty, r#"{"variables": ["x"], "generators": []}"#).unwrap();
    let out = npd(&["dual", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());

    // malformed polynomial reports position
    let bad = dir.join("bad-poly.json");
    std::fs::write(
        &bad,
        r#"{"variables": ["x"], "generators": ["x + qq"], "suspects": [{"point": [[0,0]]}]}"#,
    )
    .unwrap();
    let out = npd(&["dual", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("column"), "stderr: {}", err);

    // missing file
    let out = npd(&["dual", dir.join("nope.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let path = problem("cusp_embedded.json");
    let a = npd(&["embedded", path.to_str().unwrap(), "--seed", "3"]);
    let b = npd(&["embedded", path.to_str().unwrap(), "--seed", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let a = npd(&["corners", path.to_str().unwrap()]);
    let b = npd(&["corners", path.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn five_lines_embedded_verdicts() {
    let out = npd(&[
        "embedded",
        problem("five_lines_two_planes.json").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let verdicts = v["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 2);
    assert_eq!(verdicts[0]["verdict"], false);
    assert!(verdicts[0]["covered_scorners"]
        .as_array()
        .unwrap()
        .iter()
        .any(|s| s == "y^2*z"));
    assert_eq!(verdicts[1]["verdict"], false);
    assert_eq!(verdicts[1]["sliced"], true);
}
