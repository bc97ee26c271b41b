use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use solvhull_cli::SpecFile;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_solvhull"))
}

fn run(args: &[&str]) -> (i32, Value) {
    let out: Output = bin().args(args).output().expect("binary runs");
    let report = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().expect("exit code"), report)
}

fn write_spec(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn sol_spec() -> SpecFile {
    SpecFile::builtin("sol").unwrap()
}

#[test]
fn builtins_pass_every_command() {
    for ex in ["sol", "sect4"] {
        for cmd in ["analyze", "hull", "monodromy", "verify"] {
            let (code, report) = run(&[cmd, "--example", ex]);
            assert_eq!(code, 0, "{cmd} {ex}: {report}");
            assert_eq!(report["pass"], Value::Bool(true));
            assert_eq!(report["exit_code"], 0);
            assert_eq!(report["command"], cmd);
        }
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["verify", "--example", "sect4", "--seed", "3"];
    let a = bin().args(args).output().unwrap().stdout;
    let b = bin().args(args).output().unwrap().stdout;
    assert_eq!(a, b);
}

#[test]
fn seed_is_recorded() {
    let (_, report) = run(&["hull", "--example", "sol", "--seed", "11"]);
    assert_eq!(report["seed"], 11);
}

#[test]
fn example_round_trips_through_a_spec_file() {
    let out = bin().args(["example", "sol"]).output().unwrap();
    assert!(out.status.success());
    let path = write_spec("sol_roundtrip.json", &String::from_utf8(out.stdout).unwrap());
    let (code, from_file) = run(&["hull", "--spec", path.to_str().unwrap()]);
    let (_, builtin) = run(&["hull", "--example", "sol"]);
    assert_eq!(code, 0);
    assert_eq!(from_file["results"], builtin["results"]);
    assert_eq!(from_file["input_digest"], builtin["input_digest"]);
}

#[test]
fn corrupted_constant_is_reported_as_jacobi_violation() {
    let mut spec = sol_spec();
    // [x, y] = 0.1 x breaks Jacobi on (t, x, y)
    spec.algebra.structure.push((1, 2, 1, 0.1, 0.0));
    let path = write_spec("sol_corrupted.json", &spec.to_json());
    for cmd in ["analyze", "hull", "verify"] {
        let (code, report) = run(&[cmd, "--spec", path.to_str().unwrap()]);
        assert_eq!(code, 2, "{cmd}: {report}");
        let err = &report["error"];
        assert_eq!(err["kind"], "JacobiViolation", "{cmd}: {report}");
        let mut triple: Vec<u64> = err["triple"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
        triple.sort();
        assert_eq!(triple, vec![0, 1, 2]);
        assert!((err["residual"].as_f64().unwrap() - 0.1).abs() < 1e-12);
    }
}

#[test]
fn malformed_json_exits_with_validation_code() {
    let path = write_spec("broken.json", "{\"algebra\": ");
    let (code, report) = run(&["hull", "--spec", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(report["error"]["kind"], "InvalidSpec");
}

#[test]
fn unknown_example_exits_with_validation_code() {
    let (code, _) = run(&["hull", "--example", "heisenberg"]);
    assert_eq!(code, 2);
}

#[test]
fn monodromy_without_model_is_rejected() {
    let mut spec = sol_spec();
    spec.model = None;
    spec.lattice = None;
    let path = write_spec("sol_bare.json", &spec.to_json());
    let (code, report) = run(&["monodromy", "--spec", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(report["error"]["kind"], "InvalidModel");
}

#[test]
fn model_must_match_the_algebra() {
    let mut spec = sol_spec();
    spec.model.as_mut().unwrap().dphi[0][0][0] = [2.0, 0.0];
    let path = write_spec("sol_mismatch.json", &spec.to_json());
    let (code, report) = run(&["monodromy", "--spec", path.to_str().unwrap()]);
    assert_eq!(code, 2, "{report}");
}

#[test]
fn small_representation_cap_is_a_resource_error() {
    let mut spec = SpecFile::builtin("sect4").unwrap();
    spec.tolerances.get_or_insert_with(Default::default).max_rep_dim = Some(5);
    let path = write_spec("sect4_capped.json", &spec.to_json());
    let (code, report) = run(&["hull", "--spec", path.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert_eq!(report["error"]["kind"], "TruncationOverflow");
}

#[test]
fn integrate_on_named_path_and_word() {
    let (code, report) = run(&["integrate", "--example", "sect4", "--path", "t_loop", "--integral", "e^(ipi*dt)"]);
    assert_eq!(code, 0);
    let v = &report["results"]["values"]["transport"];
    assert!((v[0].as_f64().unwrap() - 1.0).abs() < 1e-12 && v[1].as_f64().unwrap().abs() < 1e-12);

    let (code, report) = run(&["integrate", "--example", "sol", "--word", "a b1 a^-1 b1^-1", "--integral", "dt"]);
    assert_eq!(code, 0);
    assert!(report["results"]["values"]["chen_exact"][0].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn integrate_rejects_bad_words() {
    let (code, report) = run(&["integrate", "--example", "sol", "--word", "a c", "--integral", "dt"]);
    assert_eq!(code, 2);
    assert_eq!(report["error"]["kind"], "UnknownGenerator");
    let (code, report) = run(&["integrate", "--example", "sol", "--path", "t_loop", "--integral", "e^(dt dx"]);
    assert_eq!(code, 2);
    assert_eq!(report["error"]["kind"], "MalformedWord");
    let (code, _) = run(&["integrate", "--example", "sol", "--path", "nowhere", "--integral", "dt"]);
    assert_eq!(code, 2);
}

#[test]
fn out_flag_writes_the_report() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("analyze_sol.json");
    let out = bin().args(["analyze", "--example", "sol", "--out", path.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["results"]["nilradical"]["dim"], 2);
}

#[test]
fn abelian_algebra_is_its_own_nilradical() {
    let path = write_spec("abelian.json", r#"{"algebra": {"dim": 2, "basis": ["u", "v"], "structure": []}}"#);
    let (code, report) = run(&["analyze", "--spec", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["results"]["nilradical"]["dim"], 2);
    for entry in report["results"]["ad_s"].as_array().unwrap() {
        for row in entry["matrix"].as_array().unwrap() {
            for z in row.as_array().unwrap() {
                assert_eq!(z[0].as_f64().unwrap(), 0.0);
                assert_eq!(z[1].as_f64().unwrap(), 0.0);
            }
        }
    }
}

#[test]
fn heisenberg_characters_vanish() {
    let path = write_spec(
        "heisenberg.json",
        r#"{"algebra": {"dim": 3, "basis": ["x", "y", "z"], "structure": [[0, 1, 2, 1.0, 0.0]]}}"#,
    );
    let (code, report) = run(&["hull", "--spec", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{report}");
    for ch in report["results"]["diagonal_characters"].as_array().unwrap() {
        assert!(ch["l_coordinates"].as_array().unwrap().iter().all(|k| k.as_i64() == Some(0)));
    }
}

#[test]
fn trivial_lattice_maps_to_identity() {
    let mut spec = sol_spec();
    let lattice = spec.lattice.as_mut().unwrap();
    lattice.generators.clear();
    lattice.relations.clear();
    lattice
        .generators
        .insert("e".into(), serde_json::from_str(r#"{"t": [0.0], "v": [[0.0, 0.0], [0.0, 0.0]]}"#).unwrap());
    let path = write_spec("sol_trivial_lattice.json", &spec.to_json());
    let (code, report) = run(&["monodromy", "--spec", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{report}");
    let image = &report["results"]["images"][0];
    assert_eq!(image["generator"], "e");
    assert!(image["distance_from_identity"].as_f64().unwrap() < 1e-15);
}
