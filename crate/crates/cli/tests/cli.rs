use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gk_cli::literal::clifford_json;
use gk_core::coeff::Scalar;
use gk_core::multivector::CliffordElement;
use serde_json::Value;

fn scenes() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenes")
}

fn tmp(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("gk-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn gk(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gk"));
    cmd.args(args).env_remove("GK_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

/// Runs `command` on a scene file and returns the exit code and parsed report.
fn run_file(
    command: &str,
    scene: &Path,
    extra: &[&str],
    out_name: &str,
) -> (i32, Option<Value>, String) {
    let out = tmp(out_name);
    let _ = std::fs::remove_file(&out);
    let mut args = vec![
        command,
        "--scene",
        scene.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let o = gk(&args, &[]);
    let report = std::fs::read_to_string(&out)
        .ok()
        .map(|s| serde_json::from_str(&s).unwrap());
    (
        o.status.code().unwrap(),
        report,
        String::from_utf8_lossy(&o.stderr).into_owned(),
    )
}

fn run_inline(
    command: &str,
    scene: &str,
    extra: &[&str],
    name: &str,
) -> (i32, Option<Value>, String) {
    let path = tmp(&format!("{name}.scene.json"));
    std::fs::write(&path, scene).unwrap();
    run_file(command, &path, extra, &format!("{name}.report.json"))
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn malformed_json_is_a_parse_error() {
    let (code, report, err) = run_inline("deform", "{ \"model\": ", &[], "malformed");
    assert_eq!(code, 2);
    assert!(report.is_none());
    assert!(err.contains("parse error"), "{err}");
}

#[test]
fn unknown_field_names_its_path() {
    let scene = r#"{ "model": { "torus": { "m": 2, "mode_cap": 2 } }, "deformation": { "bfield": [ { "word": "dx1^dx2", "coef": "1" } ] } }"#;
    let (code, _, err) = run_inline("deform", scene, &[], "unknown-field");
    assert_eq!(code, 2);
    assert!(err.contains("deformation.bfield[0]"), "{err}");
}

#[test]
fn unknown_generator_is_a_parse_error() {
    let scene = r#"{ "model": { "torus": { "m": 2, "mode_cap": 2 } }, "deformation": { "bfield": [ { "word": "dy1^dx2", "coeff": "1" } ] } }"#;
    let (code, _, err) = run_inline("deform", scene, &[], "unknown-generator");
    assert_eq!(code, 2);
    assert!(err.contains("dy1"), "{err}");
}

#[test]
fn missing_scene_file_is_a_parse_error() {
    let (code, _, _) = run_file("deform", &tmp("does-not-exist.json"), &[], "missing");
    assert_eq!(code, 2);
}

#[test]
fn minimal_symplectic_torus_runs() {
    let (code, report, err) = run_file("deform", &scenes().join("t2-symplectic.json"), &[], "t2");
    assert_eq!(code, 0, "{err}");
    assert_eq!(report.unwrap()["passed"], true);
}

#[test]
fn non_closed_omega_is_a_validation_error() {
    let scene = r#"{
      "model": { "torus": { "m": 4, "mode_cap": 2 } },
      "structure": { "symplectic": { "omega": [
        { "word": "dx1^dx2", "coeff": { "terms": [ { "key": [0, 0, 1, 0], "re": "1" } ] } },
        { "word": "dx3^dx4", "coeff": "1" }
      ] } }
    }"#;
    let (code, _, err) = run_inline("deform", scene, &[], "omega-not-closed");
    assert_eq!(code, 3);
    assert!(err.contains("ω not closed"), "{err}");
}

#[test]
fn degenerate_omega_is_a_validation_error() {
    let scene = r#"{ "model": { "torus": { "m": 4, "mode_cap": 2 } },
      "structure": { "symplectic": { "omega": [ { "word": "dx1^dx2", "coeff": "1" } ] } } }"#;
    let (code, _, err) = run_inline("deform", scene, &[], "omega-degenerate");
    assert_eq!(code, 3);
    assert!(err.contains("degenerate"), "{err}");
}

#[test]
fn mode_budget_is_enforced() {
    let scene = scenes().join("mode-one-bfield.json");
    let (code, _, err) = run_file("deform", &scene, &["--mode-cap", "2"], "budget");
    assert_eq!(code, 3);
    assert!(err.contains("mode_cap 2"), "{err}");
}

#[test]
fn non_maurer_cartan_deformation_is_rejected() {
    let scene = r#"{ "model": { "torus": { "m": 4, "mode_cap": 4 } },
      "deformation": { "beta": [ { "j": 1, "k": 2, "coeff": { "terms": [ { "key": [1, 0, 0, 0], "re": "1" } ] } } ] } }"#;
    let (code, _, err) = run_inline("deform", scene, &[], "not-mc");
    assert_eq!(code, 3);
    assert!(err.contains("Maurer-Cartan"), "{err}");
}

#[test]
fn deformation_outside_lbar_is_rejected() {
    let scene = r#"{ "model": { "torus": { "m": 4, "mode_cap": 4 } },
      "deformation": { "epsilon_series": [ [ { "word": "d1*d2", "coeff": "1" } ] ] } }"#;
    let (code, _, err) = run_inline("deform", scene, &[], "not-lbar");
    assert_eq!(code, 3);
    assert!(err.contains("order 1"), "{err}");
}

#[test]
fn wrong_model_for_command_is_a_validation_error() {
    let (code, _, _) = run_file(
        "typemap",
        &scenes().join("trivial-torus.json"),
        &[],
        "typemap-torus",
    );
    assert_eq!(code, 3);
}

#[test]
fn trivial_deformation_has_zero_residuals() {
    let (code, report, err) = run_file(
        "deform",
        &scenes().join("trivial-torus.json"),
        &[],
        "trivial",
    );
    assert_eq!(code, 0, "{err}");
    let r = report.unwrap();
    assert_eq!(r["passed"], true);
    for key in ["closedness_residual_l1", "obstruction_l1"] {
        for v in r["payload"][key].as_array().unwrap() {
            assert_eq!(v, "0");
        }
    }
    for b in r["payload"]["b"].as_array().unwrap() {
        assert!(b.as_array().unwrap().is_empty());
    }
    for c in r["checks"].as_array().unwrap() {
        assert!(c["provenance"].is_string());
    }
    assert_eq!(r["tool"], "gk");
    assert_eq!(r["scene_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn mode_one_deformation_certifies() {
    let (code, report, err) = run_file(
        "deform",
        &scenes().join("mode-one-bfield.json"),
        &[],
        "mode-one",
    );
    assert_eq!(code, 0, "{err}");
    let r = report.unwrap();
    assert_eq!(check(&r, "closed")["passed"], true);
    assert_eq!(
        check(&r, "no-cbh-expansion")["provenance"],
        "independent-oracle"
    );
    assert_eq!(check(&r, "majorant")["provenance"], "surrogate-norm");
    assert_eq!(r["payload"]["hodge"]["h1_dimension"], 4);
}

#[test]
fn failed_check_exits_five_and_still_reports() {
    let scene = std::fs::read_to_string(scenes().join("mode-one-bfield.json"))
        .unwrap()
        .replace("1/1000", "1/10")
        .replace("1/2000", "1/20");
    let (code, report, _) = run_inline("deform", &scene, &[], "large-amplitude");
    assert_eq!(code, 5);
    let r = report.unwrap();
    assert_eq!(r["passed"], false);
    assert_eq!(check(&r, "closed")["passed"], true);
    assert_eq!(check(&r, "majorant")["passed"], false);
}

#[test]
fn harmonic_shift_changes_the_order_one_class() {
    let base = std::fs::read_to_string(scenes().join("trivial-torus.json")).unwrap();
    let with_s = base.replace(
        "\"order\": 3",
        "\"order\": 1, \"s\": [ { \"re\": \"1/1000\" }, { \"re\": \"0\" }, { \"re\": \"0\" }, { \"re\": \"0\" } ]",
    );
    let (code, report, err) = run_inline("deform", &with_s, &[], "harmonic-shift");
    assert_eq!(code, 0, "{err}");
    let classes = &report.unwrap()["payload"]["de_rham_classes"];
    assert!(!classes[1]["degrees"].as_object().unwrap().is_empty());
    let short = base.replace("\"order\": 3", "\"order\": 1, \"s\": [ { \"re\": \"1\" } ]");
    let (code, _, err) = run_inline("deform", &short, &[], "harmonic-short");
    assert_eq!(code, 3);
    assert!(err.contains("H¹ has dimension 4"), "{err}");
}

#[test]
fn typemap_on_the_cubic_finds_types_zero_and_two() {
    let (code, report, err) = run_file("typemap", &scenes().join("cp2-cubic.json"), &[], "typemap");
    assert_eq!(code, 0, "{err}");
    let r = report.unwrap();
    assert_eq!(r["payload"]["types"], serde_json::json!([0, 2]));
    assert_eq!(r["payload"]["points"], 256);
    assert_eq!(
        check(&r, "type-equals-n-minus-rank")["detail"]["mismatches"],
        0
    );
}

#[test]
fn typemap_is_independent_of_thread_count() {
    let scene = scenes().join("cp2-cubic.json");
    let run = |threads: &str, name: &str| {
        let out = tmp(name);
        let o = gk(
            &[
                "typemap",
                "--scene",
                scene.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
            ],
            &[("GK_THREADS", threads)],
        );
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(out).unwrap()
    };
    assert_eq!(run("1", "threads-1.json"), run("3", "threads-3.json"));
}

#[test]
fn bad_thread_count_is_a_parse_error() {
    let scene = scenes().join("majorant.json");
    let o = gk(
        &["majorant", "--scene", scene.to_str().unwrap()],
        &[("GK_THREADS", "zero")],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cbh_order_two_entry_is_half_the_bracket() {
    let (code, report, err) = run_file(
        "cbh",
        &scenes().join("cbh-pair.json"),
        &["--order", "3"],
        "cbh",
    );
    assert_eq!(code, 0, "{err}");
    let r = report.unwrap();
    let table = r["payload"]["table"].as_array().unwrap();
    assert_eq!(table.len(), 3);
    assert_eq!(table[1]["order"], 2);
    assert_eq!(table[1]["z"], r["payload"]["half_bracket_a1_b1"]);
    let a1 = CliffordElement::<Scalar>::vector(2, 0, 0);
    let b1 = CliffordElement::<Scalar>::covector(2, 0, 0).add(
        &CliffordElement::vector(2, 0, 0)
            .mul(&CliffordElement::covector(2, 0, 1))
            .scale(&Scalar::imag(gk_core::coeff::q(1, 2))),
    );
    let expected = a1.mul(&b1).sub(&b1.mul(&a1)).scale(&Scalar::ratio(1, 2));
    assert_eq!(table[1]["z"], clifford_json(&expected));
    assert!(!expected.is_zero());
}

#[test]
fn order_flag_truncates_the_table() {
    let (code, report, _) = run_file(
        "cbh",
        &scenes().join("trivial-torus.json"),
        &["--order", "2"],
        "cbh-order",
    );
    assert_eq!(code, 0);
    let r = report.unwrap();
    assert_eq!(r["order"], 2);
    assert_eq!(r["payload"]["source"], "seeded");
    assert_eq!(r["payload"]["table"].as_array().unwrap().len(), 2);
}

#[test]
fn reports_are_byte_identical_and_seed_dependent() {
    let scene = scenes().join("trivial-torus.json");
    let s = scene.to_str().unwrap();
    let run = |seed: &str| {
        let o = gk(&["cbh", "--scene", s, "--seed", seed], &[]);
        assert_eq!(o.status.code(), Some(0));
        o.stdout
    };
    assert_eq!(run("11"), run("11"));
    assert_ne!(run("11"), run("12"));
    let deform = || gk(&["deform", "--scene", s], &[]).stdout;
    assert_eq!(deform(), deform());
}

#[test]
fn majorant_certificate_passes_and_lists_coefficients() {
    let (code, report, err) =
        run_file("majorant", &scenes().join("majorant.json"), &[], "majorant");
    assert_eq!(code, 0, "{err}");
    let r = report.unwrap();
    let coeffs = r["payload"]["coefficients"].as_array().unwrap();
    assert_eq!(coeffs[0], "1/16");
    assert_eq!(coeffs[1], "1/16");
    assert_eq!(r["payload"]["parameters"]["nu_max"], 200);
}

#[test]
fn nonpositive_majorant_constant_is_rejected() {
    let scene = r#"{ "model": { "torus": { "m": 2, "mode_cap": 2 } }, "majorant": { "c": "-1" } }"#;
    let (code, _, _) = run_inline("majorant", scene, &[], "majorant-negative");
    assert_eq!(code, 3);
}
