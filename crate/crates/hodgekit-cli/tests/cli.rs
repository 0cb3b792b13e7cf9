//! End-to-end runs of the binary against the shipped fixtures.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    root.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hodgekit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn validate_kummer() {
    let out = run(&["validate", &fixture("kummer_i.json")]);
    let v = stdout_json(&out);
    assert_eq!(v["valid"], serde_json::json!(true));
    let out = run(&["validate", &fixture("kummer_i.json"), "--thorough"]);
    assert_eq!(stdout_json(&out)["valid"], serde_json::json!(true));
}

#[test]
fn bigrade_lists_the_two_pieces() {
    let out = run(&["bigrade", &fixture("kummer_i.json")]);
    let v = stdout_json(&out);
    let pieces = v["pieces"].as_object().unwrap();
    assert!(pieces.contains_key("0,0"));
    assert!(pieces.contains_key("-1,-1"));
}

#[test]
fn delta_of_kummer_2_3i() {
    // delta(K(2+3i)) = 3 E in the standard basis.
    let out = run(&["delta", &fixture("kummer_2_3i.json")]);
    let v = stdout_json(&out);
    assert_eq!(v["delta"][1][0], serde_json::json!("3/1"));
    assert_eq!(v["delta"][0][0], serde_json::json!("0/1"));
}

#[test]
fn admissibility_verdicts() {
    let out = run(&["admissible", &fixture("tate_orbit_model.json")]);
    let v = stdout_json(&out);
    assert_eq!(
        (v["cond1"].as_bool(), v["cond2"].as_bool()),
        (Some(true), Some(true))
    );

    let out = run(&["admissible", &fixture("exp_family_model.json")]);
    let v = stdout_json(&out);
    assert_eq!(
        (v["cond1"].as_bool(), v["cond2"].as_bool()),
        (Some(true), Some(false))
    );

    let out = run(&["admissible", &fixture("weight_counterexample_model.json")]);
    let v = stdout_json(&out);
    assert_eq!(v["cond1"], serde_json::json!(false));
}

#[test]
fn probe_reports_divergence_only_for_the_exp_family() {
    let args = ["--strip", "0,1,1", "--grid", "6,4", "--retraction", "delta"];
    let out = run(&[&["probe", &fixture("kummer_model.json")], &args[..]].concat());
    let v = stdout_json(&out);
    assert_eq!(v["divergent"], serde_json::json!(false));
    let out = run(&[&["probe", &fixture("exp_family_model.json")], &args[..]].concat());
    let v = stdout_json(&out);
    assert_eq!(v["divergent"], serde_json::json!(true));
}

#[test]
fn reduce_subcommands() {
    let out = run(&["reduce", "sl2", "--point", "3+2*i"]);
    let v = stdout_json(&out);
    assert_eq!(v["point"], serde_json::json!("0/1+2/1*i"));
    let out = run(&[
        "reduce",
        "unipotent",
        "--coord",
        "5/2,-3",
        "--lattice",
        "1,0;0,2",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["gamma"], serde_json::json!(["2", "-2"]));
    assert_eq!(v["reduced"], serde_json::json!(["1/2", "1/1"]));
}

#[test]
fn identify_and_compare() {
    let out = run(&[
        "identify",
        &fixture("strip_width_6_5.json"),
        "--p1",
        "1/10",
        "--p2",
        "11/10",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["related"], serde_json::json!(true));

    let out = run(&[
        "compare-structures",
        &fixture("strip_width_6_5.json"),
        &fixture("strip_width_5_2.json"),
    ]);
    assert_eq!(stdout_json(&out)["same"], serde_json::json!(true));
    let out = run(&[
        "compare-structures",
        &fixture("strip_width_6_5.json"),
        &fixture("strip_sloped.json"),
    ]);
    assert_eq!(stdout_json(&out)["same"], serde_json::json!(false));
}

#[test]
fn hodge_counts_on_the_square_lattice() {
    let out = run(&["hodge", &fixture("q0_square.json"), "--d", "1"]);
    let v = stdout_json(&out);
    assert_eq!(v["classes"].as_array().unwrap().len(), 4);
    let out = run(&["hodge", &fixture("q0_square.json"), "--d", "2"]);
    let v = stdout_json(&out);
    assert_eq!(v["classes"].as_array().unwrap().len(), 8);
}

#[test]
fn membership_and_limit_and_relwt() {
    let out = run(&[
        "membership",
        &fixture("kummer_domain.json"),
        &fixture("kummer_point_half.json"),
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["in_m"], serde_json::json!(true));
    assert_eq!(v["in_m_r"], serde_json::json!(true));
    let out = run(&[
        "membership",
        &fixture("kummer_domain.json"),
        &fixture("kummer_point_i.json"),
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["in_m"], serde_json::json!(true));
    assert_eq!(v["in_m_r"], serde_json::json!(false));

    let out = run(&["relwt", &fixture("kummer_relwt.json")]);
    let v = stdout_json(&out);
    assert_eq!(v["exists"], serde_json::json!(true));

    let out = run(&["limit", &fixture("tate_orbit_limit.json")]);
    let v = stdout_json(&out);
    assert_eq!(v["valid"], serde_json::json!(true));
}

#[test]
fn schema_checks_and_exit_codes() {
    let out = run(&["schema-check", &fixture("kummer_i.json"), "--schema", "mhs"]);
    assert!(out.status.success());

    // A malformed scalar is an input error: exit code 1, path in message.
    let dir = std::env::temp_dir().join("hodgekit-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        std::fs::read_to_string(fixture("kummer_i.json"))
            .unwrap()
            .replace("1/1\", \"0/1+1/1*i", "1/0\", \"0/1+1/1*i"),
    )
    .unwrap();
    let out = run(&["schema-check", bad.to_str().unwrap(), "--schema", "mhs"]);
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("hodge.0[0][0]"), "{msg}");
}

#[test]
fn exact_verbs_are_byte_stable() {
    for _ in 0..2 {
        let a = run(&["bigrade", &fixture("kummer_2_3i.json")]);
        let b = run(&["bigrade", &fixture("kummer_2_3i.json")]);
        assert_eq!(a.stdout, b.stdout);
    }
    let a = run(&[
        "retract",
        &fixture("kummer_2_3i.json"),
        "--retraction",
        "sl2",
    ]);
    let b = run(&[
        "retract",
        &fixture("kummer_2_3i.json"),
        "--retraction",
        "sl2",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn retract_grading_carries_re_z() {
    let out = run(&[
        "retract",
        &fixture("kummer_2_3i.json"),
        "--retraction",
        "delta",
    ]);
    let v = stdout_json(&out);
    // T = T0 + 2 Re(z) E: the (1,0) entry is 2*2 = 4.
    assert_eq!(v["grading"][1][0], serde_json::json!("4/1"));
}

#[test]
fn schema_check_flags_missing_polarization() {
    // A nonzero graded piece without a matching polarization form.
    let dir = std::env::temp_dir().join("hodgekit-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("missing_pol.json");
    std::fs::write(
        &path,
        std::fs::read_to_string(fixture("kummer_i.json"))
            .unwrap()
            .replace("\"-2\": [[\"1/1\"]],", ""),
    )
    .unwrap();
    let out = run(&["schema-check", path.to_str().unwrap(), "--schema", "mhs"]);
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("polarizations.-2"), "{msg}");
}

#[test]
fn limit_report_reparses_as_mhs() {
    let out = run(&["limit", &fixture("tate_orbit_limit.json")]);
    let v = stdout_json(&out);
    assert_eq!(v["valid"], serde_json::json!(true));
    let mhs_text = serde_json::to_string(&v["mhs"]).unwrap();
    let reparsed: hodgekit::io::MhsFile = serde_json::from_str(&mhs_text).unwrap();
    let back = reparsed.to_mhs().unwrap();
    assert_eq!(back.rank(), 2);
}
