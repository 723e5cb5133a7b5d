use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use localgpd_cli::instances;
use localgpd_cli::schema::{parse, to_pretty};
use serde_json::Value;

fn instance(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_localgpd")).args(args).env_remove("LOCALGPD_SEED").output().expect("binary runs")
}

fn on(command: &str, file: &str) -> (i32, Value) {
    let path = instance(file);
    let out = run(&[command, "--input", path.to_str().unwrap()]);
    (out.status.code().unwrap(), serde_json::from_slice(&out.stdout).expect("json report"))
}

fn verdict(report: &Value, name: &str) -> Option<bool> {
    report["verdicts"].as_array()?.iter().find(|v| v["name"] == name).and_then(|v| v["pass"].as_bool())
}

#[test]
fn shipped_instances_are_the_generated_ones() {
    for (name, file) in instances::all() {
        let on_disk = std::fs::read_to_string(instance(name)).unwrap_or_else(|_| panic!("{name} missing"));
        assert_eq!(on_disk, to_pretty(&file), "{name} is stale; rerun the write_instances example");
        assert_eq!(parse(on_disk.as_bytes()).unwrap(), file);
    }
}

#[test]
fn verdicts_on_shipped_instances() {
    let (code, r) = on("check-sheaf", "e_noglue.json");
    assert_eq!((code, verdict(&r, "F1"), verdict(&r, "F2")), (1, Some(true), Some(false)));

    let (code, r) = on("check-sheaf", "sierpinski_functions.json");
    assert_eq!(code, 0);
    assert_eq!(verdict(&r, "F2"), Some(true));

    let (code, r) = on("glob", "two_full_charts.json");
    assert_eq!((code, r["data"]["arrow_count"].as_u64()), (0, Some(9)));

    let (code, r) = on("foliate", "vee_leaves.json");
    assert_eq!((code, verdict(&r, "leaves_are_glob_components")), (1, Some(false)));

    let (code, r) = on("coherence", "noncoherent_four.json");
    assert_eq!((code, verdict(&r, "coherent"), verdict(&r, "globally_coherent")), (1, Some(true), Some(false)));

    let (code, r) = on("holonomy", "diagonal_line.json");
    assert_eq!((code, r["data"]["phi_bijective"].as_bool()), (0, Some(true)));

    let (code, r) = on("locally-top", "sierpinski_pair.json");
    assert_eq!((code, verdict(&r, "G4")), (1, Some(false)));

    let (code, r) = on("transport", "isotropy_z2.json");
    assert_eq!((code, r["data"]["transport_count"].as_u64()), (1, Some(2)));

    let (code, r) = on("transport", "indiscrete_action.json");
    assert_eq!((code, verdict(&r, "lift_round_trip")), (0, Some(true)));

    let (code, r) = on("action-check", "indiscrete_swap.json");
    assert_eq!((code, verdict(&r, "action_laws"), verdict(&r, "continuous")), (1, Some(true), Some(false)));

    let (code, r) = on("adjunction", "discrete_pair.json");
    assert_eq!(code, 0);
    assert_eq!(r["data"]["strict_counit"].as_array().map(Vec::len), Some(1));
}

#[test]
fn reports_carry_the_input_digest() {
    let (_, r) = on("check-space", "e_noglue.json");
    let digest = r["instance_digest"].as_str().unwrap();
    assert!(digest.starts_with("sha256:") && digest.len() == 7 + 64);
    assert_eq!(r["command"], "check-space");
}

fn error_kind(out: &Output) -> (i32, String) {
    let v: Value = serde_json::from_slice(&out.stdout).expect("json error");
    (out.status.code().unwrap(), v["error"]["kind"].as_str().unwrap().to_string())
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let syntax = write(dir.path(), "syntax.json", "{\"version\": 1,\n  \"space\": [");
    assert_eq!(error_kind(&run(&["check-space", "--input", syntax.to_str().unwrap()])), (2, "ParseError".into()));

    let unknown = write(dir.path(), "unknown.json", r#"{"version":1,"space":{"points":["a"],"opens":[[],["a"]]},"extra":0}"#);
    assert_eq!(error_kind(&run(&["check-space", "--input", unknown.to_str().unwrap()])), (2, "SchemaError".into()));

    let missing_union = write(dir.path(), "nounion.json", r#"{"version":1,"space":{"points":["a","b","c"],"opens":[[],["a"],["b"],["a","b","c"]]}}"#);
    let out = run(&["check-space", "--input", missing_union.to_str().unwrap()]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((out.status.code(), verdict(&report, "topology")), (Some(1), Some(false)));
    assert_eq!(error_kind(&run(&["check-sheaf", "--input", missing_union.to_str().unwrap()])).0, 2);

    let needs_groupoid = instance("e_noglue.json");
    assert_eq!(error_kind(&run(&["glob", "--input", needs_groupoid.to_str().unwrap()])), (2, "SchemaError".into()));

    let capped = instance("noncoherent_four.json");
    let out = run(&["adjunction", "--input", capped.to_str().unwrap(), "--max-points", "3"]);
    assert_eq!(error_kind(&out), (2, "ResourceCap".into()));
}

#[test]
fn emitted_sheafification_is_a_sheaf() {
    let dir = tempfile::tempdir().unwrap();
    let emitted = dir.path().join("sheaf.json");
    let input = instance("e_noglue.json");
    let out = run(&["sheafify", "--input", input.to_str().unwrap(), "--emit", emitted.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let again = run(&["check-sheaf", "--input", emitted.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0));
}

#[test]
fn tampered_holonomy_table_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let emitted = dir.path().join("hol.json");
    let input = instance("diagonal_line.json");
    run(&["holonomy", "--input", input.to_str().unwrap(), "--emit", emitted.to_str().unwrap()]);
    let mut file: Value = serde_json::from_slice(&std::fs::read(&emitted).unwrap()).unwrap();
    assert_eq!(run(&["holonomy", "--input", emitted.to_str().unwrap()]).status.code(), Some(0));
    file["holonomy"][0]["phi_image"] = "(2,2)".into();
    std::fs::write(&emitted, serde_json::to_vec(&file).unwrap()).unwrap();
    assert_eq!(error_kind(&run(&["holonomy", "--input", emitted.to_str().unwrap()])), (2, "SchemaError".into()));
}

#[test]
fn bench_without_emit_target() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["bench", "--max-points", "1", "--emit", dir.path().join("x.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seeded_sampling_is_reproducible() {
    let sample = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_localgpd"))
            .args(["bench", "--max-points", "3", "--max-instances", "3", "--max-charts", "2"])
            .env("LOCALGPD_SEED", seed)
            .output()
            .unwrap();
        let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
        v["timing"] = Value::Null;
        v
    };
    let a = sample("7");
    assert_eq!(a, sample("7"));
    assert_eq!(a["data"]["spaces"]["swept"], 3);
    assert_eq!(a["data"]["spaces"]["seed"], 7);
}

#[test]
fn text_format_lists_verdicts() {
    let input = instance("e_noglue.json");
    let out = run(&["check-sheaf", "--input", input.to_str().unwrap(), "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS  F1"));
    assert!(text.contains("FAIL  F2"));
}
