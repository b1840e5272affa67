use assert_cmd::Command;
use serde_json::Value;

fn bin() -> Command {
    Command::cargo_bin("hilbworst").unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let out = bin().args(args).assert().success().get_output().stdout.clone();
    serde_json::from_slice(&out).unwrap()
}

#[test]
fn gens_json_has_schema_and_generators() {
    let v = json_of(&["gens", "--n", "3", "--json", "--labels"]);
    assert_eq!(v["schema"], "hilbworst/1");
    assert_eq!(v["command"], "gens");
    assert_eq!(v["n"], 3);
    let gens = v["generators"].as_array().unwrap();
    assert!(!gens.is_empty());
    assert_eq!(gens.len(), v["labels"].as_array().unwrap().len());
}

#[test]
fn cas_format_renames_variables() {
    let out = bin().args(["family", "--n", "3", "--format", "cas"]).assert().success().get_output().stdout.clone();
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("x_1"));
    assert!(text.contains("t_1_1_1"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn verify_passes_at_three() {
    let out = bin().args(["verify", "--n", "3", "--samples", "9"]).assert().code(0).get_output().stdout.clone();
    let text = String::from_utf8(out).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
    assert!(text.contains("closedness"));
}

#[test]
fn verify_json_reports_passed() {
    let v = json_of(&["verify", "--n", "3", "--route", "based", "--json"]);
    assert_eq!(v["passed"], true);
    assert!(v["summary"].as_array().unwrap().iter().any(|c| c["check"] == "pi_in_J"));
}

#[test]
fn subspaces_at_sixteen() {
    let v = json_of(&["subspaces", "--n", "16", "--json"]);
    assert_eq!(v["dim"], 275);
    assert_eq!(v["smoothing_dim"], 272);
    assert_eq!(v["exceeds_smoothing"], true);
    assert_eq!(v["formula_matches"], true);
}

#[test]
fn subspaces_check_lists_contained_pairs() {
    let v = json_of(&["subspaces", "--n", "5", "--check", "--limit", "3", "--json"]);
    assert_eq!(v["contained"], serde_json::json!([true, true, true]));
}

#[test]
fn usage_errors_exit_two() {
    bin().args(["gens", "--n", "2"]).assert().code(2);
    bin().args(["gens", "--n", "3", "--bogus"]).assert().code(2);
    bin().args(["table"]).assert().code(2);
    bin().args(["table", "--input", "-"]).write_stdin("not json").assert().code(2);
    bin().args(["table", "--input", "-"]).write_stdin(r#"{"n": 3, "t": [[1, 2, 9, "1"]]}"#).assert().code(2);
}

#[test]
fn non_associative_table_exits_one() {
    let input = r#"{"n": 3, "t": [[1, 1, 2, "1"], [2, 2, 3, "1"]]}"#;
    let out =
        bin().args(["table", "--input", "-", "--json"]).write_stdin(input).assert().code(1).get_output().stdout.clone();
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["associative"], false);
    assert!(!v["nonzero_residuals"].as_array().unwrap().is_empty());
}

#[test]
fn base_point_table_is_associative() {
    let out = bin().args(["table", "--n", "3"]).assert().code(0).get_output().stdout.clone();
    assert!(String::from_utf8(out).unwrap().contains("associative: true"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["verify", "--n", "3", "--route", "oracle", "--seed", "7", "--samples", "12", "--json"][..],
        &["export", "--n", "3", "--json"][..],
        &["gens", "--n", "4", "--flavor", "miniversal", "--labels"][..],
    ] {
        let a = bin().args(args).assert().success().get_output().stdout.clone();
        let b = bin().args(args).assert().success().get_output().stdout.clone();
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("hilbworst-export-{}.json", std::process::id()));
    bin().args(["export", "--n", "3", "--json", "--out"]).arg(&path).assert().success().stdout("");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["command"], "export");
    assert_eq!(v["tangent"]["hom_dim"], 18);
}
