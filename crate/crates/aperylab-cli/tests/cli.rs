//! End-to-end tests of the `aperylab` binary.

use std::process::{Command, Output};

fn aperylab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aperylab"))
        .args(args)
        .env_remove("APERYLAB_MAX_GENUS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn info_text_and_space_separated_generators() {
    let comma = aperylab(&["info", "2,3"]);
    assert!(comma.status.success());
    let text = stdout(&comma);
    assert!(text.contains("m = 2, e = 2, F = 1, g = 1"), "{text}");

    let spaced = aperylab(&["info", "2", "3"]);
    assert_eq!(stdout(&spaced), text);
}

#[test]
fn info_json_roundtrips_through_generators() {
    let first = aperylab(&["info", "5,6,9", "--format", "json"]);
    assert!(first.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    let gens: Vec<String> = parsed["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap().to_string())
        .collect();
    let second = aperylab(&["info", &gens.join(","), "--format", "json"]);
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(parsed["apery_set"], serde_json::json!([0, 6, 9, 12, 18]));
}

#[test]
fn malformed_generators_exit_64() {
    let bad = aperylab(&["info", "5,x"]);
    assert_eq!(bad.status.code(), Some(64));
    assert!(stderr(&bad).contains("not a positive integer"));

    let infinite = aperylab(&["info", "4,6"]);
    assert_eq!(infinite.status.code(), Some(64));
    assert!(stderr(&infinite).contains("infinite complement"));
}

#[test]
fn elasticity_table_shows_invariants() {
    let out = aperylab(&["elasticity", "5,6,9"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("3/2"), "{text}");
    assert!(text.contains("MAE = 11/10"), "{text}");
    assert!(text.contains("AHF = false"), "{text}");
}

#[test]
fn elasticity_single_element_and_decimal() {
    let out = aperylab(&["elasticity", "5,6,9", "18"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("lengths = {2, 3}"), "{text}");
    assert!(text.contains("elasticity = 3/2"), "{text}");

    let dec = aperylab(&["elasticity", "5,6,9", "18", "--decimal"]);
    assert!(stdout(&dec).contains("elasticity = 1.5"));

    let not_element = aperylab(&["elasticity", "5,6,9", "13"]);
    assert_eq!(not_element.status.code(), Some(1));
}

#[test]
fn poset_outputs() {
    let dot = aperylab(&["poset", "9,12,19", "--dot"]);
    assert!(dot.status.success());
    let text = stdout(&dot);
    assert_eq!(text.matches(" -> ").count(), 12);
    assert!(text.starts_with("digraph"));

    let json = aperylab(&["poset", "2,3", "--json", "--width", "--graded"]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(parsed["elements"], serde_json::json!([0, 3]));
    assert_eq!(parsed["covers"], serde_json::json!([[0, 3]]));
    assert_eq!(parsed["width"], serde_json::json!(1));
    assert_eq!(parsed["graded"], serde_json::json!(true));

    let text_mode = aperylab(&["poset", "5,6,9", "--width", "--graded"]);
    let text = stdout(&text_mode);
    assert!(text.contains("width = 2"), "{text}");
    assert!(text.contains("graded = false"), "{text}");
}

#[test]
fn family_verification_paths() {
    let ok = aperylab(&["family", "small-ahff", "n=2", "p=7", "--verify"]);
    assert!(ok.status.success());
    assert!(stdout(&ok).contains("verification: PASS"));

    let json = aperylab(&["family", "ahf-grid", "n=3", "--verify", "--format", "json"]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(parsed["passed"], serde_json::json!(true));
    assert_eq!(parsed["semigroup"]["generators"], serde_json::json!([9, 12, 19]));

    let degenerate = aperylab(&["family", "master", "a=2", "b=1", "p=7"]);
    assert_eq!(degenerate.status.code(), Some(64));
    assert!(stderr(&degenerate).contains("b >= 2"));

    let unknown = aperylab(&["family", "nope", "a=1"]);
    assert_eq!(unknown.status.code(), Some(64));

    let with_set = aperylab(&["family", "apery-choice", "m=5", "t=4", "--verify"]);
    assert!(with_set.status.success());
}

#[test]
fn census_csv_matches_known_small_table() {
    let out = aperylab(&["census", "--max-genus", "3"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "genus,multiplicity,count,ahf_count\n\
         0,1,1,1\n\
         1,2,1,1\n\
         2,2,1,1\n\
         2,3,1,1\n\
         3,2,1,1\n\
         3,3,2,2\n\
         3,4,1,1\n"
    );
}

#[test]
fn census_multiplicity_filter_and_json() {
    let out = aperylab(&[
        "census",
        "--max-genus",
        "4",
        "--multiplicity",
        "2",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // One multiplicity-2 semigroup per genus: <2, 2g+1>.
    for g in 1..=4 {
        assert_eq!(
            parsed["per_genus"][g],
            serde_json::json!({"g": g, "n": 1, "h": 1})
        );
    }
    assert_eq!(parsed["partial"], serde_json::json!(false));
}

#[test]
fn census_ratio_report() {
    let out = aperylab(&["census", "--max-genus", "3", "--ratios"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("kind,genus,multiplicity,count,ahf_count,ratio,decimal\n"));
    assert!(text.contains("genus,3,,4,4,1/1,1"), "{text}");
}

#[test]
fn census_env_cap_marks_partial_and_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_aperylab"))
        .args(["census", "--max-genus", "6", "--format", "json"])
        .env("APERYLAB_MAX_GENUS", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("partial"));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["partial"], serde_json::json!(true));
    assert_eq!(parsed["max_genus"], serde_json::json!(4));
    assert_eq!(parsed["requested_max_genus"], serde_json::json!(6));
}

#[test]
fn census_out_file() {
    let dir = std::env::temp_dir().join("aperylab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("census.csv");
    let out = aperylab(&["census", "--max-genus", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("genus,multiplicity,count,ahf_count\n"));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn verify_subcommand() {
    let ok = aperylab(&["verify", "--theorem", "1", "--sweep", "8"]);
    assert!(ok.status.success());
    assert!(stdout(&ok).contains("result: PASS"));

    let ten = aperylab(&["verify", "--theorem", "10", "--sweep", "5"]);
    assert!(ten.status.success());

    let unknown = aperylab(&["verify", "--theorem", "4"]);
    assert_eq!(unknown.status.code(), Some(64));
}

#[test]
fn unknown_flags_are_rejected() {
    let out = aperylab(&["info", "2,3", "--bogus"]);
    assert!(!out.status.success());
}
