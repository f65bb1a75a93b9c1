//! End-to-end tests of the compiled binary: exit codes, output contracts,
//! and the guarantee that JSON and text renderings carry the same values.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torus-class"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn norm_of_the_gaussian_field() {
    let out = run(&["norm", "--quadratic", "-1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("h_{T,S} = 1"), "{}", text);
    assert!(text.contains("Q(sqrt(-1))"));
}

#[test]
fn dual_with_nontrivial_class_number() {
    let out = run(&["dual", "--quadratic", "-47"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("h_{T',S} = 5"));
}

#[test]
fn s_primes_change_the_report() {
    let plain = run(&["norm", "--quadratic", "-1"]);
    let with_five = run(&["norm", "--quadratic", "-1", "--S", "5"]);
    assert!(with_five.status.success(), "{}", stderr(&with_five));
    assert!(stdout(&with_five).contains("local_degree[5]"));
    assert!(!stdout(&plain).contains("local_degree[5]"));
    // 5 splits in Q(i), so the torus class number is unchanged
    assert!(stdout(&with_five).contains("h_{T,S} = 1"));
}

#[test]
fn label_without_any_dataset_is_an_input_error() {
    let out = run(&["norm", "--label", "Q-zeta7-cubic", "--no-dataset"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("label requires --dataset"));
}

#[test]
fn unknown_label_is_an_input_error() {
    let out = run(&["norm", "--label", "no-such-entry"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no-such-entry"));
}

#[test]
fn bundled_labels_resolve_by_default() {
    let out = run(&["dual", "--label", "Q-sqrt2-sqrt3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("h_{T',S} = 1"));
}

#[test]
fn both_field_specs_at_once_are_rejected() {
    let out = run(&["norm", "--quadratic", "-1", "--label", "x"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("exactly one"));
}

#[test]
fn non_squarefree_d_is_an_input_error() {
    let out = run(&["norm", "--quadratic", "12"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cohomology_matches_the_known_orders() {
    let out = run(&["cohomology", "--group", "cyclic:2", "--module", "norm", "--degree", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "Z/2 (order 2)");

    let out = run(&["cohomology", "--group", "s3", "--module", "regular", "--degree", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "trivial (order 1)");

    let out = run(&["cohomology", "--group", "klein4", "--module", "dual", "--degree", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "Z/4 (order 4)");
}

#[test]
fn cohomology_rejects_out_of_band_degrees() {
    let out = run(&["cohomology", "--group", "cyclic:2", "--module", "norm", "--degree", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("degree"));
}

#[test]
fn permutation_group_spec_works() {
    let out = run(&["cohomology", "--group", "perm:1,2,0", "--module", "dual", "--degree", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "Z/3 (order 3)");
}

#[test]
fn json_and_text_reports_carry_the_same_terms() {
    for (cmd, field) in [("norm", "-5"), ("dual", "-5"), ("norm", "10"), ("dual", "-47")] {
        let text_out = run(&[cmd, "--quadratic", field]);
        let json_out = run(&[cmd, "--quadratic", field, "--json"]);
        assert!(text_out.status.success());
        assert!(json_out.status.success());
        let text = stdout(&text_out);
        let parsed: serde_json::Value = serde_json::from_str(&stdout(&json_out)).unwrap();

        // every term in the JSON map must appear with the same value in the
        // text table (integers render bare, rationals as num/den)
        let terms = parsed["terms"].as_object().unwrap();
        for (name, value) in terms {
            let num = value["num"].as_str().unwrap();
            let den = value["den"].as_str().unwrap();
            let rendered = if den == "1" {
                num.to_string()
            } else {
                format!("{}/{}", num, den)
            };
            let line = text
                .lines()
                .find(|l| l.trim_start().starts_with(name.as_str()))
                .unwrap_or_else(|| panic!("term {} missing from text:\n{}", name, text));
            assert!(
                line.split_whitespace().any(|tok| tok == rendered),
                "term {} = {} not in line '{}'",
                name,
                rendered,
                line
            );
        }

        // the final class number matches too
        let h = &parsed["h"];
        let h_rendered = if h["den"].as_str().unwrap() == "1" {
            h["num"].as_str().unwrap().to_string()
        } else {
            format!("{}/{}", h["num"].as_str().unwrap(), h["den"].as_str().unwrap())
        };
        let last = text.trim_end().lines().last().unwrap();
        assert!(
            last.ends_with(&format!("= {}", h_rendered)),
            "final line '{}' vs h = {}",
            last,
            h_rendered
        );
    }
}

#[test]
fn verify_passes_on_a_small_corpus() {
    let out = run(&["verify", "--disc-bound", "40"]);
    assert!(out.status.success(), "{}\n{}", stdout(&out), stderr(&out));
    let text = stdout(&out);
    for row in ["herbrand-identity", "cyclic-consistency", "global-H1", "local-term", "dataset"] {
        assert!(text.contains(row), "missing row {} in {}", row, text);
    }
    assert!(text.contains("all identities hold"));
}

#[test]
fn verify_json_mirrors_the_rows() {
    let out = run(&["verify", "--disc-bound", "40", "--json"]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["all_pass"], serde_json::json!(true));
    let rows = parsed["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["name"] == "herbrand-identity"));
    for row in rows {
        assert_eq!(row["pass"], row["total"], "row {:?}", row);
    }
}

#[test]
fn dataset_check_names_the_broken_entry() {
    let dir = std::env::temp_dir().join("torus-class-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    // knot 2 on a cyclic group is the planted defect
    let text = r#"{
  "schema_version": 1,
  "entries": [
    {
      "label": "user-bad",
      "base_field": "Q",
      "group": [[0, 1, 2], [1, 2, 0], [2, 0, 1]],
      "class_number_l": 1,
      "class_number_k": 1,
      "knot_number": 2,
      "unit_module": {
        "rank": 2,
        "torsion": [2],
        "generators": [
          { "element": 1, "matrix": [[0, -1, 0], [1, -1, 0], [0, 0, 1]] }
        ]
      },
      "places": [
        { "place": "infinity", "decomposition": [0], "inertia": [0] },
        { "place": 7, "decomposition": [0, 1, 2], "inertia": [0, 1, 2] }
      ]
    }
  ]
}"#;
    std::fs::write(&path, text).unwrap();
    let out = run(&["dataset-check", "--dataset", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let printed = stdout(&out);
    assert!(printed.contains("user-bad"), "{}", printed);
    assert!(printed.contains("knot"), "{}", printed);
}

#[test]
fn dataset_flag_layers_over_the_bundle() {
    let dir = std::env::temp_dir().join("torus-class-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("extra.json");
    let text = r#"{
  "schema_version": 1,
  "entries": [
    {
      "label": "user-cubic",
      "base_field": "Q",
      "group": [[0, 1, 2], [1, 2, 0], [2, 0, 1]],
      "class_number_l": 1,
      "class_number_k": 1,
      "unit_module": {
        "rank": 2,
        "torsion": [2],
        "generators": [
          { "element": 1, "matrix": [[0, -1, 0], [1, -1, 0], [0, 0, 1]] }
        ]
      },
      "places": [
        { "place": "infinity", "decomposition": [0], "inertia": [0] },
        { "place": 7, "decomposition": [0, 1, 2], "inertia": [0, 1, 2] }
      ]
    }
  ]
}"#;
    std::fs::write(&path, text).unwrap();
    let path = path.to_str().unwrap();

    // the new label resolves while bundled ones stay visible
    let out = run(&["norm", "--label", "user-cubic", "--dataset", path]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("h_{T,S} = 1"));
    let out = run(&["norm", "--label", "Q-zeta7-cubic", "--dataset", path]);
    assert!(out.status.success(), "{}", stderr(&out));

    // --no-dataset drops the bundle but keeps the user file
    let out = run(&["norm", "--label", "user-cubic", "--dataset", path, "--no-dataset"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let out = run(&["norm", "--label", "Q-zeta7-cubic", "--dataset", path, "--no-dataset"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn colliding_user_label_is_an_input_error() {
    let dir = std::env::temp_dir().join("torus-class-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("collide.json");
    let text = r#"{
  "schema_version": 1,
  "entries": [
    {
      "label": "Q-zeta7-cubic",
      "base_field": "Q",
      "group": [[0, 1, 2], [1, 2, 0], [2, 0, 1]],
      "class_number_l": 1,
      "class_number_k": 1,
      "unit_module": {
        "rank": 2,
        "torsion": [2],
        "generators": [
          { "element": 1, "matrix": [[0, -1, 0], [1, -1, 0], [0, 0, 1]] }
        ]
      },
      "places": [
        { "place": "infinity", "decomposition": [0], "inertia": [0] },
        { "place": 7, "decomposition": [0, 1, 2], "inertia": [0, 1, 2] }
      ]
    }
  ]
}"#;
    std::fs::write(&path, text).unwrap();
    let out = run(&["norm", "--label", "Q-zeta7-cubic", "--dataset", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("already present"), "{}", stderr(&out));
}

#[test]
fn missing_dataset_file_is_an_input_error() {
    let out = run(&["norm", "--label", "x", "--dataset", "/no/such/file.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cannot read"));
}
