//! End-to-end checks of the command-line surface: frozen table rows, the
//! JSON envelope, file output, and exit codes.

use std::process::{Command, Output};

fn dw1(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dw1"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Data rows of a table report: everything below the two `#` header lines
/// and the column header.
fn table_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip_while(|l| l.starts_with('#'))
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect()
}

#[test]
fn examples_table_lists_all_bundled_instances() {
    let out = dw1(&["examples", "--paper", "section5", "--tol", "1e-8"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    for name in ["example1", "example2", "example3", "example4"] {
        assert!(text.contains(name), "missing row for {name}:\n{text}");
    }
    // Frozen verdicts: the finite target has no certificate but a strong
    // unicity rate; the three infinite ones are certified non-Chebyshev and
    // only the oscillating one loses the continuous selection.
    assert!(text.contains("none (search exhausted)"));
    assert!(text.contains("strong unicity rate 1331/91035"));
    assert!(text.contains("non-chebyshev"));
    assert!(text.contains("yes (monotone from 2)"));
    assert!(text.contains("no (oscillation at [2, 3, 4, 5, 6, 7, 8, 9])"));
}

#[test]
fn project_reports_the_frozen_interval() {
    let out = dw1(&["project"]);
    assert!(out.status.success());
    let rows = table_rows(&stdout(&out));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0], ["-1/2", "2/3", "7/2", "no"]);
}

#[test]
fn project_json_envelope_carries_tool_metadata() {
    let out = dw1(&["project", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(v["tool"]["name"], "dw1");
    assert_eq!(v["tool"]["version"], env!("CARGO_PKG_VERSION"));
    let hash = v["tool"]["config_hash"].as_str().expect("hash present");
    assert_eq!(hash.len(), 16);
    assert!(hash.chars().all(|c| c.is_ascii_hexdigit()));
    assert_eq!(v["report"]["lo"], "-1/2");
    assert_eq!(v["report"]["hi"], "2/3");
    assert_eq!(v["report"]["dist"], "7/2");
    assert_eq!(v["report"]["route"], "exact");
    assert_eq!(v["report"]["singleton"], false);
}

#[test]
fn project_accepts_fractional_input_and_reports_singletons() {
    let out = dw1(&["project", "--x", "2,-1,1", "--y", "1,-7919/11213"]);
    assert!(out.status.success());
    let rows = table_rows(&stdout(&out));
    // Strongly unique: a singleton interval.
    assert_eq!(rows[0][0], rows[0][1]);
    assert_eq!(rows[0][3], "yes");
}

#[test]
fn continuity_two_point_shows_the_reverse_jump() {
    let out = dw1(&["continuity", "--preset", "two-point", "--count", "4"]);
    assert!(out.status.success());
    let rows = table_rows(&stdout(&out));
    assert_eq!(rows.len(), 4);
    for row in &rows {
        // Forward inclusion is exact while the reverse direction jumps by
        // the full diameter — the discontinuity the preset exists to show.
        assert_eq!(row[1], "0.000000000");
        assert_eq!(row[2], "2.000000000");
        assert_eq!(row[3], "2.000000000");
    }
}

#[test]
fn selection_checks_pass_for_the_flat_preset() {
    let out = dw1(&["selection", "--preset", "example2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for check in ["finite-variation", "alignment", "displaced-norm", "variation-recheck"] {
        assert!(text.contains(check), "missing check {check}:\n{text}");
    }
    assert!(text.contains("yes (monotone from 2)"));
    assert!(!text.contains("fail"));
}

#[test]
fn witness_pairs_verify_for_the_oscillating_preset() {
    let out = dw1(&["witness", "--preset", "example3", "--count", "2"]);
    assert!(out.status.success());
    let rows = table_rows(&stdout(&out));
    assert_eq!(rows.len(), 4);
    let sides: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(sides, ["minus", "minus", "plus", "plus"]);
    assert!(rows.iter().all(|r| r[4] == "verified"));
}

#[test]
fn fuzz_suites_pass() {
    let out = dw1(&["fuzz", "--cases", "120", "--seed", "7"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for suite in [
        "fnorm-axioms",
        "lattice-monotonicity",
        "rearrangement-random",
        "rearrangement-exhaustive",
        "duality-bound",
        "maximal-dominates",
    ] {
        assert!(text.contains(suite), "missing suite {suite}:\n{text}");
    }
    assert!(!text.contains("FAIL"));
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("report.json");
    let out = dw1(&["project", "--json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty(), "file output must not echo to stdout");
    let text = std::fs::read_to_string(&path).expect("report written");
    let v: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
    assert_eq!(v["title"], "best-approximation interval");
}

#[test]
fn tsv_format_emits_tab_separated_rows() {
    let out = dw1(&["project", "--tsv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# dw1 "));
    assert_eq!(lines.next().unwrap(), "lo\thi\tdist\tsingleton");
    assert_eq!(lines.next().unwrap(), "-1/2\t2/3\t7/2\tno");
}

#[test]
fn degenerate_direction_fails_cleanly() {
    let out = dw1(&["project", "--y", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("error:"), "stderr: {err}");
}

#[test]
fn unknown_preset_fails_cleanly() {
    let out = dw1(&["selection", "--preset", "example9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}
