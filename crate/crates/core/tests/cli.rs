use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn gmmds(args: &[&str], stdin: Option<&str>, envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gmmds"));
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("spawn gmmds");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn piped(args: &[&str], input: &str) -> (i32, Value, String) {
    let out = gmmds(args, Some(input), &[]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(stdout.lines().next().unwrap_or("null")).unwrap();
    (
        out.status.code().unwrap(),
        json,
        String::from_utf8(out.stderr).unwrap(),
    )
}

const THREE_ROW: &str = r#"{"k":3,"n":6,"zeros":[[5,6],[1,4],[3,4]]}"#;
const FOUR_ROW: &str = r#"{"k":4,"n":7,"zeros":[[1,2,3],[1,4,5],[2,4,6],[3,5,7]]}"#;

#[test]
fn check_reports_condition() {
    let (code, json, _) = piped(&["check", "-"], THREE_ROW);
    assert_eq!(code, 0);
    assert_eq!(json, serde_json::json!({"schema": 1, "holds": true}));

    let (code, json, _) = piped(
        &["check", "-"],
        r#"{"k":2,"n":4,"rows":[[1,1,0,0],[1,1,0,0]]}"#,
    );
    assert_eq!(code, 1);
    assert_eq!(json["witness"], serde_json::json!([1]));
    assert_eq!(json["union_size"], 2);
}

#[test]
fn reads_files_too() {
    let dir = std::env::temp_dir().join(format!("gmmds-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pattern.json");
    std::fs::write(&path, THREE_ROW).unwrap();
    let out = gmmds(&["check", path.to_str().unwrap()], None, &[]);
    assert_eq!(out.status.code(), Some(0));
    let missing = gmmds(
        &["check", dir.join("nope.json").to_str().unwrap()],
        None,
        &[],
    );
    assert_eq!(missing.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reduce_emits_reduced_rows() {
    let (code, json, _) = piped(
        &["reduce", "-"],
        r#"{"k":2,"n":3,"rows":[[1,1,1],[1,1,1]]}"#,
    );
    assert_eq!(code, 0);
    for row in json["rows"].as_array().unwrap() {
        let weight: u64 = row
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_u64().unwrap())
            .sum();
        assert_eq!(weight, 2);
    }
}

#[test]
fn construct_then_verify_round_trip() {
    let first = gmmds(&["construct", "-", "--seed", "9"], Some(THREE_ROW), &[]);
    assert_eq!(first.status.code(), Some(0));
    let again = gmmds(&["construct", "-", "--seed", "9"], Some(THREE_ROW), &[]);
    assert_eq!(first.stdout, again.stdout, "output must be deterministic");
    let gen: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(gen["schema"], 1);
    assert_eq!(
        gen["field"],
        serde_json::json!({"p": 2, "m": 3, "modulus": [1, 0, 1, 1]})
    );
    assert_eq!(gen["verified_mds"], true);
    let matrix = gen["matrix"].as_array().unwrap();
    assert_eq!(matrix[0][4], 0);
    assert_eq!(matrix[0][5], 0);

    let (code, verdict, _) = piped(&["verify", "-"], &String::from_utf8(first.stdout).unwrap());
    assert_eq!(code, 0);
    assert_eq!(verdict["is_mds"], true);
}

#[test]
fn verify_reports_singular_columns() {
    let bad = r#"{"field":{"p":5,"m":1},"k":2,"n":3,"matrix":[[1,2,0],[2,4,1]]}"#;
    let (code, json, err) = piped(&["verify", "-"], bad);
    assert_eq!(code, 1);
    assert_eq!(json["failing_columns"], serde_json::json!([1, 2]));
    assert!(err.contains("[1, 2]"));
}

#[test]
fn construct_failures() {
    let (code, json, err) = piped(
        &["construct", "-"],
        r#"{"k":2,"n":4,"rows":[[1,1,0,0],[1,1,0,0]]}"#,
    );
    assert_eq!(code, 1);
    assert_eq!(json["error"], "ConditionViolated");
    assert_eq!(json["witness"], serde_json::json!([1]));
    assert!(err.starts_with("error:"));

    let (code, json, _) = piped(&["construct", "-", "--q", "6"], THREE_ROW);
    assert_eq!(code, 2);
    assert_eq!(json["error"], "BadField");
    let (code, json, _) = piped(&["construct", "-", "--q", "7"], THREE_ROW);
    assert_eq!(code, 2);
    assert_eq!(json["error"], "FieldTooSmall");
    let (code, _, _) = piped(&["construct", "-", "--strategy", "clever"], THREE_ROW);
    assert_eq!(code, 2);
}

#[test]
fn construct_exhaustive_and_larger_field() {
    let (code, json, _) = piped(
        &["construct", "-", "--strategy", "exhaustive", "--q", "11"],
        THREE_ROW,
    );
    assert_eq!(code, 0);
    assert_eq!(json["field"], serde_json::json!({"p": 11, "m": 1}));
}

#[test]
fn dump_poly_goes_to_stderr() {
    let (code, json, err) = piped(&["construct", "-", "--dump-poly"], THREE_ROW);
    assert_eq!(code, 0);
    assert_eq!(json["schema"], 1);
    assert_eq!(err.lines().count(), 8);
    assert!(err
        .lines()
        .all(|l| l.starts_with("1 *") || l.starts_with("-1 *")));
}

#[test]
fn multiset_histogram() {
    let (code, json, _) = piped(&["multiset", "-"], THREE_ROW);
    assert_eq!(code, 0);
    assert_eq!(json["total_outcomes"], 12);
    assert_eq!(json["witness"], serde_json::json!([3, 4, 4]));
    let total: u64 = json["histogram"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["count"].as_u64().unwrap())
        .sum();
    assert_eq!(total, 12);
}

#[test]
fn star_selection() {
    let (code, json, _) = piped(&["star", "-"], FOUR_ROW);
    assert_eq!(code, 0);
    assert_eq!(json["multiset"], serde_json::json!([2, 3, 4, 4, 5, 7]));
    assert_eq!(json["count"], 1);
    assert_eq!(json["unique"], true);

    let overlap = r#"{"n":6,"zeros":[[1,2,3],[1,2,4],[3,5,6],[4,5,6]]}"#;
    let (code, json, _) = piped(&["star", "-"], overlap);
    assert_eq!(code, 1);
    assert_eq!(json["applies"], false);
}

#[test]
fn sweep_lines_are_deterministic_across_thread_counts() {
    let one = gmmds(&["sweep", "--k", "3"], None, &[("GMMDS_THREADS", "1")]);
    let four = gmmds(&["sweep", "--k", "3"], None, &[("GMMDS_THREADS", "4")]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let text = String::from_utf8(one.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["holds"], true);
        assert_eq!(v["outcomes"], 12);
    }
    let summary: Value =
        serde_json::from_str(String::from_utf8(one.stderr).unwrap().trim()).unwrap();
    assert_eq!(summary["failed"], 0);
}

#[test]
fn sampled_sweep_and_guards() {
    let a = gmmds(
        &["sweep", "--k", "4", "--sample", "20", "--seed", "3"],
        None,
        &[],
    );
    let b = gmmds(
        &["sweep", "--k", "4", "--sample", "20", "--seed", "3"],
        None,
        &[],
    );
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8(a.stdout).unwrap().lines().count(), 20);

    let raw = gmmds(
        &["sweep", "--k", "3", "--no-canonical", "--n-max", "4"],
        None,
        &[],
    );
    assert_eq!(raw.status.code(), Some(0));

    assert_eq!(
        gmmds(&["sweep", "--k", "7"], None, &[]).status.code(),
        Some(2)
    );
    assert_eq!(
        gmmds(&["sweep", "--k", "3"], None, &[("GMMDS_THREADS", "zero")])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn cde_and_sman() {
    let cde = r#"{"n":3,"clients":[{"has":[1,2],"b":1},{"has":[2,3],"b":1}]}"#;
    let (code, json, _) = piped(&["cde", "-"], cde);
    assert_eq!(code, 0);
    assert_eq!(
        json["pattern"]["rows"],
        serde_json::json!([[1, 1, 0], [0, 1, 1]])
    );
    assert_eq!(json["mds_condition"]["holds"], true);

    let (code, json, _) = piped(&["cde", "-"], r#"{"n":2,"clients":[{"has":[1],"b":1}]}"#);
    assert_eq!(code, 1);
    assert_eq!(json["error"], "CutConditionViolated");

    let sman = r#"{"n":5,"z":1,"sources":[{"relays":[1,2,3],"rate":1}]}"#;
    let (code, json, _) = piped(&["sman", "-", "--emit-code"], sman);
    assert_eq!(code, 0);
    assert_eq!(json["k"], 3);
    assert_eq!(json["code"]["generator"]["field"]["p"], 7);
    let row = &json["code"]["subspace_matrix"][0];
    assert_eq!(row[3], 0);
    assert_eq!(row[4], 0);

    let (code, json, _) = piped(
        &["sman", "-"],
        r#"{"n":3,"z":2,"sources":[{"relays":[1,2,3],"rate":1}]}"#,
    );
    assert_eq!(code, 1);
    assert_eq!(json["error"], "RateExceedsCapacity");
}

#[test]
fn malformed_input_exits_2() {
    for (sub, body) in [
        ("check", "not json"),
        ("check", r#"{"k":3,"n":2,"rows":[[1,1],[1,1],[1,1]]}"#),
        ("multiset", r#"{"n":3,"zeros":[[1,2],[1,2],[1,3]]}"#),
        ("cde", r#"{"n":2,"clients":[{"has":[1,2],"b":1}]}"#),
        (
            "verify",
            r#"{"field":{"p":4,"m":1},"k":1,"n":1,"matrix":[[1]]}"#,
        ),
    ] {
        let (code, json, _) = piped(&[sub, "-"], body);
        assert_eq!(code, 2, "{sub} {body}");
        assert_eq!(json["schema"], 1);
        assert!(json["error"].is_string());
    }
    assert_eq!(gmmds(&["bogus"], None, &[]).status.code(), Some(2));
    assert_eq!(gmmds(&["--help"], None, &[]).status.code(), Some(0));
}
