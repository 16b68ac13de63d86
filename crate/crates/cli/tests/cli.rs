use assert_cmd::Command;

fn curvecount(args: &[&str]) -> assert_cmd::assert::Assert {
    Command::cargo_bin("curvecount").unwrap().args(args).assert()
}

fn stdout(args: &[&str]) -> String {
    let out = curvecount(args).success().get_output().stdout.clone();
    String::from_utf8(out).unwrap()
}

#[test]
fn cubic_table_matches_known_counts() {
    let rows: serde_json::Value = serde_json::from_str(&stdout(&["cubic-p3", "--table"])).unwrap();
    let values: Vec<(u64, u64, &str)> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["r"].as_u64().unwrap(), r["s"].as_u64().unwrap(), r["value"].as_str().unwrap()))
        .collect();
    assert_eq!(values, [(11, 0, "12960"), (9, 1, "1392"), (7, 2, "144"), (5, 3, "12")]);
}

#[test]
fn single_cubic_number() {
    assert_eq!(stdout(&["cubic-p3", "--r", "9", "--s", "1"]).trim(), r#"{"r":9,"s":1,"value":"1392"}"#);
    assert_eq!(stdout(&["cubic-p3", "--r", "3", "--s", "4", "--format", "csv"]), "r,s,value\n3,4,0\n");
}

#[test]
fn planar_rows() {
    let csv = stdout(&["planar-table", "--kinds", "a2", "--d-min", "3", "--d-max", "8", "--format", "csv"]);
    let values: Vec<&str> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(values, ["24", "72", "144", "240", "360", "504"]);

    let rows: serde_json::Value = serde_json::from_str(&stdout(&["planar-table", "--kinds", "a1,t1", "--d-min", "2", "--d-max", "3"])).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 4);
    assert_eq!(rows[0], serde_json::json!({"kind": "a1", "d": 2, "value": "3"}));
    assert_eq!(rows[3], serde_json::json!({"kind": "t1", "d": 3, "value": "4"}));
}

#[test]
fn fundamental_monomial_integrates_to_one() {
    let out = stdout(&["ring-eval", "--space", "cubic", "--m", "0", "--n", "0", "--monomial", "a^3 * l1^2 * l3^9"]);
    let row: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(row["value"], "1");
    assert_eq!(row["space"], "cubic(0,0)");
}

#[test]
fn conic_pairings_add_up_to_t() {
    // T = r4:1 + r4:2 + r4:3 + ra1f + 2 rt1 at mu = l3^9 H1 H2 H3 H4.
    let value = |which: &str| -> i64 {
        let out = stdout(&["conic-eval", "--which", which, "--mu", "l3^9*H1*H2*H3*H4"]);
        let row: serde_json::Value = serde_json::from_str(&out).unwrap();
        row["value"].as_str().unwrap().parse().unwrap()
    };
    let t = value("r4:1") + value("r4:2") + value("r4:3") + value("ra1f") + 2 * value("rt1");
    assert_eq!(t, -2376);
    let out = stdout(&["conic-eval", "--which", "ra1f", "--mu", "l1^2*l1p^2*l1pp^2*a^3*B1^3*H1^3*H2^3*H3^3*H4^3"]);
    assert_eq!(out.trim(), r#"{"class":"ra1f","mu":"l1^2*l1p^2*l1pp^2*a^3*B1^3*H1^3*H2^3*H3^3*H4^3","value":"0"}"#);
}

#[test]
fn output_is_stable() {
    let args = ["planar-table", "--d-min", "2", "--d-max", "12"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn usage_errors_exit_with_one() {
    curvecount(&["frobnicate"]).code(1);
    curvecount(&["planar-table", "--kinds", "a9"]).code(1);
    curvecount(&["planar-table", "--d-min", "5", "--d-max", "3"]).code(1);
    curvecount(&["planar-table", "--d-min", "0", "--d-max", "3"]).code(1);
    curvecount(&["cubic-p3"]).code(1);
    curvecount(&["cubic-p3", "--r", "5"]).code(1);
    curvecount(&["cubic-p3", "--table", "--solver", "guess"]).code(1);
    curvecount(&["ring-eval", "--space", "quartic", "--monomial", "a"]).code(1);
    curvecount(&["ring-eval", "--space", "cubic", "--monomial", "z^2"]).code(1);
    curvecount(&["ring-eval", "--space", "cubic", "--m", "2", "--monomial", "a"]).code(1);
    curvecount(&["conic-eval", "--which", "r5", "--mu", "a"]).code(1);
}

#[test]
fn help_exits_cleanly() {
    curvecount(&["--help"]).code(0);
}

#[test]
fn verify_passes() {
    let out = stdout(&["verify"]);
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r["passed"] == true));
}
