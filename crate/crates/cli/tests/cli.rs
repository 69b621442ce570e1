use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blowsplit")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn blowup_split_p2() {
    let out = run(&["blowup", "split", "--n", "2", "--eps", "1/10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["total_dim"], 4);
    assert_eq!(v["generates"], true);
    assert_eq!(v["cutoff"], "2/1");
    assert_eq!(v["report"]["generation"]["verdict"], "generates");
}

#[test]
fn potential_crit_p2_lists_three_points() {
    let out = run(&["potential", "crit", "--kind", "pn", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let pts = v["critical_points"].as_array().unwrap();
    assert_eq!(pts.len(), 3);
    assert_eq!(v["cyclotomic_order"], 3);
    assert!(pts.iter().all(|p| p["clifford_shape"] == true));
}

#[test]
fn oc_matrix_p1_csv_is_two_by_two() {
    let out = run(&["oc", "matrix", "--n", "1", "--kind", "pn", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut r = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(r.headers().unwrap().len(), 3);
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|x| x.len() == 3));
    assert_eq!(&rows[0][0], "Z_0");
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn exit_codes_are_distinct_by_kind() {
    let cases: [(&[&str], &str); 4] = [
        (&["blowup", "split", "--n", "2", "--eps", "0.1"], "malformed_rational"),
        (&["blowup", "split", "--n", "2", "--frobnicate"], "usage"),
        (&["trees", "enumerate", "--boundary", "9", "--interior", "3", "--mode", "weighted"], "enumeration_budget"),
        (&["potential", "crit", "--kind", "pn", "--n", "2", "--order", "4"], "invalid_input"),
    ];
    let mut codes = Vec::new();
    for (args, kind) in cases {
        let out = run(args);
        let v = json(&out);
        assert_eq!(v["error"], kind, "{args:?}");
        let code = out.status.code().unwrap();
        assert_eq!(v["exit_code"], code);
        assert!(code > 1);
        codes.push(code);
    }
    codes.sort();
    codes.dedup();
    assert_eq!(codes.len(), 4);
}

#[test]
fn integer_without_slash_is_rejected() {
    let out = run(&["--cutoff", "2", "oc", "matrix", "--n", "1", "--kind", "pn"]);
    assert_eq!(json(&out)["error"], "malformed_rational");
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["potential", "crit", "--kind", "exceptional", "--n", "3", "--eps", "1/3"][..],
        &["oc", "matrix", "--n", "3", "--kind", "pn", "--format", "md"][..],
        &["trees", "enumerate", "--boundary", "3", "--interior", "1", "--mode", "treed", "--format", "json"][..],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn order_override_embeds() {
    let v = json(&run(&["potential", "crit", "--kind", "pn", "--n", "1", "--order", "4"]));
    assert_eq!(v["cyclotomic_order"], 4);
    assert_eq!(v["critical_points"][1]["y"][0], "-1");
}

#[test]
fn ainfty_and_hh_round_trip_through_files() {
    let dir = std::env::temp_dir().join(format!("blowsplit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let crit = json(&run(&["potential", "crit", "--kind", "pn", "--n", "2"]));
    let alg = dir.join("clifford.json");
    std::fs::write(&alg, serde_json::to_string(&crit["critical_points"][0]["clifford"]).unwrap()).unwrap();
    let path = alg.to_str().unwrap();
    let out = run(&["ainfty", "verify", path]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["violations"].as_array().unwrap().len(), 0);
    let out = run(&["hh", "dims", path, "--length", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("degree,dimension,stable\n"));
    let total: usize = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<usize>().unwrap()).sum();
    assert_eq!(total, 1);
    std::fs::write(&alg, "{\"generators\": 3}").unwrap();
    assert_eq!(json(&run(&["ainfty", "verify", path]))["error"], "malformed_algebra");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn shift_too_large_is_reported() {
    let out = run(&["blowup", "split", "--n", "3", "--eps", "3/2"]);
    let v = json(&out);
    assert_eq!(v["generates"], false);
    assert_eq!(out.status.code(), Some(1));
    assert!(v["report"]["note"].as_str().unwrap().contains("3/2"));
}
