use std::process::{Command, Output};

use rpverify::verify::{verify_corollary, DEFAULT_TIE_BAND};
use rpverify::{build_table, BoundParams, InequalityReport};

fn rpverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rpverify"))
        .args(args)
        .env_remove("RP_VERIFY_MEMORY_MB")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn zero_elapsed(mut v: serde_json::Value) -> serde_json::Value {
    match &mut v {
        serde_json::Value::Array(a) => a.iter_mut().for_each(|r| r["elapsed_ms"] = 0.into()),
        r => r["elapsed_ms"] = 0.into(),
    }
    v
}

#[test]
fn threshold_prints_integer() {
    let o = rpverify(&["threshold", "eq4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "36735\n");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "corollary", "--n-min", "10"][..],
        &["verify", "corollary", "--n-min", "44", "--unknown"],
        &[
            "verify", "dusart", "--side", "upper", "--k-min", "10", "--k-max", "20",
        ],
        &["eval", "--func", "F", "--at", "100"],
        &["eval", "--func", "nope", "--at", "100"],
        &["table", "--n-max", "0"],
        &["table"],
    ] {
        let o = rpverify(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn beyond_memory_budget_exits_three() {
    assert_eq!(
        rpverify(&["table", "--n-max", "10^9"]).status.code(),
        Some(3)
    );
    let o = Command::new(env!("CARGO_BIN_EXE_rpverify"))
        .args([
            "verify", "dusart", "--side", "lower", "--k-min", "3", "--k-max", "2e6",
        ])
        .env("RP_VERIFY_MEMORY_MB", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn json_report_schema_and_key_order() {
    let o = rpverify(&["verify", "corollary", "--n-max", "2000", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let keys = [
        "\"name\"",
        "\"range\"",
        "\"checked\"",
        "\"passed\"",
        "\"failures\"",
        "\"near_ties\"",
        "\"tie_band\"",
        "\"elapsed_ms\"",
        "\"params\"",
    ];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{text}");
    let r: InequalityReport = serde_json::from_str(&text).unwrap();
    assert_eq!(r.name, "corollary");
    assert_eq!(r.range, [44, 2000]);
    assert_eq!(r.checked, 1957);
    assert_eq!(r.params.unwrap().j, "log(log(n)) - log(2) - 0.5");
}

#[test]
fn table_round_trip_matches_in_process() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("t.csv");
    let f = f.to_str().unwrap();
    assert_eq!(
        rpverify(&["table", "--n-max", "3000", "--out", f])
            .status
            .code(),
        Some(0)
    );
    let o = rpverify(&[
        "verify",
        "corollary",
        "--n-max",
        "3000",
        "--table",
        f,
        "--format",
        "json",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let reports: Vec<InequalityReport> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0].name, "table-integrity");
    assert!(reports[0].ok());
    let tab = build_table(3000).unwrap();
    let expected =
        verify_corollary(&tab, &BoundParams::corollary(), 44, 3000, DEFAULT_TIE_BAND).unwrap();
    assert_eq!(reports[1].without_timing(), expected.without_timing());

    let o = rpverify(&["verify", "corollary", "--n-max", "3000", "--format", "json"]);
    let direct: InequalityReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(direct.without_timing(), expected.without_timing());
}

#[test]
fn corrupted_table_fails_at_that_row() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("t.csv");
    let fs = f.to_str().unwrap();
    assert!(rpverify(&["table", "--n-max", "500", "--out", fs])
        .status
        .success());
    let text = std::fs::read_to_string(&f).unwrap();
    assert!(text.contains("\n50,641,116\n"));
    let text = text.replace("\n50,641,", "\n50,640,");
    std::fs::write(&f, text).unwrap();
    let o = rpverify(&[
        "verify",
        "corollary",
        "--n-max",
        "500",
        "--table",
        fs,
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("report,kind,n,lhs,rhs"));
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    assert!(
        rows.iter()
            .all(|r| r.starts_with("table-integrity,failure,50,")),
        "{rows:?}"
    );
}

#[test]
fn unparsable_table_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("t.csv");
    std::fs::write(
        &f,
        "# ramanujan-table v1 n_max=2 scan_bound=100\nn,r,s\n1,2,1\n2,x,5\n",
    )
    .unwrap();
    let o = rpverify(&["verify", "corollary", "--table", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn workers_do_not_change_output() {
    let run = |w: &str| {
        let o = rpverify(&[
            "--workers",
            w,
            "--format",
            "json",
            "verify",
            "classic",
            "--which",
            "all",
            "--n-max",
            "30000",
        ]);
        assert_eq!(o.status.code(), Some(1)); // sondow-lower at n = 1
        zero_elapsed(serde_json::from_slice(&o.stdout).unwrap())
    };
    assert_eq!(run("1"), run("8"));
}

#[test]
fn tight_derivative_tolerance_fails() {
    assert_eq!(rpverify(&["verify", "derivatives"]).status.code(), Some(0));
    let o = rpverify(&["verify", "derivatives", "--rel-tol", "1e-12"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn eval_matches_reference_values() {
    let val = |args: &[&str]| -> f64 { stdout(&rpverify(args)).trim().parse().unwrap() };
    assert!((val(&["eval", "--func", "alpha", "--at", "44"]) - 114.772_136_497_478).abs() < 1e-8);
    assert!((val(&["eval", "--func", "L", "--at", "3"]) + 4.899_708_713_267_375).abs() < 1e-10);
    assert!((val(&["eval", "--func", "g", "--at", "688383"]) - 12.443_850_457_445_8).abs() < 1e-9);
    let custom = val(&[
        "eval",
        "--func",
        "g",
        "--at",
        "100",
        "--epsilon",
        "0.5",
        "--j",
        "log(n)",
    ]);
    assert!((custom - 2.0 * 100f64.ln() / (std::f64::consts::LN_2 + 0.5)).abs() < 1e-9);
}

#[test]
fn check_reports_domain_errors_but_continues() {
    let o = rpverify(&[
        "check",
        "gneg",
        "--samples",
        "10,688384,10^6",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("n = 10"), "{err}");
    let reports: Vec<InequalityReport> = serde_json::from_slice(&o.stdout).unwrap();
    // 688383 is always included.
    assert_eq!(reports[0].checked, 3);
    assert!(reports.iter().all(InequalityReport::ok));
}

#[test]
fn check_eq5_single_sample() {
    let o = rpverify(&["check", "eq5", "--n", "688384", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "report,kind,n,lhs,rhs\n");
}

#[test]
fn explore_labels_result_empirical() {
    let o = rpverify(&[
        "explore",
        "--j",
        "log(log(n))",
        "--cap",
        "10^5",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["label"], "EMPIRICAL");
    assert_eq!(v["empirical_n"], 11);

    let o = rpverify(&["explore", "--j", "-1", "--cap", "10^4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr)
        .unwrap()
        .contains("not positive"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("o.json");
    let o = rpverify(&[
        "threshold",
        "eq4",
        "--format",
        "json",
        "--out",
        f.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(f).unwrap()).unwrap();
    assert_eq!(v["threshold"], 36735);
}
