use std::path::Path;
use std::process::{Command, Output};

fn ewall(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ewall")).args(args).output().expect("run ewall")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn report_succeeds_for_every_preset() {
    let o = ewall(&["report"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header[0], "scenario");
    assert_eq!(rows.len(), 5 * 3);
}

#[test]
fn model_filter_restricts_rows() {
    let o = ewall(&["report", "--models", "zurek"]);
    assert_eq!(code(&o), 0);
    let (header, rows) = csv_rows(&stdout(&o));
    let model = header.iter().position(|h| h == "model").unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r[model] == "zurek"));
}

#[test]
fn table_mismatches_exit_one_but_still_write_output() {
    for table in ["table1", "table2"] {
        let o = ewall(&[table]);
        assert_eq!(code(&o), 1, "{table}");
        let (header, rows) = csv_rows(&stdout(&o));
        let pass = header.iter().position(|h| h == "pass").unwrap();
        assert!(rows.iter().any(|r| r[pass] == "false"));
        assert!(String::from_utf8_lossy(&o.stderr).contains("outside tolerance"));
    }
}

#[test]
fn zurek_only_table1_passes() {
    let o = ewall(&["table1", "--models", "zurek"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        &["report", "--scenario", "nope"][..],
        &["sweep", "--sweep", "bogus=1:2:3"],
        &["sweep", "--sweep", "cutoff=1:2"],
        &["table1", "--tol", "-1"],
        &["diffract", "--rd", "-0.5"],
        &["frob"],
    ] {
        let o = ewall(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn solver_failure_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let source = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/carriers/super_bandgap.json");
    let mut config: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(source).unwrap()).unwrap();
    config["solver"]["max_steps"] = 1.into();
    let path = dir.path().join("starved.json");
    std::fs::write(&path, config.to_string()).unwrap();
    let o = ewall(&["chop", "--carriers", path.to_str().unwrap(), "--summary", "--frequency", "4"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn json_output_parses_and_matches_csv() {
    let json = ewall(&["table2", "--format", "json"]);
    let csv = ewall(&["table2"]);
    let value: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let columns: Vec<&str> = value["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    let rows = value["rows"].as_array().unwrap();
    let (header, csv_rows) = csv_rows(&stdout(&csv));
    assert_eq!(columns, header);
    assert_eq!(rows.len(), csv_rows.len());
    let computed = columns.iter().position(|&c| c == "computed").unwrap();
    for (j, c) in rows.iter().zip(&csv_rows) {
        assert_eq!(j[computed].as_f64().unwrap(), c[computed].parse::<f64>().unwrap());
    }
}

#[test]
fn out_directory_receives_named_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("nested");
    let o = ewall(&["gap", "--tilt", "0:0.01:3", "--out", target.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let (header, rows) = csv_rows(&std::fs::read_to_string(target.join("gap.csv")).unwrap());
    assert_eq!(header[0], "tilt_rad");
    assert_eq!(rows.len(), 3);
}

#[test]
fn sweep_covers_the_cartesian_grid() {
    let o = ewall(&["sweep", "--models", "howie", "--sweep", "cutoff=1e13:1e15:3", "--sweep", "alpha=0.1:0.3:2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (_, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows.len() % 6, 0);
    assert!(!rows.is_empty());
}

#[test]
fn floats_round_trip_through_csv() {
    let o = ewall(&["diffract", "--metrics"]);
    let (header, rows) = csv_rows(&stdout(&o));
    let col = header.iter().position(|h| h == "contrast").unwrap();
    for r in rows.iter().filter(|r| !r[col].is_empty()) {
        let x: f64 = r[col].parse().unwrap();
        assert_eq!(format!("{x:e}"), r[col]);
    }
}
