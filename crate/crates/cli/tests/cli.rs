//! End-to-end checks of the `pauc` binary: exit codes, output schemas,
//! determinism, and the CSV round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_pauc")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn scratch(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("pauc-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, content).unwrap();
    path
}

const DATA: &str = "\
id,status,ca199,cea,il6
p01,0,0.3,3.1,1.9
p02,0,2.9,0.6,4.2
p03,0,1.4,4.9,0.4
p04,0,4.6,1.8,2.8
p05,0,0.8,5.4,5.6
p06,0,3.7,2.5,1.1
p07,0,2.2,0.2,3.3
p08,0,5.1,3.8,0.9
p09,1,1.6,4.4,2.4
p10,1,3.4,1.2,5.2
p11,1,2.6,5.9,1.3
p12,1,5.8,2.1,6.1
p13,1,4.1,3.6,3.9
p14,1,0.7,6.2,4.7
";

const CONFIG: &str = "\
delta = 0.1
bootstrap_reps = 300
seed = 11
trim = [0.75, 0.5]
[contrast]
kind = \"tukey\"
";

#[test]
fn test_emits_json_and_is_deterministic() {
    let data = scratch("det.csv", DATA);
    let config = scratch("det.toml", CONFIG);
    let args =
        ["test", "--data", data.to_str().unwrap(), "--config", config.to_str().unwrap(), "--out", "json"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success(), "{}", stderr(&first));
    assert_eq!(stdout(&first), stdout(&second));

    let v: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(v["command"], "test");
    assert_eq!(v["markers"], serde_json::json!(["ca199", "cea", "il6"]));
    let mct = &v["results"][0]["mct"];
    assert_eq!(mct["decisions"].as_array().unwrap().len(), 3);
    assert!(mct["critical_value"].as_f64().unwrap() > 0.0);
    assert!(v["grid"].is_null());

    // A different worker count must not change a single byte.
    let mut with_workers = vec!["--workers", "3"];
    with_workers.extend_from_slice(&args);
    let third = run(&with_workers);
    assert_eq!(stdout(&first), stdout(&third));
}

#[test]
fn table_output_is_pure_ascii() {
    let data = scratch("ascii.csv", DATA);
    let config = scratch("ascii.toml", CONFIG);
    let out = run(&["test", "--data", data.to_str().unwrap(), "--config", config.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.is_ascii());
    assert!(text.contains("window (p, q) = (0.75, 0.50)"));
    assert!(text.contains("1-2"));
}

#[test]
fn exported_dataset_reproduces_the_same_report() {
    let data = scratch("rt.csv", DATA);
    let config = scratch("rt.toml", CONFIG);
    let parsed = pauc_cli::dataset::read_csv(&data).unwrap();
    let copy = std::env::temp_dir().join(format!("pauc-cli-{}-rt2.csv", std::process::id()));
    pauc_cli::dataset::write_csv(&parsed.sample, &parsed.marker_names, &copy).unwrap();

    let a = run(&["test", "--data", data.to_str().unwrap(), "--config", config.to_str().unwrap(), "--out", "json"]);
    let b = run(&["test", "--data", copy.to_str().unwrap(), "--config", config.to_str().unwrap(), "--out", "json"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn grid_mode_reports_holm_adjusted_p_values() {
    let data = scratch("grid.csv", DATA);
    let config = scratch("grid.toml", CONFIG);
    let out = run(&[
        "test",
        "--data",
        data.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
        "--grid",
        "1,0;0.8,0.2;0.6,0.4;0.5,0.5;0.4,0.6",
        "--out",
        "json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["results"].as_array().unwrap().len(), 5);
    let raw = v["grid"]["raw_global_p"].as_array().unwrap();
    let holm = v["grid"]["holm_adjusted_p"].as_array().unwrap();
    assert_eq!(raw.len(), 5);
    for (r, h) in raw.iter().zip(holm) {
        let (r, h) = (r.as_f64().unwrap(), h.as_f64().unwrap());
        assert!(h >= r - 1e-15 && h <= 1.0);
    }
}

#[test]
fn malformed_status_is_a_data_error_naming_the_line() {
    let bad = DATA.replace("p10,1,", "p10,2,");
    let data = scratch("bad.csv", &bad);
    let config = scratch("bad.toml", CONFIG);
    let out = run(&["test", "--data", data.to_str().unwrap(), "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    assert!(msg.contains("line 11") && msg.contains("`2`"), "{msg}");
}

#[test]
fn usage_errors_exit_1() {
    // Unknown flag.
    let out = run(&["test", "--nonsense"]);
    assert_eq!(out.status.code(), Some(1));
    // Missing inputs.
    let out = run(&["simulate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--config or --preset"));
    // Unknown preset.
    let out = run(&["simulate", "--preset", "table9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("table1, table2, table3"));
    // Contrast width not matching the data.
    let data = scratch("kap.csv", DATA);
    let config = scratch(
        "kap.toml",
        "delta = 0.1\nbootstrap_reps = 300\ntrim = [0.75, 0.5]\n[contrast]\nkind = \"custom\"\nrows = [[1.0, -1.0]]\n",
    );
    let out = run(&["test", "--data", data.to_str().unwrap(), "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("3 markers"), "{}", stderr(&out));
    // Zero simulation runs.
    let out = run(&["simulate", "--preset", "table1", "--runs", "0", "--n", "10", "--bootstrap-reps", "100"]);
    assert_eq!(out.status.code(), Some(1));
    // Help exits cleanly.
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn simulate_preset_scaled_down_runs() {
    let out = run(&[
        "simulate", "--preset", "table1", "--n", "12", "--runs", "4", "--bootstrap-reps", "100",
        "--trim", "0.8,0.6", "--seed", "5", "--out", "json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["command"], "simulate");
    assert_eq!(v["preset"], "table1");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["report"]["runs"], 4);
    assert!(rows[0]["effect"].is_null());
    let rate = rows[0]["report"]["rejection_rate"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&rate));

    let again = run(&[
        "simulate", "--preset", "table1", "--n", "12", "--runs", "4", "--bootstrap-reps", "100",
        "--trim", "0.8,0.6", "--seed", "5", "--out", "json",
    ]);
    // Wall time is the one legitimately nondeterministic field.
    let mask = |text: &str| {
        let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
        for row in v["rows"].as_array_mut().unwrap() {
            row["report"]["wall_time"] = serde_json::Value::Null;
        }
        v
    };
    assert_eq!(mask(&stdout(&out)), mask(&stdout(&again)));
}

#[test]
fn roc_emits_vertices_and_window() {
    let csv = "\
id,status,m1
a,0,1.0
b,0,2.0
c,0,3.0
d,1,4.0
e,1,5.0
";
    let data = scratch("roc.csv", csv);
    let out = run(&["roc", "--data", data.to_str().unwrap(), "--trim", "0.8,0.6", "--out", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let m = &v["markers"][0];
    assert_eq!(m["auc"], 1.0);
    let vertices = m["vertices"].as_array().unwrap();
    assert_eq!(vertices.first().unwrap(), &serde_json::json!([0.0, 0.0]));
    assert!(vertices.contains(&serde_json::json!([0.0, 1.0])));
    assert_eq!(vertices.last().unwrap(), &serde_json::json!([1.0, 1.0]));
    assert!(m["window"]["upper"].is_number());

    let table = run(&["roc", "--data", data.to_str().unwrap()]);
    assert!(stdout(&table).is_ascii());
    assert!(stdout(&table).contains("fpr"));
}
