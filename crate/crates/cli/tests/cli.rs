use std::path::Path;
use std::process::{Command, Output};

use weak_dirac::GammaSet;
use weak_dirac_cli::RunConfig;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weak-dirac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = run(&["sweep", "--n", "10", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn missing_subcommand_and_bad_values_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["gamma-check", "--m", "2"]).status.code(), Some(2));
    assert_eq!(
        run(&["constants", "--p-grid", "1:2"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["weak-holder", "--dim", "4"]).status.code(), Some(2));
    // parses, but the library rejects p = 3
    let out = run(&["constants", "--p-grid", "2.5:3.0:0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    // cutoff radius below 4
    assert_eq!(run(&["sweep", "--n", "2,10"]).status.code(), Some(2));
}

#[test]
fn gamma_check_summary_and_dump() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("g6.json");
    let out = run(&["gamma-check", "--m", "6", "--dump", path_str(&dump)]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("anticommutator defect 0"), "{stdout}");
    let text = std::fs::read_to_string(&dump).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = doc
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    assert_eq!(keys, ["report", "run_config"]); // serde_json sorts when reading back
    assert!(text.find("\"run_config\"").unwrap() < text.find("\"report\"").unwrap());
    let gs_doc = &doc["report"]["gamma_set"];
    assert_eq!(gs_doc["m"], 6);
    assert_eq!(gs_doc["ell"], 16);
    assert_eq!(gs_doc["generators"].as_array().unwrap().len(), 6);
    let gs = GammaSet::from_json(&gs_doc.to_string()).unwrap();
    assert_eq!(gs.dimension(), 6);
    assert_eq!(doc["report"]["check"]["pass"], true);
}

#[test]
fn sweep_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = run(&[
        "sweep",
        "--m",
        "3",
        "--n",
        "10,100,1000,10000",
        "--out",
        path_str(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# run_config: "));
    assert_eq!(lines[1], "n,lhs,rhs,ratio,note");
    assert_eq!(lines.len(), 6);
    let ratios: Vec<f64> = lines[2..]
        .iter()
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert!(ratios.windows(2).all(|w| w[0] < w[1]));
    let cfg = RunConfig::from_report(&text).unwrap();
    assert_eq!(cfg.quadrature.r_max, 10002.0);
    assert_eq!(cfg.quadrature.seed, 1);
}

#[test]
fn json_format_from_extension() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("h.json");
    let out = run(&[
        "weak-hardy",
        "--m",
        "3",
        "--n",
        "100",
        "--out",
        path_str(&json),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(doc["report"]["check"]["slack"].as_f64().unwrap() > 0.0);
    assert_eq!(doc["run_config"]["format"], serde_json::Value::Null);
}

#[test]
fn embedded_config_reproduces_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let out = run(&[
        "constants",
        "--p-grid",
        "1.1:2.9:0.2",
        "--out",
        path_str(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let first = std::fs::read(&csv).unwrap();
    let cfg = RunConfig::from_report(std::str::from_utf8(&first).unwrap()).unwrap();
    std::fs::remove_file(&csv).unwrap();
    let args = cfg.to_args();
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(run(&args).status.code(), Some(0));
    assert_eq!(std::fs::read(&csv).unwrap(), first);
}

#[test]
fn no_stray_temp_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("z.csv");
    let out = run(&[
        "zero-mode",
        "--m",
        "3",
        "--points",
        "50",
        "--out",
        path_str(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names, [std::ffi::OsString::from("z.csv")]);
}
