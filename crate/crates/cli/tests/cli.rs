use std::path::Path;
use std::process::Command;

use dispersive_lab_cli::config::ExperimentConfig;
use dispersive_lab_cli::experiments::{find, EXPERIMENTS};
use dispersive_lab_cli::run::{run_experiment, validate, RunError};

fn dlab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dlab"))
}

fn config(dir: &Path, body: &str) -> ExperimentConfig {
    let text = format!("{body}\noutput = \"{}\"\n", dir.display());
    ExperimentConfig::from_text(&text, &[]).unwrap()
}

#[test]
fn every_experiment_validates_with_defaults() {
    for e in EXPERIMENTS {
        let cfg = ExperimentConfig::from_text(&format!("experiment = \"{}\"\n", e.name), &[]).unwrap();
        validate(&cfg).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        let mut names: Vec<&str> = e.keys.iter().map(|k| k.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), e.keys.len(), "{} documents a key twice", e.name);
    }
}

#[test]
fn illposed_nls_writes_one_row_per_frequency() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "experiment = \"illposed-nls\"\nn_list = [20, 40, 80, 160, 320]");
    run_experiment(&cfg).unwrap();
    let text = std::fs::read_to_string(dir.path().join("illposed-nls.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("n,n_prime,omega"));
    assert_eq!(lines.count(), 5);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["experiment"], "illposed-nls");
    assert_eq!(manifest["outputs"][0], "illposed-nls.csv");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let body = "experiment = \"gauge-roundtrip\"\npairs = 8\nseed = 11\nprofile = \"modulated-bump\"";
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_experiment(&config(a.path(), body)).unwrap();
    run_experiment(&config(b.path(), body)).unwrap();
    let read = |d: &Path| std::fs::read(d.join("gauge-roundtrip.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn csv_values_round_trip_through_text() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&config(dir.path(), "experiment = \"soliton-oracle\"\nlevels = 2")).unwrap();
    let mut rdr = csv::Reader::from_path(dir.path().join("soliton-oracle.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["dt", "error", "ratio", "mass_drift"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0].parse::<f64>().unwrap(), 2e-3);
    assert_eq!(&rows[0][2], "NaN");
    let err: f64 = rows[1][1].parse().unwrap();
    assert!(err > 0.0 && err < 1e-5);
}

#[test]
fn config_errors_are_reported_before_any_work() {
    let bad_key = ExperimentConfig::from_text("experiment = \"growth\"\ngamma = 1\n", &[]).unwrap();
    assert!(matches!(validate(&bad_key), Err(RunError::Config(_))));
    let bad_type = ExperimentConfig::from_text("experiment = \"growth\"\nr = \"two\"\n", &[]).unwrap();
    assert!(matches!(validate(&bad_type), Err(RunError::Config(_))));
    let bad_r = ExperimentConfig::from_text("experiment = \"growth\"\nr = 1.5\n", &[]).unwrap();
    assert!(matches!(validate(&bad_r), Err(RunError::Precondition(_))));
    let bad_s = ExperimentConfig::from_text("experiment = \"illposed-nls\"\ns = 0.1\n", &[]).unwrap();
    assert!(matches!(validate(&bad_s), Err(RunError::Precondition(_))));
    assert!(find("no-such").is_err());
}

#[test]
fn unknown_experiment_exits_with_status_two_and_lists_names() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.toml");
    std::fs::write(&path, "experiment = \"no-such\"\n").unwrap();
    let out = dlab().args(["run", "--config"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for e in EXPERIMENTS {
        assert!(err.contains(e.name), "{err}");
    }
    assert!(!dir.path().join("dlab-out").exists());
}

#[test]
fn binary_runs_and_honours_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.toml");
    let out_dir = dir.path().join("out");
    std::fs::write(&path, format!("experiment = \"illposed-dnls\"\noutput = \"{}\"\n", out_dir.display())).unwrap();
    let out = dlab().args(["run", "--config"]).arg(&path).args(["--set", "n_list=[20, 40]"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(out_dir.join("illposed-dnls.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
    let listed = dlab().arg("list-experiments").output().unwrap();
    assert!(String::from_utf8_lossy(&listed.stdout).contains("globalize"));
    let val = dlab().args(["validate", "--config"]).arg(&path).args(["--set", "s=0.6"]).output().unwrap();
    assert_eq!(val.status.code(), Some(2));
}

#[test]
fn shipped_configs_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = ExperimentConfig::from_file(&path, &[]).unwrap();
        validate(&cfg).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        seen += 1;
    }
    assert_eq!(seen, EXPERIMENTS.len());
}
