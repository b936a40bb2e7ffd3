use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use asv_gain::model::{Axis, ModelKind};
use asv_gain::synth::ExpectedParams;
use asv_gain_cli::model_file::ModelFile;
use asv_gain_cli::report::MetricsFile;
use asv_gain_cli::RunConfig;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asv-gain"))
        .args(args)
        .current_dir(dir)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let o = run(dir, args);
    assert!(
        o.status.success(),
        "{args:?} failed: {}\n{}",
        String::from_utf8_lossy(&o.stderr),
        String::from_utf8_lossy(&o.stdout)
    );
    String::from_utf8(o.stdout).unwrap()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p
}

fn csv_rows(p: &Path) -> usize {
    csv::Reader::from_path(p).unwrap().records().count()
}

fn read_expected(p: &Path) -> ExpectedParams {
    serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap()
}

const DISCRETE: &str = "[simulate]\ngenerator = \"discrete\"\nduration_s = 1000.0\n";

#[test]
fn missing_pwm_log_exits_2_naming_the_file() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["simulate", "--out", "a"]);
    std::fs::remove_file(dir.path().join("a/pwm.csv")).unwrap();
    let o = run(dir.path(), &["prepare", "--out", "a"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pwm.csv"));
}

#[test]
fn renamed_column_is_reported_and_adapter_accepts_it() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["simulate", "--out", "a"]);
    let p = dir.path().join("a/heading.csv");
    let text = std::fs::read_to_string(&p)
        .unwrap()
        .replacen("t,psi", "time,yaw", 1);
    std::fs::write(&p, text).unwrap();
    let o = run(dir.path(), &["prepare", "--out", "a"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("'t'"));
    let cfg = write_config(
        dir.path(),
        "[columns]\nheading_t = \"time\"\npsi = \"yaw\"\n",
    );
    ok(
        dir.path(),
        &["prepare", "--config", cfg.to_str().unwrap(), "--out", "a"],
    );
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sampling = 0.2\n");
    let o = run(dir.path(), &["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn prepare_summary_matches_grid() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["simulate", "--out", "a"]);
    ok(dir.path(), &["prepare", "--out", "a"]);
    let s: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("a/prepare_summary.json")).unwrap())
            .unwrap();
    let rows = s["rows"].as_u64().unwrap() as usize;
    assert_eq!(rows, csv_rows(&dir.path().join("a/prepared.csv")));
    // 600 s at 0.2 s, fixes at both ends.
    assert_eq!(s["grid_points"].as_u64(), Some(3001));
    let window = RunConfig::default().prep.savgol.window_length;
    assert_eq!(rows, 3001 - window);
    assert_eq!(s["segments"].as_u64(), Some(1));
    assert!((s["minutes"].as_f64().unwrap() - rows as f64 * 0.2 / 60.0).abs() < 1e-12);
}

fn check_round_trip(kind: &str) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), DISCRETE);
    let c = cfg.to_str().unwrap();
    ok(
        dir.path(),
        &["simulate", "--config", c, "--kind", kind, "--out", "a"],
    );
    let stdout = ok(
        dir.path(),
        &["identify", "--config", c, "--kind", kind, "--out", "a"],
    );
    let model = ModelFile::read(&dir.path().join("a/model.json")).unwrap();
    let expected = read_expected(&dir.path().join("a/expected.json"));
    let m = model.to_model().unwrap();
    for axis in Axis::ALL {
        let (got, want) = (m.vector(axis), expected.vector(axis));
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= 1e-8, "{kind} {axis}: {g} vs {w}");
        }
    }
    match model.kind {
        ModelKind::Static => {
            assert_eq!(model.parameters.len(), 7 + 13 + 13);
            assert!(model.alpha.is_none());
        }
        ModelKind::Dynamic => {
            assert_eq!(model.parameters.len(), 11 + 21 + 21);
            let a = model.alpha.unwrap();
            assert!((a.alpha - expected.alpha.unwrap()).abs() <= 1e-8);
            assert!(a.stable);
            assert!(stdout.contains("stable"));
        }
    }
    assert_eq!(model.provenance.created_unix, 1_700_000_000);
    assert_eq!(model.provenance.dataset_sha256.len(), 64);
}

#[test]
fn static_identification_recovers_expected_vectors() {
    check_round_trip("static");
}

#[test]
fn dynamic_identification_recovers_expected_vectors() {
    check_round_trip("dynamic");
}

#[test]
fn simulate_is_bit_identical_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[simulate]\nduration_s = 60.0\n[simulate.logs]\nposition_std = 0.05\nheading_std = 0.01\n",
    );
    let c = cfg.to_str().unwrap();
    ok(
        dir.path(),
        &["simulate", "--config", c, "--seed", "7", "--out", "a"],
    );
    ok(
        dir.path(),
        &["simulate", "--config", c, "--seed", "7", "--out", "b"],
    );
    ok(
        dir.path(),
        &["simulate", "--config", c, "--seed", "8", "--out", "c"],
    );
    for f in [
        "gnss.csv",
        "heading.csv",
        "pwm.csv",
        "truth.json",
        "expected.json",
    ] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        assert_eq!(
            a,
            std::fs::read(dir.path().join("b").join(f)).unwrap(),
            "{f}"
        );
    }
    assert_ne!(
        std::fs::read(dir.path().join("a/gnss.csv")).unwrap(),
        std::fs::read(dir.path().join("c/gnss.csv")).unwrap()
    );
    // Sensor rates: one fix, ten headings and two PWM samples per period.
    assert_eq!(csv_rows(&dir.path().join("a/gnss.csv")), 301);
    assert_eq!(csv_rows(&dir.path().join("a/heading.csv")), 3001);
    assert_eq!(csv_rows(&dir.path().join("a/pwm.csv")), 600);
}

#[test]
fn identify_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), DISCRETE);
    let c = cfg.to_str().unwrap();
    ok(dir.path(), &["simulate", "--config", c, "--out", "a"]);
    ok(dir.path(), &["identify", "--config", c, "--out", "a"]);
    let first = std::fs::read(dir.path().join("a/model.json")).unwrap();
    ok(dir.path(), &["identify", "--config", c, "--out", "a"]);
    assert_eq!(
        first,
        std::fs::read(dir.path().join("a/model.json")).unwrap()
    );
}

#[test]
fn perfect_model_validates_with_unit_r2_and_full_traces() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &format!("{DISCRETE}[paths]\nout = \"a\"\nmodel = \"a/model.json\"\n"),
    );
    let c = cfg.to_str().unwrap();
    ok(dir.path(), &["simulate", "--config", c]);
    ok(dir.path(), &["identify", "--config", c]);
    ok(dir.path(), &["validate", "--config", c]);
    let MetricsFile::Metrics { report } =
        MetricsFile::read(&dir.path().join("a/metrics.json")).unwrap()
    else {
        panic!("expected a whole-dataset metrics file")
    };
    assert!(report.min_r2() > 1.0 - 1e-12, "{}", report.min_r2());
    let n: usize = report.axes.iter().map(|a| a.n).sum();
    assert_eq!(csv_rows(&dir.path().join("a/traces.csv")), n);
}

#[test]
fn partition_validation_with_sensitivity_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[simulate]\nduration_s = 300.0\n[partition]\nrepetitions = 20\nsweep = [0.5, 0.6, 0.7]\n",
    );
    let c = cfg.to_str().unwrap();
    ok(dir.path(), &["simulate", "--config", c, "--out", "a"]);
    ok(dir.path(), &["prepare", "--config", c, "--out", "a"]);
    ok(dir.path(), &["validate", "--config", c, "--out", "a"]);
    let MetricsFile::Evaluation { evaluation, .. } =
        MetricsFile::read(&dir.path().join("a/metrics.json")).unwrap()
    else {
        panic!("expected a partition evaluation")
    };
    assert!(evaluation.validation.min_r2() > 0.99);
    let n: usize = evaluation
        .training
        .axes
        .iter()
        .chain(&evaluation.validation.axes)
        .map(|a| a.n)
        .sum();
    assert_eq!(csv_rows(&dir.path().join("a/traces.csv")), n);

    let MetricsFile::Sensitivity { report } =
        MetricsFile::read(&dir.path().join("a/sensitivity.json")).unwrap()
    else {
        panic!("expected a sensitivity report")
    };
    assert_eq!(report.repetitions, 20);
    assert_eq!(csv_rows(&dir.path().join("a/sensitivity.csv")), 6);
    assert_eq!(csv_rows(&dir.path().join("a/sweep.csv")), 9);

    let text = ok(dir.path(), &["report", "--config", c, "--out", "a"]);
    assert!(
        text.contains("Sensitivity")
            && text.contains("Training share sweep")
            && text.contains("One-step prediction")
    );
    let first = std::fs::read(dir.path().join("a/report.txt")).unwrap();
    let tidy = std::fs::read(dir.path().join("a/report.csv")).unwrap();
    ok(dir.path(), &["report", "--config", c, "--out", "a"]);
    assert_eq!(
        first,
        std::fs::read(dir.path().join("a/report.txt")).unwrap()
    );
    assert_eq!(
        tidy,
        std::fs::read(dir.path().join("a/report.csv")).unwrap()
    );
}

#[test]
fn one_metrics_file_gives_one_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), DISCRETE);
    let c = cfg.to_str().unwrap();
    ok(dir.path(), &["simulate", "--config", c, "--out", "a"]);
    ok(dir.path(), &["validate", "--config", c, "--out", "a"]);
    let text = ok(dir.path(), &["report", "--config", c, "--out", "a"]);
    assert_eq!(text.matches("split ").count(), 1);
    assert_eq!(text.lines().count(), 3 + 6);
}

#[test]
fn report_without_inputs_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["report", "--out", "empty"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    // A 2 s dataset cannot determine 13 parameters.
    let cfg = write_config(
        dir.path(),
        "[simulate]\ngenerator = \"discrete\"\nduration_s = 2.0\n",
    );
    let c = cfg.to_str().unwrap();
    ok(dir.path(), &["simulate", "--config", c, "--out", "a"]);
    let o = run(dir.path(), &["identify", "--config", c, "--out", "a"]);
    assert_eq!(
        o.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(String::from_utf8_lossy(&o.stderr).contains("axis"));
}

#[test]
fn divergence_reports_the_step() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::default();
    // Yaw damping that feeds energy in.
    cfg.simulate.truth.n_r = 40.0;
    cfg.simulate.truth.n_rr = 0.0;
    let p = write_config(dir.path(), &toml::to_string(&cfg).unwrap());
    let o = run(
        dir.path(),
        &["simulate", "--config", p.to_str().unwrap(), "--out", "a"],
    );
    assert_eq!(
        o.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(String::from_utf8_lossy(&o.stderr).contains("step"));
}
