use std::path::Path;
use std::process::{Command, Output};

use magheal_core::config::write_scenario;
use magheal_core::io::{read_abnormal, read_current};
use magheal_core::{drift_scenario, zero_drift};

fn magheal(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magheal"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

fn short_config(dir: &Path, extra: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(
        &path,
        format!("out_dir = \"out\"\n{extra}\n[windows]\ntest_end_s = 60.0\n"),
    )
    .unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn zero_drift_config_heals_nothing() {
    let dir = tempfile::tempdir().unwrap();
    write_scenario(&dir.path().join("array.toml"), &zero_drift(drift_scenario())).unwrap();
    let cfg = short_config(dir.path(), "scenario_path = \"array.toml\"\nseed = 11");
    let out = magheal(&["all", "--config", &cfg], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let run = dir.path().join("out");
    let abnormal = read_abnormal(&run.join("identification.csv")).unwrap();
    assert!(abnormal.values().all(|s| s.is_empty()), "{abnormal:?}");
    let est = read_current(&run.join("current.csv")).unwrap();
    assert_eq!(est.conventional, est.healed);
    let scenario = std::fs::read_to_string(run.join("scenario.toml")).unwrap();
    assert!(scenario.contains("seed = 11"));
}

#[test]
fn stages_run_one_at_a_time() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_config(dir.path(), "");
    for stage in [
        "simulate",
        "extract",
        "calibrate",
        "train",
        "monitor",
        "identify",
        "heal",
        "report",
    ] {
        let out = magheal(
            &[stage, "--config", &cfg, "--kappa", "0.9", "--paper-mode"],
            dir.path(),
        );
        assert!(
            out.status.success(),
            "{stage}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let summary = std::fs::read_to_string(dir.path().join("out/report/summary.txt")).unwrap();
    assert!(summary.contains("abnormal: {S1}"), "{summary}");
    let preview = std::fs::read_to_string(dir.path().join("out/waveform_preview.csv")).unwrap();
    assert!(preview.starts_with("t_s,S1,S2,S3,S4,S5,S6,S7,S8,REF\n"));
    // 0.1 s at 20 kHz
    assert_eq!(preview.lines().count(), 2001);
}

#[test]
fn failures_name_the_stage() {
    let dir = tempfile::tempdir().unwrap();
    let out = magheal(&["identify", "--out", "empty"], dir.path());
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("stage `identify` failed"), "{err}");

    let out = magheal(&["all", "--alpha", "1.2", "--out", "x"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "kappa = \"high\"\n").unwrap();
    let out = magheal(&["all", "--config", bad.to_str().unwrap()], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.toml"));
}
