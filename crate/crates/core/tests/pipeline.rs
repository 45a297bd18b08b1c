use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use magheal_core::io::{ingest_phasors, read_model, read_phasors};
use magheal_core::pipeline::{model_file, run_pipeline, run_stage, PHASOR_FILE, REPORT_DIR};
use magheal_core::spe::monitor;
use magheal_core::{Error, PipelineConfig, SignalKind, Source, Stage};

/// One shortened run of the drift scenario, shared by every test here.
fn short_run() -> &'static Path {
    static DIR: OnceLock<PathBuf> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap().keep();
        let mut cfg = PipelineConfig {
            out_dir: dir.clone(),
            ..PipelineConfig::default()
        };
        cfg.windows.test_end_s = 120.0;
        run_pipeline(&cfg).unwrap();
        dir
    })
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn report_series_have_fixed_headers() {
    let report = short_run().join(REPORT_DIR);
    for (file, header) in [
        ("train_errors.csv", vec!["t_s", "unit_id", "eps_a", "eps_p_rad"]),
        ("test_errors.csv", vec!["t_s", "unit_id", "eps_a", "eps_p_rad"]),
        (
            "pair_scores.csv",
            vec!["kind", "rank", "pair", "q_sum", "threshold"],
        ),
        (
            "triple_q.csv",
            vec!["kind", "unit", "subset", "t_s", "q", "threshold", "exceeded"],
        ),
        (
            "current_errors.csv",
            vec![
                "t_s",
                "conv_eps_a",
                "conv_eps_p_rad",
                "healed_eps_a",
                "healed_eps_p_rad",
            ],
        ),
    ] {
        let (h, rows) = read_csv(&report.join(file));
        assert_eq!(h, header, "{file}");
        assert!(!rows.is_empty(), "{file}");
        assert!(rows.iter().all(|r| r.len() == header.len()), "{file}");
    }
    assert!(report.join("summary.txt").is_file());
}

#[test]
fn report_time_columns_are_monotone() {
    let report = short_run().join(REPORT_DIR);
    let (_, rows) = read_csv(&report.join("current_errors.csv"));
    let t: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(t.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(t.len(), 100);

    let (_, rows) = read_csv(&report.join("train_errors.csv"));
    let t: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(t.windows(2).all(|w| w[1] >= w[0]));

    let (_, rows) = read_csv(&report.join("triple_q.csv"));
    for group in rows.chunk_by(|a, b| a[0] == b[0] && a[1] == b[1]) {
        let t: Vec<f64> = group.iter().map(|r| r[3].parse().unwrap()).collect();
        assert!(t.windows(2).all(|w| w[1] > w[0]));
    }
}

#[test]
fn pair_ranking_is_sorted() {
    let (_, rows) = read_csv(&short_run().join(REPORT_DIR).join("pair_scores.csv"));
    // 28 pairs per kind
    assert_eq!(rows.len(), 56);
    for kind in rows.chunk_by(|a, b| a[0] == b[0]) {
        let q: Vec<f64> = kind.iter().map(|r| r[3].parse().unwrap()).collect();
        assert!(q.windows(2).all(|w| w[1] >= w[0]));
    }
}

#[test]
fn calibrated_units_track_reference_during_training() {
    let (_, rows) = read_csv(&short_run().join(REPORT_DIR).join("train_errors.csv"));
    for r in rows {
        let ea: f64 = r[2].parse().unwrap();
        let ep: f64 = r[3].parse().unwrap();
        assert!(ea.abs() < 1e-3, "{r:?}");
        assert!(ep.abs() < 1e-3, "{r:?}");
    }
}

#[test]
fn training_rows_mostly_below_limit() {
    let out = short_run();
    let blocks = read_phasors(&out.join(PHASOR_FILE)).unwrap();
    let train = blocks.iter().find(|b| b.source == Source::Train).unwrap();
    for kind in SignalKind::ALL {
        let model = read_model(&out.join(model_file(kind))).unwrap();
        let q = monitor(&model, &train.matrix(kind).unwrap(), 0.99, Default::default()).unwrap();
        let frac = q.exceedance_fraction();
        assert!(frac <= 0.03, "{kind}: {frac}");
    }
}

#[test]
fn reference_channel_follows_excitation() {
    let blocks = read_phasors(&short_run().join(PHASOR_FILE)).unwrap();
    let sc = PipelineConfig::default().resolve_scenario().unwrap();
    let test = blocks.iter().find(|b| b.source == Source::Test).unwrap();
    for (t, r) in test.times.iter().zip(&test.reference) {
        // complex 1 s window mean of a(t)·e^{iθ(t)}; a window straddling a
        // vertex still leaks up to about slope/ω = 2.3e-3 A via the image bin
        let (mut re, mut im) = (0.0, 0.0);
        for j in 0..1000 {
            let u = t + j as f64 * 1e-3;
            let (a, th) = (sc.excitation.amplitude.eval(u), sc.excitation.phase.eval(u));
            re += a * th.cos() / 1000.0;
            im += a * th.sin() / 1000.0;
        }
        let mean = re.hypot(im);
        assert!(
            (r.amplitude() - mean).abs() < 2.5e-3,
            "t = {t}: {} vs {mean}",
            r.amplitude()
        );
    }
}

#[test]
fn ingest_ignores_column_order() {
    let out = short_run();
    let (header, rows) = read_csv(&out.join(PHASOR_FILE));
    let order = [4, 2, 0, 3, 1];
    let dir = tempfile::tempdir().unwrap();
    let shuffled = dir.path().join("shuffled.csv");
    let mut w = csv::Writer::from_path(&shuffled).unwrap();
    w.write_record(order.iter().map(|&i| &header[i])).unwrap();
    for r in &rows {
        w.write_record(order.iter().map(|&i| &r[i])).unwrap();
    }
    w.flush().unwrap();
    for source in [Source::Calibration, Source::Train, Source::Test] {
        assert_eq!(
            ingest_phasors(&shuffled, source).unwrap(),
            ingest_phasors(&out.join(PHASOR_FILE), source).unwrap()
        );
    }
}

#[test]
fn stages_restart_from_persisted_files() {
    let src = short_run();
    let dir = tempfile::tempdir().unwrap();
    for f in [PHASOR_FILE, "calibration.csv", "identification.csv"] {
        std::fs::copy(src.join(f), dir.path().join(f)).unwrap();
    }
    let cfg = PipelineConfig {
        out_dir: dir.path().to_path_buf(),
        ..PipelineConfig::default()
    };
    run_stage(Stage::Heal, &cfg).unwrap();
    assert_eq!(
        std::fs::read(src.join("current.csv")).unwrap(),
        std::fs::read(dir.path().join("current.csv")).unwrap()
    );
    match run_stage(Stage::Monitor, &cfg) {
        Err(Error::Stage { stage, .. }) => assert_eq!(stage, "monitor"),
        other => panic!("expected a monitor failure, got {other:?}"),
    }
}
