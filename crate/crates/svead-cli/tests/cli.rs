//! End-to-end tests of the `svead` binary: flag surface, file formats,
//! exit codes and determinism contracts.

use std::path::Path;
use std::process::{Command, Output};

fn svead(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_svead"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn synth_to(dir: &Path, regime: &str, seed: u64, extra: &[&str]) -> std::path::PathBuf {
    let path = dir.join(format!("{regime}-{seed}.csv"));
    let mut args = vec![
        "synth".to_string(),
        format!("--regime={regime}"),
        format!("--seed={seed}"),
        format!("--out={}", path.display()),
    ];
    args.extend(extra.iter().map(|s| s.to_string()));
    let out = Command::new(env!("CARGO_BIN_EXE_svead"))
        .args(&args)
        .output()
        .unwrap();
    assert!(out.status.success(), "synth failed: {}", stderr(&out));
    path
}

#[test]
fn synth_writes_expected_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let s1 = synth_to(dir.path(), "s1", 7, &[]);
    let text = std::fs::read_to_string(&s1).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 300);
    assert_eq!(lines[0].split(',').count(), 3); // x, y, label
    let anomalies = lines.iter().filter(|l| l.ends_with(",1")).count();
    assert_eq!(anomalies, 30);

    let td = synth_to(
        dir.path(),
        "two-density",
        3,
        &["--n-dense=50", "--n-sparse=40", "--scale-ratio=2"],
    );
    let text = std::fs::read_to_string(&td).unwrap();
    assert_eq!(text.lines().count(), 90);
    assert_eq!(text.lines().next().unwrap().split(',').count(), 2); // unlabeled
}

#[test]
fn score_is_deterministic_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_to(dir.path(), "s2", 11, &[]);
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");

    let run = |out: &Path, threads: &str| {
        let res = svead(&[
            "--threads",
            threads,
            "score",
            "--input",
            data.to_str().unwrap(),
            "--label-col",
            "last",
            "--m",
            "16",
            "--t",
            "100",
            "--seed",
            "7",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(res.status.success(), "{}", stderr(&res));
    };
    run(&out_a, "1");
    run(&out_b, "2");
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert_eq!(a, b, "score files differ across thread counts");

    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 301);
    assert_eq!(
        text.lines().next().unwrap(),
        "index,score,contributions,label"
    );
}

#[test]
fn oversized_anchor_count_warns_and_proceeds() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_to(dir.path(), "s1", 5, &[]);
    let out = svead(&[
        "score",
        "--input",
        data.to_str().unwrap(),
        "--m",
        "1000",
        "--t",
        "5",
        "--out",
        dir.path().join("scores.csv").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(
        stderr(&out).contains("m clamped to 300"),
        "missing clamp warning in: {}",
        stderr(&out)
    );
}

#[test]
fn eval_emits_machine_readable_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_to(dir.path(), "s1", 9, &[]);
    let out = svead(&[
        "eval",
        "--input",
        data.to_str().unwrap(),
        "--runs",
        "5",
        "--seed",
        "1",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let roc: Vec<&str> = lines[0].split(',').collect();
    assert_eq!(roc[0], "auc_roc");
    let mean: f64 = roc[1].parse().unwrap();
    assert!(mean >= 0.95, "S1 auc_roc {mean} below 0.95");
    assert!(lines[1].starts_with("auc_pr,"));
}

#[test]
fn eval_single_run_reports_zero_std() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_to(dir.path(), "s3", 2, &[]);
    let out = svead(&[
        "eval",
        "--input",
        data.to_str().unwrap(),
        "--runs",
        "1",
        "--t",
        "20",
    ]);
    assert!(out.status.success());
    for line in stdout(&out).lines() {
        let std_field: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(std_field, 0.0);
    }
}

#[test]
fn eval_without_labels_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_to(
        dir.path(),
        "two-density",
        2,
        &["--n-dense=20", "--n-sparse=20"],
    );
    let out = svead(&[
        "eval",
        "--input",
        data.to_str().unwrap(),
        "--label-col",
        "none",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("no labels"), "{}", stderr(&out));
}

#[test]
fn degenerate_labels_fail_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("allnormal.csv");
    let rows: String = (0..20).map(|i| format!("{i},{},0\n", i * 2)).collect();
    std::fs::write(&path, rows).unwrap();
    let out = svead(&["eval", "--input", path.to_str().unwrap(), "--t", "5"]);
    assert!(!out.status.success());
    assert!(
        stderr(&out).contains("metric undefined"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn malformed_csv_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "1,x,0\n").unwrap();
    let out = svead(&["score", "--input", path.to_str().unwrap()]);
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(err.contains("row 1") && err.contains("column 2"), "{err}");
}

#[test]
fn sweep_single_cell_emits_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_to(dir.path(), "s1", 3, &[]);
    let out = svead(&[
        "sweep",
        "--input",
        data.to_str().unwrap(),
        "--m-grid",
        "16",
        "--t-grid",
        "50",
        "--runs",
        "2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "m,t,auc_roc_mean,auc_roc_std,auc_pr_mean,auc_pr_std"
    );
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("16,50,"));
}

#[test]
fn contaminate_native_rate_matches_eval() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_to(dir.path(), "s1", 13, &[]);
    // 30 anomalies / 270 normals: native rate 0.10 needs exactly the
    // available anomalies, so no subsampling happens.
    let eval_out = svead(&[
        "eval",
        "--input",
        data.to_str().unwrap(),
        "--runs",
        "2",
        "--t",
        "50",
        "--seed",
        "4",
    ]);
    let contaminate_out = svead(&[
        "contaminate",
        "--input",
        data.to_str().unwrap(),
        "--rates",
        "0.10",
        "--runs",
        "2",
        "--t",
        "50",
        "--seed",
        "4",
    ]);
    assert!(
        contaminate_out.status.success(),
        "{}",
        stderr(&contaminate_out)
    );
    let eval_roc: String = stdout(&eval_out)
        .lines()
        .next()
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .to_string();
    let text = stdout(&contaminate_out);
    let row: Vec<String> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    assert_eq!(row[0], "0.1");
    assert_eq!(
        row[1], eval_roc,
        "native-rate contamination must equal eval"
    );
    assert_eq!(row[3], "ok");
}

#[test]
fn contaminate_subsamples_and_flags_unachievable_rates() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_to(dir.path(), "s1", 17, &[]);
    let out = svead(&[
        "contaminate",
        "--input",
        data.to_str().unwrap(),
        "--rates",
        "0.05,0.30",
        "--runs",
        "2",
        "--t",
        "20",
    ]);
    // 0.30 needs 116 anomalies, only 30 exist: error row + nonzero exit.
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "rate,auc_roc_mean,auc_roc_std,status");
    assert!(lines[1].starts_with("0.05,") && lines[1].ends_with(",ok"));
    assert!(lines[2].starts_with("0.3,nan,nan,error"), "{}", lines[2]);
}

/// Contamination robustness on an easy global-anomaly set: going from 5%
/// to 30% anomalies barely moves AUC-ROC.
#[test]
fn contamination_degradation_stays_small() {
    let dir = tempfile::tempdir().unwrap();
    // Assemble a 30%+ contaminated variant of the global regime: normals
    // from one draw plus the anomaly rows of several more draws.
    let base = synth_to(dir.path(), "s1", 31, &[]);
    let mut csv = std::fs::read_to_string(&base).unwrap();
    for seed in [32u64, 33, 34, 35] {
        let extra = synth_to(dir.path(), "s1", seed, &[]);
        for line in std::fs::read_to_string(&extra).unwrap().lines() {
            if line.ends_with(",1") {
                csv.push_str(line);
                csv.push('\n');
            }
        }
    }
    let augmented = dir.path().join("s1-augmented.csv");
    std::fs::write(&augmented, csv).unwrap();

    let out = svead(&[
        "contaminate",
        "--input",
        augmented.to_str().unwrap(),
        "--rates",
        "0.05,0.10,0.20,0.30",
        "--runs",
        "3",
        "--t",
        "50",
        "--seed",
        "2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let aucs: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| {
            let cells: Vec<&str> = l.split(',').collect();
            assert_eq!(cells[3], "ok", "{l}");
            cells[1].parse().unwrap()
        })
        .collect();
    assert_eq!(aucs.len(), 4);
    let degradation = aucs[0] - aucs[3];
    assert!(
        degradation.abs() <= 0.05,
        "AUC moved by {degradation} between 5% and 30% contamination"
    );
}

/// Sensitivity shape: on the local-anomaly regime the anchor count moves
/// AUC far more than the ensemble size does.
#[test]
fn anchor_count_drives_sensitivity_more_than_ensemble_size() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_to(dir.path(), "s2", 8, &[]);

    let mean_aucs = |args: &[&str]| -> Vec<f64> {
        let mut full = vec![
            "sweep",
            "--input",
            data.to_str().unwrap(),
            "--runs",
            "2",
            "--seed",
            "6",
        ];
        full.extend_from_slice(args);
        let out = svead(&full);
        assert!(out.status.success(), "{}", stderr(&out));
        stdout(&out)
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
            .collect()
    };

    let over_m = mean_aucs(&["--m-grid", "2,4,8,16,32,64,128,256", "--t-grid", "100"]);
    let over_t = mean_aucs(&["--m-grid", "16", "--t-grid", "25,50,100,200"]);
    let range = |v: &[f64]| {
        v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - v.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    assert!(
        range(&over_m) > range(&over_t),
        "m-range {} vs t-range {}",
        range(&over_m),
        range(&over_t)
    );
}

#[test]
fn bench_single_size_has_no_slope() {
    let out = svead(&[
        "bench", "--n-list", "2000", "--d-list", "4", "--m", "16", "--t", "5",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,d,seconds");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("2000,4,"));
    assert!(!stderr(&out).contains("slope"));
}

#[test]
fn bench_multiple_sizes_reports_slope() {
    let out = svead(&[
        "bench",
        "--n-list",
        "1000,2000,4000",
        "--d-list",
        "4",
        "--m",
        "16",
        "--t",
        "5",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 4);
    assert!(stderr(&out).contains("log-log slope"), "{}", stderr(&out));
}

/// Scoring variant ablation through the CLI: planted boundary points of a
/// sparse blob outscore those of a dense blob under dual-factor scoring,
/// while position-only scoring cannot tell them apart.
#[test]
fn variant_flag_changes_discrimination() {
    let dir = tempfile::tempdir().unwrap();
    let base = synth_to(dir.path(), "two-density", 21, &[]);

    // Append 20 boundary points per blob (3 sigma circles; centers and
    // spreads per the generator's documented constants).
    let mut csv = std::fs::read_to_string(&base).unwrap();
    let per_side = 20;
    for i in 0..per_side {
        let angle = std::f64::consts::TAU * i as f64 / per_side as f64;
        csv.push_str(&format!("{},{}\n", 3.0 * angle.cos(), 3.0 * angle.sin()));
    }
    for i in 0..per_side {
        let angle = std::f64::consts::TAU * (i as f64 + 0.5) / per_side as f64;
        csv.push_str(&format!(
            "{},{}\n",
            80.0 + 12.0 * angle.cos(),
            12.0 * angle.sin()
        ));
    }
    let planted = dir.path().join("planted.csv");
    std::fs::write(&planted, csv).unwrap();

    let scores_for = |variant: &str, seed: &str| -> Vec<f64> {
        let out_path = dir.path().join(format!("{variant}-{seed}.csv"));
        let out = svead(&[
            "score",
            "--input",
            planted.to_str().unwrap(),
            "--variant",
            variant,
            "--m",
            "16",
            "--t",
            "100",
            "--seed",
            seed,
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        let text = std::fs::read_to_string(&out_path).unwrap();
        text.lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect()
    };

    let auc_planted = |scores: &[f64]| {
        let n = scores.len();
        let dense = &scores[n - 2 * per_side..n - per_side];
        let sparse = &scores[n - per_side..];
        let mut wins = 0.0;
        for &s in sparse {
            for &d in dense {
                if s > d {
                    wins += 1.0;
                } else if s == d {
                    wins += 0.5;
                }
            }
        }
        wins / (per_side * per_side) as f64
    };

    let seeds = ["3", "4", "5"];
    let avg = |variant: &str| {
        seeds
            .iter()
            .map(|s| auc_planted(&scores_for(variant, s)))
            .sum::<f64>()
            / seeds.len() as f64
    };
    let dual = avg("dual-factor");
    let position = avg("position-only");
    assert!(dual >= 0.9, "dual-factor auc {dual}");
    assert!(position <= 0.7, "position-only auc {position}");
}
