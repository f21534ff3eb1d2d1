use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;

use covasym::estimate::{summary_from_csv, summary_to_csv, StatisticSeries};
use covasym_cli::report::{
    from_json, to_json, FitReport, IndicatorRegime, IndicatorReport, MomentsReport,
    PredictionReport, VerifyReport,
};
use serde::de::DeserializeOwned;
use serde::Serialize;
use tempfile::TempDir;

const ZETA_3: f64 = 1.202_056_903_159_594_2;

fn run(args: &[&str], out: &Path) -> i32 {
    let mut full = vec!["covasym"];
    full.extend_from_slice(args);
    let out = out.display().to_string();
    full.extend_from_slice(&["--out", &out]);
    covasym_cli::run(full)
}

/// Reads a report and checks that re-emitting it reproduces the file byte for byte.
fn read_report<T: DeserializeOwned + Serialize>(path: &Path) -> T {
    let text = std::fs::read_to_string(path).unwrap();
    let report: T = from_json(&text).unwrap();
    assert_eq!(to_json(&report).unwrap(), text, "{}", path.display());
    report
}

#[test]
fn predict_reports_leading_terms() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        run(
            &[
                "predict",
                "--kernel",
                "ginibre",
                "--function",
                "gaussian-bump"
            ],
            dir.path()
        ),
        0
    );
    let report: PredictionReport = read_report(&dir.path().join("prediction.json"));
    assert_eq!(report.exponent, 0);
    assert!((report.constant - 0.25).abs() < 1e-6);

    // Poisson: λ L^d ‖f‖² with ‖f‖² = π for the unit-width bump in the plane
    assert_eq!(
        run(
            &[
                "predict",
                "--kernel",
                "poisson:d=2,lambda=1",
                "--function",
                "gaussian-bump",
                "--L",
                "4,8"
            ],
            dir.path()
        ),
        0
    );
    let report: PredictionReport = read_report(&dir.path().join("prediction.json"));
    assert_eq!(report.exponent, 2);
    assert!((report.constant - PI).abs() < 1e-9);
    for check in &report.checks {
        assert!((check.exact - check.leading).abs() < 1e-8 * check.leading);
    }

    // GEF: ζ(3)/(16π) ‖Δf‖², and ‖Δf‖² = 2π for the unit-width bump
    assert_eq!(
        run(
            &["predict", "--kernel", "gef", "--function", "gaussian-bump"],
            dir.path()
        ),
        0
    );
    let report: PredictionReport = read_report(&dir.path().join("prediction.json"));
    assert_eq!(report.exponent, -2);
    assert!(
        (report.constant - ZETA_3 / 8.0).abs() < 1e-6,
        "{}",
        report.constant
    );
}

#[test]
fn bad_names_are_domain_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        run(
            &["predict", "--kernel", "cox", "--function", "gaussian-bump"],
            dir.path()
        ),
        2
    );
    assert_eq!(
        run(
            &["predict", "--kernel", "ginibre", "--function", "sinc"],
            dir.path()
        ),
        2
    );
    assert_eq!(run(&["predict", "--kernel", "ginibre"], dir.path()), 2);
    assert_eq!(
        run(
            &[
                "predict",
                "--kernel",
                "ginibre",
                "--function",
                "gaussian-bump:d=1"
            ],
            dir.path()
        ),
        2
    );
    assert_eq!(run(&["verify", "nonsense"], dir.path()), 2);
    assert!(!dir.path().join("prediction.json").exists());
}

#[test]
fn simulate_writes_reproducible_outputs() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let args = [
        "simulate",
        "--process",
        "poisson:d=2,lambda=1",
        "--function",
        "unit-cube",
        "--L",
        "2,4,8",
        "--reps",
        "200",
        "--seed",
        "9",
    ];
    assert_eq!(run(&args, a.path()), 0);
    assert_eq!(run(&args, b.path()), 0);
    for name in ["series.csv", "summary.csv", "fit.json"] {
        let left = std::fs::read(a.path().join(name)).unwrap();
        let right = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(left, right, "{name}");
    }

    let report: FitReport = read_report(&a.path().join("fit.json"));
    assert_eq!(report.replicates, 200);
    assert!(report.fit.is_some());
    let summary_text = std::fs::read_to_string(a.path().join("summary.csv")).unwrap();
    let summary = summary_from_csv(&summary_text).unwrap();
    assert_eq!(summary_to_csv(&summary).unwrap(), summary_text);
    assert_eq!(summary, report.summary);
    let series_text = std::fs::read_to_string(a.path().join("series.csv")).unwrap();
    let series = StatisticSeries::from_csv(
        &series_text,
        report.process.clone(),
        report.function.clone(),
        vec![],
    )
    .unwrap();
    assert_eq!(series.to_csv().unwrap(), series_text);
    assert_eq!(series.replicates(), 200);
}

#[test]
fn support_violation_reports_admissible_scale() {
    let dir = TempDir::new().unwrap();
    let binary = env!("CARGO_BIN_EXE_covasym");
    let output = Command::new(binary)
        .args([
            "simulate",
            "--process",
            "ginibre:n=16",
            "--function",
            "gaussian-bump",
            "--L",
            "2",
            "--reps",
            "5",
        ])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    // usable radius √16 − 3 = 1 over the bump's support radius
    let admissible = 1.0
        / covasym::expansion::TestFunction::gaussian(2, 1.0)
            .unwrap()
            .support_radius();
    assert!(stderr.contains("largest admissible L"), "{stderr}");
    assert!(stderr.contains(&format!("{admissible:.6}")), "{stderr}");
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let binary = env!("CARGO_BIN_EXE_covasym");
    let status = |args: &[&str]| {
        Command::new(binary)
            .args(args)
            .arg("--out")
            .arg(dir.path())
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(status(&["verify", "qm-reduction"]), Some(0));
    let report: VerifyReport = read_report(&dir.path().join("verify.json"));
    assert!(report.passed);
    assert!(report.checks.iter().all(|c| c.defect < 1e-12));

    assert_eq!(
        status(&["verify", "integral-identity-nonprojection"]),
        Some(0)
    );
    let report: VerifyReport = read_report(&dir.path().join("verify.json"));
    let marker = report.checks.iter().find(|c| c.expected_failure).unwrap();
    assert!(marker.passed && marker.defect > 1e-3);

    assert_eq!(status(&["verify", "integral-identity-discrete"]), Some(0));
    let report: VerifyReport = read_report(&dir.path().join("verify.json"));
    assert!(report
        .checks
        .iter()
        .filter(|c| !c.expected_failure)
        .all(|c| c.defect == 0.0));

    // a tolerance below rounding makes the floating-point checks fail
    assert_eq!(status(&["verify", "dpp", "--tol", "1e-300"]), Some(3));
    let report: VerifyReport = read_report(&dir.path().join("verify.json"));
    assert!(!report.passed);
}

#[test]
fn indicator_limits() {
    let dir = TempDir::new().unwrap();
    let limit = |args: &[&str]| {
        assert_eq!(run(args, dir.path()), 0);
        read_report::<IndicatorReport>(&dir.path().join("indicator.json"))
    };
    let same = limit(&[
        "indicator",
        "--kernel",
        "ginibre",
        "--domain-a",
        "disc 0 0 1",
    ]);
    assert_eq!(same.regime, IndicatorRegime::Surface);
    assert!((same.limit - 1.0 / PI.sqrt()).abs() < 1e-8);
    let paired = limit(&[
        "indicator",
        "--kernel",
        "ginibre",
        "--domain-a",
        "disc 0 0 1",
        "--domain-b",
        "annulus 0 0 1 2",
    ]);
    assert!((paired.limit + 1.0 / PI.sqrt()).abs() < 1e-8);
    let apart = limit(&[
        "indicator",
        "--kernel",
        "ginibre",
        "--domain-a",
        "disc 0 0 1",
        "--domain-b",
        "disc 5 0 1",
    ]);
    assert_eq!(apart.limit, 0.0);
    let poisson = limit(&[
        "indicator",
        "--kernel",
        "poisson",
        "--domain-a",
        "disc 0 0 1",
    ]);
    assert_eq!(poisson.regime, IndicatorRegime::Volume);
    assert!((poisson.limit - PI).abs() < 1e-9);
    assert!(poisson.message.contains("volume order"));
}

#[test]
fn indicator_monte_carlo_comparison() {
    let dir = TempDir::new().unwrap();
    let args = [
        "indicator",
        "--kernel",
        "poisson",
        "--domain-a",
        "disc 0 0 1",
        "--process",
        "poisson",
        "--L",
        "2,4",
        "--reps",
        "400",
    ];
    assert_eq!(run(&args, dir.path()), 0);
    let report: IndicatorReport = read_report(&dir.path().join("indicator.json"));
    assert_eq!(report.monte_carlo.len(), 2);
    for row in &report.monte_carlo {
        let half = (row.ci_hi - row.ci_lo) / 2.0;
        assert!((row.normalized - PI).abs() < 3.0 * half / 1.96, "{row:?}");
    }
    let mismatched = [
        "indicator",
        "--kernel",
        "poisson",
        "--domain-a",
        "disc 0 0 1",
        "--domain-b",
        "disc 0 0 2",
        "--process",
        "poisson",
        "--L",
        "2",
        "--reps",
        "10",
    ];
    assert_eq!(run(&mismatched, dir.path()), 2);
}

#[test]
fn moments_report() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        run(
            &["moments", "--kernel", "ginibre", "--order", "2"],
            dir.path()
        ),
        0
    );
    let report: MomentsReport = read_report(&dir.path().join("moments.json"));
    let i0 = report
        .moments
        .iter()
        .find(|m| m.gamma == [0, 0])
        .unwrap()
        .value;
    assert!((i0 + 1.0 / PI).abs() < 1e-11);
    assert!(report.defect.abs() < 1e-11);
    assert_eq!(
        run(
            &["moments", "--kernel", "ginibre", "--order", "20"],
            dir.path()
        ),
        2
    );
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("run.conf");
    std::fs::write(
        &config,
        "# small Poisson run\nprocess = poisson:d=1,lambda=2\nfunction = unit-cube:d=1\nL = 1, 2, 4\nreps = 50\nseed = 3\n",
    )
    .unwrap();
    let config_arg = config.display().to_string();
    assert_eq!(
        run(
            &["simulate", "--config", &config_arg, "--reps", "60"],
            dir.path()
        ),
        0
    );
    let report: FitReport = read_report(&dir.path().join("fit.json"));
    assert_eq!(report.replicates, 60);
    assert_eq!(report.seed, 3);
    assert_eq!(report.process, "poisson:d=1,lambda=2");

    std::fs::write(&config, "process = poisson\ncolour = red\n").unwrap();
    assert_eq!(run(&["simulate", "--config", &config_arg], dir.path()), 2);
}
