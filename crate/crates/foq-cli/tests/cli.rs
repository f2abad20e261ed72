//! Process-level contract of the `foq` binary: flags, exit codes, output
//! encodings, and the sample-file loader.

use std::path::PathBuf;
use std::process::{Command, Output};

use foq_cli::output::{fmt_f64, CoefficientDocument, IntegrateDocument, NormDocument};
use foq_cli::PROFILE_ENV;

fn foq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foq"))
        .args(args)
        .env_remove(PROFILE_ENV)
        .output()
        .expect("binary spawns")
}

fn foq_with_profile(args: &[&str], profile: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foq"))
        .args(args)
        .env(PROFILE_ENV, profile)
        .output()
        .expect("binary spawns")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn zero_frequency_coefficients_match_the_documented_example() {
    let output = foq(&["coeffs", "--omega", "0", "--nodes", "2"]);
    assert_eq!(exit_code(&output), 0);
    let doc: CoefficientDocument = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc.generator, "closed-form");
    assert_eq!(doc.n_intervals, 2);
    let expected = [0.24491866240370913, 0.48983732480741827, 0.24491866240370913];
    for (c, e) in doc.coefficients.iter().zip(expected) {
        assert!((c.re - e).abs() <= 1e-15, "{} vs {e}", c.re);
        assert_eq!(c.im, 0.0);
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(exit_code(&foq(&[])), 2);
    assert_eq!(exit_code(&foq(&["coeffs", "--nodes", "2"])), 2);
    assert_eq!(exit_code(&foq(&["coeffs", "--omega", "1", "--nodes", "0"])), 2);
    assert_eq!(
        exit_code(&foq(&[
            "coeffs", "--omega", "1", "--nodes", "2", "--interval", "2", "1"
        ])),
        2
    );
    assert_eq!(exit_code(&foq(&["integrate", "--omega", "1"])), 2);
    assert_eq!(
        exit_code(&foq(&[
            "integrate", "--omega", "1", "--nodes", "4", "--function", "exp", "--samples",
            "x.csv"
        ])),
        2
    );
    assert_eq!(
        exit_code(&foq(&[
            "integrate", "--omega", "1", "--nodes", "4", "--function", "sinc"
        ])),
        2
    );
    assert_eq!(
        exit_code(&foq(&[
            "convergence", "--omega", "1", "--min-nodes", "10", "--max-nodes", "40", "--factor",
            "1"
        ])),
        2
    );
    assert_eq!(
        exit_code(&foq(&[
            "convergence", "--omega", "1", "--min-nodes", "40", "--max-nodes", "10"
        ])),
        2
    );
    assert_eq!(exit_code(&foq(&["validate", "--omega", "1"])), 2);
    assert_eq!(
        exit_code(&foq_with_profile(&["validate", "--omega", "1", "--nodes", "4"], "loose")),
        2
    );
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(exit_code(&foq(&["--help"])), 0);
    assert_eq!(exit_code(&foq(&["--version"])), 0);
    assert_eq!(exit_code(&foq(&["coeffs", "--help"])), 0);
}

#[test]
fn missing_sample_file_exits_3() {
    let output = foq(&["integrate", "--omega", "1", "--samples", "/nonexistent/s.csv"]);
    assert_eq!(exit_code(&output), 3);
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("foq-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("temp file writes");
    path
}

#[test]
fn non_uniform_sample_files_are_rejected_as_usage_errors() {
    let path = temp_file("nonuniform.csv", "x,re,im\n0,1,0\n0.4,1,0\n1,1,0\n");
    let output = foq(&["integrate", "--omega", "1", "--samples", path.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 2);
    let diagnostics = String::from_utf8(output.stderr.clone()).unwrap();
    assert!(diagnostics.contains("not uniform"), "{diagnostics}");
    let _ = std::fs::remove_file(path);
}

#[test]
fn sampled_decay_exponential_integrates_exactly_from_a_file() {
    let n = 16usize;
    let mut contents = String::from("x,re,im\n");
    for k in 0..=n {
        let x = k as f64 / n as f64;
        contents.push_str(&format!("{},{},{}\n", fmt_f64(x), fmt_f64((-x).exp()), fmt_f64(0.0)));
    }
    let path = temp_file("expneg.csv", &contents);
    let output = foq(&[
        "integrate", "--omega", "0.7", "--samples", path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);
    let doc: IntegrateDocument = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc.n_intervals, n);
    let truth = foq_core::oracle::rhs_g0(foq_core::FourierWeight::new(0.7).unwrap());
    let err = ((doc.value.re - truth.re).powi(2) + (doc.value.im - truth.im).powi(2)).sqrt();
    assert!(err / truth.norm() <= 1e-12, "relative error {:.3e}", err / truth.norm());
    let _ = std::fs::remove_file(path);
}

#[test]
fn csv_and_json_outputs_carry_identical_numeric_text() {
    let args = ["coeffs", "--omega", "1.25", "--nodes", "3"];
    let json = stdout(&foq(&args));
    let csv = stdout(&foq(&[&args[..], &["--format", "csv"]].concat()));

    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,re,im");
    assert_eq!(lines.len(), 1 + 3 + 1);

    let doc: CoefficientDocument = serde_json::from_str(&json).unwrap();
    for c in &doc.coefficients {
        assert!(json.contains(&fmt_f64(c.re)) && csv.contains(&fmt_f64(c.re)));
        assert!(json.contains(&fmt_f64(c.im)) && csv.contains(&fmt_f64(c.im)));
    }
}

#[test]
fn norm_report_includes_brute_force_on_request() {
    let base = ["norm", "--omega", "1", "--nodes", "5"];
    let plain: NormDocument = serde_json::from_str(&stdout(&foq(&base))).unwrap();
    assert!(plain.brute_force.is_none());
    assert!(plain.norm_squared > 0.0);

    let with = stdout(&foq(&[&base[..], &["--brute-force"]].concat()));
    let doc: NormDocument = serde_json::from_str(&with).unwrap();
    let brute = doc.brute_force.expect("requested brute force");
    assert!((doc.norm_squared - brute).abs() <= 1e-8);
}

#[test]
fn integrate_with_bound_dominates_the_true_error_for_a_builtin() {
    let output = foq(&[
        "integrate", "--omega", "0", "--nodes", "200", "--function", "exp", "--with-bound",
    ]);
    assert_eq!(exit_code(&output), 0);
    let doc: IntegrateDocument = serde_json::from_str(&stdout(&output)).unwrap();
    let truth = std::f64::consts::E - 1.0;
    let err = ((doc.value.re - truth).powi(2) + doc.value.im.powi(2)).sqrt();
    let bound = doc.error_bound.expect("bound requested");
    assert!(err <= bound, "error {err:.3e} above bound {bound:.3e}");
    assert!(bound < 1e-2, "bound should be small at N=200, got {bound:.3e}");
    assert!(doc.seminorm.unwrap() > 0.0);
}

#[test]
fn single_case_validate_exits_0_and_reports_passing_cases() {
    let output = foq(&["validate", "--omega", "1", "--nodes", "10"]);
    assert_eq!(exit_code(&output), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["passed"], serde_json::Value::Bool(true));
    assert_eq!(report["profile"]["name"], "default");

    let strict = foq_with_profile(&["validate", "--omega", "1", "--nodes", "10"], "strict");
    assert_eq!(exit_code(&strict), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&strict)).unwrap();
    assert_eq!(report["profile"]["name"], "strict");
}

#[test]
fn convergence_emits_the_ladder_and_slope_in_both_formats() {
    let args = [
        "convergence", "--omega", "1", "--min-nodes", "10", "--max-nodes", "80", "--factor", "2",
    ];
    let json: serde_json::Value = serde_json::from_str(&stdout(&foq(&args))).unwrap();
    let rows = json["rows"].as_array().unwrap();
    let ns: Vec<u64> = rows.iter().map(|r| r["n_intervals"].as_u64().unwrap()).collect();
    assert_eq!(ns, vec![10, 20, 40, 80]);
    let slope = json["fitted_slope"].as_f64().unwrap();
    assert!(slope > 0.9 && slope < 1.1, "slope {slope}");

    let csv = stdout(&foq(&[&args[..], &["--format", "csv"]].concat()));
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("n_intervals,h,norm,err_"));
    assert!(lines.last().unwrap().starts_with("fitted_slope,"));
    assert!(csv.contains(&fmt_f64(slope)));
}
