use std::fs;
use std::process::{Command, Output};

fn ocb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ocb"))
        .args(args)
        .env("OCB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn data_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(2)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn sweep_writes_one_row_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("case2.csv");
    let o = ocb(&[
        "sweep",
        "--case",
        "II",
        "--db-min",
        "-10",
        "--db-max",
        "60",
        "--steps",
        "141",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# schema=1"));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 141);
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let (lo, hi, gap) = (col("envelope_lower"), col("envelope_upper"), col("gap"));
    for r in &rows {
        assert_eq!(r.len(), header.len());
        assert!((r[gap] - (r[hi] - r[lo])).abs() < 1e-9);
        assert!(r[gap] >= -1e-9);
    }
}

#[test]
fn sweep_output_is_byte_identical() {
    let args = [
        "sweep", "--case", "I", "--alpha", "0.1", "--db-min", "0", "--db-max", "20", "--steps", "9",
    ];
    let a = ocb(&args);
    let b = ocb(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn case_one_gap_matches_figure() {
    let o = ocb(&[
        "sweep", "--case", "I", "--alpha", "0.1", "--db-min", "8", "--db-max", "13", "--steps", "21",
    ]);
    let text = String::from_utf8(o.stdout).unwrap();
    let header: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let gap = header.iter().position(|h| *h == "gap").unwrap();
    let best = data_rows(&text).iter().map(|r| r[gap]).fold(0.0, f64::max);
    assert!((best - 0.68).abs() < 0.02, "{best}");
}

#[test]
fn usage_errors_exit_nonzero() {
    for args in [
        vec!["sweep", "--case", "II", "--db-min", "10", "--db-max", "0"],
        vec!["sweep", "--case", "II", "--steps", "1"],
        vec!["sweep", "--case", "I"],
        vec!["sweep", "--case", "IV"],
        vec!["sweep", "--case", "I", "--alpha", "0.7"],
        vec!["figure", "6"],
    ] {
        let o = ocb(&args);
        assert!(!o.status.success(), "{args:?} should fail");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn alpha_is_ignored_with_a_warning_outside_case_one() {
    let o = ocb(&[
        "sweep", "--case", "III", "--alpha", "0.3", "--db-min", "0", "--db-max", "1", "--steps", "2",
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.conf");
    fs::write(
        &cfg,
        "# defaults\ncase = II\ndb_min = 0\ndb-max = 10\nsteps = 5\nsigma = 2\n",
    )
    .unwrap();
    let o = ocb(&["sweep", "--config", cfg.to_str().unwrap(), "--steps", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = data_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][1], 0.0);
    assert_eq!(rows[2][1], 10.0);

    fs::write(&cfg, "case = II\nbogus = 1\n").unwrap();
    assert!(!ocb(&["sweep", "--config", cfg.to_str().unwrap()]).status.success());
}

#[test]
fn amplitude_convention_halves_the_ratio_exponent() {
    let o = ocb(&[
        "sweep",
        "--case",
        "II",
        "--db-min",
        "0",
        "--db-max",
        "20",
        "--steps",
        "2",
        "--db-convention",
        "amplitude",
    ]);
    let rows = data_rows(&String::from_utf8(o.stdout).unwrap());
    assert!((rows[1][0] - 10.0).abs() < 1e-9);
}

#[test]
fn figure_four_has_the_alpha_three_quarters_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig4.csv");
    let o = ocb(&["figure", "4", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    let row = text.lines().find(|l| l.starts_with("0.75,")).unwrap();
    let chi: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((chi + 1.41894).abs() < 1e-5);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("chi_min="));
}

#[test]
fn figure_summary_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig3.csv");
    let o = ocb(&["figure", "3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let line = String::from_utf8(o.stdout).unwrap();
    let (g, db) = line
        .trim()
        .strip_prefix("max_gap_nats=")
        .unwrap()
        .split_once(" at_db=")
        .unwrap();
    assert!((g.parse::<f64>().unwrap() - 0.50).abs() < 0.02, "{line}");
    assert!((db.parse::<f64>().unwrap() - 6.4).abs() <= 1.0, "{line}");
}

#[test]
fn verify_lemmas_passes_with_one_line_per_check() {
    let o = ocb(&["verify", "lemmas"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let checks: Vec<&str> = text.lines().filter(|l| l.starts_with("check ")).collect();
    assert!(checks.len() >= 10);
    assert!(checks.iter().all(|l| l.contains("status=pass")));
    assert!(text.contains("summary passed="));
}

#[test]
fn verify_asymptotics_reports_the_known_failure() {
    let o = ocb(&["verify", "asymptotics"]);
    assert!(!o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let failing: Vec<&str> = text.lines().filter(|l| l.contains("status=fail")).collect();
    assert_eq!(failing.len(), 1, "{text}");
    assert!(failing[0].contains("low_snr_case3_bracket_40db"));
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_ocb"))
        .args(["verify", "lemmas"])
        .env("OCB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
