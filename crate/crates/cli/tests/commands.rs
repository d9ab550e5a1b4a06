use std::process::{Command, Output};

fn qdimer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdimer"))
        .args(args)
        .output()
        .expect("run qdimer")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, col: usize) -> Vec<f64> {
    csv.lines()
        .skip(2)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').nth(col).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn spectrum_examples() {
    let o = qdimer(&["spectrum", "--model", "al", "--two-j", "2", "--gamma", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    let echo = lines.next().unwrap();
    assert!(echo.starts_with("# command=spectrum model=al two_j=2"));
    assert!(echo.contains("gamma=2.0000000000000000e0"));
    assert_eq!(lines.next().unwrap(), "index,eigenvalue,norm_constant,chain_energy");
    let ev = column(&text, 1);
    let r = (2.0f64 * (0.5f64.sqrt() + 2f64.sqrt())).sqrt();
    assert!((ev[0] + r).abs() < 1e-12 && ev[1].abs() < 1e-12 && (ev[2] - r).abs() < 1e-12);

    let ev = column(&stdout(&qdimer(&["spectrum", "--model", "dnls", "--two-j", "2", "--gamma", "0"])), 1);
    assert!((ev[0] + 2.0).abs() < 1e-13 && ev[1].abs() < 1e-13 && (ev[2] - 2.0).abs() < 1e-13);
    let ev = column(&stdout(&qdimer(&["spectrum", "--model", "dnls", "--two-j", "1", "--gamma", "4"])), 1);
    assert!((ev[0] + 0.5).abs() < 1e-13 && (ev[1] - 1.5).abs() < 1e-13);
}

#[test]
fn cells_have_seventeen_significant_digits() {
    let text = stdout(&qdimer(&["spectrum", "--model", "al", "--two-j", "3", "--gamma", "1.5"]));
    for line in text.lines().skip(2) {
        for cell in line.split(',').skip(1) {
            let mantissa = cell.trim_start_matches('-').split('e').next().unwrap();
            assert_eq!(mantissa.replace('.', "").len(), 17, "{cell}");
        }
    }
    assert!(!text.contains('\r'));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["spectrum", "--model", "xx", "--two-j", "1", "--gamma", "1"][..],
        &["spectrum", "--two-j", "1"],
        &["spectrum", "--two-j", "2", "--gamma", "1", "--epsilon", "0"],
        &["spectrum", "--model", "al", "--two-j", "2", "--gamma", "-3"],
        &["sweep", "--two-j", "2", "--gamma-min", "1", "--gamma-max", "1", "--steps", "4"],
        &["sweep", "--two-j", "2", "--gamma-min", "0", "--gamma-max", "1", "--steps", "4", "--scale", "log"],
        &["gaps", "--two-j", "2", "--pairs", "2"],
        &["spectrum", "--two-j", "2", "--gamma", "1", "--tol", "0"],
        &["verify", "--two-j-max", "0"],
    ] {
        let o = qdimer(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn sweep_layout_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let args = [
        "sweep", "--model", "al", "--two-j", "4", "--gamma-min", "0.5", "--gamma-max", "8", "--steps", "5", "--scale",
        "log",
    ];
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let o = qdimer(&with_out);
    assert!(o.status.success() && o.stdout.is_empty());
    let file = std::fs::read_to_string(&path).unwrap();
    assert_eq!(file, stdout(&qdimer(&args)));
    let mut lines = file.lines();
    assert!(lines.next().unwrap().contains("scale=log"));
    assert_eq!(
        lines.next().unwrap(),
        "gamma,chain_scale,chain_shift,lambda_0,lambda_1,lambda_2,lambda_3,lambda_4"
    );
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][0], 0.5);
    assert_eq!(rows[4][0], 8.0);
    for r in &rows {
        assert!(r[3..].windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn gaps_report_steepest_change() {
    let text = stdout(&qdimer(&["gaps", "--two-j", "6"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "gamma,ln_gamma,gap_1,ln_gap_1,slope_1,gap_2,ln_gap_2,slope_2");
    assert_eq!(lines.len(), 2 + 25 + 2);
    assert!(lines[27].starts_with("# steepest_change pair=1 gamma="));
    // Endpoints carry no slope.
    assert!(lines[2].split(',').nth(4).unwrap().is_empty());
    assert!(!lines[3].split(',').nth(4).unwrap().is_empty());
}

#[test]
fn quanta_scan_rows() {
    let text = stdout(&qdimer(&["quanta-scan", "--two-j-max", "5", "--levels", "3"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "two_j,energy_0,energy_1,energy_2");
    assert_eq!(lines.len(), 7);
    // Two levels only for a single quantum.
    assert!(lines[2].ends_with(','));
    let first: Vec<f64> = lines[2].split(',').take(3).map(|c| c.parse().unwrap()).collect();
    assert_eq!(first[0], 1.0);
    assert!((first[1] - 1.0).abs() < 1e-12 && (first[2] - 3.0).abs() < 1e-12);
}

#[test]
fn verify_exit_codes() {
    let o = qdimer(&["verify", "--suite", "algebra", "--max-quanta", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().all(|l| l.starts_with("suite=") || l.starts_with("summary ")));
    assert!(text.ends_with("status=pass\n"));

    let o = qdimer(&["verify", "--suite", "spectral", "--two-j-max", "12", "--inject-failure"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("status=fail"));

    let o = qdimer(&["verify", "--suite", "conservation", "--max-quanta", "2", "--inject-failure"]);
    assert_eq!(o.status.code(), Some(1));

    let o = qdimer(&["verify", "--help"]);
    assert!(!stdout(&o).contains("inject"));
}
