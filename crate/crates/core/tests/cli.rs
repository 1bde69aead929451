use std::process::{Command, Output};

use eisenzeros::report::{parse_blocks, RunReport};
use eisenzeros::verify::Status;
use eisenzeros::FormSpec;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eisenzeros")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn locate_writes_json_report() {
    let o = run(&["locate", "--form", "power-sum", "--n", "2", "--k", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = RunReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.command, "locate");
    assert_eq!(r.status, Status::Pass);
    assert_eq!(r.zeros.len(), 1);
    let z = &r.zeros[0];
    assert!((z.tau_re.hypot(z.tau_im) - 1.0).abs() < 1e-12);
    assert_eq!(RunReport::from_json(&r.to_json().unwrap()).unwrap(), r);
}

#[test]
fn locate_csv_lists_zeros() {
    let o = run(&["--format", "csv", "locate", "--form", "single", "--k", "24"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rd.headers().unwrap().get(5), Some("theta_hat"));
    assert_eq!(rd.records().count(), 2);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let args = ["check-bounds", "--prop", "m-power2", "--k", "10:40"];
    let a = run(&args);
    let mut with_out = vec!["--out", path.to_str().unwrap()];
    with_out.extend(args);
    let b = run(&with_out);
    assert_eq!(b.status.code(), Some(0));
    assert!(b.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&a));
}

#[test]
fn job_count_does_not_change_output() {
    let base = ["verify-theorem", "--family", "product-plus", "--k", "12:24", "--l", "10:20"];
    let one = run(&[&["--jobs", "1"][..], &base].concat());
    let four = run(&[&["--jobs", "4"][..], &base].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn failed_check_exits_one() {
    // no float computation agrees to 1e-30
    let o = run(&["oracle-check", "--k", "12", "--samples", "3", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    let r = RunReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.status, Status::Fail);
}

#[test]
fn typo_constant_warns_but_exits_zero() {
    let o = run(&["check-bounds", "--prop", "r-single", "--k", "10:20"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(RunReport::from_json(&stdout(&o)).unwrap().status, Status::Warn);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["locate", "--form", "single", "--k", "7"][..],
        &["locate", "--form", "single"],
        &["explore-n", "--n", "7", "--k", "10:20"],
        &["--jobs", "0", "locate", "--form", "single", "--k", "12"],
        &["plot-data", "--form", "single", "--k", "12", "--density", "100"],
        &["verify-theorem", "--family", "power2", "--k", "10:20", "--grid", "8"],
        &["no-such-command"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let o = run(&["--out", "/nonexistent-dir/x.json", "locate", "--form", "single", "--k", "12"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn plot_data_single_twelve() {
    let o = run(&["plot-data", "--form", "single", "--k", "12", "--density", "1024"]);
    assert_eq!(o.status.code(), Some(0));
    let blocks = parse_blocks(&stdout(&o)).unwrap();
    assert_eq!(blocks.len(), 3);
    let grid = &blocks[0];
    assert_eq!(grid.len(), 1024);
    let f: Vec<f64> = grid.iter().map(|r| r[1].parse().unwrap()).collect();
    let changes = f.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    assert_eq!(changes, 1);
    assert_eq!(blocks[2].len(), 1);
}

#[test]
fn plot_data_power_samples_clear_the_envelope() {
    let o = run(&["plot-data", "--form", "power-sum", "--n", "3", "--k", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let blocks = parse_blocks(&stdout(&o)).unwrap();
    let bound = FormSpec::power_sum(3, 16).unwrap().remainder_bound();
    assert!(!blocks[1].is_empty());
    for row in &blocks[1] {
        let f: f64 = row[2].parse().unwrap();
        let parity: f64 = row[3].parse().unwrap();
        assert!(f.abs() > bound, "{row:?}");
        assert!(f * parity > 0.0, "{row:?}");
    }
}
