use std::process::{Command, Output};

use realign::io::{read_matrix_file, write_state, MatrixFile};
use realign::states;

fn realign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_realign"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_tiles_reports_detection() {
    let o = realign(&["check", "tiles_upb"]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("log2 N         0.1208"), "{out}");
    assert!(out.contains("ppt (T_A):             not detected"), "{out}");
}

#[test]
fn check_max_mixed_is_clean() {
    let o = realign(&["check", "max_mixed", "d=3"]);
    assert_eq!(o.status.code(), Some(0));
    let expected = format!("{:.12}", -(3f64).log2());
    assert!(stdout(&o).contains(&expected));
}

#[test]
fn check_reads_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mixed.json");
    write_state(&path, &states::max_mixed(2).unwrap()).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(realign(&["check", p]).status.code(), Some(0));
    assert_eq!(realign(&["check", "--file", p]).status.code(), Some(0));

    let bell = dir.path().join("bell.json");
    write_state(&bell, &states::werner2(1.0).unwrap()).unwrap();
    assert_eq!(
        realign(&["check", bell.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(read_matrix_file(&bell).unwrap().m, 2);
}

#[test]
fn check_rejects_bad_files_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"m\": 2,\n  \"n\": 2,\n  \"re\": [[1, 0]\n").unwrap();
    let o = realign(&["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let unnormalised = MatrixFile {
        m: 1,
        n: 2,
        re: vec![vec![0.5000002, 0.0], vec![0.0, 0.5]],
        im: vec![vec![0.0; 2]; 2],
    };
    std::fs::write(&path, unnormalised.to_json()).unwrap();
    let p = path.to_str().unwrap();
    let o = realign(&["check", p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr)
        .to_lowercase()
        .contains("trace"));
    let o = realign(&["check", "--normalize", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("renormalised"));
}

#[test]
fn sweep_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f1.csv");
    let args = [
        "--grid-a",
        "0.2:0.3:0.02",
        "--grid-p",
        "0.99:1:0.005",
        "--out",
        out.to_str().unwrap(),
        "sweep-fig1",
    ];
    let o = realign(&args);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("threshold p at a = 0.236: 0.9954"));
    let first = std::fs::read_to_string(&out).unwrap();
    realign(&args);
    assert_eq!(first, std::fs::read_to_string(&out).unwrap());
    assert_eq!(first.lines().count(), 1 + 6 * 3);
}

#[test]
fn sweep_rejects_out_of_range_grid() {
    let o = realign(&["--grid-a", "0:1:0.1", "sweep-fig1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn search_same_seed_same_report() {
    let args = [
        "--seed", "5", "search", "--count", "300", "--m", "2", "--n", "3",
    ];
    let strip = |o: Output| {
        stdout(&o)
            .lines()
            .filter(|l| !l.starts_with("elapsed"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = strip(realign(&args));
    assert_eq!(a, strip(realign(&args)));
    assert!(a.contains("anomalies         []"));
}

#[test]
fn compare_rejects_unknown_family() {
    assert_eq!(realign(&["compare", "isotropic"]).status.code(), Some(1));
    let o = realign(&["--grid-p", "0:1:0.25", "compare", "werner2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("a,p,n,log_n,n_minus_one,concurrence,e_f"));
}
