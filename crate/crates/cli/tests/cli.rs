use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cyclic_ca::rank::{rows_from_csv, RankRow};
use cyclic_ca::{ClosureSummary, RankReport};
use tempfile::TempDir;

const EXAMPLE_N2: &str = "(1,2)\n({1,2} → 0)\n(0,3)\n(3 → 0)\n";
const EXAMPLE_N3: &str = "(1,2,4)(0,7)\n\
                          (1,6)(2,5)(3,4)\n\
                          (1 → 6)(2 → 5)(4 → 3)\n\
                          ({1,2,4} → 0)\n\
                          (7 → 0)\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclic-ca"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn rank_json() {
    let out = stdout(&run(&["rank", "-n", "3", "-q", "2", "--json"]));
    let report: RankReport = serde_json::from_str(&out).unwrap();
    assert_eq!(
        (report.rank_lower, report.rank_upper, report.exact),
        (5, 5, true)
    );
    assert_eq!(
        serde_json::to_value(&report).unwrap(),
        serde_json::from_str::<serde_json::Value>(&out).unwrap()
    );

    let out = stdout(&run(&["rank", "-n", "15", "-q", "2", "--json"]));
    let report: RankReport = serde_json::from_str(&out).unwrap();
    assert_eq!(
        (report.rank_lower, report.rank_upper, report.exact),
        (13, 15, false)
    );
}

#[test]
fn rank_rejects_small_n() {
    let out = run(&["rank", "-n", "1", "-q", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["rank", "-n", "x", "-q", "2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["table", "--n", "8..2", "--q", "2"]).status.code(),
        Some(2)
    );
}

#[test]
fn rank_csv_round_trip() {
    let out = stdout(&run(&["rank", "-n", "12", "-q", "3", "--csv"]));
    let rows = rows_from_csv(&out).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].e, 18);
}

#[test]
fn table_rows() {
    let out = stdout(&run(&["table", "--n", "2..8", "--q", "2"]));
    let rows: Vec<RankRow> = rows_from_csv(&out).unwrap();
    assert_eq!(rows.len(), 7);
    let six = rows.iter().find(|r| r.n == 6).unwrap();
    assert_eq!((six.rank_lower, six.rank_upper), (13, 13));
    for r in &rows {
        assert!(r.rank_lower <= r.rank_upper);
        assert_eq!(r.exact, r.rank_lower == r.rank_upper);
    }

    let out = stdout(&run(&["table", "--n", "2..2", "--q", "2..4"]));
    assert_eq!(rows_from_csv(&out).unwrap().len(), 3);

    let out = stdout(&run(&["table", "--n", "3..7", "--q", "2..5"]));
    for r in rows_from_csv(&out).unwrap() {
        if [3, 5, 7].contains(&r.n) {
            assert!(r.exact);
            assert_eq!(r.rank_lower, 5);
        }
    }
}

#[test]
fn orbits_json() {
    let out = stdout(&run(&["orbits", "-n", "3", "-q", "2", "--json"]));
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["alpha"]["1"], 2);
    assert_eq!(value["alpha"]["3"], 2);
    assert_eq!(value["orbits"].as_array().unwrap().len(), 4);
    assert_eq!(value["orbits"][2]["members"], serde_json::json!([1, 2, 4]));
}

#[test]
fn gens_and_verify() {
    let dir = TempDir::new().unwrap();
    let out = stdout(&run(&["gens", "-n", "3", "-q", "2", "--json"]));
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["generators"].as_array().unwrap().len(), 5);

    let text = stdout(&run(&["gens", "-n", "3", "-q", "2"]));
    let file = write(&dir, "std.txt", &text);
    let out = stdout(&run(&["verify", "-n", "3", "-q", "2", &file]));
    assert_eq!(out.trim(), "size=256 generating=true");
}

#[test]
fn verify_paper_sets() {
    let dir = TempDir::new().unwrap();
    let n2 = write(&dir, "n2.txt", EXAMPLE_N2);
    let out = stdout(&run(&["verify", "-n", "2", "-q", "2", &n2]));
    assert_eq!(out.trim(), "size=16 generating=true");

    let n3 = write(&dir, "n3.txt", EXAMPLE_N3);
    let out = stdout(&run(&["verify", "-n", "3", "-q", "2", &n3]));
    assert_eq!(out.trim(), "size=256 generating=true");

    let fewer: String = EXAMPLE_N3
        .lines()
        .take(4)
        .map(|l| format!("{l}\n"))
        .collect();
    let n3_minus = write(&dir, "n3_minus.txt", &fewer);
    let out = stdout(&run(&["verify", "-n", "3", "-q", "2", &n3_minus, "--json"]));
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["generating"], false);
}

#[test]
fn verify_errors() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "(1,2\n");
    assert_eq!(
        run(&["verify", "-n", "2", "-q", "2", &bad]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "-n", "2", "-q", "2", "/nonexistent/file"])
            .status
            .code(),
        Some(2)
    );

    let text = stdout(&run(&["gens", "-n", "2", "-q", "3"]));
    let file = write(&dir, "std23.txt", &text);
    let out = run(&["verify", "-n", "2", "-q", "3", &file, "--closure-cap", "50"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("50 found"));
}

#[test]
fn decompose_shift() {
    let dir = TempDir::new().unwrap();
    let target = write(&dir, "shift.ca", "2 2\n0 2 1 3\n");
    let out = stdout(&run(&[
        "decompose",
        "-n",
        "2",
        "-q",
        "2",
        "--target",
        &target,
        "--gens",
        "std",
        "--json",
    ]));
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["length"], 1);
    assert_eq!(value["verified"], true);

    let gens = write(&dir, "n2.txt", EXAMPLE_N2);
    let out = stdout(&run(&[
        "decompose",
        "-n",
        "2",
        "-q",
        "2",
        "--target",
        &target,
        "--gens",
        &gens,
    ]));
    assert_eq!(out.trim(), "word=0 length=1 verified=true");

    let not_ca = write(&dir, "bad.ca", "2 2\n1 1 2 3\n");
    assert_eq!(
        run(&["decompose", "-n", "2", "-q", "2", "--target", &not_ca])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn decompose_outside_closure() {
    let dir = TempDir::new().unwrap();
    let target = write(&dir, "collapse.ca", "2 2\n0 0 0 0\n");
    let gens = write(&dir, "units.txt", "(1,2)\n(0,3)\n");
    let out = run(&[
        "decompose",
        "-n",
        "2",
        "-q",
        "2",
        "--target",
        &target,
        "--gens",
        &gens,
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn closure_summaries() {
    let out = stdout(&run(&["closure", "-n", "2", "-q", "2"]));
    let summary: ClosureSummary = serde_json::from_str(&out).unwrap();
    assert_eq!(summary.size, 16);
    assert!(!summary.capped);
    assert_eq!(summary.word_length_histogram.values().sum::<usize>(), 16);

    let a = stdout(&run(&[
        "closure", "-n", "3", "-q", "2", "--random", "3", "--seed", "11",
    ]));
    let b = stdout(&run(&[
        "closure",
        "-n",
        "3",
        "-q",
        "2",
        "--random",
        "3",
        "--seed",
        "11",
        "--threads",
        "1",
    ]));
    assert_eq!(a, b);

    let out = stdout(&run(&["closure", "-n", "2", "-q", "3", "--cap", "100"]));
    let summary: ClosureSummary = serde_json::from_str(&out).unwrap();
    assert!(summary.capped);
    assert_eq!(summary.size, 100);
}

#[test]
fn help_lists_subcommands() {
    let out = stdout(&run(&["--help"]));
    for cmd in [
        "orbits",
        "rank",
        "table",
        "gens",
        "verify",
        "decompose",
        "closure",
    ] {
        assert!(out.contains(cmd), "{cmd}");
    }
    assert!(Path::new(env!("CARGO_BIN_EXE_cyclic-ca")).exists());
}
