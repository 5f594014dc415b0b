//! End-to-end checks of the command-line binaries: flag spellings, exit
//! codes, and agreement between the validate and simulate frontends.

mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn inrc2() -> Command {
    Command::new(env!("CARGO_BIN_EXE_inrc2"))
}

fn write_sample_files(dir: &Path) -> (PathBuf, PathBuf, PathBuf, PathBuf) {
    let sce = dir.join("Sc-n005w4.txt");
    let his = dir.join("H0-n005w4-0.txt");
    let week = dir.join("WD-n005w4-0.txt");
    let sol = dir.join("Sol-n005w4.txt");
    fs::write(&sce, common::SCENARIO).unwrap();
    fs::write(&his, common::HISTORY).unwrap();
    fs::write(&week, common::WEEK).unwrap();
    fs::write(&sol, common::SOLUTION.replace("\n3 n005w4", "\n0 n005w4")).unwrap();
    (sce, his, week, sol)
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn validate_prints_report_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (sce, his, week, sol) = write_sample_files(dir.path());
    // Four weeks of the same data; solutions need matching week indices.
    let mut sols = Vec::new();
    for k in 0..4 {
        let path = dir.path().join(format!("sol{k}.txt"));
        fs::write(&path, common::SOLUTION.replace("\n3 n005w4", &format!("\n{k} n005w4"))).unwrap();
        sols.push(path);
    }
    let output = inrc2()
        .arg("validate")
        .arg("--sce")
        .arg(&sce)
        .arg("--his")
        .arg(&his)
        .arg("--weeks")
        .args([&week, &week, &week, &week])
        .arg("--sols")
        .args(&sols)
        .output()
        .unwrap();
    // Hard-infeasible rosters still diagnose with exit 0.
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let text = stdout(&output);
    assert!(text.contains("Hard constraint violations"));
    assert!(text.contains("Total cost: "));
    let _ = sol;
}

#[test]
fn validate_rejects_malformed_input_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let (sce, his, week, sol) = write_sample_files(dir.path());
    fs::write(&sce, common::SCENARIO.replace("SHIFT_TYPES = 3", "SHIFT_TYPES = 9")).unwrap();
    let output = inrc2()
        .arg("validate")
        .arg("--sce")
        .arg(&sce)
        .arg("--his")
        .arg(&his)
        .arg("--weeks")
        .args([&week, &week, &week, &week])
        .arg("--sols")
        .args([&sol, &sol, &sol, &sol])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn week_count_mismatch_is_a_format_error() {
    let dir = tempfile::tempdir().unwrap();
    let (sce, his, week, sol) = write_sample_files(dir.path());
    let output = inrc2()
        .arg("validate")
        .arg("--sce")
        .arg(&sce)
        .arg("--his")
        .arg(&his)
        .arg("--weeks")
        .args([&week, &week])
        .arg("--sols")
        .args([&sol, &sol])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unknown_flags_exit_1() {
    let output = inrc2().arg("validate").arg("--nonsense").output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn generate_screen_simulate_validate_agree() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let status = inrc2()
        .args(["generate", "--nurses", "5", "--weeks", "4", "--seed", "21"])
        .arg("--outDir")
        .arg(&data)
        .status()
        .unwrap();
    assert!(status.success());

    let sce = data.join("Sc-n005w4.txt");
    let his = data.join("H0-n005w4-0.txt");
    let weeks: Vec<PathBuf> = (0..4).map(|i| data.join(format!("WD-n005w4-{i}.txt"))).collect();

    let output = inrc2()
        .arg("screen")
        .arg("--sce")
        .arg(&sce)
        .arg("--his")
        .arg(&his)
        .arg("--week")
        .arg(&weeks[0])
        .output()
        .unwrap();
    assert!(output.status.success());
    assert!(stdout(&output).starts_with("PASS"));

    // Simulate with the bundled solver under a pinned iteration cap.
    let out_dir = dir.path().join("out");
    let output = inrc2()
        .arg("simulate")
        .arg("--sce")
        .arg(&sce)
        .arg("--his")
        .arg(&his)
        .arg("--weeks")
        .args(&weeks)
        .arg("--solver")
        .arg(env!("CARGO_BIN_EXE_inrc2-solver"))
        .arg("--outDir")
        .arg(&out_dir)
        .args(["--cus", "--rand", "1", "2", "3", "4", "--timeout", "30"])
        .env("INRC2_SOLVER_ITERS", "10000")
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));

    // The standalone validator reproduces the simulator's report.
    let sols: Vec<PathBuf> = (0..4).map(|k| out_dir.join(format!("sol-week{k}.txt"))).collect();
    let output = inrc2()
        .arg("validate")
        .arg("--sce")
        .arg(&sce)
        .arg("--his")
        .arg(&his)
        .arg("--weeks")
        .args(&weeks)
        .arg("--sols")
        .args(&sols)
        .output()
        .unwrap();
    assert!(output.status.success());
    let report = fs::read_to_string(out_dir.join("Validator-results.txt")).unwrap();
    assert_eq!(stdout(&output), report);
}

#[test]
fn verbose_validation_lists_nurses() {
    let dir = tempfile::tempdir().unwrap();
    let (sce, his, week, _) = write_sample_files(dir.path());
    let mut sols = Vec::new();
    for k in 0..4 {
        let path = dir.path().join(format!("sol{k}.txt"));
        fs::write(&path, common::SOLUTION.replace("\n3 n005w4", &format!("\n{k} n005w4"))).unwrap();
        sols.push(path);
    }
    let output = inrc2()
        .arg("validate")
        .arg("--sce")
        .arg(&sce)
        .arg("--his")
        .arg(&his)
        .arg("--weeks")
        .args([&week, &week, &week, &week])
        .arg("--sols")
        .args(&sols)
        .arg("--verbose")
        .output()
        .unwrap();
    assert!(output.status.success());
    assert!(stdout(&output).contains("Per-nurse violations"));
}

#[test]
fn adjudicate_reports_means_finalists_winner() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scores.csv");
    fs::write(
        &csv,
        "A,34,35,42,32,10,12\nB,32,24,44,33,13,15\nC,33,36,30,12,10,17\n\
         D,36,32,46,32,12,13\nE,37,30,43,29,9,4\nF,68,29,41,55,10,5\nG,36,30,43,58,10,4\n",
    )
    .unwrap();
    let output = inrc2().arg("adjudicate").arg("--scores").arg(&csv).output().unwrap();
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("E  3.08"));
    assert!(text.contains("D  5.17"));
    assert!(text.contains("Finalists (ordered by mean rank, then id): E, C, A, F, G"));
    assert!(text.contains("Winner: E"));
}

#[test]
fn solver_binary_honors_contract_flags() {
    let dir = tempfile::tempdir().unwrap();
    let (sce, his, week, _) = write_sample_files(dir.path());
    let sol = dir.path().join("out-sol.txt");
    let custom = dir.path().join("out-custom");
    let output = Command::new(env!("CARGO_BIN_EXE_inrc2-solver"))
        .arg("--sce")
        .arg(&sce)
        .arg("--his")
        .arg(&his)
        .arg("--week")
        .arg(&week)
        .arg("--sol")
        .arg(&sol)
        .arg("--cusOut")
        .arg(&custom)
        .args(["--rand", "9", "--iters", "5000"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    assert!(stdout(&output).contains("seed 9"));
    assert!(sol.exists());
    assert!(custom.exists());
    assert!(fs::read_to_string(&custom).unwrap().starts_with("CUSTOM"));

    // Same seed and cap: byte-identical solution.
    let sol2 = dir.path().join("out-sol2.txt");
    let status = Command::new(env!("CARGO_BIN_EXE_inrc2-solver"))
        .arg("--sce")
        .arg(&sce)
        .arg("--his")
        .arg(&his)
        .arg("--week")
        .arg(&week)
        .arg("--sol")
        .arg(&sol2)
        .args(["--rand", "9", "--iters", "5000"])
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(fs::read(&sol).unwrap(), fs::read(&sol2).unwrap());
}
