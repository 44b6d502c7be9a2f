//! CLI acceptance: byte-level determinism of sweep outputs (including
//! across thread counts) and the exit-code contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dbcare"))
}

fn config_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    if dir.exists() {
        std::fs::remove_dir_all(&dir).unwrap();
    }
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_ok(cmd: &mut Command) -> Output {
    let output = cmd.output().unwrap();
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

#[test]
fn criterion_10_sweep_outputs_are_byte_identical() {
    let config = config_path("two_arm_gaussian.json");
    let dirs = [tmp_dir("det_a"), tmp_dir("det_b"), tmp_dir("det_threads")];
    for (i, dir) in dirs.iter().enumerate() {
        let mut cmd = bin();
        cmd.arg("sweep")
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(dir)
            .arg("--runs")
            .arg("50");
        if i == 2 {
            cmd.env("RAYON_NUM_THREADS", "1");
        }
        run_ok(&mut cmd);
    }

    let mut compared = 0;
    for file in [
        "two_arm_gaussian_mi.csv",
        "two_arm_gaussian_sr.csv",
        "two_arm_gaussian_mi.svg",
        "two_arm_gaussian_sr.svg",
    ] {
        let reference = std::fs::read(dirs[0].join(file)).unwrap();
        assert!(!reference.is_empty());
        for dir in &dirs[1..] {
            assert_eq!(
                reference,
                std::fs::read(dir.join(file)).unwrap(),
                "{file} differs between {} and {}",
                dirs[0].display(),
                dir.display()
            );
        }
        compared += 1;
    }
    println!(
        "[acceptance] criterion 10 PASS: {compared} sweep outputs byte-identical across reruns and thread counts"
    );
}

// ---------------------------------------------------------------------------
// Exit-code contract
// ---------------------------------------------------------------------------

#[test]
fn run_prints_trace_and_exits_cleanly() {
    let output = run_ok(bin().args([
        "run",
        "--policy",
        "guess",
        "--instance",
        "gaussian2:delta=1",
    ]));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("tau=0"), "stdout: {stdout}");

    let output = run_ok(bin().args([
        "run",
        "--policy",
        "dbcare:mi",
        "--instance",
        "gaussian2:delta=2",
        "--cost",
        "1e-4",
    ]));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("recommended_arm="), "stdout: {stdout}");
    assert!(stdout.contains("tau="), "stdout: {stdout}");
}

#[test]
fn validation_failures_exit_2() {
    // Config with an out-of-range confidence.
    let dir = tmp_dir("bad_config");
    let config = dir.join("bad.json");
    std::fs::write(
        &config,
        r#"{"setting":"two_arm_gaussian","risks":["mi"],"grid":[0.5],"cost":1e-4,
           "master_seed":1,"policies":[{"racing":{"delta":1.5}}]}"#,
    )
    .unwrap();
    let output = bin()
        .args(["sweep", "--config"])
        .arg(&config)
        .args(["--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(
        stderr.contains("delta"),
        "stderr should name the field: {stderr}"
    );

    // Unknown config key.
    std::fs::write(
        &config,
        r#"{"setting":"two_arm_gaussian","risks":["mi"],"grid":[0.5],"cost":1e-4,
           "master_seed":1,"policies":[],"surprise":1}"#,
    )
    .unwrap();
    let output = bin()
        .args(["sweep", "--config"])
        .arg(&config)
        .args(["--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("surprise"), "stderr: {stderr}");

    // dbcare:sr on an unbounded family without --B.
    let output = bin()
        .args([
            "run",
            "--policy",
            "dbcare:sr",
            "--instance",
            "gaussian2:delta=1",
            "--risk",
            "sr",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));

    // Incompatible bounds flags.
    for args in [
        vec![
            "bounds", "--risk", "mi", "--scope", "two", "--cost", "1e-4", "--grid", "0.1,1", "--B",
            "1",
        ],
        vec![
            "bounds", "--risk", "sr", "--scope", "two", "--cost", "1e-4", "--grid", "0.1,1",
        ],
        vec![
            "bounds", "--risk", "mi", "--scope", "k", "--cost", "1e-4", "--grid", "0.1,1",
        ],
        vec![
            "bounds", "--risk", "mi", "--scope", "two", "--cost", "1e-4", "--grid", "0.1,1", "--K",
            "5",
        ],
    ] {
        let output = bin().args(&args).output().unwrap();
        assert_eq!(output.status.code(), Some(2), "args: {args:?}");
    }
}

#[test]
fn io_failures_exit_1() {
    let output = bin()
        .args([
            "sweep",
            "--config",
            "/nonexistent/config.json",
            "--out",
            "/tmp",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn bounds_regime_column_flips_once_and_sr_has_minimax_row() {
    // sigma=1, c=1e-4: the mi boundary sits at sqrt(sigma^2 c) = 0.01.
    let output = run_ok(bin().args([
        "bounds",
        "--risk",
        "mi",
        "--scope",
        "two",
        "--sigma",
        "1",
        "--cost",
        "1e-4",
        "--grid",
        "0.002:0.02:10",
    ]));
    let stdout = String::from_utf8(output.stdout).unwrap();
    let regimes: Vec<&str> = stdout
        .lines()
        .skip(1)
        .map(|line| line.split(',').nth(2).unwrap())
        .collect();
    let flips = regimes.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(flips, 1, "regimes: {regimes:?}");

    let output = run_ok(bin().args([
        "bounds", "--risk", "sr", "--scope", "two", "--sigma", "1", "--cost", "1e-4", "--grid",
        "0.1,1", "--B", "2",
    ]));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 4, "{stdout}");
    assert!(
        stdout.lines().last().unwrap().contains(",minimax,"),
        "{stdout}"
    );

    // Lower bound never exceeds any tabulated upper curve.
    for line in stdout.lines().skip(1) {
        let fields: Vec<f64> = line
            .split(',')
            .enumerate()
            .filter(|(i, _)| *i != 2)
            .map(|(_, f)| f.parse().unwrap())
            .collect();
        assert!(fields[1] <= fields[2] && fields[1] <= fields[3], "{line}");
    }
}
