use std::path::PathBuf;
use std::process::Command;

fn portfolio() -> Command {
    Command::new(env!("CARGO_BIN_EXE_portfolio"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("portfolio-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn generate_construct_evaluate_pipeline() {
    let dir = temp_dir("pipeline");
    let game = dir.join("rps.json");
    let portfolio_file = dir.join("p.json");

    let out = portfolio()
        .args(["generate", "fixture", "--name", "rps", "--out"])
        .arg(&game)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let out = portfolio()
        .args([
            "construct",
            "--method",
            "eps-dom-mixed",
            "--k",
            "2",
            "--game",
        ])
        .arg(&game)
        .arg("--out")
        .arg(&portfolio_file)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let out = portfolio()
        .args(["evaluate", "--selection", "pessimistic", "--game"])
        .arg(&game)
        .arg("--portfolio")
        .arg(&portfolio_file)
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let line = stdout
        .lines()
        .find(|l| l.starts_with("exploitability:"))
        .expect("exploitability line");
    let value: f64 = line.split(':').nth(1).unwrap().trim().parse().unwrap();
    // The mixed RPS pair from the dominance search is at least as good as
    // the best pure pair (2/3).
    assert!(value <= 2.0 / 3.0 + 1e-6, "{value}");

    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_fixtures_exits_zero() {
    let out = portfolio().arg("verify-fixtures").output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS"));
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn usage_errors_exit_two() {
    let out = portfolio().args(["construct", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let dir = temp_dir("usage");
    let game = dir.join("g.json");
    portfolio()
        .args(["generate", "random", "--rows", "3", "--cols", "3", "--out"])
        .arg(&game)
        .status()
        .unwrap();
    let out = portfolio()
        .args([
            "construct",
            "--method",
            "no-such-method",
            "--k",
            "1",
            "--game",
        ])
        .arg(&game)
        .arg("--out")
        .arg(dir.join("p.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn resource_errors_exit_three() {
    let dir = temp_dir("resource");
    let game = dir.join("g.json");
    portfolio()
        .args(["generate", "random", "--rows", "3", "--cols", "40", "--out"])
        .arg(&game)
        .status()
        .unwrap();
    let out = portfolio()
        .args([
            "construct",
            "--method",
            "brute-force-pure",
            "--k",
            "10",
            "--game",
        ])
        .arg(&game)
        .arg("--out")
        .arg(dir.join("p.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn experiment_writes_csv_and_plots() {
    let dir = temp_dir("experiment");
    let config = dir.join("config.json");
    std::fs::write(
        &config,
        r#"{
            "games": [{"kind": "random", "rows": 4, "cols": 4}],
            "methods": ["greedy-k", "random-mixed"],
            "k_values": [1, 2],
            "selections": ["pessimistic"],
            "seeds": [10, 11],
            "rm_iterations": 500,
            "plots": [{"name": "ex-vs-k", "x": "k", "y": "exploitability"}],
            "parallelism": 2
        }"#,
    )
    .unwrap();
    let out = portfolio()
        .args(["experiment", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.join("results.csv")).unwrap();
    assert!(csv.starts_with("game,method,k,seed,selection,exploitability,epsilon_bound,runtime_ms"));
    assert_eq!(csv.lines().count(), 1 + 2 * 2 * 2); // header + methods x k x seeds
    assert!(dir.join("ex-vs-k.csv").exists());
    assert!(dir.join("ex-vs-k.svg").exists());
    std::fs::remove_dir_all(&dir).unwrap();
}
