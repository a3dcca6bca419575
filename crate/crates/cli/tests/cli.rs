use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gmn_core::strategies::best_classical_team;
use serde_json::Value;

fn gmn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmn"))
        .args(args)
        .env_remove("GMN_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str]) -> Output {
    let out = gmn(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn dir_arg(d: &Path) -> &str {
    d.to_str().unwrap()
}

#[test]
fn perfect_quantum_team_wins_everything() {
    let tmp = tempfile::tempdir().unwrap();
    run_ok(&["simulate", "--contestants", "3", "--team", "quantum", "--sigma", "1", "--rounds", "1000", "--out", dir_arg(tmp.path())]);
    let s = json(&tmp.path().join("summary.json"));
    assert_eq!(s["win_rate"], 1.0);
    assert_eq!(s["rounds_played"], 1000);
    let csv = fs::read_to_string(tmp.path().join("transcript.csv")).unwrap();
    assert!(csv.starts_with("t,assignment,forced,played,messages,referee_sum,guess,win\n"));
    assert_eq!(csv.lines().count(), 1001);
}

#[test]
fn fully_forced_classical_team_wins_three_quarters() {
    let tmp = tempfile::tempdir().unwrap();
    run_ok(&[
        "simulate", "--contestants", "3", "--team", "classical", "--forced-fraction", "1", "--rounds", "100000",
        "--summary-only", "--out", dir_arg(tmp.path()),
    ]);
    let s = json(&tmp.path().join("summary.json"));
    let rate = s["win_rate"].as_f64().unwrap();
    let se = s["std_error"].as_f64().unwrap();
    assert!((rate - 0.75).abs() < 3.0 * se, "{rate} ± {se}");
    assert!(!tmp.path().join("transcript.csv").exists());
}

#[test]
fn same_flags_and_seed_give_identical_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        run_ok(&["simulate", "--games", "3", "--rounds", "200", "--seed", "9", "--format", "json", "--out", dir_arg(d.path())]);
    }
    for rel in ["summary.json", "games.csv", "transcripts/game-00000.json", "transcripts/game-00002.json"] {
        assert_eq!(fs::read(a.path().join(rel)).unwrap(), fs::read(b.path().join(rel)).unwrap(), "{rel}");
    }
}

#[test]
fn sigma_with_classical_team_is_a_usage_error() {
    let out = gmn(&["simulate", "--team", "classical", "--sigma", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--sigma") && err.contains("Usage"), "{err}");
}

#[test]
fn invalid_values_exit_with_two() {
    assert_eq!(gmn(&["simulate", "--contestants", "5"]).status.code(), Some(2));
    assert_eq!(gmn(&["simulate", "--forced-fraction", "1.5"]).status.code(), Some(2));
    assert_eq!(gmn(&["simulate", "--team", "psychic"]).status.code(), Some(2));
    assert_eq!(gmn(&["figure1", "--grid", "0:2:0.5"]).status.code(), Some(2));
    assert_eq!(gmn(&["oracle", "--contestants", "4", "--bound", "10"]).status.code(), Some(2));
    assert_eq!(gmn(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn headline_preset_is_recorded_in_the_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    run_ok(&["simulate", "--preset", "headline", "--rounds", "300", "--out", dir_arg(tmp.path())]);
    let m = json(&tmp.path().join("manifest.json"));
    let args = &m["command"]["args"];
    assert_eq!(m["command"]["subcommand"], "simulate");
    assert_eq!(args["contestants"], 4);
    assert_eq!(args["forced_fraction"], 0.05);
    assert_eq!(args["sigma"], 0.47);
    assert_eq!(args["team"], "quantum");
    assert_eq!(m["seed"], 0);
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn custom_strategy_file() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = tmp.path().join("team.txt");
    fs::write(&spec, best_classical_team(3).unwrap().to_text()).unwrap();
    let team = format!("custom:{}", spec.display());
    let out = tmp.path().join("run");
    run_ok(&["simulate", "--contestants", "3", "--team", &team, "--forced-fraction", "0", "--rounds", "500", "--out", dir_arg(&out)]);
    // voluntary plays of the best team are certain wins
    assert_eq!(json(&out.join("summary.json"))["win_rate"], 1.0);

    fs::write(&spec, "contestants 3\nbogus line\n").unwrap();
    assert_eq!(gmn(&["simulate", "--contestants", "3", "--team", &team]).status.code(), Some(2));
}

#[test]
fn exact_limit_and_non_convergence() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_ok(&["exact", "--contestants", "3", "--forced-fraction", "0.17", "--out", dir_arg(tmp.path())]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("0.92"));
    let csv = fs::read_to_string(tmp.path().join("exact.csv")).unwrap();
    let value: f64 = csv.lines().nth(1).unwrap().split(',').nth(4).unwrap().parse().unwrap();
    assert!((value - 0.92).abs() <= 0.005);

    let nc = tmp.path().join("nc");
    let out = gmn(&["exact", "--contestants", "3", "--forced-fraction", "0.17", "--tolerance", "1e-13", "--max-exponent", "11", "--out", dir_arg(&nc)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("convergence log"));
    let log = fs::read_to_string(nc.join("convergence.csv")).unwrap();
    assert_eq!(log.lines().next(), Some("c,p,N,value"));
    assert_eq!(log.lines().count(), 3);
}

#[test]
fn table2_rows_and_comparison() {
    let tmp = tempfile::tempdir().unwrap();
    run_ok(&["table2", "--out", dir_arg(tmp.path())]);
    let csv = fs::read_to_string(tmp.path().join("table2.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("c,eta,sigma,delta"));
    assert_eq!(csv.lines().count(), 9);
    let text = fs::read_to_string(tmp.path().join("table2_comparison.txt")).unwrap();
    assert_eq!(text.matches("PASS").count(), 8);
    assert!(text.contains("8/8 rows"));
}

#[test]
fn figure1_census_and_oracle_datasets() {
    let tmp = tempfile::tempdir().unwrap();
    let d = |name: &str| tmp.path().join(name);
    run_ok(&["figure1", "--grid", "0.5,1", "--games", "50", "--out", dir_arg(&d("f"))]);
    let fig = fs::read_to_string(d("f").join("figure1.csv")).unwrap();
    assert_eq!(fig.lines().next(), Some("c,p,exact,mc_mean,mc_stderr,games"));
    assert_eq!(fig.lines().count(), 3);

    run_ok(&["census", "--out", dir_arg(&d("c"))]);
    let census = fs::read_to_string(d("c").join("census.csv")).unwrap();
    assert_eq!(census.lines().count(), 20);
    assert!(census.contains("\"{0,1/2,1,3/2}\",3,24"));

    run_ok(&["oracle", "--contestants", "3", "--out", dir_arg(&d("o"))]);
    let report = json(&d("o").join("oracle.json"));
    assert_eq!(report["forced"]["wins"], 24);
    assert_eq!(report["forced"]["variations"], 32);
}

#[test]
fn out_dir_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gmn"))
        .args(["census", "--contestants", "3"])
        .env("GMN_OUT_DIR", tmp.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(tmp.path().join("census.csv").exists());
    assert!(tmp.path().join("manifest.json").exists());
}

#[test]
fn replay_reproduces_outputs_and_detects_tampering() {
    let tmp = tempfile::tempdir().unwrap();
    let run = tmp.path().join("run");
    run_ok(&["simulate", "--games", "4", "--rounds", "150", "--seed", "3", "--team", "classical", "--out", dir_arg(&run)]);
    let manifest = run.join("manifest.json");

    let again = tmp.path().join("again");
    let out = run_ok(&["replay", dir_arg(&manifest), "--check", "--out", dir_arg(&again)]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("byte-identical"));
    for rel in ["summary.json", "games.csv", "transcripts/game-00003.csv"] {
        assert_eq!(fs::read(run.join(rel)).unwrap(), fs::read(again.join(rel)).unwrap());
    }

    fs::write(run.join("games.csv"), "tampered\n").unwrap();
    let out = gmn(&["replay", dir_arg(&manifest), "--check", "--out", dir_arg(&tmp.path().join("third"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("games.csv"));
}

#[test]
fn documented_strategy_file_is_the_best_team() {
    let doc = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../book/src/cli.md")).unwrap();
    let start = doc.find("```text\ncontestants").expect("strategy listing") + "```text\n".len();
    let block = &doc[start..start + doc[start..].find("```").unwrap()];
    let parsed: gmn_core::strategies::ClassicalStrategySpec = block.parse().unwrap();
    assert_eq!(parsed, best_classical_team(3).unwrap());
}
