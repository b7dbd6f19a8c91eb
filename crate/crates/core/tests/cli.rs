use std::fs;
use std::path::Path;
use std::process::Command;

use rhythmic::cli::{
    parse_config, run, Config, EXIT_AUDIT_FAIL, EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME,
};

fn call(dir: &Path, config: Option<&str>, args: &[&str]) -> i32 {
    let mut argv = vec!["rhythmic".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    if let Some(text) = config {
        let path = dir.join("config.toml");
        fs::write(&path, text).unwrap();
        argv.push("--config".into());
        argv.push(path.display().to_string());
    }
    argv.push("--out".into());
    argv.push(dir.join("out").display().to_string());
    run(argv)
}

#[test]
fn every_subcommand_succeeds_on_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let small = "[simulation]\nduration = 300.0\nalphas = [0.5]\nreplications = 1\n";
    for cmd in ["rhythm", "audit", "analyze", "traj", "simulate", "sweep"] {
        assert_eq!(call(dir.path(), Some(small), &[cmd]), EXIT_OK, "{cmd}");
    }
    for f in [
        "schedule.csv",
        "row_profile.csv",
        "audit.csv",
        "audit.txt",
        "analyze.csv",
        "curves.csv",
        "trajectories.csv",
        "vehicles.csv",
        "summary.csv",
        "sweep.csv",
    ] {
        assert!(dir.path().join("out").join(f).exists(), "{f}");
    }
}

#[test]
fn csv_starts_with_provenance_then_header() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        call(dir.path(), None, &["analyze", "--seed", "42"]),
        EXIT_OK
    );
    let text = fs::read_to_string(dir.path().join("out/analyze.csv")).unwrap();
    let mut lines = text.lines();
    let first = lines.next().unwrap();
    assert!(first.starts_with('#'));
    let mut seeded = Config::default();
    seeded.simulation.seed = 42;
    assert!(first.contains(&format!("config_hash={}", seeded.hash())));
    assert!(first.ends_with("seed=42"));
    assert!(lines.next().unwrap().starts_with("load,"));
}

#[test]
fn audit_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let even_t4 = "[intersection]\nthrough = 3\nleft = 2\n[rhythm.timing]\nt4 = 2.0\n";
    assert_eq!(call(dir.path(), Some(even_t4), &["audit"]), EXIT_AUDIT_FAIL);
    let summary = fs::read_to_string(dir.path().join("out/audit.txt")).unwrap();
    assert!(summary.contains("FAIL"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        call(dir.path(), Some("[intersection"), &["rhythm"]),
        EXIT_CONFIG
    );
    let negative = "[simulation]\nscenario = \"custom\"\ndemand = [-5.0, 0, 0, 0, 0, 0, 0, 0]\n";
    assert_eq!(call(dir.path(), Some(negative), &["simulate"]), EXIT_CONFIG);
    assert_eq!(
        call(dir.path(), Some("[vehicle]\nlength = -1.0\n"), &["rhythm"]),
        EXIT_CONFIG
    );
    assert_eq!(
        call(
            dir.path(),
            Some("[intersection]\nthrough = 0\n"),
            &["rhythm"]
        ),
        EXIT_CONFIG
    );
    assert_eq!(
        call(dir.path(), Some("[rhythm]\nunknown = 1\n"), &["rhythm"]),
        EXIT_CONFIG
    );
    assert_eq!(call(dir.path(), None, &["no-such-command"]), EXIT_CONFIG);
    let missing = dir.path().join("missing.toml").display().to_string();
    assert_eq!(
        call(dir.path(), None, &["rhythm", "--config", &missing]),
        EXIT_CONFIG
    );
}

#[test]
fn runtime_error_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    // The second vehicle would have to wait beyond what the zone can absorb.
    let crowded = "[traj]\nentries = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]\n";
    assert_eq!(call(dir.path(), Some(crowded), &["traj"]), EXIT_RUNTIME);
}

#[test]
fn config_round_trip() {
    let text = r#"
[intersection]
legs = [[3, 2], [2, 1], [3, 2], [1, 0]]
disabled = [[1, 2]]

[vehicle]
length = 5.0

[rhythm]
min_speed = 2.5
cat5 = [9.0, 9.5]

[rhythm.timing]
t4 = 3.0

[simulation]
scheme = "fcfs"
schemes = ["rc", "tsc"]
scenarios = ["balanced", "heavy"]
pattern = "bursty"
seed = 9

[simulation.tsc]
min_green = 5.0
"#;
    let c = parse_config(text).unwrap();
    assert_eq!(c.intersection.disabled, vec![[1, 2]]);
    let back = parse_config(&c.to_toml()).unwrap();
    assert_eq!(c, back);
    assert_eq!(c.hash(), back.hash());
    assert_ne!(c.hash(), Config::default().hash());
}

#[test]
fn binary_reports_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_rhythmic");
    let status = Command::new(bin)
        .args(["rhythm", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_OK));
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "not toml [").unwrap();
    let status = Command::new(bin)
        .args(["audit", "--config"])
        .arg(&bad)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_CONFIG));
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let default = parse_config(&fs::read_to_string(dir.join("default.toml")).unwrap()).unwrap();
    assert_eq!(default, Config::default());
    for name in ["broken_t4.toml", "asymmetric.toml"] {
        parse_config(&fs::read_to_string(dir.join(name)).unwrap()).unwrap();
    }
}
