//! End-to-end tests of the `secgame` binary: artifact round trips
//! through files, exit codes, and output schemas.

use std::path::Path;
use std::process::{Command, Output};

use secgame::game::{Game, StrategyProfile};
use secgame::verify::VerificationReport;

fn secgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secgame"))
        .args(args)
        .output()
        .expect("binary must run")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process not killed by a signal")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("temp paths are UTF-8")
}

#[test]
fn generate_solve_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let game_path = dir.path().join("game.json");
    let profile_path = dir.path().join("profile.json");
    let report_path = dir.path().join("report.json");

    let out = secgame(&[
        "generate",
        "--family",
        "rgs",
        "--targets",
        "6",
        "--schedules",
        "5",
        "--support",
        "3",
        "--seed",
        "11",
        "--output",
        path_str(&game_path),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let game = Game::from_json(&std::fs::read_to_string(&game_path).unwrap()).unwrap();
    assert_eq!(game.num_targets, 6);
    assert_eq!(game.metadata.seed, Some(11));

    let out = secgame(&[
        "solve",
        "--game",
        path_str(&game_path),
        "--output",
        path_str(&profile_path),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("verification passed"));
    let profile =
        StrategyProfile::from_json(&std::fs::read_to_string(&profile_path).unwrap()).unwrap();
    profile.validate_against(&game).unwrap();

    let out = secgame(&[
        "verify",
        "--game",
        path_str(&game_path),
        "--profile",
        path_str(&profile_path),
        "--output",
        path_str(&report_path),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let report: VerificationReport =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert!(report.is_nse);
}

#[test]
fn verify_flags_a_tampered_profile_with_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let game_path = dir.path().join("game.json");
    let profile_path = dir.path().join("profile.json");

    let out = secgame(&[
        "generate",
        "--fixture",
        "identity3",
        "--output",
        path_str(&game_path),
    ]);
    assert_eq!(code(&out), 0);

    // Zero coverage on target 3 invites every deviation.
    std::fs::write(
        &profile_path,
        r#"{"coverages": [[0,0,0],[0,0,0]], "target": 3}"#,
    )
    .unwrap();
    let out = secgame(&[
        "verify",
        "--game",
        path_str(&game_path),
        "--profile",
        path_str(&profile_path),
    ]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("NOT an equilibrium"));
    let report: VerificationReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!report.is_nse);
    assert!(!report.witness_deviations.is_empty());
}

#[test]
fn exit_codes_distinguish_failure_classes() {
    // Usage: missing required arguments.
    let out = secgame(&["generate"]);
    assert_eq!(code(&out), 1);

    // Unknown fixture name.
    let out = secgame(&["solve", "--fixture", "bogus"]);
    assert_eq!(code(&out), 2);

    // Malformed game file.
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = secgame(&["solve", "--game", path_str(&bad)]);
    assert_eq!(code(&out), 2);

    // Precondition: the two-defender solver rejects clearance mode.
    let out = secgame(&["solve", "--fixture", "example1(0.001, 100, clearance)"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("precondition"));

    // Help exits cleanly.
    let out = secgame(&["--help"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn enumerate_lists_identity_targets_with_labels() {
    let out = secgame(&["enumerate", "--fixture", "identity3"]);
    assert_eq!(code(&out), 0);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["target"], 1);
    assert_eq!(rows[0]["efficiency"], "Efficient");
    assert_eq!(rows[1]["target"], 2);
    assert_eq!(rows[1]["efficiency"], "Inefficient");
    let err = stderr(&out);
    assert!(err.contains("efficient"));
    assert!(err.contains("inefficient"));
}

#[test]
fn counterexample_reports_nonexistence() {
    let out = secgame(&["counterexample", "--epsilon", "1e-3", "--k", "100"]);
    assert_eq!(code(&out), 0);
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["exists_nse"], false);
    assert!(stderr(&out).contains("no equilibrium exists"));

    let out = secgame(&["counterexample", "--epsilon", "0", "--k", "7"]);
    assert_eq!(code(&out), 0);
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["exists_nse"], true);

    // Parameters outside the family are a validation error.
    let out = secgame(&["counterexample", "--epsilon", "0.5", "--k", "100"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bench_csv_is_stable_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |out: &Path| {
        vec![
            "bench".to_string(),
            "--family".into(),
            "rgs".into(),
            "--targets".into(),
            "4,5".into(),
            "--schedules".into(),
            "3".into(),
            "--support".into(),
            "2".into(),
            "--trials".into(),
            "3".into(),
            "--seed".into(),
            "9".into(),
            "--output".into(),
            path_str(out).to_string(),
        ]
    };
    let run = |path: &Path| {
        let args = args(path);
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = secgame(&refs);
        assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
        assert!(stderr(&out).contains("mean"));
    };
    run(&a);
    run(&b);

    let strip_seconds = |text: &str| {
        text.lines()
            .map(|line| line.rsplit_once(',').unwrap().0.to_string())
            .collect::<Vec<_>>()
    };
    let a = std::fs::read_to_string(&a).unwrap();
    let b = std::fs::read_to_string(&b).unwrap();
    assert_eq!(strip_seconds(&a), strip_seconds(&b));
    assert!(a.starts_with(
        "family,targets,schedules,support,defenders,side,radius,layers,width,\
         solver,seed,trial,status,seconds"
    ));
    // 2 configs x 3 trials plus the header.
    assert_eq!(a.trim_end().lines().count(), 7);
    assert!(a.contains("\nrgs,4,3,2,2,,,,,two,"));
}

#[test]
fn stats_csv_keeps_rank_conventions_ordered() {
    let out = secgame(&[
        "stats",
        "--family",
        "rgs",
        "--targets",
        "6",
        "--schedules",
        "4",
        "--support",
        "3",
        "--trials",
        "5",
        "--seed",
        "31",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let csv = stdout(&out);
    let mut lines = csv.trim_end().lines();
    let header = lines.next().unwrap();
    assert!(header.ends_with(
        "seed,trial,status,efficient_count,efficient_ratio,\
         rank_optimistic,rank_average,rank_pessimistic"
    ));
    let mut rows = 0;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[11], "ok", "row failed: {line}");
        let optimistic: f64 = cells[14].parse().unwrap();
        let average: f64 = cells[15].parse().unwrap();
        let pessimistic: f64 = cells[16].parse().unwrap();
        assert!(optimistic <= average && average <= pessimistic);
        rows += 1;
    }
    assert_eq!(rows, 5);
}

#[test]
fn monotone_generation_feeds_the_multi_solver() {
    let dir = tempfile::tempdir().unwrap();
    let game_path = dir.path().join("game.json");
    let out = secgame(&[
        "generate",
        "--family",
        "rgs",
        "--targets",
        "6",
        "--schedules",
        "4",
        "--support",
        "6",
        "--defenders",
        "3",
        "--seed",
        "5",
        "--monotone",
        "--output",
        path_str(&game_path),
    ]);
    assert_eq!(code(&out), 0);

    let out = secgame(&[
        "solve",
        "--game",
        path_str(&game_path),
        "--algorithm",
        "multi_ms",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("verification passed"));

    // Without the rewrite the same configuration is rejected up front.
    let out = secgame(&[
        "generate",
        "--family",
        "rgs",
        "--targets",
        "6",
        "--schedules",
        "4",
        "--support",
        "6",
        "--defenders",
        "3",
        "--seed",
        "5",
        "--output",
        path_str(&game_path),
    ]);
    assert_eq!(code(&out), 0);
    let out = secgame(&[
        "solve",
        "--game",
        path_str(&game_path),
        "--algorithm",
        "multi_ms",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn network_games_flow_through_generate_and_solve() {
    let dir = tempfile::tempdir().unwrap();
    let game_path = dir.path().join("pln.json");
    let out = secgame(&[
        "generate",
        "--family",
        "pln",
        "--layers",
        "3",
        "--width",
        "3",
        "--seed",
        "2",
        "--output",
        path_str(&game_path),
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&game_path).unwrap();
    assert!(text.contains("layered_network"));

    let out = secgame(&["solve", "--game", path_str(&game_path)]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("verification passed"));
}
