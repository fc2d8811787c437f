//! Acceptance gates for the whole pipeline. Each test covers one release
//! criterion and prints a single `acceptance NN <name>: PASS|FAIL` line
//! together with its runtime; run with
//!
//! ```text
//! cargo test --test acceptance -- --nocapture
//! ```
//!
//! to see every line. A gate fails when its checks fail or when it blows
//! its time budget, so a green suite certifies both correctness and that
//! the solvers stay responsive at benchmark sizes.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use secgame::{
    certify_counterexample, check_monotone, enforce_monotone, enumerate_equilibrium_targets,
    example1, gen_pln, gen_psg, gen_rgs, identity3, partial_set_nonempty, run_bench, run_stats,
    solve_multi_ms, solve_two, verify_nse, BenchRecord, CoverageSet, CoverageVector, Efficiency,
    GeneratorConfig, LayeredNetwork, ScheduleMode, SolverKind, StrategyProfile, TargetId,
    Tolerances, DEFAULT_PATH_CAP,
};

/// Prints the verdict line when dropped, so panicking checks still
/// produce a FAIL line for their criterion.
struct Gate {
    label: String,
    start: Instant,
    budget: Duration,
    passed: bool,
}

impl Gate {
    fn open(number: usize, name: &str, budget_secs: u64) -> Gate {
        Gate {
            label: format!("acceptance {number:02} {name}"),
            start: Instant::now(),
            budget: Duration::from_secs(budget_secs),
            passed: false,
        }
    }

    /// Call after every check has succeeded; enforces the time budget.
    fn close(mut self) {
        let elapsed = self.start.elapsed();
        let within = elapsed <= self.budget;
        self.passed = within;
        let label = self.label.clone();
        let budget = self.budget;
        drop(self);
        assert!(
            within,
            "{label} exceeded its {budget:?} budget (took {elapsed:?})"
        );
    }
}

impl Drop for Gate {
    fn drop(&mut self) {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        println!(
            "{}: {verdict} ({:.2}s)",
            self.label,
            self.start.elapsed().as_secs_f64()
        );
    }
}

fn profile(coverages: &[&[f64]], target: usize) -> StrategyProfile {
    StrategyProfile {
        coverages: coverages
            .iter()
            .map(|c| CoverageVector(c.to_vec()))
            .collect(),
        target: TargetId(target),
    }
}

fn verify(game: &secgame::Game, p: &StrategyProfile) -> secgame::VerificationReport {
    verify_nse(game, p, &Tolerances::default()).expect("verification must not error")
}

#[test]
fn a01_nonexistence_certificate_thresholds_and_verdicts() {
    let gate = Gate::open(1, "nonexistence certificate", 1);

    let cert = certify_counterexample(1e-3, 100.0).expect("parameters are in range");
    let expected = [-9.0909, 0.5261, 10.0909, 0.4739];
    for (condition, want) in cert.conditions.iter().zip(expected) {
        let got = condition
            .threshold
            .expect("every coefficient is nonzero at these parameters");
        assert!(
            (got - want).abs() <= 1e-3,
            "threshold {got} drifted from {want}"
        );
    }
    assert!(
        !cert.exists_nse,
        "the perturbed game must have no equilibrium"
    );

    let degenerate = certify_counterexample(0.0, 100.0).expect("epsilon 0 is in range");
    assert!(degenerate.exists_nse, "the unperturbed game has equilibria");

    gate.close();
}

#[test]
fn a02_counterexample_family_equilibria_verify() {
    let gate = Gate::open(2, "counterexample family equilibria", 1);

    let cases = [(0.0, 1.0, 0.5), (1e-3, 100.0, 0.55)];
    for (epsilon, k, height) in cases {
        let game = example1(epsilon, k, ScheduleMode::Ssas).expect("parameters are in range");
        let nse = profile(&[&[0.0, height, height, 0.0], &[0.0, 0.0, 0.0, 1.0]], 0);
        let report = verify(&game, &nse);
        assert!(
            report.is_nse,
            "expected an equilibrium at epsilon={epsilon}: {}",
            report.to_json()
        );

        let mut moved = nse.clone();
        moved.target = TargetId(1);
        let report = verify(&game, &moved);
        assert!(
            !report.aic,
            "moving the attack off the minimum-coverage target must break \
             attacker incentive compatibility"
        );
    }

    gate.close();
}

#[test]
fn a03_identity_game_reproduction() {
    let gate = Gate::open(3, "identity game reproduction", 1);

    let game = identity3();
    let pinned = profile(&[&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]], 1);
    assert!(verify(&game, &pinned).is_nse);

    let rows = enumerate_equilibrium_targets(&game).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].target, TargetId(0));
    assert_eq!(rows[0].efficiency, Efficiency::Efficient);
    assert_eq!(rows[1].target, TargetId(1));
    assert_eq!(rows[1].efficiency, Efficiency::Inefficient);

    let solved = solve_two(&game).unwrap();
    assert_eq!(solved.target, TargetId(0));
    for coverage in &solved.coverages {
        assert!(
            coverage.0.iter().all(|&x| x == 0.0),
            "coverage must be free"
        );
    }

    gate.close();
}

#[test]
fn a04_random_ssas_games_always_solve_and_verify() {
    let gate = Gate::open(4, "two-defender existence at scale", 300);

    let mut games = 0;
    for targets in [5usize, 10, 20] {
        for trial in 0..100u64 {
            let support = 1 + trial as usize % targets;
            let seed = 40_000 + 1_000 * targets as u64 + trial;
            let game = gen_rgs(targets, 10, support, 2, seed).unwrap();
            let solved = solve_two(&game)
                .unwrap_or_else(|e| panic!("solver refused targets={targets} seed={seed}: {e}"));
            common::assert_nse(&game, &solved);
            games += 1;
        }
    }
    assert_eq!(games, 300);

    gate.close();
}

#[test]
fn a05_monotone_games_solve_and_verify_for_many_defenders() {
    let gate = Gate::open(5, "multi-defender existence at scale", 300);

    let mut games = 0;
    for defenders in [2usize, 3, 5] {
        for targets in [5usize, 10] {
            for trial in 0..50u64 {
                let support = 1 + trial as usize % targets;
                let seed = 50_000 + 1_000 * (defenders * 10 + targets) as u64 + trial;
                let mut game = gen_rgs(targets, 10, support, defenders, seed).unwrap();
                enforce_monotone(&mut game).unwrap();
                check_monotone(&game).unwrap_or_else(|e| {
                    panic!("rewrite left a non-monotone schedule (seed={seed}): {e}")
                });
                let solved = solve_multi_ms(&game)
                    .unwrap_or_else(|e| panic!("solver refused n={defenders} seed={seed}: {e}"));
                common::assert_nse(&game, &solved);
                games += 1;
            }
        }
    }
    assert_eq!(games, 300);

    gate.close();
}

#[test]
fn a06_flow_backend_matches_path_enumeration() {
    let gate = Gate::open(6, "flow backend equals path enumeration", 120);

    let mut rng = common::rng(60_001);
    for layers in 1..=4 {
        for width in 1..=4 {
            let network = LayeredNetwork::new(layers, width).unwrap();
            let flow = CoverageSet::LayeredNetwork(network);
            let paths = common::paths_as_ssas(&network, DEFAULT_PATH_CAP);
            for _ in 0..50 {
                let subset = common::random_subset(&mut rng, network.num_targets());
                let (via_flow, _) = flow.maximin(&subset).unwrap();
                let (via_paths, _) = paths.maximin(&subset).unwrap();
                let via_flow = via_flow.finite().expect("nonempty subsets are finite");
                let via_paths = via_paths.finite().expect("nonempty subsets are finite");
                assert!(
                    (via_flow - via_paths).abs() <= 1e-6,
                    "layers={layers} width={width} subset={subset:?}: \
                     flow {via_flow} vs paths {via_paths}"
                );
            }
        }
    }

    gate.close();
}

#[test]
fn a07_maximin_grows_when_the_demanded_set_shrinks() {
    let gate = Gate::open(7, "maximin subset monotonicity", 300);

    let mut rng = common::rng(70_001);
    let mut pairs = 0u64;
    let mut round = 0u64;
    while pairs < 1000 {
        let game = match round % 3 {
            0 => gen_rgs(
                4 + round as usize % 9,
                6,
                1 + round as usize % 4,
                2,
                70_100 + round,
            )
            .unwrap(),
            1 => gen_psg(
                2 + round as usize % 3,
                1 + round as usize % 2,
                70_200 + round,
            )
            .unwrap(),
            _ => gen_pln(
                2 + round as usize % 2,
                2 + round as usize % 2,
                2,
                70_300 + round,
            )
            .unwrap(),
        };
        round += 1;
        for defender in &game.defenders {
            let demanded = common::random_subset(&mut rng, game.num_targets);
            let relaxed = common::random_subsubset(&mut rng, &demanded);
            let (full, _) = defender.coverage_set.maximin(&demanded).unwrap();
            let (sub, _) = defender.coverage_set.maximin(&relaxed).unwrap();
            assert!(
                sub.at_least(full, 1e-9),
                "dropping demands lowered the maximin: {sub:?} < {full:?} \
                 ({:?} demanded={demanded:?} relaxed={relaxed:?})",
                game.metadata.label
            );
            pairs += 1;
        }
    }

    gate.close();
}

#[test]
fn a08_equilibrium_set_closure_properties() {
    let gate = Gate::open(8, "equilibrium set closure", 300);

    for trial in 0..100u64 {
        let targets = [5usize, 8, 10][trial as usize % 3];
        let support = 1 + trial as usize % targets;
        let seed = 80_000 + trial;
        let game = gen_rgs(targets, 10, support, 2, seed).unwrap();

        // A defender that can hold its side of some target can hold its
        // side of everything its rival likes better.
        for defender in 0..2 {
            let rival = &game.defenders[1 - defender].preference;
            let nonempty: Vec<bool> = (0..targets)
                .map(|j| partial_set_nonempty(&game, TargetId(j), defender).unwrap())
                .collect();
            for j in 0..targets {
                if !nonempty[j] {
                    continue;
                }
                for (k, &held) in nonempty.iter().enumerate() {
                    if rival.prefers(TargetId(k), TargetId(j)) {
                        assert!(
                            held,
                            "seed={seed}: defender {} holds {} but not {}",
                            defender + 1,
                            TargetId(j),
                            TargetId(k)
                        );
                    }
                }
            }
        }

        // The equilibrium target set is closed under unanimous preference,
        // and it always contains an efficient member.
        let rows = enumerate_equilibrium_targets(&game).unwrap();
        let equilibrium: BTreeSet<usize> = rows.iter().map(|r| r.target.index()).collect();
        let (first, second) = (&game.defenders[0].preference, &game.defenders[1].preference);
        for &t in &equilibrium {
            for j in 0..targets {
                if first.prefers(TargetId(j), TargetId(t))
                    && second.prefers(TargetId(j), TargetId(t))
                {
                    assert!(
                        equilibrium.contains(&j),
                        "seed={seed}: {} is unanimously preferred over the \
                         equilibrium target {} but is not one itself",
                        TargetId(j),
                        TargetId(t)
                    );
                }
            }
        }
        assert!(
            rows.iter().any(|r| r.efficiency == Efficiency::Efficient),
            "seed={seed}: no efficient equilibrium target"
        );
    }

    gate.close();
}

fn rgs_config(targets: usize, schedules: usize, support: usize, seed: u64) -> GeneratorConfig {
    GeneratorConfig::Rgs {
        targets,
        schedules,
        support,
        defenders: 2,
        seed,
    }
}

/// Per-config mean seconds, insisting every trial succeeded.
fn mean_seconds(records: &[BenchRecord], trials: usize) -> Vec<f64> {
    records
        .chunks(trials)
        .map(|chunk| {
            let total: f64 = chunk
                .iter()
                .map(|r| {
                    r.seconds
                        .unwrap_or_else(|| panic!("trial failed: {:?}", r.error))
                })
                .sum();
            total / chunk.len() as f64
        })
        .collect()
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    (slope, 1.0 - ss_res / ss_tot)
}

#[test]
fn a09_runtime_scaling_trends() {
    let gate = Gate::open(9, "runtime scaling trends", 900);

    // Runtime grows superlinearly in the target count.
    let configs: Vec<GeneratorConfig> = [50, 100, 150]
        .iter()
        .map(|&t| rgs_config(t, 100, 10, 90_100))
        .collect();
    let means = mean_seconds(&run_bench(&configs, SolverKind::Two, 16, false), 16);
    eprintln!("target sweep means: {means:?}");
    assert!(
        means[2] / means[0] > 3.0,
        "tripling targets only scaled runtime by {:.2}",
        means[2] / means[0]
    );

    // Runtime grows roughly linearly in the schedule count.
    let sizes = [100.0, 200.0, 300.0, 400.0, 500.0];
    let configs: Vec<GeneratorConfig> = sizes
        .iter()
        .map(|&s| rgs_config(100, s as usize, 10, 90_200))
        .collect();
    let means = mean_seconds(&run_bench(&configs, SolverKind::Two, 24, false), 24);
    let (slope, r2) = linear_fit(&sizes, &means);
    eprintln!("schedule sweep means: {means:?} slope={slope:.3e} r2={r2:.3}");
    assert!(slope > 0.0, "runtime must increase with the schedule count");
    assert!(
        r2 >= 0.7,
        "schedule-count scaling strayed too far from a line (r2={r2:.3})"
    );

    // Runtime is flat across support sizes at a fixed target count.
    let configs: Vec<GeneratorConfig> = [10, 25, 50, 100]
        .iter()
        .map(|&u| rgs_config(100, 100, u, 90_300))
        .collect();
    let means = mean_seconds(&run_bench(&configs, SolverKind::Two, 32, false), 32);
    let (lo, hi) = means.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), &m| {
        (lo.min(m), hi.max(m))
    });
    eprintln!("support sweep means: {means:?}");
    assert!(
        hi / lo <= 2.5,
        "support size changed runtime by {:.2}x",
        hi / lo
    );

    gate.close();
}

#[test]
fn a10_efficient_target_ratio_shrinks_with_size() {
    let gate = Gate::open(10, "efficient-target ratio trend", 600);

    let trials = 20;
    let configs: Vec<GeneratorConfig> = [20, 50, 100]
        .iter()
        .map(|&t| rgs_config(t, 200, t, 100_100))
        .collect();
    let records = run_stats(&configs, trials);
    let means: Vec<f64> = records
        .chunks(trials)
        .map(|chunk| {
            let total: f64 = chunk
                .iter()
                .map(|r| {
                    assert!(r.error.is_none(), "trial failed: {:?}", r.error);
                    r.efficient_ratio
                })
                .sum();
            total / chunk.len() as f64
        })
        .collect();
    eprintln!("efficient-target ratio means: {means:?}");
    assert!(
        means[0] >= means[1] - 1e-9 && means[1] >= means[2] - 1e-9,
        "the mean efficient-target ratio must not increase with the target \
         count: {means:?}"
    );

    gate.close();
}
