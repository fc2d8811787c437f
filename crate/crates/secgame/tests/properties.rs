//! Randomized invariant checks tying the solvers, the oracle, and the
//! verifier together.

mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use secgame::coverage::{CoverageSet, LayeredNetwork, ScheduleMode};
use secgame::game::{is_waic, CoverageVector, Game, PreferenceOrder, StrategyProfile, TargetId};
use secgame::generate::{enforce_monotone, gen_rgs};
use secgame::solver::multi::solve_multi_ms;
use secgame::solver::two::{build_t_standard, enumerate_equilibrium_targets, solve_two};
use secgame::verify::{deviation_exists, verify_nse, Tolerances};

fn schedules_from(seed: u64, targets: usize, count: usize) -> Vec<CoverageVector> {
    let mut r = common::rng(seed);
    (0..count)
        .map(|_| {
            CoverageVector(
                (0..targets)
                    .map(|_| r.random_range(0..=10) as f64 / 10.0)
                    .collect(),
            )
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn best_response_set_is_sound_and_grows_with_tolerance(
        cov in prop::collection::vec(0.0f64..10.0, 1..12),
        tol_small in 0.0f64..0.5,
        extra in 0.0f64..0.5,
    ) {
        let v = CoverageVector(cov.clone());
        let small = v.best_response_set(tol_small);
        let large = v.best_response_set(tol_small + extra);
        prop_assert!(!small.is_empty());
        let min = cov.iter().cloned().fold(f64::INFINITY, f64::min);
        let argmin = cov.iter().position(|&x| x == min).unwrap();
        prop_assert!(small.contains(&TargetId(argmin)));
        for t in &small {
            prop_assert!(large.contains(t));
        }
    }

    #[test]
    fn preference_sets_partition_the_targets(seed in any::<u64>(), n in 1usize..12) {
        let mut r = common::rng(seed);
        let mut ranking: Vec<TargetId> = (0..n).map(TargetId).collect();
        ranking.shuffle(&mut r);
        let pref = PreferenceOrder::new(ranking).unwrap();
        let t = common::random_target(&mut r, n);

        let above = pref.strictly_above(t);
        let below = pref.strictly_below(t);
        prop_assert_eq!(above.len() + below.len() + 1, n);
        for j in above.iter() {
            prop_assert!(pref.prefers(*j, t));
            prop_assert!(!below.contains(j));
        }
        for j in below.iter() {
            prop_assert!(pref.prefers(t, *j));
        }
        let mut weak = pref.weakly_above(t);
        prop_assert!(weak.contains(&t));
        weak.retain(|&j| j != t);
        prop_assert_eq!(weak, above);
    }

    #[test]
    fn waic_matches_its_definition(
        cov1 in prop::collection::vec(0.0f64..2.0, 2..7),
        seed in any::<u64>(),
    ) {
        let n = cov1.len();
        let mut r = common::rng(seed);
        let mut ranking: Vec<TargetId> = (0..n).map(TargetId).collect();
        ranking.shuffle(&mut r);
        let game = Game {
            num_targets: n,
            defenders: vec![secgame::game::Defender {
                preference: PreferenceOrder::new(ranking).unwrap(),
                coverage_set: CoverageSet::Schedules {
                    mode: ScheduleMode::Ssas,
                    schedules: vec![CoverageVector::zeros(n)],
                },
            }],
            metadata: Default::default(),
        };
        let profile = StrategyProfile {
            coverages: vec![CoverageVector(cov1.clone())],
            target: common::random_target(&mut r, n),
        };
        let tol = 1e-9;
        let got = is_waic(&game, &profile, 0, tol);

        // Independent restatement: the target is minimal, and every
        // other minimal target is strictly preferred by the defender.
        let min = cov1.iter().cloned().fold(f64::INFINITY, f64::min);
        let pref = &game.defenders[0].preference;
        let expected = cov1[profile.target.index()] <= min + tol
            && cov1.iter().enumerate().all(|(j, &c)| {
                c > min + tol
                    || TargetId(j) == profile.target
                    || pref.prefers(TargetId(j), profile.target)
            });
        prop_assert_eq!(got, expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn maximin_witness_is_feasible_and_covers_the_subset(
        seed in any::<u64>(),
        targets in 1usize..7,
        count in 1usize..5,
    ) {
        let schedules = schedules_from(seed, targets, count);
        let set = CoverageSet::Schedules { mode: ScheduleMode::Ssas, schedules };
        let mut r = common::rng(seed ^ 1);
        let subset = common::random_subset(&mut r, targets);
        let (value, witness) = set.maximin(&subset).unwrap();
        let value = value.finite().unwrap();
        let witness = witness.unwrap();
        prop_assert!(set.contains(&witness, 1e-7).unwrap());
        for t in &subset {
            prop_assert!(witness.get(*t) >= value - 1e-7);
        }
    }

    #[test]
    fn maximin_value_ignores_the_schedule_mode(
        seed in any::<u64>(),
        targets in 1usize..7,
        count in 1usize..5,
    ) {
        let schedules = schedules_from(seed, targets, count);
        let ssas = CoverageSet::Schedules {
            mode: ScheduleMode::Ssas,
            schedules: schedules.clone(),
        };
        let clearance = CoverageSet::Schedules { mode: ScheduleMode::Clearance, schedules };
        let mut r = common::rng(seed ^ 2);
        let subset = common::random_subset(&mut r, targets);
        let (a, _) = ssas.maximin(&subset).unwrap();
        let (b, _) = clearance.maximin(&subset).unwrap();
        prop_assert!((a.finite().unwrap() - b.finite().unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn droppable_sets_are_downward_closed(
        seed in any::<u64>(),
        targets in 1usize..7,
        count in 1usize..5,
        scale in 0.0f64..1.0,
        drop_seed in any::<u64>(),
    ) {
        let schedules = schedules_from(seed, targets, count);
        let set = CoverageSet::Schedules { mode: ScheduleMode::Ssas, schedules };
        let mut r = common::rng(seed ^ 3);
        let subset = common::random_subset(&mut r, targets);
        let (_, witness) = set.maximin(&subset).unwrap();
        let witness = witness.unwrap();

        let mut dropper = common::rng(drop_seed);
        let reduced = CoverageVector(
            witness
                .as_slice()
                .iter()
                .map(|&v| if dropper.random_bool(0.5) { v * scale } else { v })
                .collect(),
        );
        prop_assert!(set.contains(&reduced, 1e-7).unwrap());
    }

    #[test]
    fn exact_mixtures_belong_to_both_modes(
        seed in any::<u64>(),
        targets in 1usize..7,
        count in 1usize..5,
    ) {
        let schedules = schedules_from(seed, targets, count);
        let mut r = common::rng(seed ^ 4);
        let weights: Vec<f64> = (0..count).map(|_| r.random_range(0.0..1.0) + 1e-3).collect();
        let total: f64 = weights.iter().sum();
        let mixture = CoverageVector(
            (0..targets)
                .map(|j| {
                    schedules
                        .iter()
                        .zip(&weights)
                        .map(|(s, w)| s.0[j] * w / total)
                        .sum()
                })
                .collect(),
        );
        let clearance = CoverageSet::Schedules {
            mode: ScheduleMode::Clearance,
            schedules: schedules.clone(),
        };
        let ssas = CoverageSet::Schedules { mode: ScheduleMode::Ssas, schedules };
        prop_assert!(clearance.contains(&mixture, 1e-7).unwrap());
        prop_assert!(ssas.contains(&mixture, 1e-7).unwrap());
    }

    #[test]
    fn flow_backend_matches_enumerated_paths(
        layers in 1usize..4,
        width in 1usize..4,
        seed in any::<u64>(),
    ) {
        let net = LayeredNetwork::new(layers, width).unwrap();
        let flow = CoverageSet::LayeredNetwork(net);
        let paths = common::paths_as_ssas(&net, 100_000);
        let mut r = common::rng(seed);
        let subset = common::random_subset(&mut r, net.num_targets());
        let (a, _) = flow.maximin(&subset).unwrap();
        let (b, _) = paths.maximin(&subset).unwrap();
        prop_assert!((a.finite().unwrap() - b.finite().unwrap()).abs() <= 1e-7);
    }

    #[test]
    fn maximin_grows_when_the_subset_shrinks(
        seed in any::<u64>(),
        targets in 1usize..8,
        count in 1usize..5,
    ) {
        let schedules = schedules_from(seed, targets, count);
        let set = CoverageSet::Schedules { mode: ScheduleMode::Ssas, schedules };
        let mut r = common::rng(seed ^ 5);
        let full = common::random_subset(&mut r, targets);
        let sub = common::random_subsubset(&mut r, &full);
        let (on_full, _) = set.maximin(&full).unwrap();
        let (on_sub, _) = set.maximin(&sub).unwrap();
        prop_assert!(on_sub.at_least(on_full, 1e-9));
    }

    #[test]
    fn two_defender_solver_outputs_verify(
        seed in any::<u64>(),
        targets in 1usize..8,
        schedules in 1usize..6,
    ) {
        let support = 1 + (seed % targets as u64) as usize;
        let game = gen_rgs(targets, schedules, support, 2, seed).unwrap();
        let profile = solve_two(&game).unwrap();
        common::assert_nse(&game, &profile);
    }

    #[test]
    fn multi_defender_solver_outputs_verify(
        seed in any::<u64>(),
        targets in 1usize..7,
        schedules in 1usize..5,
        defenders in 1usize..5,
    ) {
        let mut game = gen_rgs(targets, schedules, targets, defenders, seed).unwrap();
        enforce_monotone(&mut game).unwrap();
        let profile = solve_multi_ms(&game).unwrap();
        common::assert_nse(&game, &profile);
    }

    #[test]
    fn strict_deviations_reproduce_adversarial_tie_breaking(
        seed in any::<u64>(),
        targets in 2usize..7,
        schedules in 1usize..4,
    ) {
        let game = gen_rgs(targets, schedules, targets, 2, seed).unwrap();
        let mut r = common::rng(seed ^ 6);
        let profile = StrategyProfile {
            coverages: vec![
                CoverageVector::zeros(targets),
                CoverageVector::zeros(targets),
            ],
            target: common::random_target(&mut r, targets),
        };
        let tols = Tolerances::default();
        for i in 0..2 {
            for alt in game.defenders[i].preference.strictly_above(profile.target) {
                let (margin, witness) = deviation_exists(&game, &profile, i, alt, &tols).unwrap();
                if let Some(coverage) = witness {
                    let mut deviated = profile.clone();
                    deviated.coverages[i] = coverage;
                    deviated.target = alt;
                    let tie_tol = 0.5 * margin.min(1e-3);
                    prop_assert!(is_waic(&game, &deviated, i, tie_tol));
                }
            }
        }
    }

    #[test]
    fn game_and_profile_json_round_trip(
        seed in any::<u64>(),
        targets in 1usize..7,
        schedules in 1usize..5,
        defenders in 1usize..4,
    ) {
        let game = gen_rgs(targets, schedules, targets, defenders, seed).unwrap();
        let back = Game::from_json(&game.to_json()).unwrap();
        prop_assert_eq!(&back, &game);

        let mut r = common::rng(seed ^ 7);
        let profile = StrategyProfile {
            coverages: (0..defenders).map(|_| CoverageVector::zeros(targets)).collect(),
            target: common::random_target(&mut r, targets),
        };
        let round = StrategyProfile::from_json(&profile.to_json()).unwrap();
        prop_assert_eq!(round, profile);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enumeration_agrees_with_the_solver_and_the_verifier(
        seed in any::<u64>(),
        targets in 1usize..6,
        schedules in 1usize..4,
    ) {
        let game = gen_rgs(targets, schedules, targets, 2, seed).unwrap();
        let rows = enumerate_equilibrium_targets(&game).unwrap();
        let listed: Vec<TargetId> = rows.iter().map(|r| r.target).collect();

        let solved = solve_two(&game).unwrap();
        prop_assert!(listed.contains(&solved.target));

        for t in game.targets() {
            let standard = build_t_standard(&game, t).unwrap();
            if listed.contains(&t) {
                let profile = standard.expect("listed targets have a standard profile");
                let report = verify_nse(&game, &profile, &Tolerances::default()).unwrap();
                prop_assert!(report.is_nse, "target {} listed but not an NSE", t);
            } else {
                prop_assert!(standard.is_none());
            }
        }
    }
}
