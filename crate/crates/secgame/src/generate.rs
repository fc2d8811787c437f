//! Reproducible game generators and named fixtures.
//!
//! Three synthetic families cover the benchmark surface:
//!
//! * **RGS** — random general-sum schedule games with integer coverage
//!   entries on a sampled support;
//! * **PSG** — patrol games on an `m x m` grid of buildings where a
//!   checkpoint covers everything within L1 distance `r`;
//! * **PLN** — patrol games on a layered network, where each defender's
//!   coverage set is the flow polytope of the same network.
//!
//! All randomness flows through ChaCha8 seeded from a caller-provided
//! 64-bit seed, so identical parameters produce byte-identical games
//! across platforms. The seed is recorded in the game metadata.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::coverage::{CoverageSet, LayeredNetwork, ScheduleMode};
use crate::error::{Error, Result};
use crate::game::{CoverageVector, Defender, Game, Metadata, PreferenceOrder, TargetId};

/// Parameters for one generated game, serializable for audit trails.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GeneratorConfig {
    Rgs {
        targets: usize,
        schedules: usize,
        support: usize,
        defenders: usize,
        seed: u64,
    },
    Psg {
        side: usize,
        radius: usize,
        seed: u64,
    },
    Pln {
        layers: usize,
        width: usize,
        defenders: usize,
        seed: u64,
    },
}

impl fmt::Display for GeneratorConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GeneratorConfig::Rgs {
                targets,
                schedules,
                support,
                defenders,
                seed,
            } => write!(
                f,
                "rgs targets={targets} schedules={schedules} support={support} \
                 defenders={defenders} seed={seed}"
            ),
            GeneratorConfig::Psg { side, radius, seed } => {
                write!(f, "psg side={side} radius={radius} seed={seed}")
            }
            GeneratorConfig::Pln {
                layers,
                width,
                defenders,
                seed,
            } => write!(
                f,
                "pln layers={layers} width={width} defenders={defenders} seed={seed}"
            ),
        }
    }
}

impl GeneratorConfig {
    pub fn build(&self) -> Result<Game> {
        match *self {
            GeneratorConfig::Rgs {
                targets,
                schedules,
                support,
                defenders,
                seed,
            } => gen_rgs(targets, schedules, support, defenders, seed),
            GeneratorConfig::Psg { side, radius, seed } => gen_psg(side, radius, seed),
            GeneratorConfig::Pln {
                layers,
                width,
                defenders,
                seed,
            } => gen_pln(layers, width, defenders, seed),
        }
    }
}

fn random_preference(num_targets: usize, rng: &mut ChaCha8Rng) -> PreferenceOrder {
    let mut ranking: Vec<TargetId> = (0..num_targets).map(TargetId).collect();
    ranking.shuffle(rng);
    PreferenceOrder::new(ranking).expect("a shuffled identity ranking is a permutation")
}

/// Random general-sum schedule game: each defender gets `schedules`
/// schedules whose support is `support` targets sampled uniformly without
/// replacement, with supported entries drawn uniformly from the integers
/// 0 through 10, plus a uniformly random preference permutation.
pub fn gen_rgs(
    targets: usize,
    schedules: usize,
    support: usize,
    defenders: usize,
    seed: u64,
) -> Result<Game> {
    if targets < 1 || schedules < 1 || defenders < 1 {
        return Err(Error::Validation(
            "generator sizes must all be at least 1".into(),
        ));
    }
    if support < 1 || support > targets {
        return Err(Error::Validation(format!(
            "schedule support {support} must be between 1 and the target count {targets}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let defenders = (0..defenders)
        .map(|_| {
            let preference = random_preference(targets, &mut rng);
            let schedules = (0..schedules)
                .map(|_| {
                    let mut entries = vec![0.0; targets];
                    for t in rand::seq::index::sample(&mut rng, targets, support) {
                        entries[t] = rng.random_range(0..=10) as f64;
                    }
                    CoverageVector(entries)
                })
                .collect();
            Defender {
                preference,
                coverage_set: CoverageSet::Schedules {
                    mode: ScheduleMode::Ssas,
                    schedules,
                },
            }
        })
        .collect();

    let game = Game {
        num_targets: targets,
        defenders,
        metadata: Metadata {
            label: Some(format!("rgs-t{targets}-s{}-u{support}", schedules)),
            seed: Some(seed),
        },
    };
    game.validate()?;
    Ok(game)
}

/// Patrol schedule game on an `side x side` grid: targets are buildings,
/// and the schedule anchored at building `b` covers every building within
/// L1 distance strictly less than `radius`. Two defenders share the same
/// footprints but draw independent preference permutations.
pub fn gen_psg(side: usize, radius: usize, seed: u64) -> Result<Game> {
    if side < 1 || radius < 1 {
        return Err(Error::Validation(
            "grid side and radius must both be at least 1".into(),
        ));
    }

    let targets = side * side;
    let coord = |t: usize| (t / side, t % side);
    let footprints: Vec<CoverageVector> = (0..targets)
        .map(|b| {
            let (bi, bj) = coord(b);
            let entries = (0..targets)
                .map(|t| {
                    let (ti, tj) = coord(t);
                    let dist = bi.abs_diff(ti) + bj.abs_diff(tj);
                    if dist < radius {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect();
            CoverageVector(entries)
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let defenders = (0..2)
        .map(|_| Defender {
            preference: random_preference(targets, &mut rng),
            coverage_set: CoverageSet::Schedules {
                mode: ScheduleMode::Ssas,
                schedules: footprints.clone(),
            },
        })
        .collect();

    let game = Game {
        num_targets: targets,
        defenders,
        metadata: Metadata {
            label: Some(format!("psg-m{side}-r{radius}")),
            seed: Some(seed),
        },
    };
    game.validate()?;
    Ok(game)
}

/// Patrol game on a layered network: every defender patrols the same
/// `layers x width` network, so its coverage set is that network's flow
/// polytope, and preferences are independent random permutations.
pub fn gen_pln(layers: usize, width: usize, defenders: usize, seed: u64) -> Result<Game> {
    if defenders < 1 {
        return Err(Error::Validation(
            "the defender count must be at least 1".into(),
        ));
    }
    let network = LayeredNetwork::new(layers, width)?;
    let targets = network.num_targets();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let defenders = (0..defenders)
        .map(|_| Defender {
            preference: random_preference(targets, &mut rng),
            coverage_set: CoverageSet::LayeredNetwork(network),
        })
        .collect();

    let game = Game {
        num_targets: targets,
        defenders,
        metadata: Metadata {
            label: Some(format!("pln-l{layers}-w{width}")),
            seed: Some(seed),
        },
    };
    game.validate()?;
    Ok(game)
}

/// Rewrites every schedule to satisfy the monotonicity requirement of
/// the multi-defender solver: a schedule may never put more coverage on
/// a target its owner prefers attacked. Each schedule's own values are
/// reassigned in ascending order along the owner's ranking (smallest on
/// the most preferred target), preserving the multiset of entries.
pub fn enforce_monotone(game: &mut Game) -> Result<()> {
    for defender in &mut game.defenders {
        let ranking = defender.preference.ranking().to_vec();
        match &mut defender.coverage_set {
            CoverageSet::Schedules { schedules, .. } => {
                for schedule in schedules {
                    let mut values: Vec<f64> = schedule.0.clone();
                    values.sort_by(|a, b| a.partial_cmp(b).expect("finite coverage"));
                    for (rank, &t) in ranking.iter().enumerate() {
                        schedule.0[t.index()] = values[rank];
                    }
                }
            }
            _ => {
                return Err(Error::Precondition(
                    "monotone rewriting applies to explicit schedule sets only".into(),
                ))
            }
        }
    }
    Ok(())
}

/// The three-target game where both defenders hold the identity schedules
/// and share the preference order 1, 2, 3.
pub fn identity3() -> Game {
    let rows = vec![
        CoverageVector(vec![1.0, 0.0, 0.0]),
        CoverageVector(vec![0.0, 1.0, 0.0]),
        CoverageVector(vec![0.0, 0.0, 1.0]),
    ];
    let pref = PreferenceOrder::new(vec![TargetId(0), TargetId(1), TargetId(2)])
        .expect("static ranking is a permutation");
    let defender = || Defender {
        preference: pref.clone(),
        coverage_set: CoverageSet::Schedules {
            mode: ScheduleMode::Ssas,
            schedules: rows.clone(),
        },
    };
    Game {
        num_targets: 3,
        defenders: vec![defender(), defender()],
        metadata: Metadata {
            label: Some("identity3".into()),
            seed: None,
        },
    }
}

/// A two-target game with exactly opposed preferences where each defender
/// holds a single schedule covering only the target it least wants
/// attacked. Both targets are efficient equilibrium targets, which makes
/// this the smallest game where the rank conventions disagree.
pub fn opposed2() -> Game {
    let defender = |ranking: Vec<usize>, schedule: Vec<f64>| Defender {
        preference: PreferenceOrder::new(ranking.into_iter().map(TargetId).collect())
            .expect("static ranking is a permutation"),
        coverage_set: CoverageSet::Schedules {
            mode: ScheduleMode::Ssas,
            schedules: vec![CoverageVector(schedule)],
        },
    };
    Game {
        num_targets: 2,
        defenders: vec![
            defender(vec![0, 1], vec![0.0, 1.0]),
            defender(vec![1, 0], vec![1.0, 0.0]),
        ],
        metadata: Metadata {
            label: Some("opposed2".into()),
            seed: None,
        },
    }
}

/// The four-target interleaved family. Targets are, in index order, the
/// pairs 11, 12, 21, 22; defender 1 ranks them 22, 11, 12, 21 and
/// defender 2 ranks them 21, 12, 11, 22. Parameters must satisfy
/// `k >= 1`, `epsilon >= 0`, and `k * epsilon < 1`.
pub fn example1(epsilon: f64, k: f64, mode: ScheduleMode) -> Result<Game> {
    // Positive phrasing so NaN parameters fail every comparison and are rejected.
    let params_ok = k >= 1.0 && epsilon >= 0.0 && k * epsilon < 1.0;
    if !params_ok {
        return Err(Error::Validation(format!(
            "the family requires k >= 1, epsilon >= 0, and k * epsilon < 1; \
             got epsilon = {epsilon}, k = {k}"
        )));
    }
    let ke = k * epsilon;
    let d1 = Defender {
        preference: PreferenceOrder::new(vec![TargetId(3), TargetId(0), TargetId(1), TargetId(2)])
            .expect("static ranking is a permutation"),
        coverage_set: CoverageSet::Schedules {
            mode,
            schedules: vec![
                CoverageVector(vec![1.0 - epsilon, 1.0, ke, 0.0]),
                CoverageVector(vec![0.0, ke, 1.0, 1.0 - epsilon]),
            ],
        },
    };
    let d2 = Defender {
        preference: PreferenceOrder::new(vec![TargetId(2), TargetId(1), TargetId(0), TargetId(3)])
            .expect("static ranking is a permutation"),
        coverage_set: CoverageSet::Schedules {
            mode,
            schedules: vec![
                CoverageVector(vec![1.0, 0.0, 1.0 - epsilon, ke]),
                CoverageVector(vec![ke, 1.0 - epsilon, 0.0, 1.0]),
            ],
        },
    };
    Ok(Game {
        num_targets: 4,
        defenders: vec![d1, d2],
        metadata: Metadata {
            label: Some(format!("example1-eps{epsilon}-k{k}")),
            seed: None,
        },
    })
}

/// Looks up a fixture by name: `identity3` or
/// `example1(epsilon, k, mode)` with mode `ssas` or `clearance`.
pub fn fixture(name: &str) -> Result<Game> {
    let name = name.trim();
    if name == "identity3" {
        return Ok(identity3());
    }
    if let Some(args) = name
        .strip_prefix("example1(")
        .and_then(|rest| rest.strip_suffix(')'))
    {
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::UnknownFixture(format!(
                "{name} (expected example1(epsilon, k, mode))"
            )));
        }
        let epsilon: f64 = parts[0]
            .parse()
            .map_err(|_| Error::UnknownFixture(format!("{name} (bad epsilon)")))?;
        let k: f64 = parts[1]
            .parse()
            .map_err(|_| Error::UnknownFixture(format!("{name} (bad k)")))?;
        let mode = match parts[2] {
            "ssas" => ScheduleMode::Ssas,
            "clearance" => ScheduleMode::Clearance,
            other => {
                return Err(Error::UnknownFixture(format!(
                    "{name} (mode {other:?} is not ssas or clearance)"
                )))
            }
        };
        return example1(epsilon, k, mode);
    }
    Err(Error::UnknownFixture(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rgs_is_deterministic_and_valid() {
        let a = gen_rgs(10, 10, 10, 2, 42).unwrap();
        let b = gen_rgs(10, 10, 10, 2, 42).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.validate().is_ok());
        assert_eq!(a.metadata.seed, Some(42));

        let c = gen_rgs(10, 10, 10, 2, 43).unwrap();
        assert_ne!(a.to_json(), c.to_json());
    }

    #[test]
    fn rgs_entries_are_small_integers_on_the_support() {
        let game = gen_rgs(8, 5, 3, 2, 7).unwrap();
        for d in &game.defenders {
            let CoverageSet::Schedules { schedules, .. } = &d.coverage_set else {
                panic!("rgs games use explicit schedules");
            };
            for s in schedules {
                let support = s.0.iter().filter(|&&x| x != 0.0).count();
                assert!(support <= 3);
                for &x in &s.0 {
                    assert_eq!(x, x.round());
                    assert!((0.0..=10.0).contains(&x));
                }
            }
        }
    }

    #[test]
    fn rgs_rejects_bad_sizes() {
        assert!(gen_rgs(5, 3, 6, 2, 0).is_err());
        assert!(gen_rgs(0, 3, 1, 2, 0).is_err());
        assert!(gen_rgs(5, 0, 1, 2, 0).is_err());
    }

    #[test]
    fn psg_footprints_count_l1_neighbors() {
        let game = gen_psg(4, 2, 1).unwrap();
        assert_eq!(game.num_targets, 16);
        assert_eq!(game.num_defenders(), 2);
        let CoverageSet::Schedules { schedules, .. } = &game.defenders[0].coverage_set else {
            panic!("psg games use explicit schedules");
        };
        // Building (0,0) reaches itself plus its two in-grid neighbors.
        let corner: f64 = schedules[0].0.iter().sum();
        assert_eq!(corner, 3.0);
        // Building (1,1) reaches itself plus four neighbors.
        let center: f64 = schedules[5].0.iter().sum();
        assert_eq!(center, 5.0);
    }

    #[test]
    fn psg_coverage_is_symmetric() {
        let game = gen_psg(5, 3, 9).unwrap();
        let CoverageSet::Schedules { schedules, .. } = &game.defenders[0].coverage_set else {
            panic!("psg games use explicit schedules");
        };
        for b in 0..game.num_targets {
            for t in 0..game.num_targets {
                assert_eq!(schedules[b].0[t], schedules[t].0[b]);
            }
        }
    }

    #[test]
    fn psg_single_building() {
        let game = gen_psg(1, 1, 0).unwrap();
        assert_eq!(game.num_targets, 1);
        let CoverageSet::Schedules { schedules, .. } = &game.defenders[0].coverage_set else {
            panic!("psg games use explicit schedules");
        };
        assert_eq!(schedules, &vec![CoverageVector(vec![1.0])]);
    }

    #[test]
    fn pln_defenders_share_the_network() {
        let game = gen_pln(3, 4, 3, 5).unwrap();
        assert_eq!(game.num_targets, 12);
        assert_eq!(game.num_defenders(), 3);
        for d in &game.defenders {
            let CoverageSet::LayeredNetwork(net) = &d.coverage_set else {
                panic!("pln games use flow polytopes");
            };
            assert_eq!((net.layers, net.width), (3, 4));
        }
        let again = gen_pln(3, 4, 3, 5).unwrap();
        assert_eq!(game.to_json(), again.to_json());
    }

    #[test]
    fn pln_every_target_is_coverable() {
        let game = gen_pln(3, 4, 1, 11).unwrap();
        for t in game.targets() {
            let (value, _) = game.defenders[0].coverage_set.maximin(&[t]).unwrap();
            assert!(value.finite().unwrap() > 0.0);
        }
    }

    #[test]
    fn monotone_rewrite_sorts_along_preferences() {
        let mut game = gen_rgs(6, 4, 6, 3, 17).unwrap();
        enforce_monotone(&mut game).unwrap();
        for d in &game.defenders {
            let CoverageSet::Schedules { schedules, .. } = &d.coverage_set else {
                unreachable!();
            };
            for s in schedules {
                let ranking = d.preference.ranking();
                for w in ranking.windows(2) {
                    assert!(s.get(w[0]) <= s.get(w[1]));
                }
            }
        }
        assert!(crate::solver::multi::check_monotone(&game).is_ok());
    }

    #[test]
    fn identity3_matches_its_definition() {
        let game = identity3();
        assert!(game.validate().is_ok());
        assert_eq!(game.num_targets, 3);
        for d in &game.defenders {
            assert_eq!(
                d.preference.ranking(),
                &[TargetId(0), TargetId(1), TargetId(2)]
            );
            let CoverageSet::Schedules { mode, schedules } = &d.coverage_set else {
                panic!("identity game uses explicit schedules");
            };
            assert_eq!(*mode, ScheduleMode::Ssas);
            for (i, s) in schedules.iter().enumerate() {
                for j in 0..3 {
                    assert_eq!(s.0[j], if i == j { 1.0 } else { 0.0 });
                }
            }
        }
    }

    #[test]
    fn example1_schedules_are_verbatim() {
        let game = example1(0.0, 1.0, ScheduleMode::Ssas).unwrap();
        let rows = |d: usize| -> Vec<Vec<f64>> {
            let CoverageSet::Schedules { schedules, .. } = &game.defenders[d].coverage_set else {
                unreachable!();
            };
            schedules.iter().map(|s| s.0.clone()).collect()
        };
        assert_eq!(
            rows(0),
            vec![vec![1.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 1.0]]
        );
        assert_eq!(
            rows(1),
            vec![vec![1.0, 0.0, 1.0, 0.0], vec![0.0, 1.0, 0.0, 1.0]]
        );

        let game = example1(1e-3, 100.0, ScheduleMode::Clearance).unwrap();
        let CoverageSet::Schedules { mode, schedules } = &game.defenders[0].coverage_set else {
            unreachable!();
        };
        assert_eq!(*mode, ScheduleMode::Clearance);
        assert_eq!(schedules[0].0, vec![0.999, 1.0, 0.1, 0.0]);
    }

    #[test]
    fn example1_rejects_out_of_range_parameters() {
        assert!(example1(0.0, 0.5, ScheduleMode::Ssas).is_err());
        assert!(example1(-1.0, 2.0, ScheduleMode::Ssas).is_err());
        assert!(example1(0.5, 2.0, ScheduleMode::Ssas).is_err());
    }

    #[test]
    fn fixtures_parse_by_name() {
        assert_eq!(fixture("identity3").unwrap().num_targets, 3);
        let game = fixture("example1(0.001, 100, ssas)").unwrap();
        assert_eq!(game.num_targets, 4);
        assert!(fixture("example1(0.001, 100, clearance)").is_ok());
        assert!(matches!(fixture("nonsense"), Err(Error::UnknownFixture(_))));
        assert!(matches!(
            fixture("example1(1, 2)"),
            Err(Error::UnknownFixture(_))
        ));
        assert!(fixture("example1(0.5, 3, ssas)").is_err());
    }
}
