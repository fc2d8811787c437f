//! Equilibrium solver for any number of defenders whose schedules are
//! monotone: a schedule never covers a target the defender prefers to see
//! attacked more than a target it likes less. Under monotone schedules
//! plus droppable coverage, an equilibrium always exists and is found with
//! `n * T` maximin queries.
//!
//! The construction picks the attacked target `k*` by minimizing, over
//! targets `t`, the largest height any defender can guarantee on the
//! targets it likes no better than `t`; ties are broken so that no other
//! minimizer is unanimously preferred by the defenders that attain the
//! minimum. Every other target is then covered, by a single defender, at
//! exactly that minimal height.

use crate::coverage::{CoverageSet, ScheduleMode};
use crate::error::{Error, Result};
use crate::game::{CoverageVector, Game, PreferenceOrder, StrategyProfile, TargetId};
use crate::ORACLE_TOL;

/// Guaranteed-height table for a game. Row `i` holds, at column `p`, the
/// best height defender `i` can guarantee simultaneously on all targets
/// it ranks at position `p` or worse; columns follow defender `i`'s own
/// ranking, so rows are non-decreasing.
#[derive(Clone, Debug)]
pub struct MaximinMatrix {
    entries: Vec<Vec<f64>>,
    f_values: Vec<f64>,
}

impl MaximinMatrix {
    /// Assembles a matrix from precomputed rows. `entries[i][p]` must be
    /// defender `i`'s guaranteed height on its rank-`p` suffix.
    pub fn from_entries(entries: Vec<Vec<f64>>, prefs: &[PreferenceOrder]) -> Self {
        let num_targets = prefs.first().map_or(0, PreferenceOrder::num_targets);
        let f_values = (0..num_targets)
            .map(|t| {
                entries
                    .iter()
                    .zip(prefs)
                    .map(|(row, pref)| row[pref.rank(TargetId(t))])
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        MaximinMatrix { entries, f_values }
    }

    pub fn num_defenders(&self) -> usize {
        self.entries.len()
    }

    /// Defender `i`'s guaranteed height on the suffix starting at rank `p`
    /// of its own preference order.
    pub fn value_at_rank(&self, defender: usize, rank: usize) -> f64 {
        self.entries[defender][rank]
    }

    /// Per-target score `F`: the largest guaranteed suffix height any
    /// defender attains at that target's rank in its own order.
    pub fn f_values(&self) -> &[f64] {
        &self.f_values
    }
}

/// Checks the monotone-schedules property: for every defender, every
/// schedule, and every pair `j` preferred over `t`, the schedule covers
/// `j` no more than `t`. Returns the first violation found as an error.
pub fn check_monotone(game: &Game) -> Result<()> {
    for (i, d) in game.defenders.iter().enumerate() {
        let CoverageSet::Schedules { schedules, .. } = &d.coverage_set else {
            return Err(Error::Precondition(format!(
                "defender {} has no explicit schedules; the monotonicity check \
                 applies to schedule lists only",
                i + 1
            )));
        };
        let ranking = d.preference.ranking();
        for (z, s) in schedules.iter().enumerate() {
            for pair in ranking.windows(2) {
                let (better, worse) = (pair[0], pair[1]);
                if s.get(better) > s.get(worse) {
                    return Err(Error::NotMonotone {
                        defender: i + 1,
                        schedule: z + 1,
                        preferred: better,
                        other: worse,
                        cov_preferred: s.get(better),
                        cov_other: s.get(worse),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Builds the guaranteed-height table with one maximin query per
/// (defender, rank) pair and verifies the rows are non-decreasing.
pub fn build_matrix(game: &Game) -> Result<MaximinMatrix> {
    game.validate()?;
    let mut entries = Vec::with_capacity(game.num_defenders());
    for (i, d) in game.defenders.iter().enumerate() {
        let ranking = d.preference.ranking();
        let mut row = Vec::with_capacity(game.num_targets);
        for p in 0..game.num_targets {
            let (value, _) = d.coverage_set.maximin(&ranking[p..])?;
            let value = value.finite().ok_or_else(|| {
                Error::Solver("maximin over a nonempty suffix must be finite".into())
            })?;
            row.push(value.max(0.0));
        }
        for p in 1..row.len() {
            if row[p] < row[p - 1] - 1e-9 {
                return Err(Error::Solver(format!(
                    "guaranteed heights of defender {} decrease along its ranking \
                     ({} at rank {} vs {} at rank {}); the LP accuracy is suspect",
                    i + 1,
                    row[p - 1],
                    p - 1,
                    row[p],
                    p
                )));
            }
        }
        entries.push(row);
    }
    let prefs: Vec<PreferenceOrder> = game
        .defenders
        .iter()
        .map(|d| d.preference.clone())
        .collect();
    Ok(MaximinMatrix::from_entries(entries, &prefs))
}

/// Picks the attacked target: a minimizer of `F` such that no other
/// minimizer is strictly preferred over it by every defender attaining
/// the minimal height there. The lowest-index valid choice is returned.
pub fn select_kstar(matrix: &MaximinMatrix, prefs: &[PreferenceOrder]) -> Result<TargetId> {
    let f = matrix.f_values();
    let f_min = f.iter().cloned().fold(f64::INFINITY, f64::min);
    let minimizers: Vec<TargetId> = (0..f.len())
        .map(TargetId)
        .filter(|t| f[t.index()] <= f_min + ORACLE_TOL)
        .collect();
    let attains_min = |t: TargetId| -> Vec<usize> {
        (0..prefs.len())
            .filter(|&i| matrix.value_at_rank(i, prefs[i].rank(t)) >= f_min - ORACLE_TOL)
            .collect()
    };
    // `t` supersedes `j` when every defender attaining the minimum at `t`
    // strictly prefers `t` over `j`.
    let supersedes = |t: TargetId, j: TargetId| -> bool {
        let attaining = attains_min(t);
        debug_assert!(!attaining.is_empty());
        attaining.iter().all(|&i| prefs[i].prefers(t, j))
    };
    for &j in &minimizers {
        if !minimizers.iter().any(|&t| t != j && supersedes(t, j)) {
            return Ok(j);
        }
    }
    Err(Error::Solver(
        "tie-breaking among minimal-score targets found no undominated choice".into(),
    ))
}

fn require_monotone_ssas(game: &Game) -> Result<()> {
    game.validate()?;
    for (i, d) in game.defenders.iter().enumerate() {
        match &d.coverage_set {
            CoverageSet::Schedules {
                mode: ScheduleMode::Ssas,
                ..
            } => {}
            CoverageSet::Schedules { .. } => {
                return Err(Error::Precondition(format!(
                    "defender {} uses clearance-mode schedules; this solver \
                     requires droppable (ssas) coverage",
                    i + 1
                )));
            }
            CoverageSet::LayeredNetwork(_) => {
                return Err(Error::Precondition(format!(
                    "defender {} uses a patrol network; this solver requires \
                     explicit schedules to check monotonicity",
                    i + 1
                )));
            }
        }
    }
    check_monotone(game)
}

/// Computes an equilibrium of a monotone-schedules game with droppable
/// coverage, for any number of defenders.
pub fn solve_multi_ms(game: &Game) -> Result<StrategyProfile> {
    require_monotone_ssas(game)?;
    let num_targets = game.num_targets;
    if game.num_defenders() == 1 {
        // A single leader needs no coverage: nothing deters the attacker,
        // and the defender is happiest when its top choice is attacked.
        return Ok(StrategyProfile {
            coverages: vec![CoverageVector::zeros(num_targets)],
            target: game.defenders[0].preference.most_preferred(),
        });
    }
    let prefs: Vec<PreferenceOrder> = game
        .defenders
        .iter()
        .map(|d| d.preference.clone())
        .collect();
    let matrix = build_matrix(game)?;
    let k_star = select_kstar(&matrix, &prefs)?;
    let f = matrix.f_values();
    let height = f[k_star.index()].max(0.0);

    let mut coverages = vec![CoverageVector::zeros(num_targets); game.num_defenders()];
    for t in game.targets() {
        if t == k_star {
            continue;
        }
        let assigned = (0..game.num_defenders()).find(|&i| {
            matrix.value_at_rank(i, prefs[i].rank(t)) >= f[t.index()] - ORACLE_TOL
                && prefs[i].prefers(k_star, t)
        });
        match assigned {
            Some(i) => coverages[i].0[t.index()] = height,
            None => {
                return Err(Error::Solver(format!(
                    "no defender can hold target {t} at the required height; \
                     the LP accuracy is suspect"
                )))
            }
        }
    }
    Ok(StrategyProfile {
        coverages,
        target: k_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Defender, Metadata};
    use crate::generate::identity3;

    fn defender(ranking: Vec<usize>, schedules: Vec<Vec<f64>>, mode: ScheduleMode) -> Defender {
        Defender {
            preference: PreferenceOrder::new(ranking.into_iter().map(TargetId).collect()).unwrap(),
            coverage_set: CoverageSet::Schedules {
                mode,
                schedules: schedules.into_iter().map(CoverageVector).collect(),
            },
        }
    }

    fn opposed_two_target_game() -> Game {
        Game {
            num_targets: 2,
            defenders: vec![
                defender(vec![0, 1], vec![vec![0.0, 1.0]], ScheduleMode::Ssas),
                defender(vec![1, 0], vec![vec![1.0, 0.0]], ScheduleMode::Ssas),
            ],
            metadata: Metadata::default(),
        }
    }

    #[test]
    fn monotone_check_accepts_and_rejects() {
        let ok = Game {
            num_targets: 2,
            defenders: vec![defender(
                vec![0, 1],
                vec![vec![0.0, 1.0]],
                ScheduleMode::Ssas,
            )],
            metadata: Metadata::default(),
        };
        assert!(check_monotone(&ok).is_ok());

        let zeros = Game {
            num_targets: 2,
            defenders: vec![defender(
                vec![0, 1],
                vec![vec![0.0, 0.0]],
                ScheduleMode::Ssas,
            )],
            metadata: Metadata::default(),
        };
        assert!(check_monotone(&zeros).is_ok());

        let bad = Game {
            num_targets: 3,
            defenders: vec![defender(
                vec![0, 1, 2],
                vec![vec![1.0, 0.0, 0.0]],
                ScheduleMode::Ssas,
            )],
            metadata: Metadata::default(),
        };
        match check_monotone(&bad) {
            Err(Error::NotMonotone {
                defender: 1,
                schedule: 1,
                preferred,
                other,
                ..
            }) => {
                assert_eq!(preferred, TargetId(0));
                assert_eq!(other, TargetId(1));
            }
            other => panic!("expected a monotonicity violation, got {other:?}"),
        }
    }

    #[test]
    fn matrix_of_the_opposed_game() {
        let game = opposed_two_target_game();
        let matrix = build_matrix(&game).unwrap();
        assert_eq!(matrix.value_at_rank(0, 0), 0.0);
        assert!((matrix.value_at_rank(0, 1) - 1.0).abs() < 1e-9);
        assert_eq!(matrix.value_at_rank(1, 0), 0.0);
        assert!((matrix.value_at_rank(1, 1) - 1.0).abs() < 1e-9);
        for &f in matrix.f_values() {
            assert!((f - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn matrix_rows_of_the_identity_game() {
        let game = identity3();
        let matrix = build_matrix(&game).unwrap();
        for i in 0..2 {
            assert!((matrix.value_at_rank(i, 0) - 1.0 / 3.0).abs() < 1e-9);
            assert!((matrix.value_at_rank(i, 1) - 0.5).abs() < 1e-9);
            assert!((matrix.value_at_rank(i, 2) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn kstar_breaks_ties_toward_low_index() {
        let game = opposed_two_target_game();
        let prefs: Vec<PreferenceOrder> = game
            .defenders
            .iter()
            .map(|d| d.preference.clone())
            .collect();
        let matrix = build_matrix(&game).unwrap();
        assert_eq!(select_kstar(&matrix, &prefs).unwrap(), TargetId(0));
    }

    #[test]
    fn kstar_takes_the_unique_minimizer() {
        let pref = PreferenceOrder::new(vec![TargetId(0), TargetId(1), TargetId(2)]).unwrap();
        let matrix =
            MaximinMatrix::from_entries(vec![vec![0.5, 0.7, 0.6]], std::slice::from_ref(&pref));
        assert_eq!(matrix.f_values(), &[0.5, 0.7, 0.6]);
        assert_eq!(select_kstar(&matrix, &[pref]).unwrap(), TargetId(0));
    }

    #[test]
    fn solves_the_opposed_game() {
        let game = opposed_two_target_game();
        let profile = solve_multi_ms(&game).unwrap();
        assert_eq!(profile.target, TargetId(0));
        assert_eq!(profile.coverages[0], CoverageVector(vec![0.0, 1.0]));
        assert_eq!(profile.coverages[1], CoverageVector(vec![0.0, 0.0]));
    }

    #[test]
    fn shared_top_choice_needs_no_coverage() {
        let mk = || defender(vec![0, 1, 2], vec![vec![0.0, 1.0, 2.0]], ScheduleMode::Ssas);
        let game = Game {
            num_targets: 3,
            defenders: vec![mk(), mk()],
            metadata: Metadata::default(),
        };
        let profile = solve_multi_ms(&game).unwrap();
        assert_eq!(profile.target, TargetId(0));
        assert_eq!(profile.total_coverage(), CoverageVector::zeros(3));
    }

    #[test]
    fn single_defender_gets_its_favourite() {
        let game = Game {
            num_targets: 3,
            defenders: vec![defender(
                vec![0, 1, 2],
                vec![vec![0.0, 0.5, 1.0]],
                ScheduleMode::Ssas,
            )],
            metadata: Metadata::default(),
        };
        let profile = solve_multi_ms(&game).unwrap();
        assert_eq!(profile.target, TargetId(0));
        assert_eq!(profile.coverages[0], CoverageVector::zeros(3));
    }

    #[test]
    fn preconditions_are_enforced() {
        match solve_multi_ms(&identity3()) {
            Err(Error::NotMonotone { .. }) => {}
            other => panic!("expected a monotonicity error, got {other:?}"),
        }

        let clearance = Game {
            num_targets: 2,
            defenders: vec![defender(
                vec![0, 1],
                vec![vec![0.0, 1.0]],
                ScheduleMode::Clearance,
            )],
            metadata: Metadata::default(),
        };
        match solve_multi_ms(&clearance) {
            Err(Error::Precondition(_)) => {}
            other => panic!("expected a precondition error, got {other:?}"),
        }
    }
}
