//! Two-defender equilibrium solver.
//!
//! The solver scans targets in ascending index order. For each candidate
//! target `t` it asks, per defender, whether that defender's rival can be
//! kept from profitably deviating: defender 1 must be able to cover every
//! target defender 2 prefers over `t` at least as high as the best height
//! defender 2 could guarantee on the targets it likes no better than `t`
//! (and symmetrically with the roles swapped). The first target passing
//! both tests is returned with the flat "t-standard" coverage profile,
//! which provably forms an equilibrium when coverage is droppable.

use serde::{Deserialize, Serialize};

use crate::coverage::MaximinValue;
use crate::error::{Error, Result};
use crate::game::{CoverageVector, Game, StrategyProfile, TargetId};
use crate::ORACLE_TOL;

/// Whether some other target is preferred over this one by every defender.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Efficiency {
    /// No target is unanimously preferred over this one.
    Efficient,
    /// Some target is preferred by both defenders; an equilibrium on it
    /// leaves both better off.
    Inefficient,
}

/// A target on which an equilibrium can be built, with the flat coverage
/// heights of its standard profile.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquilibriumTarget {
    pub target: TargetId,
    /// Height defender 1 puts on the targets defender 2 prefers over
    /// `target`; 0 when that set is empty (see `unconstrained1`).
    pub h1: f64,
    /// True when defender 2 prefers nothing over `target`, so defender 1
    /// has nothing to cover and any height works vacuously.
    pub unconstrained1: bool,
    /// Height defender 2 puts on the targets defender 1 prefers over
    /// `target`.
    pub h2: f64,
    pub unconstrained2: bool,
    pub efficiency: Efficiency,
}

fn require_two_droppable(game: &Game) -> Result<()> {
    game.validate()?;
    if game.num_defenders() != 2 {
        return Err(Error::Precondition(format!(
            "this solver handles exactly 2 defenders, the game has {}",
            game.num_defenders()
        )));
    }
    for (i, d) in game.defenders.iter().enumerate() {
        if !d.coverage_set.allows_dropping() {
            return Err(Error::Precondition(format!(
                "defender {} uses clearance-mode schedules; the solver requires \
                 droppable coverage (ssas mode or a patrol network)",
                i + 1
            )));
        }
    }
    Ok(())
}

/// The four oracle values Algorithm-style target tests compare, plus the
/// sets each defender would cover in the t-standard profile.
struct TargetHeights {
    /// Targets defender 2 strictly prefers over `t`: covered by defender 1.
    covered_by_1: Vec<TargetId>,
    /// Targets defender 1 strictly prefers over `t`: covered by defender 2.
    covered_by_2: Vec<TargetId>,
    h1: MaximinValue,
    g1: f64,
    h2: MaximinValue,
    g2: f64,
}

impl TargetHeights {
    fn accepted(&self) -> bool {
        self.h1.at_least(MaximinValue::Finite(self.g1), ORACLE_TOL)
            && self.h2.at_least(MaximinValue::Finite(self.g2), ORACLE_TOL)
    }
}

fn heights(game: &Game, t: TargetId) -> Result<TargetHeights> {
    let [d1, d2] = [&game.defenders[0], &game.defenders[1]];
    let covered_by_1 = d2.preference.strictly_above(t);
    let covered_by_2 = d1.preference.strictly_above(t);
    let (h1, _) = d1.coverage_set.maximin(&covered_by_1)?;
    let (g1, _) = d2.coverage_set.maximin(&d2.preference.weakly_below(t))?;
    let (h2, _) = d2.coverage_set.maximin(&covered_by_2)?;
    let (g2, _) = d1.coverage_set.maximin(&d1.preference.weakly_below(t))?;
    let finite = |v: MaximinValue| {
        v.finite()
            .ok_or_else(|| Error::Solver("maximin over a nonempty set must be finite".into()))
    };
    Ok(TargetHeights {
        covered_by_1,
        covered_by_2,
        h1,
        g1: finite(g1)?,
        h2,
        g2: finite(g2)?,
    })
}

fn profile_from(game: &Game, t: TargetId, th: &TargetHeights) -> StrategyProfile {
    let mut v1 = CoverageVector::zeros(game.num_targets);
    let h1 = th.h1.finite_or_zero().max(0.0);
    for &j in &th.covered_by_1 {
        v1.0[j.index()] = h1;
    }
    let mut v2 = CoverageVector::zeros(game.num_targets);
    let h2 = th.h2.finite_or_zero().max(0.0);
    for &j in &th.covered_by_2 {
        v2.0[j.index()] = h2;
    }
    StrategyProfile {
        coverages: vec![v1, v2],
        target: t,
    }
}

/// True iff an equilibrium with designated target `t` exists in which
/// `defender` (0-based) plays a t-standard coverage: the defender can
/// raise every target its rival prefers over `t` to at least the height
/// the rival could otherwise secure on its weakly-worse targets.
pub fn partial_set_nonempty(game: &Game, t: TargetId, defender: usize) -> Result<bool> {
    require_two_droppable(game)?;
    if defender > 1 {
        return Err(Error::Precondition(format!(
            "defender index {defender} out of range for a two-defender game"
        )));
    }
    let own = &game.defenders[defender];
    let rival = &game.defenders[1 - defender];
    let (h, _) = own
        .coverage_set
        .maximin(&rival.preference.strictly_above(t))?;
    let (g, _) = rival
        .coverage_set
        .maximin(&rival.preference.weakly_below(t))?;
    let g = g
        .finite()
        .ok_or_else(|| Error::Solver("maximin over a nonempty set must be finite".into()))?;
    Ok(h.at_least(MaximinValue::Finite(g), ORACLE_TOL))
}

/// Computes an equilibrium of a two-defender game with droppable
/// coverage. Scans targets in ascending index order and returns the
/// t-standard profile of the first target accepted; an equilibrium always
/// exists, so the scan cannot fail for numerical-noise-free inputs.
pub fn solve_two(game: &Game) -> Result<StrategyProfile> {
    require_two_droppable(game)?;
    for t in game.targets() {
        let th = heights(game, t)?;
        if th.accepted() {
            return Ok(profile_from(game, t, &th));
        }
    }
    Err(Error::Solver(
        "no target was accepted even though an equilibrium always exists; \
         this indicates an LP tolerance problem"
            .into(),
    ))
}

/// Builds the t-standard profile for a specific target, or `None` when no
/// equilibrium with that designated target exists.
pub fn build_t_standard(game: &Game, t: TargetId) -> Result<Option<StrategyProfile>> {
    require_two_droppable(game)?;
    if t.index() >= game.num_targets {
        return Err(Error::Validation(format!(
            "target {t} out of range (game has {} targets)",
            game.num_targets
        )));
    }
    let th = heights(game, t)?;
    Ok(th.accepted().then(|| profile_from(game, t, &th)))
}

/// Lists every target on which an equilibrium can be built, in ascending
/// index order, with standard heights and an efficiency label. A target is
/// inefficient when some other target is strictly preferred by both
/// defenders; equilibria on inefficient targets are dominated.
pub fn enumerate_equilibrium_targets(game: &Game) -> Result<Vec<EquilibriumTarget>> {
    require_two_droppable(game)?;
    let [d1, d2] = [&game.defenders[0], &game.defenders[1]];
    let mut out = Vec::new();
    for t in game.targets() {
        let th = heights(game, t)?;
        if !th.accepted() {
            continue;
        }
        let dominated = game
            .targets()
            .any(|j| d1.preference.prefers(j, t) && d2.preference.prefers(j, t));
        out.push(EquilibriumTarget {
            target: t,
            h1: th.h1.finite_or_zero().max(0.0),
            unconstrained1: !th.h1.is_finite(),
            h2: th.h2.finite_or_zero().max(0.0),
            unconstrained2: !th.h2.is_finite(),
            efficiency: if dominated {
                Efficiency::Inefficient
            } else {
                Efficiency::Efficient
            },
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::{CoverageSet, ScheduleMode};
    use crate::game::{Defender, Metadata, PreferenceOrder};
    use crate::generate::{example1, identity3};

    fn single_target_game() -> Game {
        let mk = || Defender {
            preference: PreferenceOrder::new(vec![TargetId(0)]).unwrap(),
            coverage_set: CoverageSet::Schedules {
                mode: ScheduleMode::Ssas,
                schedules: vec![CoverageVector(vec![1.0])],
            },
        };
        Game {
            num_targets: 1,
            defenders: vec![mk(), mk()],
            metadata: Metadata::default(),
        }
    }

    #[test]
    fn partial_sets_on_the_identity_game() {
        let game = identity3();
        assert!(partial_set_nonempty(&game, TargetId(0), 0).unwrap());
        assert!(partial_set_nonempty(&game, TargetId(0), 1).unwrap());
        // Covering {1,2} caps defender 1 at 1/2, below the rival's
        // guaranteed height 1 on the singleton {3}.
        assert!(!partial_set_nonempty(&game, TargetId(2), 0).unwrap());
    }

    #[test]
    fn single_target_is_always_an_equilibrium() {
        let game = single_target_game();
        assert!(partial_set_nonempty(&game, TargetId(0), 0).unwrap());
        assert!(partial_set_nonempty(&game, TargetId(0), 1).unwrap());
        let listed = enumerate_equilibrium_targets(&game).unwrap();
        assert_eq!(listed.len(), 1);
        assert_eq!(listed[0].target, TargetId(0));
        assert_eq!(listed[0].efficiency, Efficiency::Efficient);
    }

    #[test]
    fn identity_game_solves_to_zero_coverage() {
        let game = identity3();
        let profile = solve_two(&game).unwrap();
        assert_eq!(profile.target, TargetId(0));
        assert_eq!(profile.coverages[0], CoverageVector::zeros(3));
        assert_eq!(profile.coverages[1], CoverageVector::zeros(3));
    }

    #[test]
    fn interleaved_game_without_drop_penalty_solves_at_half() {
        let game = example1(0.0, 1.0, ScheduleMode::Ssas).unwrap();
        let profile = solve_two(&game).unwrap();
        assert_eq!(profile.target, TargetId(0));
        let expect1 = [0.0, 0.5, 0.5, 0.0];
        let expect2 = [0.0, 0.0, 0.0, 1.0];
        for j in 0..4 {
            assert!((profile.coverages[0].0[j] - expect1[j]).abs() < 1e-9);
            assert!((profile.coverages[1].0[j] - expect2[j]).abs() < 1e-9);
        }
    }

    #[test]
    fn interleaved_game_with_overlap_solves_at_fifty_five() {
        let game = example1(1e-3, 100.0, ScheduleMode::Ssas).unwrap();
        let profile = solve_two(&game).unwrap();
        assert_eq!(profile.target, TargetId(0));
        let expect1 = [0.0, 0.55, 0.55, 0.0];
        let expect2 = [0.0, 0.0, 0.0, 1.0];
        for j in 0..4 {
            assert!((profile.coverages[0].0[j] - expect1[j]).abs() < 1e-9);
            assert!((profile.coverages[1].0[j] - expect2[j]).abs() < 1e-9);
        }
    }

    #[test]
    fn clearance_mode_is_rejected() {
        let game = example1(1e-3, 100.0, ScheduleMode::Clearance).unwrap();
        match solve_two(&game) {
            Err(Error::Precondition(_)) => {}
            other => panic!("expected a precondition error, got {other:?}"),
        }
    }

    #[test]
    fn enumerate_labels_identity_targets() {
        let game = identity3();
        let listed = enumerate_equilibrium_targets(&game).unwrap();
        assert_eq!(listed.len(), 2);

        assert_eq!(listed[0].target, TargetId(0));
        assert!(listed[0].unconstrained1 && listed[0].unconstrained2);
        assert_eq!(listed[0].h1, 0.0);
        assert_eq!(listed[0].efficiency, Efficiency::Efficient);

        assert_eq!(listed[1].target, TargetId(1));
        assert!(!listed[1].unconstrained1);
        assert!((listed[1].h1 - 1.0).abs() < 1e-9);
        assert!((listed[1].h2 - 1.0).abs() < 1e-9);
        assert_eq!(listed[1].efficiency, Efficiency::Inefficient);
    }

    #[test]
    fn opposed_preferences_make_both_targets_efficient() {
        let mk = |ranking: Vec<usize>| Defender {
            preference: PreferenceOrder::new(ranking.into_iter().map(TargetId).collect()).unwrap(),
            coverage_set: CoverageSet::Schedules {
                mode: ScheduleMode::Ssas,
                schedules: vec![CoverageVector(vec![1.0, 1.0])],
            },
        };
        let game = Game {
            num_targets: 2,
            defenders: vec![mk(vec![0, 1]), mk(vec![1, 0])],
            metadata: Metadata::default(),
        };
        let listed = enumerate_equilibrium_targets(&game).unwrap();
        assert_eq!(listed.len(), 2);
        assert!(listed.iter().all(|e| e.efficiency == Efficiency::Efficient));
    }

    #[test]
    fn t_standard_constructions_match_the_scan() {
        let game = identity3();
        let at_one = build_t_standard(&game, TargetId(0)).unwrap().unwrap();
        assert_eq!(at_one, solve_two(&game).unwrap());
        assert!(build_t_standard(&game, TargetId(2)).unwrap().is_none());
        assert!(build_t_standard(&game, TargetId(7)).is_err());
    }
}
