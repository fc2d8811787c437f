//! Definition-level equilibrium checking, independent of the solvers.
//!
//! A profile `(v^1, ..., v^n, t)` passes verification when:
//!
//! * each `v^i` is attainable for defender `i` (membership);
//! * `t` has minimal total coverage, so an attacker best-responds by
//!   attacking it;
//! * no defender can re-cover targets so that a target it strictly
//!   prefers becomes the attack, even when ties are broken against the
//!   deviating defender.
//!
//! The deviation test is a linear program per (defender, preferred
//! target) pair, maximizing the margin by which every worse target stays
//! strictly above the new attack choice.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{CoverageVector, Game, StrategyProfile, TargetId};
use crate::lp::{clamp_tiny_negative, LpBuilder, LpOutcome};
use crate::{DEFAULT_TIE_TOL, DELTA_STRICT, MEMBERSHIP_TOL};

/// Numeric thresholds used by verification.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Coverage gap below which the attacker treats targets as tied.
    pub tie_tol: f64,
    /// Constraint slack allowed when checking coverage attainability.
    pub membership_tol: f64,
    /// Deviation margins at or below this value count as no deviation;
    /// genuine strict improvements in the test fixtures are far larger.
    pub delta_strict: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tie_tol: DEFAULT_TIE_TOL,
            membership_tol: MEMBERSHIP_TOL,
            delta_strict: DELTA_STRICT,
        }
    }
}

/// A profitable deviation found by the verifier.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessDeviation {
    /// 1-based index of the deviating defender.
    pub defender: usize,
    /// The target the deviation makes the attacker hit.
    pub target: TargetId,
    /// How far every worse target stays above the new attack choice.
    pub margin: f64,
    /// The deviating defender's new coverage vector.
    pub coverage: CoverageVector,
}

/// Outcome of [`verify_nse`], serialized as the report file of the CLI.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Overall verdict: feasible, attacker-consistent, and deviation-free.
    pub is_nse: bool,
    /// Per-defender attainability of the submitted coverage.
    pub membership_ok: Vec<bool>,
    /// Whether the designated target has minimal total coverage.
    pub aic: bool,
    /// Per-defender absence of profitable deviations.
    pub per_defender_ic: Vec<bool>,
    /// One entry for every profitable deviation found.
    pub witness_deviations: Vec<WitnessDeviation>,
    pub tolerances: Tolerances,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Maximizes the margin by which defender `defender` (0-based) can shift
/// the attack to `alt`, a target it strictly prefers over the profile's
/// current one. Returns the optimal margin plus the deviating coverage
/// when the margin exceeds `tolerances.delta_strict`; a margin of
/// negative infinity means no coverage shift can make `alt` the attack
/// choice at all.
pub fn deviation_exists(
    game: &Game,
    profile: &StrategyProfile,
    defender: usize,
    alt: TargetId,
    tolerances: &Tolerances,
) -> Result<(f64, Option<CoverageVector>)> {
    profile.validate_against(game)?;
    let pref = &game.defenders[defender].preference;
    if !pref.prefers(alt, profile.target) {
        return Err(Error::Precondition(format!(
            "deviation queries require a target the defender strictly prefers; \
             defender {} does not prefer {} over {}",
            defender + 1,
            alt,
            profile.target
        )));
    }

    // Coverage contributed by everyone else, fixed during the deviation.
    let total = profile.total_coverage();
    let own = &profile.coverages[defender];
    let rest: Vec<f64> = total
        .as_slice()
        .iter()
        .zip(own.as_slice())
        .map(|(t, o)| t - o)
        .collect();

    let mut lp = LpBuilder::maximize();
    let delta = lp.free_var(1.0);
    let vhat = game.defenders[defender].coverage_set.strategy_vars(&mut lp);

    // Better or equal targets may tie with `alt` but not undercut it.
    for &k in &pref.strictly_above(alt) {
        lp.ge(
            &[(vhat[k.index()], 1.0), (vhat[alt.index()], -1.0)],
            rest[alt.index()] - rest[k.index()],
        );
    }
    // Worse targets must stay strictly above; `delta` is how much room
    // there is.
    for &k in &pref.strictly_below(alt) {
        lp.ge(
            &[
                (vhat[k.index()], 1.0),
                (vhat[alt.index()], -1.0),
                (delta, -1.0),
            ],
            rest[alt.index()] - rest[k.index()],
        );
    }

    match lp.solve()? {
        LpOutcome::Optimal(sol) => {
            let margin = sol.objective();
            if margin > tolerances.delta_strict {
                let coverage = CoverageVector(
                    vhat.iter()
                        .map(|&v| clamp_tiny_negative(sol.value(v)).max(0.0))
                        .collect(),
                );
                Ok((margin, Some(coverage)))
            } else {
                Ok((margin, None))
            }
        }
        LpOutcome::Infeasible => Ok((f64::NEG_INFINITY, None)),
        LpOutcome::Unbounded => Err(Error::Solver(
            "deviation margin unbounded over a bounded coverage set".into(),
        )),
    }
}

/// Checks a profile against the full equilibrium definition and returns a
/// report with witnesses for every failure found. Infeasible coverage is
/// reported in `membership_ok`, not raised as an error.
pub fn verify_nse(
    game: &Game,
    profile: &StrategyProfile,
    tolerances: &Tolerances,
) -> Result<VerificationReport> {
    game.validate()?;
    profile.validate_against(game)?;

    let mut membership_ok = Vec::with_capacity(game.num_defenders());
    for (d, cov) in game.defenders.iter().zip(&profile.coverages) {
        membership_ok.push(d.coverage_set.contains(cov, tolerances.membership_tol)?);
    }

    let total = profile.total_coverage();
    let aic = total
        .best_response_set(tolerances.tie_tol)
        .contains(&profile.target);

    let mut per_defender_ic = vec![true; game.num_defenders()];
    let mut witness_deviations = Vec::new();
    for (i, ic) in per_defender_ic.iter_mut().enumerate() {
        for alt in game.defenders[i].preference.strictly_above(profile.target) {
            let (margin, coverage) = deviation_exists(game, profile, i, alt, tolerances)?;
            if let Some(coverage) = coverage {
                *ic = false;
                witness_deviations.push(WitnessDeviation {
                    defender: i + 1,
                    target: alt,
                    margin,
                    coverage,
                });
            }
        }
    }

    let is_nse = membership_ok.iter().all(|&ok| ok) && aic && per_defender_ic.iter().all(|&ok| ok);
    Ok(VerificationReport {
        is_nse,
        membership_ok,
        aic,
        per_defender_ic,
        witness_deviations,
        tolerances: *tolerances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::ScheduleMode;
    use crate::game::is_waic;
    use crate::generate::{example1, identity3};

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn uncovered_identity_game_invites_a_deviation() {
        let game = identity3();
        let profile = StrategyProfile {
            coverages: vec![CoverageVector::zeros(3), CoverageVector::zeros(3)],
            target: TargetId(1),
        };
        let (margin, witness) = deviation_exists(&game, &profile, 0, TargetId(0), &tols()).unwrap();
        assert!((margin - 0.5).abs() < 1e-9);
        let witness = witness.expect("a profitable deviation exists");
        let expected = [0.0, 0.5, 0.5];
        for (got, want) in witness.0.iter().zip(expected) {
            assert!((got - want).abs() < 1e-9);
        }

        // The deviated profile is attacker-consistent with ties broken
        // against the deviator, for any tie tolerance below the margin.
        let mut deviated = profile.clone();
        deviated.coverages[0] = witness;
        deviated.target = TargetId(0);
        assert!(is_waic(&game, &deviated, 0, 1e-4));
    }

    #[test]
    fn covered_identity_game_blocks_the_deviation() {
        let game = identity3();
        let profile = StrategyProfile {
            coverages: vec![
                CoverageVector(vec![1.0, 0.0, 0.0]),
                CoverageVector(vec![1.0, 0.0, 0.0]),
            ],
            target: TargetId(1),
        };
        let (margin, witness) = deviation_exists(&game, &profile, 0, TargetId(0), &tols()).unwrap();
        assert!(margin <= 0.0);
        assert!(witness.is_none());

        let report = verify_nse(&game, &profile, &tols()).unwrap();
        assert!(report.is_nse);
        assert!(report.aic);
        assert!(report.per_defender_ic.iter().all(|&ok| ok));
    }

    #[test]
    fn interleaved_equilibrium_verifies_and_perturbed_target_fails() {
        let game = example1(0.0, 1.0, ScheduleMode::Ssas).unwrap();
        let profile = StrategyProfile {
            coverages: vec![
                CoverageVector(vec![0.0, 0.5, 0.5, 0.0]),
                CoverageVector(vec![0.0, 0.0, 0.0, 1.0]),
            ],
            target: TargetId(0),
        };
        let report = verify_nse(&game, &profile, &tols()).unwrap();
        assert!(report.is_nse, "report: {report:?}");

        let mut wrong = profile.clone();
        wrong.target = TargetId(1);
        let report = verify_nse(&game, &wrong, &tols()).unwrap();
        assert!(!report.aic);
        assert!(!report.is_nse);
    }

    #[test]
    fn overlap_equilibrium_blocks_the_second_defender() {
        let game = example1(1e-3, 100.0, ScheduleMode::Ssas).unwrap();
        let profile = StrategyProfile {
            coverages: vec![
                CoverageVector(vec![0.0, 0.55, 0.55, 0.0]),
                CoverageVector(vec![0.0, 0.0, 0.0, 1.0]),
            ],
            target: TargetId(0),
        };
        let (margin, witness) = deviation_exists(&game, &profile, 1, TargetId(1), &tols()).unwrap();
        assert!(margin.abs() < 1e-7);
        assert!(witness.is_none());

        let report = verify_nse(&game, &profile, &tols()).unwrap();
        assert!(report.is_nse, "report: {report:?}");
    }

    #[test]
    fn infeasible_coverage_is_reported_not_raised() {
        let game = identity3();
        let profile = StrategyProfile {
            coverages: vec![
                CoverageVector(vec![0.9, 0.9, 0.9]),
                CoverageVector::zeros(3),
            ],
            target: TargetId(0),
        };
        let report = verify_nse(&game, &profile, &tols()).unwrap();
        assert_eq!(report.membership_ok, vec![false, true]);
        assert!(!report.is_nse);
    }

    #[test]
    fn deviation_queries_require_a_preferred_target() {
        let game = identity3();
        let profile = StrategyProfile {
            coverages: vec![CoverageVector::zeros(3), CoverageVector::zeros(3)],
            target: TargetId(0),
        };
        assert!(deviation_exists(&game, &profile, 0, TargetId(2), &tols()).is_err());
    }

    #[test]
    fn report_serializes_with_witnesses() {
        let game = identity3();
        let profile = StrategyProfile {
            coverages: vec![CoverageVector::zeros(3), CoverageVector::zeros(3)],
            target: TargetId(2),
        };
        let report = verify_nse(&game, &profile, &tols()).unwrap();
        assert!(!report.is_nse);
        assert!(!report.witness_deviations.is_empty());
        let json = report.to_json();
        assert!(json.contains("witness_deviations"));
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.is_nse, report.is_nse);
    }
}
