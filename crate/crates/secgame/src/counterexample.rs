//! Closed-form existence analysis for the four-target interleaved family.
//!
//! In the family built by [`crate::generate::example1`], any candidate
//! equilibrium concentrates one defender on a single pure schedule and
//! lets the other mix its two schedules with some weight `w`. Whether the
//! candidate survives both defenders' deviation checks reduces to four
//! linear inequalities in `w`. The certificate records those inequalities,
//! their solution intervals inside `[0, 1]`, and the resulting verdict;
//! an empty feasible region for every candidate target proves the game
//! has no equilibrium at all.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::coverage::ScheduleMode;
use crate::error::Result;
use crate::game::TargetId;
use crate::generate::example1;

/// A closed interval `[lo, hi]`, empty when `lo > hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    /// The canonical empty interval.
    pub const EMPTY: Interval = Interval { lo: 1.0, hi: 0.0 };

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo > hi {
            Interval::EMPTY
        } else {
            Interval { lo, hi }
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "empty")
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

/// Direction of a linear inequality in the mixing weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    AtMost,
    AtLeast,
}

/// One inequality `coeff * w <= bound` (or `>=`) with `coeff >= 0`,
/// together with its solution interval inside `[0, 1]`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct WeightCondition {
    pub coeff: f64,
    pub bound: f64,
    pub sense: Sense,
    /// `bound / coeff` when the coefficient is positive.
    pub threshold: Option<f64>,
    pub interval: Interval,
}

impl WeightCondition {
    fn solve(coeff: f64, bound: f64, sense: Sense) -> WeightCondition {
        debug_assert!(coeff >= 0.0, "conditions in this family have coeff >= 0");
        let (threshold, interval) = if coeff > 0.0 {
            let t = bound / coeff;
            let raw = match sense {
                Sense::AtMost => Interval { lo: 0.0, hi: t },
                Sense::AtLeast => Interval { lo: t, hi: 1.0 },
            };
            (Some(t), raw.intersect(&Interval::UNIT))
        } else {
            // 0 * w compared against the bound: all of [0, 1] or nothing.
            let holds = match sense {
                Sense::AtMost => 0.0 <= bound,
                Sense::AtLeast => 0.0 >= bound,
            };
            let interval = if holds {
                Interval::UNIT
            } else {
                Interval::EMPTY
            };
            (None, interval)
        };
        WeightCondition {
            coeff,
            bound,
            sense,
            threshold,
            interval,
        }
    }
}

/// Deviation analysis for one candidate equilibrium target.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TargetCase {
    pub target: TargetId,
    /// 1-based index of the defender whose mixing weight is analyzed.
    pub mixing_defender: usize,
    /// Nonempty components of the feasible weight region.
    pub feasible: Vec<Interval>,
    pub exists_nse: bool,
}

/// Full certificate for one `(epsilon, k)` member of the family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CounterexampleCertificate {
    pub epsilon: f64,
    pub k: f64,
    /// The four inequalities; by the family's symmetry they are identical
    /// for every candidate target.
    pub conditions: [WeightCondition; 4],
    pub targets: Vec<TargetCase>,
    /// Whether any candidate target admits a feasible mixing weight.
    pub exists_nse: bool,
}

impl CounterexampleCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization cannot fail")
    }

    /// A representative feasible mixing weight when one exists.
    pub fn feasible_point(&self) -> Option<f64> {
        self.targets
            .first()
            .and_then(|case| case.feasible.first())
            .map(|iv| 0.5 * (iv.lo + iv.hi))
    }
}

/// Analyzes the `(epsilon, k)` member of the interleaved family and
/// returns its existence certificate. Parameters must satisfy `k >= 1`,
/// `epsilon >= 0`, and `k * epsilon < 1`.
pub fn certify_counterexample(epsilon: f64, k: f64) -> Result<CounterexampleCertificate> {
    // Builds the game to reuse its parameter validation; the analysis
    // itself is closed-form.
    let game = example1(epsilon, k, ScheduleMode::Clearance)?;

    let ke = k * epsilon;
    // A deviation by the non-mixing defender is blocked when either the
    // overlap condition or the spread condition holds, on each side.
    let conditions = [
        WeightCondition::solve(epsilon * (k - 1.0), ke - 1.0, Sense::AtMost),
        WeightCondition::solve(2.0 - epsilon - ke, 1.0 - epsilon, Sense::AtLeast),
        WeightCondition::solve(epsilon * (k - 1.0), 1.0 - epsilon, Sense::AtLeast),
        WeightCondition::solve(2.0 - epsilon - ke, 1.0 - ke, Sense::AtMost),
    ];

    let first = [conditions[0].interval, conditions[1].interval];
    let second = [conditions[2].interval, conditions[3].interval];
    let mut feasible = Vec::new();
    for a in &first {
        for b in &second {
            let piece = a.intersect(b);
            if !piece.is_empty() {
                feasible.push(piece);
            }
        }
    }
    let exists_nse = !feasible.is_empty();

    let targets = (0..game.num_targets)
        .map(|t| {
            // For the diagonal targets defender 1 mixes; for the
            // off-diagonal ones defender 2 does.
            let mixing_defender = if t == 0 || t == 3 { 1 } else { 2 };
            TargetCase {
                target: TargetId(t),
                mixing_defender,
                feasible: feasible.clone(),
                exists_nse,
            }
        })
        .collect();

    Ok(CounterexampleCertificate {
        epsilon,
        k,
        conditions,
        targets,
        exists_nse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_algebra() {
        assert!(Interval::EMPTY.is_empty());
        assert!(!Interval::UNIT.is_empty());
        let a = Interval { lo: 0.2, hi: 0.7 };
        let b = Interval { lo: 0.5, hi: 0.9 };
        assert_eq!(a.intersect(&b), Interval { lo: 0.5, hi: 0.7 });
        let c = Interval { lo: 0.8, hi: 0.9 };
        assert!(a.intersect(&c).is_empty());
        assert_eq!(format!("{}", Interval::EMPTY), "empty");
    }

    #[test]
    fn nonexistence_member_has_the_frozen_thresholds() {
        let cert = certify_counterexample(1e-3, 100.0).unwrap();
        assert!(!cert.exists_nse);

        let t = |i: usize| cert.conditions[i].threshold.unwrap();
        assert!((t(0) - (-9.090909090909092)).abs() < 1e-9);
        assert!((t(1) - 0.5260663507109005).abs() < 1e-9);
        assert!((t(2) - 10.090909090909092).abs() < 1e-9);
        assert!((t(3) - 0.4739336492890995).abs() < 1e-9);

        assert!(cert.conditions[0].interval.is_empty());
        assert!(!cert.conditions[1].interval.is_empty());
        assert!(cert.conditions[2].interval.is_empty());
        assert!(!cert.conditions[3].interval.is_empty());

        for case in &cert.targets {
            assert!(!case.exists_nse);
            assert!(case.feasible.is_empty());
        }
    }

    #[test]
    fn degenerate_members_admit_an_equilibrium() {
        let cert = certify_counterexample(0.0, 1.0).unwrap();
        assert!(cert.exists_nse);
        assert_eq!(cert.feasible_point(), Some(0.5));

        let cert = certify_counterexample(0.0, 100.0).unwrap();
        assert!(cert.exists_nse);

        let cert = certify_counterexample(0.5, 1.0).unwrap();
        assert!(cert.exists_nse);
    }

    #[test]
    fn all_targets_share_the_same_analysis() {
        let cert = certify_counterexample(0.2, 2.0).unwrap();
        assert_eq!(cert.targets.len(), 4);
        assert_eq!(cert.targets[0].mixing_defender, 1);
        assert_eq!(cert.targets[1].mixing_defender, 2);
        assert_eq!(cert.targets[2].mixing_defender, 2);
        assert_eq!(cert.targets[3].mixing_defender, 1);
        for case in &cert.targets {
            assert_eq!(case.exists_nse, cert.exists_nse);
            assert_eq!(case.feasible, cert.targets[0].feasible);
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(certify_counterexample(1e-3, 0.5).is_err());
        assert!(certify_counterexample(-0.1, 2.0).is_err());
        assert!(certify_counterexample(0.5, 3.0).is_err());
    }

    #[test]
    fn certificate_round_trips_through_json() {
        let cert = certify_counterexample(1e-3, 100.0).unwrap();
        let json = cert.to_json();
        assert!(json.contains("exists_nse"));
        let back: CounterexampleCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back.exists_nse, cert.exists_nse);
        assert_eq!(back.targets.len(), 4);
    }
}
