//! Core game model: targets, preference orders, coverage vectors, games,
//! and strategy profiles.
//!
//! A game has `T` targets and `n` defenders. Each defender has a strict
//! preference order over which target it would like the attacker to hit,
//! and a set of attainable coverage vectors (see [`crate::coverage`]).
//! The attacker observes the summed coverage of all defenders and attacks
//! a target with minimal total coverage.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coverage::CoverageSet;
use crate::error::{Error, Result};

/// Identifies a target. Internally a 0-based index; serialized and
/// displayed as a 1-based id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TargetId(pub usize);

impl TargetId {
    /// The 0-based index into coverage vectors.
    pub fn index(self) -> usize {
        self.0
    }

    /// The 1-based id used in files and messages.
    pub fn one_based(self) -> usize {
        self.0 + 1
    }
}

impl fmt::Display for TargetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 + 1)
    }
}

impl Serialize for TargetId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        (self.0 as u64 + 1).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TargetId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = u64::deserialize(deserializer)?;
        if raw == 0 {
            return Err(D::Error::custom("target ids are 1-based; got 0"));
        }
        Ok(TargetId(raw as usize - 1))
    }
}

/// Per-target coverage probabilities. Entries are finite and non-negative;
/// totals may exceed 1 when several defenders cover the same target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoverageVector(pub Vec<f64>);

impl CoverageVector {
    pub fn zeros(num_targets: usize) -> Self {
        CoverageVector(vec![0.0; num_targets])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, t: TargetId) -> f64 {
        self.0[t.0]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Entry-wise sum of two vectors of equal length.
    pub fn add(&self, other: &CoverageVector) -> CoverageVector {
        debug_assert_eq!(self.len(), other.len());
        CoverageVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Targets whose coverage is within `tie_tol` of the minimum: the set
    /// of best responses for an attacker who hits least-covered targets.
    pub fn best_response_set(&self, tie_tol: f64) -> Vec<TargetId> {
        let min = self.0.iter().cloned().fold(f64::INFINITY, f64::min);
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &v)| v <= min + tie_tol)
            .map(|(j, _)| TargetId(j))
            .collect()
    }

    pub(crate) fn validate(&self, num_targets: usize, what: &str) -> Result<()> {
        if self.len() != num_targets {
            return Err(Error::Validation(format!(
                "{what} has {} entries, expected {num_targets}",
                self.len()
            )));
        }
        for (j, &v) in self.0.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Validation(format!(
                    "{what} entry for target {} is {v}; entries must be finite and >= 0",
                    j + 1
                )));
            }
        }
        Ok(())
    }
}

/// A strict ranking of all targets. `ranking()[0]` is the target the
/// defender most prefers to see attacked.
#[derive(Clone, Debug, PartialEq)]
pub struct PreferenceOrder {
    ranking: Vec<TargetId>,
    rank_of: Vec<usize>,
}

impl PreferenceOrder {
    /// Builds an order from a permutation of all target ids, most
    /// preferred first.
    pub fn new(ranking: Vec<TargetId>) -> Result<Self> {
        let n = ranking.len();
        let mut rank_of = vec![usize::MAX; n];
        for (pos, &t) in ranking.iter().enumerate() {
            if t.0 >= n {
                return Err(Error::Validation(format!(
                    "preference mentions target {t} but there are only {n} targets"
                )));
            }
            if rank_of[t.0] != usize::MAX {
                return Err(Error::Validation(format!(
                    "preference mentions target {t} twice"
                )));
            }
            rank_of[t.0] = pos;
        }
        Ok(PreferenceOrder { ranking, rank_of })
    }

    pub fn num_targets(&self) -> usize {
        self.ranking.len()
    }

    /// All targets, most preferred first.
    pub fn ranking(&self) -> &[TargetId] {
        &self.ranking
    }

    /// 0-based position of `t` in the ranking; 0 is most preferred.
    pub fn rank(&self, t: TargetId) -> usize {
        self.rank_of[t.0]
    }

    /// True iff this defender strictly prefers `j` to be attacked over `k`.
    pub fn prefers(&self, j: TargetId, k: TargetId) -> bool {
        self.rank_of[j.0] < self.rank_of[k.0]
    }

    pub fn most_preferred(&self) -> TargetId {
        self.ranking[0]
    }

    /// Targets strictly preferred over `t`, most preferred first.
    pub fn strictly_above(&self, t: TargetId) -> Vec<TargetId> {
        self.ranking[..self.rank(t)].to_vec()
    }

    /// Targets strictly less preferred than `t`, in ranking order.
    pub fn strictly_below(&self, t: TargetId) -> Vec<TargetId> {
        self.ranking[self.rank(t) + 1..].to_vec()
    }

    /// `t` itself plus everything preferred over it.
    pub fn weakly_above(&self, t: TargetId) -> Vec<TargetId> {
        self.ranking[..=self.rank(t)].to_vec()
    }

    /// `t` itself plus everything less preferred.
    pub fn weakly_below(&self, t: TargetId) -> Vec<TargetId> {
        self.ranking[self.rank(t)..].to_vec()
    }
}

impl Serialize for PreferenceOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.ranking.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PreferenceOrder {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let ranking = Vec::<TargetId>::deserialize(deserializer)?;
        PreferenceOrder::new(ranking).map_err(D::Error::custom)
    }
}

/// One defender: a preference order plus the set of coverage vectors the
/// defender can realize.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Defender {
    pub preference: PreferenceOrder,
    pub coverage_set: CoverageSet,
}

/// Free-form instance annotations carried through serialization.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Metadata {
    pub fn is_empty(&self) -> bool {
        self.label.is_none() && self.seed.is_none()
    }
}

/// A multi-defender security game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Game {
    pub num_targets: usize,
    pub defenders: Vec<Defender>,
    #[serde(default, skip_serializing_if = "Metadata::is_empty")]
    pub metadata: Metadata,
}

impl Game {
    pub fn num_defenders(&self) -> usize {
        self.defenders.len()
    }

    /// All targets in index order.
    pub fn targets(&self) -> impl Iterator<Item = TargetId> {
        (0..self.num_targets).map(TargetId)
    }

    /// Checks structural invariants: at least one target and one defender,
    /// preference orders are permutations of all targets, and coverage
    /// sets are dimensioned to the target count.
    pub fn validate(&self) -> Result<()> {
        if self.num_targets == 0 {
            return Err(Error::Validation("a game needs at least one target".into()));
        }
        if self.defenders.is_empty() {
            return Err(Error::Validation(
                "a game needs at least one defender".into(),
            ));
        }
        for (i, d) in self.defenders.iter().enumerate() {
            if d.preference.num_targets() != self.num_targets {
                return Err(Error::Validation(format!(
                    "defender {} ranks {} targets, expected {}",
                    i + 1,
                    d.preference.num_targets(),
                    self.num_targets
                )));
            }
            d.coverage_set
                .validate(self.num_targets)
                .map_err(|e| Error::Validation(format!("defender {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    /// Parses and validates a game from its JSON form.
    pub fn from_json(s: &str) -> Result<Game> {
        let game: Game = serde_json::from_str(s)
            .map_err(|e| Error::Validation(format!("bad game JSON: {e}")))?;
        game.validate()?;
        Ok(game)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("game serialization cannot fail")
    }
}

/// One coverage vector per defender plus the target the attacker is
/// expected to attack.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile {
    pub coverages: Vec<CoverageVector>,
    pub target: TargetId,
}

impl StrategyProfile {
    /// Entry-wise sum of all defenders' coverage.
    pub fn total_coverage(&self) -> CoverageVector {
        let num_targets = self.coverages.first().map_or(0, CoverageVector::len);
        let mut total = vec![0.0; num_targets];
        for cov in &self.coverages {
            for (acc, v) in total.iter_mut().zip(cov.as_slice()) {
                *acc += v;
            }
        }
        CoverageVector(total)
    }

    /// Checks that the profile is structurally compatible with `game`:
    /// one coverage vector per defender, correct lengths, finite
    /// non-negative entries, and a valid target id.
    pub fn validate_against(&self, game: &Game) -> Result<()> {
        if self.coverages.len() != game.num_defenders() {
            return Err(Error::Validation(format!(
                "profile has {} coverage vectors, game has {} defenders",
                self.coverages.len(),
                game.num_defenders()
            )));
        }
        for (i, cov) in self.coverages.iter().enumerate() {
            cov.validate(game.num_targets, &format!("coverage of defender {}", i + 1))?;
        }
        if self.target.0 >= game.num_targets {
            return Err(Error::Validation(format!(
                "profile target {} is out of range (game has {} targets)",
                self.target, game.num_targets
            )));
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<StrategyProfile> {
        serde_json::from_str(s).map_err(|e| Error::Validation(format!("bad profile JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serialization cannot fail")
    }
}

/// True iff the profile's designated target is a best response whose ties
/// are broken against `defender`: every target tied at minimal total
/// coverage is one the defender weakly prefers over the designated target.
///
/// This is the pessimistic tie-breaking a deviating defender faces; the
/// deviation check in [`crate::verify`] accepts exactly the deviations
/// whose induced profiles satisfy this predicate.
pub fn is_waic(game: &Game, profile: &StrategyProfile, defender: usize, tie_tol: f64) -> bool {
    let total = profile.total_coverage();
    let best = total.best_response_set(tie_tol);
    if !best.contains(&profile.target) {
        return false;
    }
    let pref = &game.defenders[defender].preference;
    best.iter()
        .all(|&t| t == profile.target || pref.prefers(t, profile.target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::ScheduleMode;

    fn identity_game(rank1: Vec<usize>, rank2: Vec<usize>) -> Game {
        let sched = vec![
            CoverageVector(vec![1.0, 0.0, 0.0]),
            CoverageVector(vec![0.0, 1.0, 0.0]),
            CoverageVector(vec![0.0, 0.0, 1.0]),
        ];
        let mk = |ranking: Vec<usize>| Defender {
            preference: PreferenceOrder::new(
                ranking.into_iter().map(|i| TargetId(i - 1)).collect(),
            )
            .unwrap(),
            coverage_set: CoverageSet::Schedules {
                mode: ScheduleMode::Ssas,
                schedules: sched.clone(),
            },
        };
        Game {
            num_targets: 3,
            defenders: vec![mk(rank1), mk(rank2)],
            metadata: Metadata::default(),
        }
    }

    #[test]
    fn best_response_set_picks_minima() {
        let cov = CoverageVector(vec![0.3, 0.1, 0.3]);
        assert_eq!(cov.best_response_set(1e-9), vec![TargetId(1)]);
        assert_eq!(
            cov.best_response_set(0.25),
            vec![TargetId(0), TargetId(1), TargetId(2)]
        );
    }

    #[test]
    fn total_coverage_sums_defenders() {
        let profile = StrategyProfile {
            coverages: vec![
                CoverageVector(vec![0.2, 0.0]),
                CoverageVector(vec![0.3, 0.5]),
            ],
            target: TargetId(0),
        };
        assert_eq!(profile.total_coverage(), CoverageVector(vec![0.5, 0.5]));
    }

    #[test]
    fn preference_partitions_targets() {
        let pref =
            PreferenceOrder::new(vec![TargetId(3), TargetId(0), TargetId(1), TargetId(2)]).unwrap();
        let t = TargetId(1);
        let above = pref.strictly_above(t);
        let below = pref.strictly_below(t);
        assert_eq!(above, vec![TargetId(3), TargetId(0)]);
        assert_eq!(below, vec![TargetId(2)]);
        assert_eq!(above.len() + below.len() + 1, pref.num_targets());
        assert!(pref.prefers(TargetId(3), TargetId(2)));
        assert!(!pref.prefers(TargetId(2), TargetId(3)));
        assert_eq!(pref.weakly_below(t), vec![TargetId(1), TargetId(2)]);
        assert_eq!(
            pref.weakly_above(t),
            vec![TargetId(3), TargetId(0), TargetId(1)]
        );
    }

    #[test]
    fn preference_rejects_non_permutations() {
        assert!(PreferenceOrder::new(vec![TargetId(0), TargetId(0)]).is_err());
        assert!(PreferenceOrder::new(vec![TargetId(0), TargetId(5)]).is_err());
    }

    #[test]
    fn waic_requires_ties_broken_against_defender() {
        // Full tie at zero coverage: the designated target satisfies the
        // predicate for defender i exactly when it is i's least preferred
        // tied target.
        let zeros = StrategyProfile {
            coverages: vec![CoverageVector::zeros(3), CoverageVector::zeros(3)],
            target: TargetId(2),
        };
        let game = identity_game(vec![1, 2, 3], vec![1, 2, 3]);
        assert!(is_waic(&game, &zeros, 0, 1e-9));

        // With ranking (3,2,1) target 3 is the most preferred tie, so other
        // tied targets are strictly worse for the defender.
        let game_rev = identity_game(vec![3, 2, 1], vec![1, 2, 3]);
        assert!(!is_waic(&game_rev, &zeros, 0, 1e-9));

        // Singleton best-response set: trivially satisfied.
        let single = StrategyProfile {
            coverages: vec![
                CoverageVector(vec![1.0, 1.0, 0.0]),
                CoverageVector::zeros(3),
            ],
            target: TargetId(2),
        };
        assert!(is_waic(&game_rev, &single, 0, 1e-9));

        // Designated target not in the best-response set at all.
        let off = StrategyProfile {
            coverages: vec![
                CoverageVector(vec![1.0, 0.0, 0.0]),
                CoverageVector::zeros(3),
            ],
            target: TargetId(0),
        };
        assert!(!is_waic(&game, &off, 0, 1e-9));
    }

    #[test]
    fn waic_implies_best_response_membership() {
        let game = identity_game(vec![2, 1, 3], vec![1, 2, 3]);
        let profile = StrategyProfile {
            coverages: vec![
                CoverageVector(vec![0.4, 0.1, 0.4]),
                CoverageVector::zeros(3),
            ],
            target: TargetId(1),
        };
        for i in 0..2 {
            if is_waic(&game, &profile, i, 1e-9) {
                let b = profile.total_coverage().best_response_set(1e-9);
                assert!(b.contains(&profile.target));
            }
        }
    }

    #[test]
    fn game_json_round_trip_uses_one_based_ids() {
        let game = identity_game(vec![2, 1, 3], vec![1, 2, 3]);
        let json = game.to_json();
        assert!(json.contains("\"preference\": [\n        2,\n        1,\n        3\n      ]"));
        let back = Game::from_json(&json).unwrap();
        assert_eq!(back, game);
    }

    #[test]
    fn profile_json_round_trip() {
        let profile = StrategyProfile {
            coverages: vec![CoverageVector(vec![0.0, 0.5, 0.5])],
            target: TargetId(0),
        };
        let json = profile.to_json();
        assert!(json.contains("\"target\": 1"));
        assert_eq!(StrategyProfile::from_json(&json).unwrap(), profile);
    }

    #[test]
    fn validation_catches_structural_errors() {
        let game = identity_game(vec![1, 2, 3], vec![1, 2, 3]);
        assert!(game.validate().is_ok());

        let mut bad = game.clone();
        bad.num_targets = 4;
        assert!(bad.validate().is_err());

        let profile = StrategyProfile {
            coverages: vec![CoverageVector::zeros(3)],
            target: TargetId(0),
        };
        assert!(profile.validate_against(&game).is_err());

        let neg = StrategyProfile {
            coverages: vec![
                CoverageVector(vec![-0.1, 0.0, 0.0]),
                CoverageVector::zeros(3),
            ],
            target: TargetId(0),
        };
        assert!(neg.validate_against(&game).is_err());
    }
}
