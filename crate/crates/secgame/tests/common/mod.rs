//! Helpers shared by the integration test suites.

#![allow(dead_code)]

use rand::prelude::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use secgame::coverage::{CoverageSet, LayeredNetwork, ScheduleMode};
use secgame::game::{Game, StrategyProfile, TargetId};
use secgame::verify::{verify_nse, Tolerances};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random nonempty subset of the targets.
pub fn random_subset(rng: &mut ChaCha8Rng, num_targets: usize) -> Vec<TargetId> {
    loop {
        let subset: Vec<TargetId> = (0..num_targets)
            .filter(|_| rng.random_bool(0.5))
            .map(TargetId)
            .collect();
        if !subset.is_empty() {
            return subset;
        }
    }
}

/// A random sub-subset (possibly equal, never empty) of `of`.
pub fn random_subsubset(rng: &mut ChaCha8Rng, of: &[TargetId]) -> Vec<TargetId> {
    loop {
        let sub: Vec<TargetId> = of
            .iter()
            .copied()
            .filter(|_| rng.random_bool(0.6))
            .collect();
        if !sub.is_empty() {
            return sub;
        }
    }
}

pub fn random_target(rng: &mut ChaCha8Rng, num_targets: usize) -> TargetId {
    let ids: Vec<usize> = (0..num_targets).collect();
    TargetId(*ids.choose(rng).expect("games have at least one target"))
}

/// Runs the definition-level verifier and panics with the full report on
/// any failure.
pub fn assert_nse(game: &Game, profile: &StrategyProfile) {
    let report = verify_nse(game, profile, &Tolerances::default())
        .expect("verification must not error on solver output");
    assert!(
        report.is_nse,
        "profile failed verification:\nprofile: {}\nreport: {}",
        profile.to_json(),
        report.to_json()
    );
}

/// The same coverage options as the network's flow polytope, expressed as
/// an explicit schedule list with one schedule per source-sink path.
pub fn paths_as_ssas(net: &LayeredNetwork, cap: u64) -> CoverageSet {
    CoverageSet::Schedules {
        mode: ScheduleMode::Ssas,
        schedules: net
            .enumerate_paths(cap)
            .expect("test networks stay below the path cap"),
    }
}
