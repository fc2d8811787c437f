//! Equilibrium computation for multi-defender security games with
//! schedules.
//!
//! Several defenders protect a shared set of targets. Each defender
//! commits a mixed strategy over its own patrol schedules, inducing a
//! coverage vector; a strategic attacker observes the combined coverage
//! and attacks a least-covered target. Defenders have ordinal preferences
//! over which target gets attacked, and payoffs do not otherwise depend
//! on coverage. An equilibrium is a profile of coverages plus an attacked
//! target where the attacker best-responds and no defender can shift the
//! attack to a target it strictly prefers, even when attacker ties are
//! broken against the deviating defender.
//!
//! The crate provides:
//!
//! * the game model and its JSON wire format ([`game`]);
//! * coverage sets — explicit schedules under droppable (SSAS) or exact
//!   (clearance) semantics, and flow polytopes over layered patrol
//!   networks — plus the maximin coverage oracle ([`coverage`]);
//! * an exact two-defender solver and equilibrium-target enumerator, and
//!   an n-defender solver for monotone schedules ([`solver`]);
//! * a definition-level verifier driven by deviation linear programs,
//!   independent of both solvers ([`verify`]);
//! * a closed-form existence certificate for the clearance
//!   counterexample family ([`counterexample`]);
//! * reproducible instance generators and a benchmark harness
//!   ([`generate`], [`bench`]);
//! * a CLI (`secgame`) wrapping all of the above.
//!
//! # Example
//!
//! ```
//! use secgame::{identity3, solve_two, verify_nse, Tolerances};
//!
//! let game = identity3();
//! let profile = solve_two(&game)?;
//! let report = verify_nse(&game, &profile, &Tolerances::default())?;
//! assert!(report.is_nse);
//! # Ok::<(), secgame::Error>(())
//! ```

pub mod bench;
pub mod counterexample;
pub mod coverage;
pub mod error;
pub mod game;
pub mod generate;
mod lp;
pub mod solver;
pub mod verify;

pub use bench::{run_bench, run_stats, BenchRecord, SolverKind, StatsRecord};
pub use counterexample::{certify_counterexample, CounterexampleCertificate, Interval};
pub use coverage::{CoverageSet, LayeredNetwork, MaximinValue, ScheduleMode, DEFAULT_PATH_CAP};
pub use error::{Error, Result};
pub use game::{
    is_waic, CoverageVector, Defender, Game, Metadata, PreferenceOrder, StrategyProfile, TargetId,
};
pub use generate::{
    enforce_monotone, example1, fixture, gen_pln, gen_psg, gen_rgs, identity3, opposed2,
    GeneratorConfig,
};
pub use solver::multi::{build_matrix, check_monotone, solve_multi_ms, MaximinMatrix};
pub use solver::two::{
    build_t_standard, enumerate_equilibrium_targets, partial_set_nonempty, solve_two, Efficiency,
    EquilibriumTarget,
};
pub use verify::{deviation_exists, verify_nse, Tolerances, VerificationReport, WitnessDeviation};

/// Slack used when comparing two oracle-computed heights, absorbing LP
/// round-off without masking real gaps.
pub const ORACLE_TOL: f64 = 1e-7;

/// Default coverage gap below which the attacker treats targets as tied.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;

/// Deviation margins at or below this threshold count as no deviation.
pub const DELTA_STRICT: f64 = 1e-6;

/// Default constraint slack for coverage attainability checks.
pub const MEMBERSHIP_TOL: f64 = 1e-7;

// The guide's code blocks double as doc tests so the book can never
// drift from the library.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            pub struct $name;
        };
    }

    chapter!(GettingStarted, "../../../book/src/getting-started.md");
    chapter!(
        GamesAndSchedules,
        "../../../book/src/games-and-schedules.md"
    );
    chapter!(
        CoverageAndMaximin,
        "../../../book/src/coverage-and-maximin.md"
    );
    chapter!(
        VerifyingEquilibria,
        "../../../book/src/verifying-equilibria.md"
    );
    chapter!(SolvingGames, "../../../book/src/solving-games.md");
    chapter!(
        NonexistenceCertificates,
        "../../../book/src/nonexistence-certificates.md"
    );
    chapter!(
        GeneratorsAndBenchmarks,
        "../../../book/src/generators-and-benchmarks.md"
    );
    chapter!(CommandLine, "../../../book/src/command-line.md");
}
