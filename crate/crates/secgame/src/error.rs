use thiserror::Error;

/// Errors surfaced by game construction, oracles, and solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// A structural problem in the input: mismatched lengths, invalid
    /// permutations, out-of-range indices, negative coverage, and the like.
    #[error("invalid input: {0}")]
    Validation(String),

    /// The operation's preconditions are not met (wrong number of
    /// defenders, wrong coverage-set mode, non-monotone schedules, ...).
    #[error("precondition not met: {0}")]
    Precondition(String),

    /// Monotone-schedule check failed; carries the first witness found.
    #[error(
        "schedules are not monotone: defender {defender}'s schedule {schedule} \
         puts {cov_preferred} on target {preferred} but only {cov_other} on the \
         less-preferred target {other}"
    )]
    NotMonotone {
        /// 1-based defender index.
        defender: usize,
        /// 1-based schedule index within that defender's set.
        schedule: usize,
        /// The more-preferred target of the violating pair.
        preferred: crate::game::TargetId,
        /// The less-preferred target of the violating pair.
        other: crate::game::TargetId,
        cov_preferred: f64,
        cov_other: f64,
    },

    /// Path enumeration refused: the network has more source-sink paths
    /// than the configured cap.
    #[error("network has {count} source-sink paths, above the cap of {cap}")]
    PathCapExceeded { count: u128, cap: u64 },

    /// The LP backend failed in a way the caller cannot interpret
    /// (an unexpectedly infeasible or unbounded program, or an
    /// internal solver error).
    #[error("LP solver failure: {0}")]
    Solver(String),

    /// No fixture registered under the requested name.
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

pub type Result<T> = std::result::Result<T, Error>;
