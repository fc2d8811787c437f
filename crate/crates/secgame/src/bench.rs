//! Benchmark and statistics harness over the generated game families.
//!
//! Each run sweeps a list of generator configurations, draws `trials`
//! independent games per configuration (trial `i` reuses the config seed
//! plus `i`), and emits one CSV row per trial. Timing covers the solve
//! call only; generation and serialization are excluded. Failed trials
//! are marked in the CSV and the run continues.
//!
//! Rows are produced in configuration-then-trial order regardless of how
//! many worker threads execute them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::time::Instant;

use crate::game::Game;
use crate::generate::{enforce_monotone, GeneratorConfig};
use crate::solver::multi::solve_multi_ms;
use crate::solver::two::{enumerate_equilibrium_targets, solve_two};

/// Which solver a benchmark exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Two,
    MultiMs,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverKind::Two => write!(f, "two"),
            SolverKind::MultiMs => write!(f, "multi_ms"),
        }
    }
}

/// One timed solve.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchRecord {
    pub config: GeneratorConfig,
    pub solver: SolverKind,
    /// 1-based trial index within the configuration.
    pub trial: usize,
    /// The seed this trial's game was generated from.
    pub seed: u64,
    /// Wallclock seconds for the solve call; absent when the trial failed.
    pub seconds: Option<f64>,
    pub error: Option<String>,
}

/// Equilibrium-structure measurements for one two-defender game.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StatsRecord {
    pub config: GeneratorConfig,
    /// 1-based trial index within the configuration.
    pub trial: usize,
    pub seed: u64,
    pub efficient_count: usize,
    /// Efficient targets divided by the total target count.
    pub efficient_ratio: f64,
    /// Best (lowest) rank of an efficient equilibrium target in defender
    /// 1's preference order; rank 1 is its most preferred target.
    pub rank_optimistic: usize,
    /// Mean rank over the efficient equilibrium targets.
    pub rank_average: f64,
    /// Worst (highest) rank.
    pub rank_pessimistic: usize,
    pub error: Option<String>,
}

/// Sets a config's seed to the per-trial value.
fn trial_config(config: GeneratorConfig, trial: usize) -> GeneratorConfig {
    let mut c = config;
    let bump = |seed: &mut u64| *seed = seed.wrapping_add(trial as u64);
    match &mut c {
        GeneratorConfig::Rgs { seed, .. } => bump(seed),
        GeneratorConfig::Psg { seed, .. } => bump(seed),
        GeneratorConfig::Pln { seed, .. } => bump(seed),
    }
    c
}

fn config_seed(config: &GeneratorConfig) -> u64 {
    match config {
        GeneratorConfig::Rgs { seed, .. }
        | GeneratorConfig::Psg { seed, .. }
        | GeneratorConfig::Pln { seed, .. } => *seed,
    }
}

fn solve_once(game: &Game, solver: SolverKind) -> crate::error::Result<()> {
    match solver {
        SolverKind::Two => solve_two(game).map(|_| ()),
        SolverKind::MultiMs => solve_multi_ms(game).map(|_| ()),
    }
}

/// Times `trials` solves per configuration. When `monotone` is set each
/// generated game's schedules are rewritten to satisfy the monotonicity
/// requirement of the multi-defender solver before timing starts.
pub fn run_bench(
    configs: &[GeneratorConfig],
    solver: SolverKind,
    trials: usize,
    monotone: bool,
) -> Vec<BenchRecord> {
    let jobs: Vec<(GeneratorConfig, usize)> = configs
        .iter()
        .flat_map(|&c| (1..=trials).map(move |t| (c, t)))
        .collect();

    jobs.into_par_iter()
        .map(|(config, trial)| {
            let derived = trial_config(config, trial);
            let seed = config_seed(&derived);
            let prepared = derived.build().and_then(|mut game| {
                if monotone {
                    enforce_monotone(&mut game)?;
                }
                Ok(game)
            });
            let (seconds, error) = match prepared {
                Ok(game) => {
                    let start = Instant::now();
                    match solve_once(&game, solver) {
                        Ok(()) => (Some(start.elapsed().as_secs_f64()), None),
                        Err(e) => (None, Some(e.to_string())),
                    }
                }
                Err(e) => (None, Some(e.to_string())),
            };
            BenchRecord {
                config,
                solver,
                trial,
                seed,
                seconds,
                error,
            }
        })
        .collect()
}

/// Enumerates equilibrium targets for `trials` games per configuration
/// and reduces each game to its efficient-target statistics.
pub fn run_stats(configs: &[GeneratorConfig], trials: usize) -> Vec<StatsRecord> {
    let jobs: Vec<(GeneratorConfig, usize)> = configs
        .iter()
        .flat_map(|&c| (1..=trials).map(move |t| (c, t)))
        .collect();

    jobs.into_par_iter()
        .map(|(config, trial)| {
            let derived = trial_config(config, trial);
            let seed = config_seed(&derived);
            let mut record = StatsRecord {
                config,
                trial,
                seed,
                efficient_count: 0,
                efficient_ratio: 0.0,
                rank_optimistic: 0,
                rank_average: 0.0,
                rank_pessimistic: 0,
                error: None,
            };
            match derived.build().and_then(|g| stats_for_game(&g)) {
                Ok((count, ratio, opt, avg, pess)) => {
                    record.efficient_count = count;
                    record.efficient_ratio = ratio;
                    record.rank_optimistic = opt;
                    record.rank_average = avg;
                    record.rank_pessimistic = pess;
                }
                Err(e) => record.error = Some(e.to_string()),
            }
            record
        })
        .collect()
}

/// Efficient-target count, ratio, and the three rank conventions for one
/// game: optimistic takes the efficient equilibrium target ranked best by
/// defender 1, pessimistic the one ranked worst, average the mean rank.
pub fn stats_for_game(game: &Game) -> crate::error::Result<(usize, f64, usize, f64, usize)> {
    use crate::solver::two::Efficiency;

    let rows = enumerate_equilibrium_targets(game)?;
    let ranks: Vec<usize> = rows
        .iter()
        .filter(|r| r.efficiency == Efficiency::Efficient)
        .map(|r| game.defenders[0].preference.rank(r.target) + 1)
        .collect();
    if ranks.is_empty() {
        return Err(crate::error::Error::Solver(
            "no efficient equilibrium target found".into(),
        ));
    }
    let count = ranks.len();
    let ratio = count as f64 / game.num_targets as f64;
    let opt = *ranks.iter().min().expect("nonempty");
    let pess = *ranks.iter().max().expect("nonempty");
    let avg = ranks.iter().sum::<usize>() as f64 / count as f64;
    Ok((count, ratio, opt, avg, pess))
}

fn config_cells(config: &GeneratorConfig) -> [String; 9] {
    let mut cells: [String; 9] = Default::default();
    match *config {
        GeneratorConfig::Rgs {
            targets,
            schedules,
            support,
            defenders,
            ..
        } => {
            cells[0] = "rgs".into();
            cells[1] = targets.to_string();
            cells[2] = schedules.to_string();
            cells[3] = support.to_string();
            cells[4] = defenders.to_string();
        }
        GeneratorConfig::Psg { side, radius, .. } => {
            cells[0] = "psg".into();
            cells[5] = side.to_string();
            cells[6] = radius.to_string();
        }
        GeneratorConfig::Pln {
            layers,
            width,
            defenders,
            ..
        } => {
            cells[0] = "pln".into();
            cells[4] = defenders.to_string();
            cells[7] = layers.to_string();
            cells[8] = width.to_string();
        }
    }
    cells
}

const CONFIG_HEADER: &str = "family,targets,schedules,support,defenders,side,radius,layers,width";

/// Renders benchmark records as CSV with a fixed header. Parameter
/// columns that do not apply to a record's family are left empty.
pub fn bench_csv(records: &[BenchRecord]) -> String {
    let mut out = String::new();
    out.push_str(CONFIG_HEADER);
    out.push_str(",solver,seed,trial,status,seconds\n");
    for r in records {
        out.push_str(&config_cells(&r.config).join(","));
        let status = if r.error.is_none() { "ok" } else { "failed" };
        let seconds = r.seconds.map(|s| s.to_string()).unwrap_or_default();
        out.push_str(&format!(
            ",{},{},{},{},{}\n",
            r.solver, r.seed, r.trial, status, seconds
        ));
    }
    out
}

/// Renders statistics records as CSV with a fixed header.
pub fn stats_csv(records: &[StatsRecord]) -> String {
    let mut out = String::new();
    out.push_str(CONFIG_HEADER);
    out.push_str(
        ",seed,trial,status,efficient_count,efficient_ratio,\
         rank_optimistic,rank_average,rank_pessimistic\n",
    );
    for r in records {
        out.push_str(&config_cells(&r.config).join(","));
        if r.error.is_none() {
            out.push_str(&format!(
                ",{},{},ok,{},{},{},{},{}\n",
                r.seed,
                r.trial,
                r.efficient_count,
                r.efficient_ratio,
                r.rank_optimistic,
                r.rank_average,
                r.rank_pessimistic
            ));
        } else {
            out.push_str(&format!(",{},{},failed,,,,,\n", r.seed, r.trial));
        }
    }
    out
}

/// Mean and standard error of solve time for one configuration.
#[derive(Clone, Debug)]
pub struct BenchSummary {
    pub config: GeneratorConfig,
    pub ok: usize,
    pub failed: usize,
    pub mean_seconds: f64,
    pub stderr_seconds: f64,
}

/// Aggregates records per configuration, in first-seen order.
pub fn summarize_bench(records: &[BenchRecord]) -> Vec<BenchSummary> {
    let mut order: Vec<GeneratorConfig> = Vec::new();
    for r in records {
        if !order.contains(&r.config) {
            order.push(r.config);
        }
    }
    order
        .into_iter()
        .map(|config| {
            let times: Vec<f64> = records
                .iter()
                .filter(|r| r.config == config)
                .filter_map(|r| r.seconds)
                .collect();
            let failed = records
                .iter()
                .filter(|r| r.config == config && r.error.is_some())
                .count();
            let (mean, se) = mean_and_stderr(&times);
            BenchSummary {
                config,
                ok: times.len(),
                failed,
                mean_seconds: mean,
                stderr_seconds: se,
            }
        })
        .collect()
}

/// Mean efficient-target statistics for one configuration.
#[derive(Clone, Debug)]
pub struct StatsSummary {
    pub config: GeneratorConfig,
    pub ok: usize,
    pub failed: usize,
    pub mean_efficient_count: f64,
    pub mean_efficient_ratio: f64,
    pub mean_rank_optimistic: f64,
    pub mean_rank_average: f64,
    pub mean_rank_pessimistic: f64,
}

pub fn summarize_stats(records: &[StatsRecord]) -> Vec<StatsSummary> {
    let mut order: Vec<GeneratorConfig> = Vec::new();
    for r in records {
        if !order.contains(&r.config) {
            order.push(r.config);
        }
    }
    order
        .into_iter()
        .map(|config| {
            let ok: Vec<&StatsRecord> = records
                .iter()
                .filter(|r| r.config == config && r.error.is_none())
                .collect();
            let failed = records
                .iter()
                .filter(|r| r.config == config && r.error.is_some())
                .count();
            let mean = |f: &dyn Fn(&StatsRecord) -> f64| {
                if ok.is_empty() {
                    0.0
                } else {
                    ok.iter().map(|r| f(r)).sum::<f64>() / ok.len() as f64
                }
            };
            StatsSummary {
                config,
                ok: ok.len(),
                failed,
                mean_efficient_count: mean(&|r| r.efficient_count as f64),
                mean_efficient_ratio: mean(&|r| r.efficient_ratio),
                mean_rank_optimistic: mean(&|r| r.rank_optimistic as f64),
                mean_rank_average: mean(&|r| r.rank_average),
                mean_rank_pessimistic: mean(&|r| r.rank_pessimistic as f64),
            }
        })
        .collect()
}

/// Sample mean and standard error (sample standard deviation over the
/// square root of the count); both zero for fewer than two samples.
pub fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    if samples.is_empty() {
        return (0.0, 0.0);
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{identity3, opposed2};

    #[test]
    fn bench_records_cover_every_trial_in_order() {
        let configs = [
            GeneratorConfig::Rgs {
                targets: 5,
                schedules: 4,
                support: 2,
                defenders: 2,
                seed: 10,
            },
            GeneratorConfig::Rgs {
                targets: 6,
                schedules: 4,
                support: 2,
                defenders: 2,
                seed: 10,
            },
        ];
        let records = run_bench(&configs, SolverKind::Two, 3, false);
        assert_eq!(records.len(), 6);
        let trials: Vec<usize> = records.iter().map(|r| r.trial).collect();
        assert_eq!(trials, vec![1, 2, 3, 1, 2, 3]);
        for r in &records {
            assert!(r.error.is_none(), "trial failed: {:?}", r.error);
            assert!(r.seconds.unwrap() >= 0.0);
        }
        // Trial seeds offset the config seed.
        assert_eq!(records[0].seed, 11);
        assert_eq!(records[2].seed, 13);
    }

    #[test]
    fn multi_bench_requires_the_monotone_rewrite() {
        let configs = [GeneratorConfig::Rgs {
            targets: 6,
            schedules: 5,
            support: 6,
            defenders: 3,
            seed: 3,
        }];
        let sorted = run_bench(&configs, SolverKind::MultiMs, 2, true);
        assert!(sorted.iter().all(|r| r.error.is_none()));
    }

    #[test]
    fn failed_trials_are_marked_and_do_not_abort() {
        // Raw random schedules are almost surely not monotone, so the
        // multi-defender solver rejects them as a precondition failure.
        let configs = [GeneratorConfig::Rgs {
            targets: 8,
            schedules: 6,
            support: 8,
            defenders: 2,
            seed: 99,
        }];
        let records = run_bench(&configs, SolverKind::MultiMs, 2, false);
        assert_eq!(records.len(), 2);
        assert!(records.iter().any(|r| r.error.is_some()));
        let csv = bench_csv(&records);
        assert!(csv.contains("failed"));
    }

    #[test]
    fn csv_headers_are_stable() {
        let bench = bench_csv(&[]);
        assert_eq!(
            bench.trim_end(),
            "family,targets,schedules,support,defenders,side,radius,layers,width,\
             solver,seed,trial,status,seconds"
        );
        let stats = stats_csv(&[]);
        assert!(stats.starts_with("family,targets"));
        assert!(stats.contains("rank_pessimistic"));
    }

    #[test]
    fn identity_game_stats_are_degenerate() {
        let (count, ratio, opt, avg, pess) = stats_for_game(&identity3()).unwrap();
        assert_eq!(count, 1);
        assert!((ratio - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!((opt, pess), (1, 1));
        assert!((avg - 1.0).abs() < 1e-12);
    }

    #[test]
    fn opposed_game_spreads_the_rank_conventions() {
        let (count, ratio, opt, avg, pess) = stats_for_game(&opposed2()).unwrap();
        assert_eq!(count, 2);
        assert!((ratio - 1.0).abs() < 1e-12);
        assert_eq!(opt, 1);
        assert_eq!(pess, 2);
        assert!((avg - 1.5).abs() < 1e-12);
    }

    #[test]
    fn stats_run_is_deterministic_given_seeds() {
        let configs = [GeneratorConfig::Rgs {
            targets: 6,
            schedules: 5,
            support: 3,
            defenders: 2,
            seed: 21,
        }];
        let a = run_stats(&configs, 4);
        let b = run_stats(&configs, 4);
        assert_eq!(stats_csv(&a), stats_csv(&b));
        for r in &a {
            assert!(r.error.is_none());
            assert!(r.rank_optimistic as f64 <= r.rank_average);
            assert!(r.rank_average <= r.rank_pessimistic as f64);
        }
    }

    #[test]
    fn mean_and_stderr_basics() {
        let (m, s) = mean_and_stderr(&[]);
        assert_eq!((m, s), (0.0, 0.0));
        let (m, s) = mean_and_stderr(&[2.0]);
        assert_eq!((m, s), (2.0, 0.0));
        let (m, s) = mean_and_stderr(&[1.0, 3.0]);
        assert!((m - 2.0).abs() < 1e-12);
        assert!((s - 1.0).abs() < 1e-12);
    }
}
