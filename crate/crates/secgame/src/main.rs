//! `secgame`: generate, solve, verify, and benchmark multi-defender
//! security games from the command line.
//!
//! Subcommands write their primary artifact (game, profile, report,
//! certificate, or CSV) to stdout or `--output`, and a human-readable
//! summary to stderr. Exit codes: 0 success (for `verify`, the profile is
//! an equilibrium), 1 usage error, 2 parse or validation error, 3
//! precondition failure, 4 verification failed, 5 solver failure.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use secgame::bench::{
    bench_csv, run_bench, run_stats, stats_csv, summarize_bench, summarize_stats, SolverKind,
};
use secgame::counterexample::certify_counterexample;
use secgame::generate::{enforce_monotone, fixture, GeneratorConfig};
use secgame::solver::multi::solve_multi_ms;
use secgame::solver::two::{enumerate_equilibrium_targets, solve_two, Efficiency};
use secgame::verify::{verify_nse, Tolerances};
use secgame::{Error, Game, Result, StrategyProfile};

#[derive(Parser)]
#[command(
    name = "secgame",
    version,
    about = "Equilibria of multi-defender security games with schedules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a game instance and emit it as JSON.
    Generate(GenerateArgs),
    /// Compute an equilibrium and emit the strategy profile as JSON.
    Solve(SolveArgs),
    /// Check a profile against the equilibrium definition.
    Verify(VerifyArgs),
    /// List every target supporting an equilibrium, with efficiency labels.
    Enumerate(EnumerateArgs),
    /// Time solver runs over generated instance sweeps and emit CSV.
    Bench(BenchArgs),
    /// Equilibrium-structure statistics over generated sweeps, as CSV.
    Stats(StatsArgs),
    /// Analyze a member of the clearance family for equilibrium existence.
    Counterexample(CounterexampleArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Rgs,
    Psg,
    Pln,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Algorithm {
    /// Exact two-defender solver.
    Two,
    /// Monotone-schedules solver for any number of defenders.
    #[value(name = "multi_ms", alias = "multi-ms")]
    MultiMs,
}

/// Where a subcommand gets its game from.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct GameSource {
    /// Path to a game JSON file.
    #[arg(long)]
    game: Option<PathBuf>,
    /// Built-in fixture: identity3 or example1(epsilon,k,mode).
    #[arg(long)]
    fixture: Option<String>,
}

impl GameSource {
    fn load(&self) -> Result<Game> {
        if let Some(path) = &self.game {
            return Game::from_json(&read_file(path)?);
        }
        fixture(self.fixture.as_deref().expect("clap enforces the group"))
    }
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["family", "fixture"])))]
struct GenerateArgs {
    /// Instance family to draw from.
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Built-in fixture instead of a random family.
    #[arg(long)]
    fixture: Option<String>,
    /// Targets (rgs).
    #[arg(long, default_value_t = 10)]
    targets: usize,
    /// Schedules per defender (rgs).
    #[arg(long, default_value_t = 10)]
    schedules: usize,
    /// Nonzero entries per schedule (rgs); defaults to all targets.
    #[arg(long)]
    support: Option<usize>,
    /// Number of defenders (rgs, pln).
    #[arg(long, default_value_t = 2)]
    defenders: usize,
    /// Grid side length (psg).
    #[arg(long, default_value_t = 4)]
    side: usize,
    /// Checkpoint coverage radius (psg).
    #[arg(long, default_value_t = 2)]
    radius: usize,
    /// Network layers (pln).
    #[arg(long, default_value_t = 3)]
    layers: usize,
    /// Vertices per layer (pln).
    #[arg(long, default_value_t = 4)]
    width: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rewrite schedules to satisfy the monotonicity precondition of the
    /// multi-defender solver.
    #[arg(long)]
    monotone: bool,
    /// Write the game here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: GameSource,
    #[arg(long, value_enum, default_value_t = Algorithm::Two)]
    algorithm: Algorithm,
    /// Write the profile here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: GameSource,
    /// Path to the strategy profile JSON file.
    #[arg(long)]
    profile: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    source: GameSource,
    /// Write the rows here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Instance family to sweep.
    #[arg(long, value_enum, default_value_t = Family::Rgs)]
    family: Family,
    /// Target counts to sweep (rgs), comma separated.
    #[arg(long, value_delimiter = ',', default_value = "10")]
    targets: Vec<usize>,
    /// Schedule counts to sweep (rgs).
    #[arg(long, value_delimiter = ',', default_value = "10")]
    schedules: Vec<usize>,
    /// Support sizes to sweep (rgs); defaults to full support.
    #[arg(long, value_delimiter = ',')]
    support: Option<Vec<usize>>,
    /// Defender counts to sweep (rgs, pln).
    #[arg(long, value_delimiter = ',', default_value = "2")]
    defenders: Vec<usize>,
    /// Grid sides to sweep (psg).
    #[arg(long, value_delimiter = ',', default_value = "4")]
    side: Vec<usize>,
    /// Radii to sweep (psg).
    #[arg(long, value_delimiter = ',', default_value = "2")]
    radius: Vec<usize>,
    /// Layer counts to sweep (pln).
    #[arg(long, value_delimiter = ',', default_value = "3")]
    layers: Vec<usize>,
    /// Widths to sweep (pln).
    #[arg(long, value_delimiter = ',', default_value = "4")]
    width: Vec<usize>,
    /// Base seed; trial i of a config uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Games per configuration.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Worker threads (defaults to one per CPU).
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl SweepArgs {
    fn configs(&self) -> Vec<GeneratorConfig> {
        let mut out = Vec::new();
        match self.family {
            Family::Rgs => {
                for &t in &self.targets {
                    let supports = self.support.clone().unwrap_or_else(|| vec![t]);
                    for &s in &self.schedules {
                        for &u in &supports {
                            for &n in &self.defenders {
                                out.push(GeneratorConfig::Rgs {
                                    targets: t,
                                    schedules: s,
                                    support: u,
                                    defenders: n,
                                    seed: self.seed,
                                });
                            }
                        }
                    }
                }
            }
            Family::Psg => {
                for &m in &self.side {
                    for &r in &self.radius {
                        out.push(GeneratorConfig::Psg {
                            side: m,
                            radius: r,
                            seed: self.seed,
                        });
                    }
                }
            }
            Family::Pln => {
                for &l in &self.layers {
                    for &w in &self.width {
                        for &n in &self.defenders {
                            out.push(GeneratorConfig::Pln {
                                layers: l,
                                width: w,
                                defenders: n,
                                seed: self.seed,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    fn configure_pool(&self) -> Result<()> {
        if let Some(jobs) = self.jobs {
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build_global()
                .map_err(|e| Error::Solver(format!("cannot configure worker pool: {e}")))?;
        }
        Ok(())
    }
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    #[arg(long, value_enum, default_value_t = Algorithm::Two)]
    solver: Algorithm,
    /// Rewrite schedules for monotonicity before solving.
    #[arg(long)]
    monotone: bool,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    sweep: SweepArgs,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    k: f64,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn read_file(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))
}

/// Writes the artifact to `--output`, or stdout when absent.
fn emit(content: &str, output: Option<&PathBuf>, what: &str) -> Result<()> {
    match output {
        Some(path) => {
            fs::write(path, content)
                .map_err(|e| Error::Validation(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {what} to {}", path.display());
        }
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
        }
    }
    Ok(())
}

fn cmd_generate(args: &GenerateArgs) -> Result<u8> {
    let mut game = if let Some(name) = &args.fixture {
        fixture(name)?
    } else {
        let config = match args.family.expect("clap enforces the group") {
            Family::Rgs => GeneratorConfig::Rgs {
                targets: args.targets,
                schedules: args.schedules,
                support: args.support.unwrap_or(args.targets),
                defenders: args.defenders,
                seed: args.seed,
            },
            Family::Psg => GeneratorConfig::Psg {
                side: args.side,
                radius: args.radius,
                seed: args.seed,
            },
            Family::Pln => GeneratorConfig::Pln {
                layers: args.layers,
                width: args.width,
                defenders: args.defenders,
                seed: args.seed,
            },
        };
        config.build()?
    };
    if args.monotone {
        enforce_monotone(&mut game)?;
    }
    let label = game.metadata.label.clone().unwrap_or_else(|| "game".into());
    emit(&game.to_json(), args.output.as_ref(), "game")?;
    eprintln!(
        "generated {label}: {} targets, {} defenders",
        game.num_targets,
        game.num_defenders()
    );
    Ok(0)
}

fn cmd_solve(args: &SolveArgs) -> Result<u8> {
    let game = args.source.load()?;
    let profile = match args.algorithm {
        Algorithm::Two => solve_two(&game)?,
        Algorithm::MultiMs => solve_multi_ms(&game)?,
    };
    let report = verify_nse(&game, &profile, &Tolerances::default())?;
    let heights: Vec<String> = profile
        .coverages
        .iter()
        .map(|c| {
            let h = c.as_slice().iter().cloned().fold(0.0f64, f64::max);
            format!("{h:.6}")
        })
        .collect();
    emit(&profile.to_json(), args.output.as_ref(), "profile")?;
    eprintln!(
        "target {} attacked; defender heights {}; verification {}",
        profile.target,
        heights.join(", "),
        if report.is_nse { "passed" } else { "FAILED" }
    );
    Ok(if report.is_nse { 0 } else { 4 })
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8> {
    let game = args.source.load()?;
    let profile = StrategyProfile::from_json(&read_file(&args.profile)?)?;
    let report = verify_nse(&game, &profile, &Tolerances::default())?;
    emit(&report.to_json(), args.output.as_ref(), "report")?;
    if report.is_nse {
        eprintln!(
            "equilibrium verified: target {} is attacked",
            profile.target
        );
        Ok(0)
    } else {
        for (i, ok) in report.membership_ok.iter().enumerate() {
            if !ok {
                eprintln!("defender {}'s coverage is not attainable", i + 1);
            }
        }
        if !report.aic {
            eprintln!(
                "target {} does not have minimal total coverage",
                profile.target
            );
        }
        for w in &report.witness_deviations {
            eprintln!(
                "defender {} can push the attack to target {} (margin {:.6})",
                w.defender, w.target, w.margin
            );
        }
        eprintln!("NOT an equilibrium");
        Ok(4)
    }
}

fn cmd_enumerate(args: &EnumerateArgs) -> Result<u8> {
    let game = args.source.load()?;
    let rows = enumerate_equilibrium_targets(&game)?;
    let json = serde_json::to_string_pretty(&rows).expect("row serialization cannot fail");
    emit(&json, args.output.as_ref(), "equilibrium targets")?;
    eprintln!("target  efficiency   height1   height2");
    for row in &rows {
        let height = |h: f64, unconstrained: bool| {
            if unconstrained {
                "free".to_string()
            } else {
                format!("{h:.6}")
            }
        };
        eprintln!(
            "{:>6}  {:<11}  {:>8}  {:>8}",
            row.target.one_based(),
            match row.efficiency {
                Efficiency::Efficient => "efficient",
                Efficiency::Inefficient => "inefficient",
            },
            height(row.h1, row.unconstrained1),
            height(row.h2, row.unconstrained2),
        );
    }
    eprintln!(
        "{} of {} targets support an equilibrium",
        rows.len(),
        game.num_targets
    );
    Ok(0)
}

fn cmd_bench(args: &BenchArgs) -> Result<u8> {
    args.sweep.configure_pool()?;
    let configs = args.sweep.configs();
    let solver = match args.solver {
        Algorithm::Two => SolverKind::Two,
        Algorithm::MultiMs => SolverKind::MultiMs,
    };
    let records = run_bench(&configs, solver, args.sweep.trials, args.monotone);
    for r in &records {
        if let Some(err) = &r.error {
            eprintln!("trial {} of {} failed: {err}", r.trial, r.config);
        }
    }
    emit(
        &bench_csv(&records),
        args.sweep.output.as_ref(),
        "benchmark CSV",
    )?;
    for s in summarize_bench(&records) {
        eprintln!(
            "{}: mean {:.6} s, stderr {:.6} s ({} ok, {} failed)",
            s.config, s.mean_seconds, s.stderr_seconds, s.ok, s.failed
        );
    }
    Ok(0)
}

fn cmd_stats(args: &StatsArgs) -> Result<u8> {
    args.sweep.configure_pool()?;
    let configs = args.sweep.configs();
    let records = run_stats(&configs, args.sweep.trials);
    for r in &records {
        if let Some(err) = &r.error {
            eprintln!("trial {} of {} failed: {err}", r.trial, r.config);
        }
    }
    emit(
        &stats_csv(&records),
        args.sweep.output.as_ref(),
        "statistics CSV",
    )?;
    for s in summarize_stats(&records) {
        eprintln!(
            "{}: mean efficient count {:.3}, ratio {:.4}, ranks {:.2}/{:.2}/{:.2} \
             (optimistic/average/pessimistic; {} ok, {} failed)",
            s.config,
            s.mean_efficient_count,
            s.mean_efficient_ratio,
            s.mean_rank_optimistic,
            s.mean_rank_average,
            s.mean_rank_pessimistic,
            s.ok,
            s.failed
        );
    }
    Ok(0)
}

fn cmd_counterexample(args: &CounterexampleArgs) -> Result<u8> {
    let cert = certify_counterexample(args.epsilon, args.k)?;
    emit(&cert.to_json(), args.output.as_ref(), "certificate")?;
    eprintln!("family member epsilon={} k={}", cert.epsilon, cert.k);
    for (i, c) in cert.conditions.iter().enumerate() {
        let sense = match c.sense {
            secgame::counterexample::Sense::AtMost => "<=",
            secgame::counterexample::Sense::AtLeast => ">=",
        };
        eprintln!(
            "condition {}: {} * w {} {}  ->  {}",
            i + 1,
            c.coeff,
            sense,
            c.bound,
            c.interval
        );
    }
    if cert.exists_nse {
        let w = cert.feasible_point().expect("feasible region is nonempty");
        eprintln!("an equilibrium exists; feasible mixing weight {w}");
    } else {
        eprintln!("no equilibrium exists for any candidate target");
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match &cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Counterexample(args) => cmd_counterexample(args),
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Validation(_) | Error::UnknownFixture(_) => 2,
        Error::Precondition(_) | Error::NotMonotone { .. } | Error::PathCapExceeded { .. } => 3,
        Error::Solver(_) => 5,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
