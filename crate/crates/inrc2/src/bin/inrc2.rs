//! Command-line frontend: validator, simulator launcher, adjudicator,
//! instance generator, and feasibility screen.
//!
//! Exit codes: 0 success (including hard-infeasible rosters and failed
//! screens — the diagnosis is the product), 1 usage error, 2 format error
//! in an input file, 3 internal error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use inrc2::adjudication::{
    compute_ranks, final_ranking, format_mean, mean_ranks, parse_score_table, select_finalists,
};
use inrc2::evaluation::evaluate_horizon;
use inrc2::generator::{generate_instance, write_dataset, GeneratorConfig};
use inrc2::model::{Scenario, Weights};
use inrc2::report::render_report;
use inrc2::screen::{feasibility_screen, ScreenOutcome};
use inrc2::simulator::{run_simulation, SimulationConfig, SimulationError, TimeoutPolicy};
use inrc2::textio;

const EXIT_USAGE: u8 = 1;
const EXIT_FORMAT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "inrc2",
    about = "Multi-stage nurse rostering toolkit",
    version,
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a full horizon of solutions and print the cost report.
    Validate {
        /// Scenario file.
        #[arg(long)]
        sce: PathBuf,
        /// Initial history file.
        #[arg(long)]
        his: PathBuf,
        /// Week data files, one per week in horizon order.
        #[arg(long, num_args = 1..)]
        weeks: Vec<PathBuf>,
        /// Solution files, one per week in horizon order.
        #[arg(long, num_args = 1..)]
        sols: Vec<PathBuf>,
        /// Also print per-nurse violation details.
        #[arg(long)]
        verbose: bool,
    },
    /// Run a solver over every stage and validate the outcome.
    Simulate {
        #[arg(long)]
        sce: PathBuf,
        #[arg(long)]
        his: PathBuf,
        #[arg(long, num_args = 1..)]
        weeks: Vec<PathBuf>,
        /// Solver executable implementing the per-week command contract.
        #[arg(long)]
        solver: PathBuf,
        /// Directory to start the solver from.
        #[arg(long = "runDir")]
        run_dir: Option<PathBuf>,
        /// Where all generated files are written.
        #[arg(long = "outDir", default_value = "Simulator_out")]
        out_dir: PathBuf,
        /// Pass custom files between consecutive stages.
        #[arg(long)]
        cus: bool,
        /// One seed reused for all stages, or one seed per stage.
        #[arg(long, num_args = 1..)]
        rand: Vec<u64>,
        /// Per-stage limit: "none", "benchmark", or seconds.
        #[arg(long, default_value = "none")]
        timeout: String,
    },
    /// Rank score tables and pick finalists and a winner.
    Adjudicate {
        /// Score tables, one file per trial: a row per participant, a
        /// comma-separated column per instance, empty cell = missing.
        #[arg(long, num_args = 1..)]
        scores: Vec<PathBuf>,
        /// Number of finalists (ties at the cut are all admitted).
        #[arg(long, default_value_t = 5)]
        quota: usize,
    },
    /// Generate a dataset: scenario, 3 initial histories, 10 week files.
    Generate {
        #[arg(long, default_value_t = 5)]
        nurses: u32,
        #[arg(long, default_value_t = 4)]
        weeks: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        skills: u32,
        #[arg(long, default_value_t = 3)]
        shifts: u32,
        /// Fraction of (nurse, day) cells with a shift-off request.
        #[arg(long = "requestDensity", default_value_t = 0.1)]
        request_density: f64,
        #[arg(long = "outDir", default_value = ".")]
        out_dir: PathBuf,
    },
    /// Check necessary feasibility conditions for one week.
    Screen {
        #[arg(long)]
        sce: PathBuf,
        #[arg(long)]
        his: PathBuf,
        #[arg(long)]
        week: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn format(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_FORMAT,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::internal(format!("cannot read {}: {e}", path.display())))
}

fn load_scenario(path: &PathBuf) -> Result<Scenario, Failure> {
    textio::parse_scenario(&read_file(path)?)
        .map_err(|e| Failure::format(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap prints its own message; help/version requests are not errors.
            let failed = err.use_stderr();
            let _ = err.print();
            return if failed {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate {
            sce,
            his,
            weeks,
            sols,
            verbose,
        } => validate(sce, his, weeks, sols, verbose),
        Command::Simulate {
            sce,
            his,
            weeks,
            solver,
            run_dir,
            out_dir,
            cus,
            rand,
            timeout,
        } => {
            let timeout_policy = match timeout.as_str() {
                "none" => TimeoutPolicy::None,
                "benchmark" => TimeoutPolicy::BenchmarkFormula,
                secs => TimeoutPolicy::Fixed(secs.parse().map_err(|_| {
                    Failure::usage(format!(
                        "--timeout expects `none`, `benchmark`, or seconds, found `{secs}`"
                    ))
                })?),
            };
            simulate(SimulationConfig {
                scenario_path: sce,
                initial_history_path: his,
                week_paths: weeks,
                solver_path: solver,
                run_dir,
                out_dir,
                use_custom: cus,
                seeds: rand,
                timeout_policy,
            })
        }
        Command::Adjudicate { scores, quota } => adjudicate(scores, quota),
        Command::Generate {
            nurses,
            weeks,
            seed,
            skills,
            shifts,
            request_density,
            out_dir,
        } => {
            let cfg = GeneratorConfig {
                n_nurses: nurses,
                n_weeks: weeks,
                seed,
                skill_count: skills,
                shift_count: shifts,
                request_density,
            };
            cfg.validate().map_err(Failure::usage)?;
            let dataset = generate_instance(&cfg);
            let paths = write_dataset(&dataset, &out_dir)
                .map_err(|e| Failure::internal(format!("cannot write dataset: {e}")))?;
            for path in paths {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Screen { sce, his, week } => {
            let scenario = load_scenario(&sce)?;
            let history = textio::parse_history(&read_file(&his)?, &scenario)
                .map_err(|e| Failure::format(format!("{}: {e}", his.display())))?;
            let week_data = textio::parse_week_data(&read_file(&week)?, &scenario)
                .map_err(|e| Failure::format(format!("{}: {e}", week.display())))?;
            match feasibility_screen(&scenario, &week_data, &history) {
                ScreenOutcome::Pass => println!("PASS (necessary conditions hold)"),
                ScreenOutcome::Fail(reason) => println!("FAIL: {reason}"),
            }
            Ok(())
        }
    }
}

fn validate(
    sce: PathBuf,
    his: PathBuf,
    weeks: Vec<PathBuf>,
    sols: Vec<PathBuf>,
    verbose: bool,
) -> Result<(), Failure> {
    let scenario = load_scenario(&sce)?;
    if weeks.len() != scenario.num_weeks as usize || sols.len() != weeks.len() {
        return Err(Failure::format(format!(
            "expected {} week files and as many solutions, got {} and {}",
            scenario.num_weeks,
            weeks.len(),
            sols.len()
        )));
    }
    let history = textio::parse_history(&read_file(&his)?, &scenario)
        .map_err(|e| Failure::format(format!("{}: {e}", his.display())))?;
    let week_data = weeks
        .iter()
        .map(|p| {
            textio::parse_week_data(&read_file(p)?, &scenario)
                .map_err(|e| Failure::format(format!("{}: {e}", p.display())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let solutions = sols
        .iter()
        .map(|p| {
            textio::parse_solution(&read_file(p)?, &scenario)
                .map_err(|e| Failure::format(format!("{}: {e}", p.display())))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let horizon = evaluate_horizon(&scenario, &history, &week_data, &solutions, &Weights::default())
        .map_err(|e| Failure::format(e.to_string()))?;
    print!(
        "{}",
        render_report(&scenario, &history, &week_data, &solutions, &horizon, verbose)
    );
    Ok(())
}

fn simulate(cfg: SimulationConfig) -> Result<(), Failure> {
    match run_simulation(&cfg) {
        Ok(report) => {
            for stage in &report.stages {
                println!(
                    "week {}: {} in {:.2}s -> {}",
                    stage.week_index,
                    if stage.exit_status.success() {
                        "solved"
                    } else {
                        "failed"
                    },
                    stage.wall_time.as_secs_f64(),
                    stage.solution_path.display()
                );
            }
            println!(
                "horizon {}: total cost {}",
                if report.horizon.hard_feasible {
                    "feasible"
                } else {
                    "HARD INFEASIBLE"
                },
                report.horizon.total.total_cost()
            );
            println!("validator report: {}", report.validator_results_path.display());
            Ok(())
        }
        Err(failure) => {
            let code = match failure.error {
                SimulationError::InputUnparsable { .. }
                | SimulationError::SolutionUnparsable { .. } => EXIT_FORMAT,
                _ => EXIT_INTERNAL,
            };
            Err(Failure {
                code,
                message: failure.to_string(),
            })
        }
    }
}

fn adjudicate(score_paths: Vec<PathBuf>, quota: usize) -> Result<(), Failure> {
    if score_paths.is_empty() {
        return Err(Failure::usage("--scores needs at least one table"));
    }
    let mut labels = Vec::new();
    let mut trials = Vec::new();
    for (i, path) in score_paths.iter().enumerate() {
        let (file_labels, matrix) = parse_score_table(&read_file(path)?)
            .map_err(|e| Failure::format(format!("{}: {e}", path.display())))?;
        if i == 0 {
            labels = file_labels;
        }
        trials.push(matrix);
    }
    let ranking = final_ranking(&trials).map_err(|e| Failure::format(e.to_string()))?;
    if quota > ranking.means.len() {
        return Err(Failure::usage(format!(
            "quota {} exceeds the {} participants",
            quota,
            ranking.means.len()
        )));
    }

    println!("Mean ranks over {} trial(s), {} instance(s):", trials.len(), trials[0].instances());
    let name_width = labels.iter().map(String::len).max().unwrap_or(0);
    for &i in &ranking.order {
        println!("  {:<name_width$}  {}", labels[i], format_mean(ranking.means[i]));
    }

    // Finalist selection runs on the first trial's mean ranks when a
    // single table is given, and on the combined means otherwise; both
    // views coincide because means are exact.
    let finalists = if trials.len() == 1 {
        select_finalists(&mean_ranks(&compute_ranks(&trials[0])), quota)
    } else {
        select_finalists(&ranking.means, quota)
    };
    println!(
        "Finalists (ordered by mean rank, then id): {}",
        finalists
            .iter()
            .map(|&i| labels[i].as_str())
            .collect::<Vec<_>>()
            .join(", ")
    );
    match ranking.winner {
        Some(winner) => println!("Winner: {}", labels[winner]),
        None => println!(
            "Winner: unresolved tie between {}; add one more trial and rerun",
            ranking
                .tied_for_first
                .iter()
                .map(|&i| labels[i].as_str())
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
    Ok(())
}
