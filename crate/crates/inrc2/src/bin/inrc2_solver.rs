//! Standalone week solver speaking the simulator's child contract:
//!
//! ```text
//! inrc2-solver --sce F --his F --week F --sol F
//!              [--cusIn F] [--cusOut F] [--rand SEED]
//!              [--timeout SECS] [--iters N]
//! ```
//!
//! Reads one scenario, one history and one week, writes one solution file,
//! and optionally carries its counter forecast in a custom file. A run is
//! repeatable: the same inputs, seed and iteration cap reproduce the same
//! solution byte for byte. `--iters`/`--timeout` may also come from the
//! `INRC2_SOLVER_ITERS` / `INRC2_SOLVER_TIMEOUT` environment variables so
//! a driving simulator does not need extra flags.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;

use inrc2::simulator::allowed_time;
use inrc2::solver::{solve_week, CustomState, SolverConfig};
use inrc2::textio;

#[derive(Parser)]
#[command(name = "inrc2-solver", about = "Baseline single-week roster solver", version)]
struct Args {
    /// Scenario file.
    #[arg(long)]
    sce: PathBuf,
    /// History file for the week being solved.
    #[arg(long)]
    his: PathBuf,
    /// Week data file.
    #[arg(long)]
    week: PathBuf,
    /// Where the solution is written.
    #[arg(long)]
    sol: PathBuf,
    /// Custom state from the previous stage.
    #[arg(long = "cusIn")]
    cus_in: Option<PathBuf>,
    /// Where to write this stage's custom state.
    #[arg(long = "cusOut")]
    cus_out: Option<PathBuf>,
    /// Random seed; omitted means 0.
    #[arg(long = "rand")]
    rand: Option<u64>,
    /// Wall-clock budget in seconds; default is the size-based allowance.
    #[arg(long)]
    timeout: Option<u64>,
    /// Iteration cap; overrides the clock and makes runs reproducible.
    #[arg(long)]
    iters: Option<u64>,
}

fn env_u64(name: &str) -> Option<u64> {
    std::env::var(name).ok()?.parse().ok()
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(args: Args) -> Result<(), String> {
    let read = |path: &PathBuf| {
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
    };
    let scenario = textio::parse_scenario(&read(&args.sce)?)
        .map_err(|e| format!("{}: {e}", args.sce.display()))?;
    let history = textio::parse_history(&read(&args.his)?, &scenario)
        .map_err(|e| format!("{}: {e}", args.his.display()))?;
    let week = textio::parse_week_data(&read(&args.week)?, &scenario)
        .map_err(|e| format!("{}: {e}", args.week.display()))?;

    let seed = args.rand.unwrap_or(0);
    let mut cfg = SolverConfig::new(seed);
    let timeout = args
        .timeout
        .or_else(|| env_u64("INRC2_SOLVER_TIMEOUT"))
        .unwrap_or_else(|| allowed_time(scenario.nurses.len() as u32));
    cfg.time_budget = Duration::from_secs(timeout);
    cfg.max_iterations = args.iters.or_else(|| env_u64("INRC2_SOLVER_ITERS"));

    // A malformed or missing custom file is not an error; the budget is
    // recomputed from the history instead.
    let custom_in = args
        .cus_in
        .as_ref()
        .and_then(|p| fs::read_to_string(p).ok())
        .and_then(|text| CustomState::parse(&text, &scenario));

    let outcome = solve_week(&scenario, &history, &week, &cfg, custom_in.as_ref());

    fs::write(&args.sol, textio::write_solution(&outcome.solution, &scenario))
        .map_err(|e| format!("cannot write {}: {e}", args.sol.display()))?;
    if let Some(cus_out) = &args.cus_out {
        fs::write(cus_out, outcome.custom_out.to_text(&scenario))
            .map_err(|e| format!("cannot write {}: {e}", cus_out.display()))?;
    }

    println!(
        "week {} of {}: {} assignments, {}, seed {}, {}",
        history.week_index,
        scenario.id,
        outcome.solution.assignments.len(),
        if outcome.hard_feasible {
            "hard feasible".to_string()
        } else {
            "HARD INFEASIBLE (best effort)".to_string()
        },
        seed,
        match cfg.max_iterations {
            Some(iters) => format!("{iters} iterations"),
            None => format!("{timeout}s budget"),
        }
    );
    Ok(())
}
