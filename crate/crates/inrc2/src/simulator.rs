//! Multi-stage orchestrator.
//!
//! Drives an external solver executable once per week: builds the child
//! command line, runs it from the configured directory, captures its
//! console output, advances the history from the produced solution, and
//! finally validates the whole horizon. All outputs land in the output
//! directory under fixed names: `sol-week<k>.txt`, `history-week<k>.txt`
//! (0 = the initial history, k+1 = after week k), `custom-week<k>`,
//! `result-week<k>.txt`, and `Validator-results.txt`.

use std::fmt;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitStatus, Stdio};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::evaluation::{advance_history, evaluate_horizon, EvalError, HorizonReport};
use crate::model::{History, Scenario, Solution, WeekData, Weights};
use crate::report::render_report;
use crate::textio::{
    self, parse_history, parse_scenario, parse_solution, parse_week_data, write_history,
};

/// Per-stage wall-clock limit for the child solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeoutPolicy {
    /// No limit; the solver manages its own budget.
    None,
    /// The size-based benchmark allowance from [`allowed_time`].
    BenchmarkFormula,
    /// A fixed number of seconds per stage.
    Fixed(u64),
}

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub scenario_path: PathBuf,
    pub initial_history_path: PathBuf,
    /// One week data file per horizon week, in order; repetition allowed.
    pub week_paths: Vec<PathBuf>,
    pub solver_path: PathBuf,
    /// Directory the solver is started from, when given.
    pub run_dir: Option<PathBuf>,
    pub out_dir: PathBuf,
    /// Pass custom files between consecutive stages.
    pub use_custom: bool,
    /// Empty, a single seed reused for every stage, or one per stage.
    pub seeds: Vec<u64>,
    pub timeout_policy: TimeoutPolicy,
}

/// What one solver call produced.
#[derive(Debug, Clone)]
pub struct StageOutcome {
    pub week_index: u32,
    pub exit_status: ExitStatus,
    pub wall_time: Duration,
    pub solution_path: PathBuf,
    /// History written after this stage.
    pub history_path: PathBuf,
    pub log_path: PathBuf,
    pub custom_path: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct SimulationReport {
    pub stages: Vec<StageOutcome>,
    pub horizon: HorizonReport,
    pub validator_results_path: PathBuf,
}

#[derive(Debug, Error)]
pub enum SimulationError {
    #[error("{what}: {source}")]
    Io {
        what: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    InputUnparsable {
        path: PathBuf,
        #[source]
        source: textio::TextError,
    },
    #[error("{0}")]
    ScenarioMismatch(String),
    #[error("solver exited with {status} in week {week}")]
    SolverCrashed { week: u32, status: ExitStatus },
    #[error("solver timed out after {seconds}s in week {week}")]
    Timeout { week: u32, seconds: u64 },
    #[error("solution for week {week} is unusable: {source}")]
    SolutionUnparsable {
        week: u32,
        #[source]
        source: textio::TextError,
    },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A failed simulation still reports the stages that completed.
#[derive(Debug, Error)]
pub struct SimulationFailure {
    pub completed: Vec<StageOutcome>,
    #[source]
    pub error: SimulationError,
}

impl fmt::Display for SimulationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "simulation stopped after {} completed stage(s): {}",
            self.completed.len(),
            self.error
        )
    }
}

/// Per-stage time allowance as a function of scenario size, floored at 10
/// seconds because the raw formula goes negative below 20 nurses.
pub fn allowed_time(n_nurses: u32) -> u64 {
    let raw = 10i64 + 30 * (n_nurses as i64 - 20);
    raw.max(10) as u64
}

fn absolute(path: &Path) -> PathBuf {
    std::path::absolute(path).unwrap_or_else(|_| path.to_path_buf())
}

/// Fixed file names of the output set, relative to the output directory.
pub fn solution_file(out_dir: &Path, week: u32) -> PathBuf {
    out_dir.join(format!("sol-week{week}.txt"))
}

pub fn history_file(out_dir: &Path, week: u32) -> PathBuf {
    out_dir.join(format!("history-week{week}.txt"))
}

pub fn custom_file(out_dir: &Path, week: u32) -> PathBuf {
    out_dir.join(format!("custom-week{week}"))
}

pub fn log_file(out_dir: &Path, week: u32) -> PathBuf {
    out_dir.join(format!("result-week{week}.txt"))
}

/// Builds the full child argument vector (program first) for one stage.
///
/// All paths are made absolute against the invoking working directory, so
/// the child may be started from a different run directory. The history
/// for week 0 is the configured initial file; later weeks read the history
/// the simulator wrote after the previous stage.
pub fn build_solver_command(
    cfg: &SimulationConfig,
    week_index: u32,
    history_path: &Path,
    custom_in: Option<&Path>,
) -> Vec<String> {
    let out_dir = absolute(&cfg.out_dir);
    let mut argv = vec![
        cfg.solver_path.to_string_lossy().into_owned(),
        "--sce".into(),
        absolute(&cfg.scenario_path).to_string_lossy().into_owned(),
        "--his".into(),
        absolute(history_path).to_string_lossy().into_owned(),
        "--week".into(),
        absolute(&cfg.week_paths[week_index as usize])
            .to_string_lossy()
            .into_owned(),
        "--sol".into(),
        solution_file(&out_dir, week_index).to_string_lossy().into_owned(),
    ];
    if let Some(custom) = custom_in {
        argv.push("--cusIn".into());
        argv.push(absolute(custom).to_string_lossy().into_owned());
    }
    if cfg.use_custom {
        argv.push("--cusOut".into());
        argv.push(custom_file(&out_dir, week_index).to_string_lossy().into_owned());
    }
    if !cfg.seeds.is_empty() {
        let seed = if cfg.seeds.len() == 1 {
            cfg.seeds[0]
        } else {
            cfg.seeds[week_index as usize]
        };
        argv.push("--rand".into());
        argv.push(seed.to_string());
    }
    argv
}

fn io_err(what: impl Into<String>) -> impl FnOnce(std::io::Error) -> SimulationError {
    let what = what.into();
    move |source| SimulationError::Io { what, source }
}

fn read_input<T>(
    path: &Path,
    parse: impl FnOnce(&str) -> Result<T, textio::TextError>,
) -> Result<T, SimulationError> {
    let text = fs::read_to_string(path).map_err(io_err(format!("read {}", path.display())))?;
    parse(&text).map_err(|source| SimulationError::InputUnparsable {
        path: path.to_path_buf(),
        source,
    })
}

struct ChildResult {
    status: ExitStatus,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
    wall_time: Duration,
}

fn run_child(
    argv: &[String],
    run_dir: Option<&Path>,
    limit: Option<Duration>,
    week: u32,
) -> Result<ChildResult, SimulationError> {
    let mut command = Command::new(&argv[0]);
    command
        .args(&argv[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    if let Some(dir) = run_dir {
        command.current_dir(dir);
    }
    let start = Instant::now();
    let mut child = command
        .spawn()
        .map_err(io_err(format!("start solver {}", argv[0])))?;

    // Drain both pipes on worker threads so a chatty solver cannot stall.
    let mut stdout_pipe = child.stdout.take().expect("stdout piped");
    let mut stderr_pipe = child.stderr.take().expect("stderr piped");
    let stdout_thread = std::thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = stdout_pipe.read_to_end(&mut buf);
        buf
    });
    let stderr_thread = std::thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = stderr_pipe.read_to_end(&mut buf);
        buf
    });

    let status = loop {
        if let Some(status) = child
            .try_wait()
            .map_err(io_err("poll solver process"))?
        {
            break status;
        }
        if let Some(limit) = limit {
            if start.elapsed() > limit {
                let _ = child.kill();
                let _ = child.wait();
                return Err(SimulationError::Timeout {
                    week,
                    seconds: limit.as_secs(),
                });
            }
        }
        std::thread::sleep(Duration::from_millis(5));
    };
    let wall_time = start.elapsed();
    let stdout = stdout_thread.join().unwrap_or_default();
    let stderr = stderr_thread.join().unwrap_or_default();
    Ok(ChildResult {
        status,
        stdout,
        stderr,
        wall_time,
    })
}

/// Runs the whole multi-stage process and validates the result.
pub fn run_simulation(cfg: &SimulationConfig) -> Result<SimulationReport, Box<SimulationFailure>> {
    let mut completed = Vec::new();
    match simulate_inner(cfg, &mut completed) {
        Ok((horizon, validator_results_path)) => Ok(SimulationReport {
            stages: completed,
            horizon,
            validator_results_path,
        }),
        Err(error) => Err(Box::new(SimulationFailure { completed, error })),
    }
}

fn simulate_inner(
    cfg: &SimulationConfig,
    completed: &mut Vec<StageOutcome>,
) -> Result<(HorizonReport, PathBuf), SimulationError> {
    let scenario: Scenario = read_input(&cfg.scenario_path, parse_scenario)?;
    let initial: History =
        read_input(&cfg.initial_history_path, |t| parse_history(t, &scenario))?;
    if initial.week_index != 0 {
        return Err(SimulationError::ScenarioMismatch(format!(
            "initial history is for week {}, expected week 0",
            initial.week_index
        )));
    }
    if cfg.week_paths.len() != scenario.num_weeks as usize {
        return Err(SimulationError::ScenarioMismatch(format!(
            "{} week data files given, the scenario spans {} weeks",
            cfg.week_paths.len(),
            scenario.num_weeks
        )));
    }
    if !matches!(cfg.seeds.len(), 0 | 1) && cfg.seeds.len() != cfg.week_paths.len() {
        return Err(SimulationError::ScenarioMismatch(format!(
            "{} seeds given, expected none, one, or {}",
            cfg.seeds.len(),
            cfg.week_paths.len()
        )));
    }
    let weeks: Vec<WeekData> = cfg
        .week_paths
        .iter()
        .map(|p| read_input(p, |t| parse_week_data(t, &scenario)))
        .collect::<Result<_, _>>()?;

    fs::create_dir_all(&cfg.out_dir)
        .map_err(io_err(format!("create {}", cfg.out_dir.display())))?;
    let out_dir = absolute(&cfg.out_dir);

    // The initial history becomes history-week0; stage k writes k+1.
    fs::copy(&cfg.initial_history_path, history_file(&out_dir, 0))
        .map_err(io_err("copy initial history"))?;

    let limit = match cfg.timeout_policy {
        TimeoutPolicy::None => None,
        TimeoutPolicy::BenchmarkFormula => Some(Duration::from_secs(allowed_time(
            scenario.nurses.len() as u32,
        ))),
        TimeoutPolicy::Fixed(seconds) => Some(Duration::from_secs(seconds)),
    };

    let mut history = initial.clone();
    let mut solutions: Vec<Solution> = Vec::with_capacity(weeks.len());
    for week_index in 0..weeks.len() as u32 {
        let history_path = if week_index == 0 {
            cfg.initial_history_path.clone()
        } else {
            history_file(&out_dir, week_index)
        };
        let custom_in = (cfg.use_custom && week_index > 0)
            .then(|| custom_file(&out_dir, week_index - 1));
        let argv = build_solver_command(cfg, week_index, &history_path, custom_in.as_deref());
        let child = run_child(&argv, cfg.run_dir.as_deref(), limit, week_index)?;

        let log_path = log_file(&out_dir, week_index);
        let mut log = child.stdout.clone();
        log.extend_from_slice(b"--- stderr ---\n");
        log.extend_from_slice(&child.stderr);
        fs::write(&log_path, log).map_err(io_err(format!("write {}", log_path.display())))?;

        if !child.status.success() {
            return Err(SimulationError::SolverCrashed {
                week: week_index,
                status: child.status,
            });
        }

        let solution_path = solution_file(&out_dir, week_index);
        let solution = read_input(&solution_path, |t| parse_solution(t, &scenario)).map_err(
            |e| match e {
                SimulationError::InputUnparsable { source, .. } => {
                    SimulationError::SolutionUnparsable {
                        week: week_index,
                        source,
                    }
                }
                other => other,
            },
        )?;

        history = advance_history(&history, &solution, &scenario)?;
        let history_path = history_file(&out_dir, week_index + 1);
        fs::write(&history_path, write_history(&history, &scenario))
            .map_err(io_err(format!("write {}", history_path.display())))?;

        let custom_path = cfg
            .use_custom
            .then(|| custom_file(&out_dir, week_index))
            .filter(|p| p.exists());
        completed.push(StageOutcome {
            week_index,
            exit_status: child.status,
            wall_time: child.wall_time,
            solution_path,
            history_path,
            log_path,
            custom_path,
        });
        solutions.push(solution);
    }

    let weights = Weights::default();
    let horizon = evaluate_horizon(&scenario, &initial, &weeks, &solutions, &weights)?;
    let text = render_report(&scenario, &initial, &weeks, &solutions, &horizon, false);
    let results_path = out_dir.join("Validator-results.txt");
    fs::write(&results_path, text)
        .map_err(io_err(format!("write {}", results_path.display())))?;
    Ok((horizon, results_path))
}
