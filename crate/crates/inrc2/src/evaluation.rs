//! The constraint engine.
//!
//! Hard feasibility (H1 single assignment, H2 minimum coverage, H3 legal
//! successions, H4 skill eligibility), the weekly soft costs S1..S5, the
//! end-of-horizon counter costs S6/S7, and the history transition that
//! chains weeks together.
//!
//! Consecutive-assignment constraints (S2/S3) are scored per *series*: a
//! maximal run of days sharing a property (working, off, or one specific
//! shift type). At the start of a week the series may continue a run
//! carried in from the history (the carry value `c`); only the extra
//! violation not already charged to the previous week is counted. At the
//! end of a week an ongoing run is charged on the maximum side only — its
//! minimum side is deferred to the next week, where the carry picks it up.

use thiserror::Error;

use crate::model::{
    CostReport, Day, HardCounts, History, NurseHistory, Scenario, ShiftId, ShiftRequest,
    SkillId, SoftCosts, Solution, WeekData, Weights,
};

/// One day of a nurse's week: off, or a shift worked under one skill.
pub type DayAssignment = Option<(ShiftId, SkillId)>;

/// Dense per-day view of one nurse's week, Monday through Sunday.
pub type NurseWeekPattern = [DayAssignment; 7];

/// What counts as membership of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Work,
    Off,
    SameShift(ShiftId),
}

/// A consecutive-assignment constraint instance: the bounds plus the
/// carry-in `c` describing how long the run at the week border already is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesSpec {
    pub kind: SeriesKind,
    pub min_len: u32,
    pub max_len: u32,
    pub carry_in: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("nurse {0} has multiple assignments on {1}")]
    InfeasiblePattern(String, Day),
    #[error("history is for week {actual}, expected week {expected}")]
    WrongWeek { expected: u32, actual: u32 },
    #[error("solution is for week {solution}, history for week {history}")]
    WeekMismatch { history: u32, solution: u32 },
    #[error("horizon of {expected} weeks given {weeks} week files and {solutions} solutions")]
    LengthMismatch {
        expected: u32,
        weeks: usize,
        solutions: usize,
    },
}

/// Scores one series constraint over one week.
///
/// `flags[d]` must be true iff day `d` belongs to the series kind. Runs are
/// maximal blocks of true flags; the run touching Monday is extended by the
/// carry, and the portion of the violation attributable to the carry alone
/// is not charged again. A run still open on Sunday is charged on the
/// maximum side only. Returns unweighted violation units.
pub fn score_series(spec: &SeriesSpec, flags: &[bool; 7]) -> u32 {
    let min = spec.min_len as i64;
    let max = spec.max_len as i64;
    let carry = spec.carry_in as i64;
    let mut units = 0i64;

    // A nonzero carry with Monday off means the carried run closes at the
    // border: its minimum side becomes due now (the maximum side was
    // already charged while the run was growing).
    if carry > 0 && !flags[0] {
        units += (min - carry).max(0);
    }

    let mut d = 0;
    while d < 7 {
        if !flags[d] {
            d += 1;
            continue;
        }
        let start = d;
        while d < 7 && flags[d] {
            d += 1;
        }
        let len = (d - start) as i64;
        let carried = start == 0 && carry > 0;
        let total = if carried { len + carry } else { len };
        let mut over = (total - max).max(0);
        if carried {
            over -= (carry - max).max(0);
        }
        units += over;
        if d < 7 {
            // Run closed inside the week; an ongoing run defers its
            // minimum side to the next stage.
            units += (min - total).max(0);
        }
    }
    units as u32
}

/// Builds the dense week view; fails if any nurse has two assignments on
/// the same day (H1).
pub fn build_patterns(
    scenario: &Scenario,
    solution: &Solution,
) -> Result<Vec<NurseWeekPattern>, EvalError> {
    let mut patterns = vec![[None; 7]; scenario.nurses.len()];
    for a in &solution.assignments {
        let cell = &mut patterns[a.nurse.0][a.day.index()];
        if cell.is_some() && *cell != Some((a.shift, a.skill)) {
            return Err(EvalError::InfeasiblePattern(
                scenario.nurse_name(a.nurse).to_string(),
                a.day,
            ));
        }
        *cell = Some((a.shift, a.skill));
    }
    Ok(patterns)
}

/// Like [`build_patterns`] but tolerates H1 violations by keeping the
/// smallest (shift, skill) pair per day, so the result does not depend on
/// assignment order. This is the view used for reporting and replay.
pub fn canonical_patterns(scenario: &Scenario, solution: &Solution) -> Vec<NurseWeekPattern> {
    let mut patterns: Vec<NurseWeekPattern> = vec![[None; 7]; scenario.nurses.len()];
    for a in &solution.assignments {
        let cell = &mut patterns[a.nurse.0][a.day.index()];
        let candidate = (a.shift, a.skill);
        match cell {
            Some(existing) if *existing <= candidate => {}
            _ => *cell = Some(candidate),
        }
    }
    patterns
}

/// Counts assignment records per (shift, skill, day) cell.
fn coverage_counts(scenario: &Scenario, solution: &Solution) -> Vec<u32> {
    let n_skills = scenario.skills.len();
    let mut counts = vec![0u32; scenario.shift_types.len() * n_skills * 7];
    for a in &solution.assignments {
        counts[(a.shift.0 * n_skills + a.skill.0) * 7 + a.day.index()] += 1;
    }
    counts
}

/// Checks the four hard constraints. Never fails: the counts are the
/// diagnosis, and a solution is feasible iff all four are zero.
pub fn check_hard(
    scenario: &Scenario,
    week: &WeekData,
    history: &History,
    solution: &Solution,
) -> HardCounts {
    let mut hard = HardCounts::default();
    let n_skills = scenario.skills.len();

    // H1 and H4 straight off the assignment list.
    let mut per_day_count = vec![[0u32; 7]; scenario.nurses.len()];
    for a in &solution.assignments {
        per_day_count[a.nurse.0][a.day.index()] += 1;
        if !scenario.nurses[a.nurse.0].has_skill(a.skill) {
            hard.missing_skill += 1;
        }
    }
    for counts in &per_day_count {
        hard.single_assignment += counts.iter().filter(|&&c| c > 1).count() as u32;
    }

    // H2: missing nurses below the minimum, summed over all cells.
    let counts = coverage_counts(scenario, solution);
    for req in &week.requirements {
        for (d, cov) in req.per_day.iter().enumerate() {
            let assigned = counts[(req.shift.0 * n_skills + req.skill.0) * 7 + d];
            hard.understaffing += cov.minimum.saturating_sub(assigned);
        }
    }

    // H3: adjacent day pairs with a forbidden succession. The border pair
    // compares the history's last shift with Monday. When H1 is violated a
    // pair counts if any combination of its shifts is forbidden.
    let mut day_shifts: Vec<[Vec<ShiftId>; 7]> =
        vec![Default::default(); scenario.nurses.len()];
    for a in &solution.assignments {
        day_shifts[a.nurse.0][a.day.index()].push(a.shift);
    }
    for nurse in scenario.nurse_ids() {
        let days = &day_shifts[nurse.0];
        if let Some(last) = history.of(nurse).last_shift {
            if days[0]
                .iter()
                .any(|&s| scenario.successions.is_forbidden(last, s))
            {
                hard.succession += 1;
            }
        }
        for d in 0..6 {
            let violated = days[d].iter().any(|&p| {
                days[d + 1]
                    .iter()
                    .any(|&s| scenario.successions.is_forbidden(p, s))
            });
            if violated {
                hard.succession += 1;
            }
        }
    }

    hard
}

/// Unweighted series violation units for one nurse over one week.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SeriesUnits {
    pub same_shift: u32,
    pub work: u32,
    pub off: u32,
}

/// Work/off/same-shift violation units for one nurse over one week.
pub fn nurse_series_units(
    scenario: &Scenario,
    history: &NurseHistory,
    pattern: &NurseWeekPattern,
) -> SeriesUnits {
    let contract = scenario.contract_of(history.nurse);
    let mut work_flags = [false; 7];
    let mut off_flags = [false; 7];
    for d in 0..7 {
        work_flags[d] = pattern[d].is_some();
        off_flags[d] = pattern[d].is_none();
    }

    let work = score_series(
        &SeriesSpec {
            kind: SeriesKind::Work,
            min_len: contract.consecutive_work.min,
            max_len: contract.consecutive_work.max,
            carry_in: history.consec_work,
        },
        &work_flags,
    );
    let off = score_series(
        &SeriesSpec {
            kind: SeriesKind::Off,
            min_len: contract.consecutive_off.min,
            max_len: contract.consecutive_off.max,
            carry_in: history.consec_off,
        },
        &off_flags,
    );

    let mut same_shift = 0;
    for shift in scenario.shift_ids() {
        let mut flags = [false; 7];
        for d in 0..7 {
            flags[d] = matches!(pattern[d], Some((s, _)) if s == shift);
        }
        // The history's same-type counter belongs to the last worked shift
        // only; every other shift type starts fresh at the border.
        let carry = if history.last_shift == Some(shift) {
            history.consec_same_shift
        } else {
            0
        };
        if carry == 0 && flags.iter().all(|&f| !f) {
            continue;
        }
        let bounds = scenario.shift_types[shift.0].consecutive;
        same_shift += score_series(
            &SeriesSpec {
                kind: SeriesKind::SameShift(shift),
                min_len: bounds.min,
                max_len: bounds.max,
                carry_in: carry,
            },
            &flags,
        );
    }

    SeriesUnits {
        same_shift,
        work,
        off,
    }
}

fn weekly_soft(
    scenario: &Scenario,
    week: &WeekData,
    history: &History,
    patterns: &[NurseWeekPattern],
    counts: &[u32],
    weights: &Weights,
) -> SoftCosts {
    let n_skills = scenario.skills.len();
    let mut soft = SoftCosts::default();

    // S1: staff missing below the optimal level; surplus is free.
    let mut s1_units = 0u64;
    for req in &week.requirements {
        for (d, cov) in req.per_day.iter().enumerate() {
            let assigned = counts[(req.shift.0 * n_skills + req.skill.0) * 7 + d];
            s1_units += cov.optimal.saturating_sub(assigned) as u64;
        }
    }
    soft.s1_optimal_coverage = s1_units * weights.s1_optimal_coverage as u64;

    // S2/S3 per nurse.
    for nurse in scenario.nurse_ids() {
        let units = nurse_series_units(scenario, history.of(nurse), &patterns[nurse.0]);
        soft.s2_consecutive_shift += units.same_shift as u64 * weights.s2_consecutive_shift as u64;
        soft.s2_consecutive_work += units.work as u64 * weights.s2_consecutive_work as u64;
        soft.s3_consecutive_off += units.off as u64 * weights.s3_consecutive_off as u64;
    }

    // S4: violated shift-off requests (requests are already deduplicated).
    let mut s4_units = 0u64;
    for r in &week.requests {
        let cell = patterns[r.nurse.0][r.day.index()];
        let violated = match r.shift {
            ShiftRequest::Any => cell.is_some(),
            ShiftRequest::Shift(s) => matches!(cell, Some((worked, _)) if worked == s),
        };
        if violated {
            s4_units += 1;
        }
    }
    soft.s4_preference = s4_units * weights.s4_preference as u64;

    // S5: complete-weekend nurses working exactly one weekend day.
    let mut s5_units = 0u64;
    for nurse in scenario.nurse_ids() {
        if !scenario.contract_of(nurse).complete_weekend {
            continue;
        }
        let sat = patterns[nurse.0][Day::Sat.index()].is_some();
        let sun = patterns[nurse.0][Day::Sun.index()].is_some();
        if sat != sun {
            s5_units += 1;
        }
    }
    soft.s5_complete_weekend = s5_units * weights.s5_complete_weekend as u64;

    soft
}

/// Evaluates the weekly soft constraints S1..S5. Requires an H1-feasible
/// solution; the horizon evaluator has its own tolerant path.
pub fn eval_week(
    scenario: &Scenario,
    week: &WeekData,
    history: &History,
    solution: &Solution,
    weights: &Weights,
) -> Result<CostReport, EvalError> {
    let patterns = build_patterns(scenario, solution)?;
    let counts = coverage_counts(scenario, solution);
    Ok(CostReport {
        hard: HardCounts::default(),
        soft: weekly_soft(scenario, week, history, &patterns, &counts, weights),
    })
}

/// Evaluates the end-of-horizon counter constraints S6 (total assignments
/// inside the contract interval, charged in either direction) and S7
/// (working weekends above the maximum).
pub fn eval_counters(
    scenario: &Scenario,
    final_history: &History,
    weights: &Weights,
) -> Result<CostReport, EvalError> {
    if final_history.week_index != scenario.num_weeks {
        return Err(EvalError::WrongWeek {
            expected: scenario.num_weeks,
            actual: final_history.week_index,
        });
    }
    let mut soft = SoftCosts::default();
    for nurse in scenario.nurse_ids() {
        let contract = scenario.contract_of(nurse);
        let entry = final_history.of(nurse);
        soft.s6_total_assignments += contract
            .total_assignments
            .distance(entry.total_assignments) as u64
            * weights.s6_total_assignments as u64;
        soft.s7_total_weekends += entry
            .total_weekends
            .saturating_sub(contract.max_working_weekends) as u64
            * weights.s7_total_weekends as u64;
    }
    Ok(CostReport {
        hard: HardCounts::default(),
        soft,
    })
}

/// Length of the trailing run of days satisfying `pred`, ending Sunday.
fn trailing_run(pattern: &NurseWeekPattern, pred: impl Fn(DayAssignment) -> bool) -> u32 {
    let mut len = 0;
    for d in (0..7).rev() {
        if pred(pattern[d]) {
            len += 1;
        } else {
            break;
        }
    }
    len
}

fn advance_entry(
    scenario: &Scenario,
    prev: &NurseHistory,
    pattern: &NurseWeekPattern,
) -> NurseHistory {
    let _ = scenario;
    let worked_days = pattern.iter().filter(|c| c.is_some()).count() as u32;
    let weekend_worked = pattern[Day::Sat.index()].is_some() || pattern[Day::Sun.index()].is_some();

    let mut next = NurseHistory {
        nurse: prev.nurse,
        total_assignments: prev.total_assignments + worked_days,
        total_weekends: prev.total_weekends + weekend_worked as u32,
        last_shift: None,
        consec_same_shift: 0,
        consec_work: 0,
        consec_off: 0,
    };

    match pattern[Day::Sun.index()] {
        None => {
            let run = trailing_run(pattern, |c| c.is_none());
            // A run covering the whole week continues the border run.
            next.consec_off = run + if run == 7 { prev.consec_off } else { 0 };
        }
        Some((shift, _)) => {
            next.last_shift = Some(shift);
            let work_run = trailing_run(pattern, |c| c.is_some());
            next.consec_work = work_run + if work_run == 7 { prev.consec_work } else { 0 };
            let same_run = trailing_run(pattern, |c| matches!(c, Some((s, _)) if s == shift));
            let continues = same_run == 7 && prev.last_shift == Some(shift);
            next.consec_same_shift =
                same_run + if continues { prev.consec_same_shift } else { 0 };
        }
    }
    next
}

/// Computes the history after a week from the previous history and the
/// week's solution. `solution.week_index` must equal the history's.
pub fn advance_history(
    prev: &History,
    solution: &Solution,
    scenario: &Scenario,
) -> Result<History, EvalError> {
    if solution.week_index != prev.week_index {
        return Err(EvalError::WeekMismatch {
            history: prev.week_index,
            solution: solution.week_index,
        });
    }
    if prev.week_index >= scenario.num_weeks {
        return Err(EvalError::WrongWeek {
            expected: scenario.num_weeks - 1,
            actual: prev.week_index,
        });
    }
    let patterns = canonical_patterns(scenario, solution);
    let entries = scenario
        .nurse_ids()
        .map(|n| advance_entry(scenario, prev.of(n), &patterns[n.0]))
        .collect();
    Ok(History {
        week_index: prev.week_index + 1,
        scenario_id: prev.scenario_id.clone(),
        entries,
    })
}

/// Full evaluation of a planning horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HorizonReport {
    /// Aggregated hard counts and soft costs, counters included.
    pub total: CostReport,
    /// Per-week hard counts and S1..S5 costs.
    pub per_week: Vec<CostReport>,
    /// S6/S7 costs from the final history.
    pub counters: CostReport,
    pub final_history: History,
    pub hard_feasible: bool,
}

/// Replays the horizon: evaluates each week against the rolling history,
/// advances the history, and adds the counter costs of the final history.
/// Hard-infeasible solutions do not abort the replay; the report carries a
/// feasibility flag instead.
pub fn evaluate_horizon(
    scenario: &Scenario,
    initial: &History,
    weeks: &[WeekData],
    solutions: &[Solution],
    weights: &Weights,
) -> Result<HorizonReport, EvalError> {
    if weeks.len() != scenario.num_weeks as usize || solutions.len() != weeks.len() {
        return Err(EvalError::LengthMismatch {
            expected: scenario.num_weeks,
            weeks: weeks.len(),
            solutions: solutions.len(),
        });
    }
    if initial.week_index != 0 {
        return Err(EvalError::WrongWeek {
            expected: 0,
            actual: initial.week_index,
        });
    }

    let mut history = initial.clone();
    let mut per_week = Vec::with_capacity(weeks.len());
    let mut total = CostReport::default();
    for (week, solution) in weeks.iter().zip(solutions) {
        let hard = check_hard(scenario, week, &history, solution);
        let patterns = canonical_patterns(scenario, solution);
        let counts = coverage_counts(scenario, solution);
        let soft = weekly_soft(scenario, week, &history, &patterns, &counts, weights);
        let report = CostReport { hard, soft };
        total.accumulate(&report);
        per_week.push(report);
        history = advance_history(&history, solution, scenario)?;
    }

    let counters = eval_counters(scenario, &history, weights)?;
    total.accumulate(&counters);
    let hard_feasible = total.hard.is_feasible();
    Ok(HorizonReport {
        total,
        per_week,
        counters,
        final_history: history,
        hard_feasible,
    })
}
