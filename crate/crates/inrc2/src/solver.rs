//! Baseline single-week solver.
//!
//! The pipeline is: derive per-nurse counter budgets for the horizon
//! constraints, build a minimum-coverage roster greedily, then improve it
//! with simulated annealing over insert / delete / change-shift /
//! change-skill / swap moves. H1, H3 and H4 are enforced structurally in
//! move generation; H2 is traversable and carries a large penalty so the
//! search can repair understaffing through infeasible space.
//!
//! The search is single threaded. With an iteration cap it is fully
//! deterministic for a given seed; in wall-clock mode determinism is
//! best effort only.

use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::evaluation::{check_hard, score_series, SeriesKind, SeriesSpec};
use crate::model::{
    Assignment, Day, History, NurseId, Scenario, ShiftId, ShiftRequest, SkillId, Solution,
    WeekData, Weights,
};

/// Penalty per hard violation unit while searching (H2 deficits, plus any
/// H3/H4 units inherited from an external starting roster).
const HARD_PENALTY: f64 = 1.0e4;

const TEMPERATURE_FLOOR: f64 = 1.0e-4;

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Wall-clock budget for the annealing loop.
    pub time_budget: Duration,
    /// When set, run exactly this many iterations instead of the clock;
    /// output is then a pure function of (instance, seed, cap).
    pub max_iterations: Option<u64>,
    pub seed: u64,
    pub weights: Weights,
    /// Effective cost per unit of deviation from the counter budgets
    /// (stand-ins for S6 and S7 in non-final weeks).
    pub surrogate_weights: (f64, f64),
}

impl SolverConfig {
    pub fn new(seed: u64) -> SolverConfig {
        let weights = Weights::default();
        SolverConfig {
            time_budget: Duration::from_secs(10),
            max_iterations: None,
            seed,
            weights,
            surrogate_weights: (
                weights.s6_total_assignments as f64,
                weights.s7_total_weekends as f64,
            ),
        }
    }
}

/// Solver-owned forecast passed between consecutive stages: how many days
/// and weekends each nurse should spend this week so that the horizon
/// counters land inside their bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CustomState {
    pub week_index: u32,
    /// Per nurse, in days; clamped to [0, 7].
    pub assignment_target: Vec<Rational64>,
    /// Per nurse, in weekends; never negative.
    pub weekend_budget: Vec<Rational64>,
}

impl CustomState {
    pub fn to_text(&self, scenario: &Scenario) -> String {
        let mut out = format!("CUSTOM\n{}\n", self.week_index);
        for nurse in scenario.nurse_ids() {
            out.push_str(&format!(
                "{} {}/{} {}/{}\n",
                scenario.nurse_name(nurse),
                self.assignment_target[nurse.0].numer(),
                self.assignment_target[nurse.0].denom(),
                self.weekend_budget[nurse.0].numer(),
                self.weekend_budget[nurse.0].denom(),
            ));
        }
        out
    }

    /// Lenient parse: anything malformed yields `None` and the caller
    /// falls back to recomputing the budget from the history.
    pub fn parse(text: &str, scenario: &Scenario) -> Option<CustomState> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        if lines.next()? != "CUSTOM" {
            return None;
        }
        let week_index = lines.next()?.parse().ok()?;
        let mut assignment_target = vec![Rational64::from_integer(0); scenario.nurses.len()];
        let mut weekend_budget = assignment_target.clone();
        let mut seen = 0;
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                return None;
            }
            let nurse = scenario.nurse_id(toks[0])?;
            assignment_target[nurse.0] = parse_ratio(toks[1])?;
            weekend_budget[nurse.0] = parse_ratio(toks[2])?;
            seen += 1;
        }
        (seen == scenario.nurses.len()).then_some(CustomState {
            week_index,
            assignment_target,
            weekend_budget,
        })
    }
}

fn parse_ratio(token: &str) -> Option<Rational64> {
    let (n, d) = token.split_once('/')?;
    let d: i64 = d.parse().ok()?;
    if d == 0 {
        return None;
    }
    Some(Rational64::new(n.parse().ok()?, d))
}

/// Spreads each nurse's remaining counter slack evenly over the remaining
/// weeks. The assignment target steers towards the midpoint of the total
/// assignment interval — the counter is charged in either direction, so
/// the midpoint hedges both sides.
pub fn counter_budget(scenario: &Scenario, history: &History, week_index: u32) -> CustomState {
    let remaining = scenario.num_weeks.saturating_sub(week_index).max(1) as i64;
    let mut assignment_target = Vec::with_capacity(scenario.nurses.len());
    let mut weekend_budget = Vec::with_capacity(scenario.nurses.len());
    for nurse in scenario.nurse_ids() {
        let contract = scenario.contract_of(nurse);
        let entry = history.of(nurse);
        let midpoint = Rational64::new(
            contract.total_assignments.min as i64 + contract.total_assignments.max as i64,
            2,
        );
        let quota = (midpoint - Rational64::from_integer(entry.total_assignments as i64))
            / Rational64::from_integer(remaining);
        assignment_target.push(clamp_ratio(quota, 0, 7));
        let slack = contract
            .max_working_weekends
            .saturating_sub(entry.total_weekends) as i64;
        weekend_budget.push(Rational64::new(slack, remaining));
    }
    CustomState {
        week_index,
        assignment_target,
        weekend_budget,
    }
}

fn clamp_ratio(value: Rational64, low: i64, high: i64) -> Rational64 {
    value
        .max(Rational64::from_integer(low))
        .min(Rational64::from_integer(high))
}

#[derive(Debug, Error)]
#[error("greedy construction could not reach minimum coverage")]
pub struct ConstructionStuck {
    /// Best roster reached; the caller continues with local search.
    pub partial: Solution,
}

type Cell = Option<(ShiftId, SkillId)>;

fn succession_ok(
    scenario: &Scenario,
    last_shift: Option<ShiftId>,
    pattern: &[Cell; 7],
    day: usize,
    shift: ShiftId,
) -> bool {
    let prev = if day == 0 {
        last_shift
    } else {
        pattern[day - 1].map(|(s, _)| s)
    };
    if let Some(p) = prev {
        if scenario.successions.is_forbidden(p, shift) {
            return false;
        }
    }
    if day < 6 {
        if let Some((next, _)) = pattern[day + 1] {
            if scenario.successions.is_forbidden(shift, next) {
                return false;
            }
        }
    }
    true
}

fn roster_to_solution(scenario: &Scenario, week_index: u32, roster: &[[Cell; 7]]) -> Solution {
    let mut assignments = Vec::new();
    for nurse in scenario.nurse_ids() {
        for (d, cell) in roster[nurse.0].iter().enumerate() {
            if let Some((shift, skill)) = cell {
                assignments.push(Assignment {
                    nurse,
                    day: Day::from_index(d).unwrap(),
                    shift: *shift,
                    skill: *skill,
                });
            }
        }
    }
    Solution {
        week_index,
        scenario_id: scenario.id.clone(),
        assignments,
    }
}

fn solution_to_roster(scenario: &Scenario, solution: &Solution) -> Vec<[Cell; 7]> {
    let mut roster = vec![[None; 7]; scenario.nurses.len()];
    for a in &solution.assignments {
        let cell = &mut roster[a.nurse.0][a.day.index()];
        let candidate = (a.shift, a.skill);
        match cell {
            Some(existing) if *existing <= candidate => {}
            _ => *cell = Some(candidate),
        }
    }
    roster
}

/// Builds a roster that covers every minimum requirement, filling the
/// scarcest cells first (fewest eligible nurses). The result never violates
/// H1, H3 or H4; on success H2 is zero as well.
pub fn greedy_construct(
    scenario: &Scenario,
    week: &WeekData,
    history: &History,
    cfg: &SolverConfig,
) -> Result<Solution, ConstructionStuck> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let targets = counter_budget(scenario, history, history.week_index);
    greedy_with_rng(scenario, week, history, &targets, &mut rng)
}

fn greedy_with_rng(
    scenario: &Scenario,
    week: &WeekData,
    history: &History,
    targets: &CustomState,
    rng: &mut ChaCha8Rng,
) -> Result<Solution, ConstructionStuck> {
    let mut roster: Vec<[Cell; 7]> = vec![[None; 7]; scenario.nurses.len()];
    // Outstanding minimum coverage per requirement cell.
    let mut need: Vec<(ShiftId, SkillId, usize, u32)> = Vec::new();
    for req in &week.requirements {
        for (d, cov) in req.per_day.iter().enumerate() {
            if cov.minimum > 0 {
                need.push((req.shift, req.skill, d, cov.minimum));
            }
        }
    }

    // Seeded tie-break order over nurses.
    let mut nurse_order: Vec<NurseId> = scenario.nurse_ids().collect();
    nurse_order.shuffle(rng);

    let mut assigned_days = vec![0u32; scenario.nurses.len()];
    let mut stuck = false;
    while !need.is_empty() && !stuck {
        // Scarcest cell first: fewest eligible nurses.
        let mut best: Option<(usize, Vec<NurseId>)> = None;
        for (i, &(shift, skill, day, _)) in need.iter().enumerate() {
            let eligible: Vec<NurseId> = nurse_order
                .iter()
                .copied()
                .filter(|&n| {
                    roster[n.0][day].is_none()
                        && scenario.nurses[n.0].has_skill(skill)
                        && succession_ok(
                            scenario,
                            history.of(n).last_shift,
                            &roster[n.0],
                            day,
                            shift,
                        )
                })
                .collect();
            let better = match &best {
                None => true,
                Some((_, other)) => eligible.len() < other.len(),
            };
            if better {
                let empty = eligible.is_empty();
                best = Some((i, eligible));
                if empty {
                    break;
                }
            }
        }
        let (index, eligible) = best.unwrap();
        if eligible.is_empty() {
            stuck = true;
            break;
        }
        // Favour the nurse with the most unused quota to keep the horizon
        // counters balanced; ties fall back to the shuffled order.
        let chosen = eligible
            .iter()
            .copied()
            .max_by_key(|&n| {
                targets.assignment_target[n.0] - Rational64::from_integer(assigned_days[n.0] as i64)
            })
            .unwrap();
        let (shift, skill, day, _) = need[index];
        roster[chosen.0][day] = Some((shift, skill));
        assigned_days[chosen.0] += 1;
        let slot = &mut need[index];
        slot.3 -= 1;
        if slot.3 == 0 {
            need.swap_remove(index);
        }
    }

    let solution = roster_to_solution(scenario, history.week_index, &roster);
    if stuck {
        Err(ConstructionStuck { partial: solution })
    } else {
        Ok(solution)
    }
}

/// Incremental view of the search objective.
struct SearchState<'a> {
    scenario: &'a Scenario,
    history: &'a History,
    weights: &'a Weights,
    targets: &'a CustomState,
    surrogate: (f64, f64),
    /// In the final week the counter constraints are evaluated exactly.
    final_week: bool,
    roster: Vec<[Cell; 7]>,
    /// Assignment count per (shift, skill, day) cell.
    cover: Vec<u32>,
    /// (minimum, optimal) per cell, dense.
    bounds: Vec<(u32, u32)>,
    /// Requests as (any-day-off, specific shifts) per (nurse, day).
    requests: Vec<[(bool, Vec<ShiftId>); 7]>,
    cover_cost: f64,
    cover_hard: u32,
    nurse_cost: Vec<f64>,
    nurse_hard: Vec<u32>,
}

impl<'a> SearchState<'a> {
    fn new(
        scenario: &'a Scenario,
        week: &'a WeekData,
        history: &'a History,
        weights: &'a Weights,
        targets: &'a CustomState,
        surrogate: (f64, f64),
        start: &Solution,
    ) -> SearchState<'a> {
        let n_skills = scenario.skills.len();
        let n_cells = scenario.shift_types.len() * n_skills * 7;
        let mut bounds = vec![(0u32, 0u32); n_cells];
        for req in &week.requirements {
            for (d, cov) in req.per_day.iter().enumerate() {
                bounds[(req.shift.0 * n_skills + req.skill.0) * 7 + d] =
                    (cov.minimum, cov.optimal);
            }
        }
        let mut requests: Vec<[(bool, Vec<ShiftId>); 7]> =
            vec![Default::default(); scenario.nurses.len()];
        for r in &week.requests {
            let slot = &mut requests[r.nurse.0][r.day.index()];
            match r.shift {
                ShiftRequest::Any => slot.0 = true,
                ShiftRequest::Shift(s) => slot.1.push(s),
            }
        }

        let roster = solution_to_roster(scenario, start);
        let mut state = SearchState {
            scenario,
            history,
            weights,
            targets,
            surrogate,
            final_week: history.week_index + 1 == scenario.num_weeks,
            roster,
            cover: vec![0; n_cells],
            bounds,
            requests,
            cover_cost: 0.0,
            cover_hard: 0,
            nurse_cost: vec![0.0; scenario.nurses.len()],
            nurse_hard: vec![0; scenario.nurses.len()],
        };
        for nurse in scenario.nurse_ids() {
            for d in 0..7 {
                if let Some((shift, skill)) = state.roster[nurse.0][d] {
                    state.cover[(shift.0 * n_skills + skill.0) * 7 + d] += 1;
                }
            }
        }
        state.cover_cost = (0..n_cells).map(|c| state.cell_cost(c)).sum();
        state.cover_hard = (0..n_cells).map(|c| state.cell_hard(c)).sum();
        for nurse in scenario.nurse_ids() {
            let (hard, cost) = state.eval_nurse(nurse);
            state.nurse_hard[nurse.0] = hard;
            state.nurse_cost[nurse.0] = cost;
        }
        state
    }

    fn cell_of(&self, shift: ShiftId, skill: SkillId, day: usize) -> usize {
        (shift.0 * self.scenario.skills.len() + skill.0) * 7 + day
    }

    fn cell_hard(&self, cell: usize) -> u32 {
        self.bounds[cell].0.saturating_sub(self.cover[cell])
    }

    fn cell_cost(&self, cell: usize) -> f64 {
        let (minimum, optimal) = self.bounds[cell];
        let cnt = self.cover[cell];
        HARD_PENALTY * minimum.saturating_sub(cnt) as f64
            + self.weights.s1_optimal_coverage as f64 * optimal.saturating_sub(cnt) as f64
    }

    /// Full soft + hard recomputation for one nurse's week.
    fn eval_nurse(&self, nurse: NurseId) -> (u32, f64) {
        let pattern = &self.roster[nurse.0];
        let entry = self.history.of(nurse);
        let contract = self.scenario.contract_of(nurse);
        let w = self.weights;

        let mut work_flags = [false; 7];
        for d in 0..7 {
            work_flags[d] = pattern[d].is_some();
        }
        let off_flags = work_flags.map(|f| !f);

        let mut cost = 0.0;
        cost += w.s2_consecutive_work as f64
            * score_series(
                &SeriesSpec {
                    kind: SeriesKind::Work,
                    min_len: contract.consecutive_work.min,
                    max_len: contract.consecutive_work.max,
                    carry_in: entry.consec_work,
                },
                &work_flags,
            ) as f64;
        cost += w.s3_consecutive_off as f64
            * score_series(
                &SeriesSpec {
                    kind: SeriesKind::Off,
                    min_len: contract.consecutive_off.min,
                    max_len: contract.consecutive_off.max,
                    carry_in: entry.consec_off,
                },
                &off_flags,
            ) as f64;
        for shift in self.scenario.shift_ids() {
            let mut flags = [false; 7];
            for d in 0..7 {
                flags[d] = matches!(pattern[d], Some((s, _)) if s == shift);
            }
            let carry = if entry.last_shift == Some(shift) {
                entry.consec_same_shift
            } else {
                0
            };
            if carry == 0 && flags.iter().all(|&f| !f) {
                continue;
            }
            let b = self.scenario.shift_types[shift.0].consecutive;
            cost += w.s2_consecutive_shift as f64
                * score_series(
                    &SeriesSpec {
                        kind: SeriesKind::SameShift(shift),
                        min_len: b.min,
                        max_len: b.max,
                        carry_in: carry,
                    },
                    &flags,
                ) as f64;
        }

        // S4 violated requests.
        for (d, cell) in pattern.iter().enumerate() {
            if let Some((shift, _)) = cell {
                let (any, ref shifts) = self.requests[nurse.0][d];
                if any {
                    cost += w.s4_preference as f64;
                }
                if shifts.contains(shift) {
                    cost += w.s4_preference as f64;
                }
            }
        }

        // S5 split weekend.
        let sat = pattern[Day::Sat.index()].is_some();
        let sun = pattern[Day::Sun.index()].is_some();
        if contract.complete_weekend && sat != sun {
            cost += w.s5_complete_weekend as f64;
        }

        // Horizon counters: exact in the final week, budget-based before.
        let worked = work_flags.iter().filter(|&&f| f).count() as u32;
        let weekend_worked = (sat || sun) as u32;
        if self.final_week {
            let total = entry.total_assignments + worked;
            cost += w.s6_total_assignments as f64
                * contract.total_assignments.distance(total) as f64;
            let weekends = entry.total_weekends + weekend_worked;
            cost += w.s7_total_weekends as f64
                * weekends.saturating_sub(contract.max_working_weekends) as f64;
        } else {
            let target: f64 = ratio_to_f64(self.targets.assignment_target[nurse.0]);
            cost += self.surrogate.0 * (worked as f64 - target).abs();
            let budget: f64 = ratio_to_f64(self.targets.weekend_budget[nurse.0]);
            cost += self.surrogate.1 * (weekend_worked as f64 - budget).max(0.0);
        }

        // Hard units of this pattern: H3 (border included) and H4. Moves
        // never introduce these, but an external start may carry them.
        let mut hard = 0u32;
        let mut prev = entry.last_shift;
        for cell in pattern {
            match *cell {
                Some((shift, skill)) => {
                    if let Some(p) = prev {
                        if self.scenario.successions.is_forbidden(p, shift) {
                            hard += 1;
                        }
                    }
                    if !self.scenario.nurses[nurse.0].has_skill(skill) {
                        hard += 1;
                    }
                    prev = Some(shift);
                }
                None => prev = None,
            }
        }
        cost += HARD_PENALTY * hard as f64;

        (hard, cost)
    }

    fn total_cost(&self) -> f64 {
        self.cover_cost + self.nurse_cost.iter().sum::<f64>()
    }

    fn total_hard(&self) -> u32 {
        self.cover_hard + self.nurse_hard.iter().sum::<u32>()
    }

    /// Applies cell edits and returns the signed cost delta.
    fn apply(&mut self, edits: &[(NurseId, usize, Cell)]) -> f64 {
        let mut cover_delta = 0.0;
        let mut touched: Vec<NurseId> = Vec::with_capacity(2);
        for &(nurse, day, new_cell) in edits {
            let old_cell = self.roster[nurse.0][day];
            if let Some((shift, skill)) = old_cell {
                let c = self.cell_of(shift, skill, day);
                cover_delta -= self.cell_cost(c);
                self.cover_hard -= self.cell_hard(c);
                self.cover[c] -= 1;
                cover_delta += self.cell_cost(c);
                self.cover_hard += self.cell_hard(c);
            }
            if let Some((shift, skill)) = new_cell {
                let c = self.cell_of(shift, skill, day);
                cover_delta -= self.cell_cost(c);
                self.cover_hard -= self.cell_hard(c);
                self.cover[c] += 1;
                cover_delta += self.cell_cost(c);
                self.cover_hard += self.cell_hard(c);
            }
            self.roster[nurse.0][day] = new_cell;
            if !touched.contains(&nurse) {
                touched.push(nurse);
            }
        }
        self.cover_cost += cover_delta;
        let mut delta = cover_delta;
        for nurse in touched {
            let (hard, cost) = self.eval_nurse(nurse);
            delta += cost - self.nurse_cost[nurse.0];
            self.nurse_hard[nurse.0] = hard;
            self.nurse_cost[nurse.0] = cost;
        }
        delta
    }
}

fn ratio_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// One candidate move: the cell edits to perform.
type Move = Vec<(NurseId, usize, Cell)>;

fn propose_move(state: &SearchState<'_>, rng: &mut ChaCha8Rng) -> Option<Move> {
    let scenario = state.scenario;
    let n_nurses = scenario.nurses.len();
    let n_shifts = scenario.shift_types.len();
    if n_nurses == 0 || n_shifts == 0 {
        return None;
    }
    let nurse = NurseId(rng.random_range(0..n_nurses));
    let day = rng.random_range(0..7usize);
    let pattern = &state.roster[nurse.0];
    let last = state.history.of(nurse).last_shift;

    match rng.random_range(0..6u8) {
        // Insert into a free day.
        0 => {
            if pattern[day].is_some() {
                return None;
            }
            let skills = &scenario.nurses[nurse.0].skills;
            let skill = *skills.choose(rng)?;
            let shift = ShiftId(rng.random_range(0..n_shifts));
            succession_ok(scenario, last, pattern, day, shift)
                .then(|| vec![(nurse, day, Some((shift, skill)))])
        }
        // Delete an assignment; never creates a forbidden pair.
        1 => pattern[day].is_some().then(|| vec![(nurse, day, None)]),
        // Change the shift, keeping the skill.
        2 => {
            let (old_shift, skill) = pattern[day]?;
            let shift = ShiftId(rng.random_range(0..n_shifts));
            if shift == old_shift {
                return None;
            }
            succession_ok(scenario, last, pattern, day, shift)
                .then(|| vec![(nurse, day, Some((shift, skill)))])
        }
        // Change the skill, keeping the shift.
        3 => {
            let (shift, old_skill) = pattern[day]?;
            let skill = *scenario.nurses[nurse.0].skills.choose(rng)?;
            (skill != old_skill).then(|| vec![(nurse, day, Some((shift, skill)))])
        }
        // Relocate an assignment to a free day of the same nurse,
        // optionally changing the shift; one step instead of an uphill
        // delete-then-insert pair.
        4 => {
            let (_, skill) = pattern[day]?;
            let target = rng.random_range(0..7usize);
            if target == day || pattern[target].is_some() {
                return None;
            }
            let shift = ShiftId(rng.random_range(0..n_shifts));
            // Check the insertion against the pattern with the source
            // cleared, in case source and target are adjacent.
            let mut cleared = *pattern;
            cleared[day] = None;
            succession_ok(scenario, last, &cleared, target, shift)
                .then(|| vec![(nurse, day, None), (nurse, target, Some((shift, skill)))])
        }
        // Swap the two nurses' cells on one day.
        _ => {
            if n_nurses < 2 {
                return None;
            }
            let other = NurseId(rng.random_range(0..n_nurses));
            if other == nurse {
                return None;
            }
            let mine = pattern[day];
            let theirs = state.roster[other.0][day];
            if mine == theirs {
                return None;
            }
            let other_pattern = &state.roster[other.0];
            let other_last = state.history.of(other).last_shift;
            let ok = |target: NurseId, target_pattern: &[Cell; 7], target_last, cell: Cell| {
                match cell {
                    None => true,
                    Some((shift, skill)) => {
                        scenario.nurses[target.0].has_skill(skill)
                            && succession_ok(scenario, target_last, target_pattern, day, shift)
                    }
                }
            };
            // Succession checks look at adjacent days only, so clearing is
            // not needed before checking this day's replacement cell.
            (ok(nurse, pattern, last, theirs) && ok(other, other_pattern, other_last, mine))
                .then(|| vec![(nurse, day, theirs), (other, day, mine)])
        }
    }
}

/// Simulated annealing from `start`. Returns the best roster visited by
/// (hard units, cost); with a zero budget the start is returned unchanged.
pub fn local_search(
    scenario: &Scenario,
    week: &WeekData,
    history: &History,
    start: &Solution,
    cfg: &SolverConfig,
    targets: &CustomState,
) -> Solution {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut state = SearchState::new(
        scenario,
        week,
        history,
        &cfg.weights,
        targets,
        cfg.surrogate_weights,
        start,
    );

    if cfg.max_iterations == Some(0) {
        return start.clone();
    }

    // Calibrate the initial temperature so that an average uphill move
    // has roughly a 50% chance of acceptance.
    let mut uphill = Vec::new();
    for _ in 0..200 {
        if let Some(edits) = propose_move(&state, &mut rng) {
            let undo: Move = edits
                .iter()
                .map(|&(n, d, _)| (n, d, state.roster[n.0][d]))
                .collect();
            let delta = state.apply(&edits);
            if delta > 0.0 && delta < HARD_PENALTY / 2.0 {
                uphill.push(delta);
            }
            state.apply(&undo);
        }
    }
    let t0 = if uphill.is_empty() {
        1.0
    } else {
        let mean = uphill.iter().sum::<f64>() / uphill.len() as f64;
        (mean / std::f64::consts::LN_2).max(1.0)
    };

    let mut best_roster = state.roster.clone();
    let mut best_key = (state.total_hard(), state.total_cost());

    let deadline = Instant::now() + cfg.time_budget;
    // Cooling runs in cycles: whenever the temperature reaches the floor
    // the search restarts from the best roster, shaken by a random kick,
    // and reheats. With an iteration cap the rate is tied to the cap so
    // whole cycles of roughly 12k iterations fit exactly; in wall-clock
    // mode the rate is constant.
    let alpha = match cfg.max_iterations {
        Some(iters) => {
            let cycles = (iters / 12_000).clamp(4, 24) as f64;
            (TEMPERATURE_FLOOR / t0).powf(cycles / iters.max(1) as f64)
        }
        None => 0.99995,
    };
    let mut temperature = t0;
    let mut iteration: u64 = 0;

    loop {
        match cfg.max_iterations {
            Some(cap) => {
                if iteration >= cap {
                    break;
                }
            }
            None => {
                if iteration.is_multiple_of(64) && Instant::now() >= deadline {
                    break;
                }
            }
        }
        iteration += 1;
        temperature *= alpha;
        if temperature < TEMPERATURE_FLOOR {
            // Kicked restart: resume from the best roster, shaken by a few
            // unconditional random moves so each cycle explores a
            // different basin.
            state = SearchState::new(
                scenario,
                week,
                history,
                &cfg.weights,
                targets,
                cfg.surrogate_weights,
                &roster_to_solution(scenario, history.week_index, &best_roster),
            );
            let kicks = 3 + scenario.nurses.len() / 4;
            let mut applied = 0;
            for _ in 0..kicks * 8 {
                if applied >= kicks {
                    break;
                }
                if let Some(edits) = propose_move(&state, &mut rng) {
                    state.apply(&edits);
                    applied += 1;
                }
            }
            temperature = t0;
        }

        // A few redraws per iteration keep the proposal stream dense.
        let mut proposal = None;
        for _ in 0..4 {
            proposal = propose_move(&state, &mut rng);
            if proposal.is_some() {
                break;
            }
        }
        let Some(edits) = proposal else {
            continue;
        };
        let undo: Move = edits
            .iter()
            .map(|&(n, d, _)| (n, d, state.roster[n.0][d]))
            .collect();
        let delta = state.apply(&edits);
        let accept = delta <= 0.0 || rng.random::<f64>() < (-delta / temperature).exp();
        if accept {
            let key = (state.total_hard(), state.total_cost());
            if key.0 < best_key.0 || (key.0 == best_key.0 && key.1 < best_key.1) {
                best_key = key;
                best_roster = state.roster.clone();
            }
        } else {
            state.apply(&undo);
        }
    }

    // Deterministic first-improvement descent from the best roster found:
    // cheap, and it closes the small gaps annealing tends to leave.
    let mut polished = SearchState::new(
        scenario,
        week,
        history,
        &cfg.weights,
        targets,
        cfg.surrogate_weights,
        &roster_to_solution(scenario, history.week_index, &best_roster),
    );
    descend(&mut polished);
    let polished_key = (polished.total_hard(), polished.total_cost());
    if polished_key.0 < best_key.0 || (polished_key.0 == best_key.0 && polished_key.1 < best_key.1)
    {
        best_key = polished_key;
        best_roster = polished.roster.clone();
    }

    // Never return anything worse than the start in (hard, cost) order.
    let start_state = SearchState::new(
        scenario,
        week,
        history,
        &cfg.weights,
        targets,
        cfg.surrogate_weights,
        start,
    );
    let start_key = (start_state.total_hard(), start_state.total_cost());
    if start_key.0 < best_key.0 || (start_key.0 == best_key.0 && start_key.1 < best_key.1) {
        return start.clone();
    }
    roster_to_solution(scenario, history.week_index, &best_roster)
}

/// Scans every single-cell edit in a fixed order and applies any strict
/// improvement, repeating until a full sweep changes nothing.
fn descend(state: &mut SearchState<'_>) {
    let scenario = state.scenario;
    let n_shifts = scenario.shift_types.len();
    for _ in 0..64 {
        let mut improved = false;
        for nurse in scenario.nurse_ids() {
            let last = state.history.of(nurse).last_shift;
            for day in 0..7 {
                let current = state.roster[nurse.0][day];
                let mut candidates: Vec<Cell> = Vec::with_capacity(n_shifts * 2 + 1);
                if current.is_some() {
                    candidates.push(None);
                }
                for shift in 0..n_shifts {
                    for &skill in &scenario.nurses[nurse.0].skills {
                        let cell = Some((ShiftId(shift), skill));
                        if cell != current {
                            candidates.push(cell);
                        }
                    }
                }
                for candidate in candidates {
                    if let Some((shift, _)) = candidate {
                        if !succession_ok(scenario, last, &state.roster[nurse.0], day, shift) {
                            continue;
                        }
                    }
                    let undo = vec![(nurse, day, state.roster[nurse.0][day])];
                    let delta = state.apply(&[(nurse, day, candidate)]);
                    if delta < -1e-9 {
                        improved = true;
                    } else {
                        state.apply(&undo);
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
}

/// Result of solving one week.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub solution: Solution,
    /// Forecast for the next stage.
    pub custom_out: CustomState,
    /// False when the returned best-effort roster still violates a hard
    /// constraint; a solution file is produced either way.
    pub hard_feasible: bool,
}

/// Full pipeline for one stage: counter budget, greedy construction,
/// local search, and the forecast for the next stage.
pub fn solve_week(
    scenario: &Scenario,
    history: &History,
    week: &WeekData,
    cfg: &SolverConfig,
    custom_in: Option<&CustomState>,
) -> SolveOutcome {
    let targets = match custom_in {
        Some(c)
            if c.week_index == history.week_index
                && c.assignment_target.len() == scenario.nurses.len() =>
        {
            c.clone()
        }
        _ => counter_budget(scenario, history, history.week_index),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let start = match greedy_with_rng(scenario, week, history, &targets, &mut rng) {
        Ok(solution) => solution,
        Err(stuck) => stuck.partial,
    };
    let solution = local_search(scenario, week, history, &start, cfg, &targets);

    let hard = check_hard(scenario, week, history, &solution);
    let next = crate::evaluation::advance_history(history, &solution, scenario)
        .expect("solved week index matches history");
    let custom_out = if next.week_index < scenario.num_weeks {
        counter_budget(scenario, &next, next.week_index)
    } else {
        CustomState {
            week_index: next.week_index,
            assignment_target: vec![Rational64::from_integer(0); scenario.nurses.len()],
            weekend_budget: vec![Rational64::from_integer(0); scenario.nurses.len()],
        }
    };
    SolveOutcome {
        solution,
        custom_out,
        hard_feasible: hard.is_feasible(),
    }
}
