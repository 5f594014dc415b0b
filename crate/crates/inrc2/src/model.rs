//! Domain types for the multi-stage nurse rostering problem.
//!
//! Everything here is resolved to dense integer indices: nurses, shifts,
//! skills and contracts are referenced by position in the scenario lists,
//! and names survive only in I/O. All types are immutable after
//! construction and safe to share across threads.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index of a shift type in [`Scenario::shift_types`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftId(pub usize);

/// Index of a skill in [`Scenario::skills`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SkillId(pub usize);

/// Index of a nurse in [`Scenario::nurses`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NurseId(pub usize);

/// Index of a contract in [`Scenario::contracts`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContractId(pub usize);

/// Day of the week. All weeks start on Monday.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Day {
    Mon,
    Tue,
    Wed,
    Thu,
    Fri,
    Sat,
    Sun,
}

impl Day {
    pub const ALL: [Day; 7] = [
        Day::Mon,
        Day::Tue,
        Day::Wed,
        Day::Thu,
        Day::Fri,
        Day::Sat,
        Day::Sun,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Day> {
        Day::ALL.get(index).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Day::Mon => "Mon",
            Day::Tue => "Tue",
            Day::Wed => "Wed",
            Day::Thu => "Thu",
            Day::Fri => "Fri",
            Day::Sat => "Sat",
            Day::Sun => "Sun",
        }
    }

    pub fn parse(token: &str) -> Option<Day> {
        Day::ALL.iter().copied().find(|d| d.name() == token)
    }

    pub fn is_weekend(self) -> bool {
        matches!(self, Day::Sat | Day::Sun)
    }
}

impl fmt::Display for Day {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inclusive integer interval, e.g. a (min,max) bound on consecutive days.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub min: u32,
    pub max: u32,
}

impl Interval {
    pub fn new(min: u32, max: u32, what: &str) -> Result<Interval, ModelError> {
        if min > max {
            return Err(ModelError::BadInterval {
                what: what.to_string(),
                min,
                max,
            });
        }
        Ok(Interval { min, max })
    }

    pub fn contains(&self, value: u32) -> bool {
        self.min <= value && value <= self.max
    }

    /// Units by which `value` falls outside the interval, in either direction.
    pub fn distance(&self, value: u32) -> u32 {
        if value < self.min {
            self.min - value
        } else { value.saturating_sub(self.max) }
    }
}

/// A shift type with its bounds on consecutive assignments of that type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftType {
    pub name: String,
    pub consecutive: Interval,
}

/// Dense matrix of forbidden shift type successions.
///
/// `is_forbidden(p, s)` answers whether shift `s` may not directly follow
/// shift `p` on the next day.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccessionMatrix {
    n_shifts: usize,
    forbidden: Vec<bool>,
}

impl SuccessionMatrix {
    pub fn empty(n_shifts: usize) -> SuccessionMatrix {
        SuccessionMatrix {
            n_shifts,
            forbidden: vec![false; n_shifts * n_shifts],
        }
    }

    pub fn from_pairs(
        n_shifts: usize,
        pairs: &[(ShiftId, ShiftId)],
    ) -> Result<SuccessionMatrix, ModelError> {
        let mut m = SuccessionMatrix::empty(n_shifts);
        for &(pred, succ) in pairs {
            if pred.0 >= n_shifts || succ.0 >= n_shifts {
                return Err(ModelError::UnknownReference {
                    kind: "shift type",
                    name: format!("#{}", pred.0.max(succ.0)),
                });
            }
            let cell = &mut m.forbidden[pred.0 * n_shifts + succ.0];
            if *cell {
                return Err(ModelError::DuplicateName {
                    kind: "forbidden succession",
                    name: format!("({}, {})", pred.0, succ.0),
                });
            }
            *cell = true;
        }
        Ok(m)
    }

    pub fn is_forbidden(&self, pred: ShiftId, succ: ShiftId) -> bool {
        self.forbidden[pred.0 * self.n_shifts + succ.0]
    }

    /// Successors forbidden after `pred`, in shift id order.
    pub fn forbidden_after(&self, pred: ShiftId) -> impl Iterator<Item = ShiftId> + '_ {
        let base = pred.0 * self.n_shifts;
        (0..self.n_shifts).filter_map(move |s| self.forbidden[base + s].then_some(ShiftId(s)))
    }
}

/// Work rules attached to a nurse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contract {
    pub name: String,
    /// Bounds on the total number of assignments over the whole horizon.
    pub total_assignments: Interval,
    pub consecutive_work: Interval,
    pub consecutive_off: Interval,
    pub max_working_weekends: u32,
    pub complete_weekend: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nurse {
    pub name: String,
    pub contract: ContractId,
    /// Skills held, in declaration order; nonempty, no duplicates.
    pub skills: Vec<SkillId>,
}

impl Nurse {
    pub fn has_skill(&self, skill: SkillId) -> bool {
        self.skills.contains(&skill)
    }
}

/// Data common to all stages of a planning horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub num_weeks: u32,
    pub skills: Vec<String>,
    pub shift_types: Vec<ShiftType>,
    pub successions: SuccessionMatrix,
    pub contracts: Vec<Contract>,
    pub nurses: Vec<Nurse>,
    shift_index: HashMap<String, usize>,
    skill_index: HashMap<String, usize>,
    nurse_index: HashMap<String, usize>,
    contract_index: HashMap<String, usize>,
}

impl Scenario {
    pub fn shift_id(&self, name: &str) -> Option<ShiftId> {
        self.shift_index.get(name).map(|&i| ShiftId(i))
    }

    pub fn skill_id(&self, name: &str) -> Option<SkillId> {
        self.skill_index.get(name).map(|&i| SkillId(i))
    }

    pub fn nurse_id(&self, name: &str) -> Option<NurseId> {
        self.nurse_index.get(name).map(|&i| NurseId(i))
    }

    pub fn contract_id(&self, name: &str) -> Option<ContractId> {
        self.contract_index.get(name).map(|&i| ContractId(i))
    }

    pub fn shift_name(&self, id: ShiftId) -> &str {
        &self.shift_types[id.0].name
    }

    pub fn skill_name(&self, id: SkillId) -> &str {
        &self.skills[id.0]
    }

    pub fn nurse_name(&self, id: NurseId) -> &str {
        &self.nurses[id.0].name
    }

    pub fn contract_of(&self, nurse: NurseId) -> &Contract {
        &self.contracts[self.nurses[nurse.0].contract.0]
    }

    pub fn shift_ids(&self) -> impl Iterator<Item = ShiftId> {
        (0..self.shift_types.len()).map(ShiftId)
    }

    pub fn skill_ids(&self) -> impl Iterator<Item = SkillId> {
        (0..self.skills.len()).map(SkillId)
    }

    pub fn nurse_ids(&self) -> impl Iterator<Item = NurseId> {
        (0..self.nurses.len()).map(NurseId)
    }
}

/// Reserved shift tokens: `Any` is only legal in a shift-off request and
/// `None` only as a history last-shift, so neither may name a shift type.
pub const RESERVED_SHIFT_NAMES: [&str; 2] = ["Any", "None"];

/// Unresolved scenario record, as read from a file, with names still in
/// string form. [`resolve_scenario`] turns it into a [`Scenario`].
#[derive(Debug, Clone, Default)]
pub struct RawScenario {
    pub id: String,
    pub num_weeks: u32,
    pub skills: Vec<String>,
    pub shift_types: Vec<RawShiftType>,
    /// One entry per succession line: preceding shift name, succeeding names.
    pub successions: Vec<(String, Vec<String>)>,
    pub contracts: Vec<RawContract>,
    pub nurses: Vec<RawNurse>,
}

#[derive(Debug, Clone)]
pub struct RawShiftType {
    pub name: String,
    pub min_consecutive: u32,
    pub max_consecutive: u32,
}

#[derive(Debug, Clone)]
pub struct RawContract {
    pub name: String,
    pub total_assignments: (u32, u32),
    pub consecutive_work: (u32, u32),
    pub consecutive_off: (u32, u32),
    pub max_working_weekends: u32,
    pub complete_weekend: bool,
}

#[derive(Debug, Clone)]
pub struct RawNurse {
    pub name: String,
    pub contract: String,
    pub skills: Vec<String>,
}

/// Resolves every cross-reference of a raw scenario to dense indices,
/// preserving declaration order. Pure: identical input yields an identical
/// scenario.
pub fn resolve_scenario(raw: RawScenario) -> Result<Scenario, ModelError> {
    if raw.num_weeks < 1 {
        return Err(ModelError::Invariant(
            "planning horizon must be at least one week".into(),
        ));
    }

    let skill_index = build_index("skill", &raw.skills, |s| s.as_str())?;

    for st in &raw.shift_types {
        if RESERVED_SHIFT_NAMES.contains(&st.name.as_str()) {
            return Err(ModelError::Invariant(format!(
                "shift type may not use reserved name `{}`",
                st.name
            )));
        }
    }
    let shift_index = build_index("shift type", &raw.shift_types, |s| s.name.as_str())?;
    let shift_types = raw
        .shift_types
        .iter()
        .map(|s| {
            Ok(ShiftType {
                name: s.name.clone(),
                consecutive: consecutive_interval(
                    s.min_consecutive,
                    s.max_consecutive,
                    &s.name,
                )?,
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;

    let mut pairs = Vec::new();
    for (pred, succs) in &raw.successions {
        let p = lookup(&shift_index, "shift type", pred)?;
        for succ in succs {
            let s = lookup(&shift_index, "shift type", succ)?;
            pairs.push((ShiftId(p), ShiftId(s)));
        }
    }
    let successions = SuccessionMatrix::from_pairs(shift_types.len(), &pairs)?;

    let contract_index = build_index("contract", &raw.contracts, |c| c.name.as_str())?;
    let contracts = raw
        .contracts
        .iter()
        .map(|c| {
            Ok(Contract {
                name: c.name.clone(),
                total_assignments: Interval::new(
                    c.total_assignments.0,
                    c.total_assignments.1,
                    &format!("total assignments of contract {}", c.name),
                )?,
                consecutive_work: Interval::new(
                    c.consecutive_work.0,
                    c.consecutive_work.1,
                    &format!("consecutive work of contract {}", c.name),
                )?,
                consecutive_off: Interval::new(
                    c.consecutive_off.0,
                    c.consecutive_off.1,
                    &format!("consecutive off of contract {}", c.name),
                )?,
                max_working_weekends: c.max_working_weekends,
                complete_weekend: c.complete_weekend,
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;

    let nurse_index = build_index("nurse", &raw.nurses, |n| n.name.as_str())?;
    let nurses = raw
        .nurses
        .iter()
        .map(|n| {
            let contract = ContractId(lookup(&contract_index, "contract", &n.contract)?);
            if n.skills.is_empty() {
                return Err(ModelError::Invariant(format!(
                    "nurse {} must hold at least one skill",
                    n.name
                )));
            }
            let mut skills = Vec::with_capacity(n.skills.len());
            for sk in &n.skills {
                let id = SkillId(lookup(&skill_index, "skill", sk)?);
                if skills.contains(&id) {
                    return Err(ModelError::DuplicateName {
                        kind: "nurse skill",
                        name: format!("{} of {}", sk, n.name),
                    });
                }
                skills.push(id);
            }
            Ok(Nurse {
                name: n.name.clone(),
                contract,
                skills,
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;

    Ok(Scenario {
        id: raw.id,
        num_weeks: raw.num_weeks,
        skills: raw.skills,
        shift_types,
        successions,
        contracts,
        nurses,
        shift_index,
        skill_index,
        nurse_index,
        contract_index,
    })
}

fn consecutive_interval(min: u32, max: u32, shift: &str) -> Result<Interval, ModelError> {
    if min < 1 {
        return Err(ModelError::Invariant(format!(
            "shift type {shift}: minimum consecutive assignments must be at least 1"
        )));
    }
    Interval::new(min, max, &format!("consecutive assignments of {shift}"))
}

fn build_index<T>(
    kind: &'static str,
    items: &[T],
    name: impl Fn(&T) -> &str,
) -> Result<HashMap<String, usize>, ModelError> {
    let mut index = HashMap::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let n = name(item);
        if n.is_empty() {
            return Err(ModelError::Invariant(format!("{kind} name must be nonempty")));
        }
        if index.insert(n.to_string(), i).is_some() {
            return Err(ModelError::DuplicateName {
                kind,
                name: n.to_string(),
            });
        }
    }
    Ok(index)
}

fn lookup(
    index: &HashMap<String, usize>,
    kind: &'static str,
    name: &str,
) -> Result<usize, ModelError> {
    index
        .get(name)
        .copied()
        .ok_or_else(|| ModelError::UnknownReference {
            kind,
            name: name.to_string(),
        })
}

/// Minimum and optimal staffing for one (shift, skill) cell on one day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Coverage {
    pub minimum: u32,
    pub optimal: u32,
}

/// Staffing requirement for one (shift, skill) pair, Monday through Sunday.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Requirement {
    pub shift: ShiftId,
    pub skill: SkillId,
    pub per_day: [Coverage; 7],
}

/// Shift referenced by a shift-off request; `Any` asks for a whole day off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShiftRequest {
    Any,
    Shift(ShiftId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShiftOffRequest {
    pub nurse: NurseId,
    pub shift: ShiftRequest,
    pub day: Day,
}

/// Data specific to a single week: coverage requirements and requests.
#[derive(Debug, Clone, PartialEq)]
pub struct WeekData {
    pub scenario_id: String,
    /// Exactly one requirement per (shift, skill) pair, in input order.
    pub requirements: Vec<Requirement>,
    /// Deduplicated shift-off requests, in input order.
    pub requests: Vec<ShiftOffRequest>,
    cell_index: HashMap<(ShiftId, SkillId), usize>,
}

impl WeekData {
    pub fn new(
        scenario: &Scenario,
        scenario_id: String,
        requirements: Vec<Requirement>,
        requests: Vec<ShiftOffRequest>,
    ) -> Result<WeekData, ModelError> {
        let mut cell_index = HashMap::with_capacity(requirements.len());
        for (i, req) in requirements.iter().enumerate() {
            for cov in &req.per_day {
                if cov.optimal < cov.minimum {
                    return Err(ModelError::BadInterval {
                        what: format!(
                            "coverage of ({}, {})",
                            scenario.shift_name(req.shift),
                            scenario.skill_name(req.skill)
                        ),
                        min: cov.minimum,
                        max: cov.optimal,
                    });
                }
            }
            if cell_index.insert((req.shift, req.skill), i).is_some() {
                return Err(ModelError::DuplicateName {
                    kind: "requirement",
                    name: format!(
                        "({}, {})",
                        scenario.shift_name(req.shift),
                        scenario.skill_name(req.skill)
                    ),
                });
            }
        }
        let expected = scenario.shift_types.len() * scenario.skills.len();
        if cell_index.len() != expected {
            return Err(ModelError::Invariant(format!(
                "expected one requirement per (shift, skill) pair: got {}, need {}",
                cell_index.len(),
                expected
            )));
        }
        Ok(WeekData {
            scenario_id,
            requirements,
            requests,
            cell_index,
        })
    }

    pub fn coverage(&self, shift: ShiftId, skill: SkillId, day: Day) -> Coverage {
        self.cell_index
            .get(&(shift, skill))
            .map(|&i| self.requirements[i].per_day[day.index()])
            .unwrap_or_default()
    }
}

/// Per-nurse state carried across the week border.
///
/// `total_assignments` and `total_weekends` are counters checked at the end
/// of the horizon; the remaining fields describe the run state at the
/// boundary (the carry-in for consecutive-assignment constraints).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NurseHistory {
    pub nurse: NurseId,
    pub total_assignments: u32,
    pub total_weekends: u32,
    /// Shift worked on the last day of the previous week, if any.
    pub last_shift: Option<ShiftId>,
    pub consec_same_shift: u32,
    pub consec_work: u32,
    pub consec_off: u32,
}

impl NurseHistory {
    /// A fresh border: day off yesterday, all counters zero.
    pub fn zeroed(nurse: NurseId) -> NurseHistory {
        NurseHistory {
            nurse,
            total_assignments: 0,
            total_weekends: 0,
            last_shift: None,
            consec_same_shift: 0,
            consec_work: 0,
            consec_off: 0,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        match self.last_shift {
            None => {
                if self.consec_same_shift != 0 || self.consec_work != 0 {
                    return Err(ModelError::Invariant(
                        "consecutive work counters must be 0 when the last shift is None".into(),
                    ));
                }
            }
            Some(_) => {
                if self.consec_off != 0 {
                    return Err(ModelError::Invariant(
                        "consecutive days-off counter must be 0 when the last shift is set".into(),
                    ));
                }
                if self.consec_same_shift < 1 || self.consec_work < self.consec_same_shift {
                    return Err(ModelError::Invariant(
                        "consecutive work run must include the last-shift run".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// History snapshot before week `week_index` (0 = initial).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct History {
    pub week_index: u32,
    pub scenario_id: String,
    /// One entry per scenario nurse, in nurse id order.
    pub entries: Vec<NurseHistory>,
}

impl History {
    pub fn of(&self, nurse: NurseId) -> &NurseHistory {
        &self.entries[nurse.0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub nurse: NurseId,
    pub day: Day,
    pub shift: ShiftId,
    pub skill: SkillId,
}

/// Roster for one week: the list of assignments, days off left implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub week_index: u32,
    pub scenario_id: String,
    pub assignments: Vec<Assignment>,
}

/// Weights of the soft constraints, in cost units per violation unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Weights {
    pub s1_optimal_coverage: u32,
    pub s2_consecutive_shift: u32,
    pub s2_consecutive_work: u32,
    pub s3_consecutive_off: u32,
    pub s4_preference: u32,
    pub s5_complete_weekend: u32,
    pub s6_total_assignments: u32,
    pub s7_total_weekends: u32,
}

impl Default for Weights {
    fn default() -> Weights {
        Weights {
            s1_optimal_coverage: 30,
            s2_consecutive_shift: 15,
            s2_consecutive_work: 30,
            s3_consecutive_off: 30,
            s4_preference: 10,
            s5_complete_weekend: 30,
            s6_total_assignments: 20,
            s7_total_weekends: 30,
        }
    }
}

/// Counts of hard constraint violations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HardCounts {
    /// H1: (nurse, day) pairs with more than one assignment.
    pub single_assignment: u32,
    /// H2: nurses missing below the minimum coverage, summed over cells.
    pub understaffing: u32,
    /// H3: adjacent day pairs with a forbidden succession, border included.
    pub succession: u32,
    /// H4: assignments to a skill the nurse does not hold.
    pub missing_skill: u32,
}

impl HardCounts {
    pub fn is_feasible(&self) -> bool {
        self.total() == 0
    }

    pub fn total(&self) -> u32 {
        self.single_assignment + self.understaffing + self.succession + self.missing_skill
    }

    pub fn accumulate(&mut self, other: &HardCounts) {
        self.single_assignment += other.single_assignment;
        self.understaffing += other.understaffing;
        self.succession += other.succession;
        self.missing_skill += other.missing_skill;
    }
}

/// Weighted soft costs per constraint type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SoftCosts {
    pub s1_optimal_coverage: u64,
    pub s2_consecutive_shift: u64,
    pub s2_consecutive_work: u64,
    pub s3_consecutive_off: u64,
    pub s4_preference: u64,
    pub s5_complete_weekend: u64,
    pub s6_total_assignments: u64,
    pub s7_total_weekends: u64,
}

impl SoftCosts {
    pub fn total(&self) -> u64 {
        self.s1_optimal_coverage
            + self.s2_consecutive_shift
            + self.s2_consecutive_work
            + self.s3_consecutive_off
            + self.s4_preference
            + self.s5_complete_weekend
            + self.s6_total_assignments
            + self.s7_total_weekends
    }

    pub fn accumulate(&mut self, other: &SoftCosts) {
        self.s1_optimal_coverage += other.s1_optimal_coverage;
        self.s2_consecutive_shift += other.s2_consecutive_shift;
        self.s2_consecutive_work += other.s2_consecutive_work;
        self.s3_consecutive_off += other.s3_consecutive_off;
        self.s4_preference += other.s4_preference;
        self.s5_complete_weekend += other.s5_complete_weekend;
        self.s6_total_assignments += other.s6_total_assignments;
        self.s7_total_weekends += other.s7_total_weekends;
    }
}

/// Hard violation counts plus weighted soft costs. The total is always the
/// sum of the soft components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CostReport {
    pub hard: HardCounts,
    pub soft: SoftCosts,
}

impl CostReport {
    pub fn total_cost(&self) -> u64 {
        self.soft.total()
    }

    pub fn is_feasible(&self) -> bool {
        self.hard.is_feasible()
    }

    pub fn accumulate(&mut self, other: &CostReport) {
        self.hard.accumulate(&other.hard);
        self.soft.accumulate(&other.soft);
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown {kind}: {name}")]
    UnknownReference { kind: &'static str, name: String },
    #[error("duplicate {kind}: {name}")]
    DuplicateName { kind: &'static str, name: String },
    #[error("bad interval for {what}: ({min},{max})")]
    BadInterval { what: String, min: u32, max: u32 },
    #[error("{0}")]
    Invariant(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sample_raw() -> RawScenario {
        RawScenario {
            id: "n005w4".into(),
            num_weeks: 4,
            skills: vec!["HeadNurse".into(), "Nurse".into()],
            shift_types: vec![
                RawShiftType {
                    name: "Early".into(),
                    min_consecutive: 2,
                    max_consecutive: 5,
                },
                RawShiftType {
                    name: "Late".into(),
                    min_consecutive: 2,
                    max_consecutive: 3,
                },
                RawShiftType {
                    name: "Night".into(),
                    min_consecutive: 4,
                    max_consecutive: 5,
                },
            ],
            successions: vec![
                ("Early".into(), vec![]),
                ("Late".into(), vec!["Early".into()]),
                ("Night".into(), vec!["Early".into(), "Late".into()]),
            ],
            contracts: vec![
                RawContract {
                    name: "FullTime".into(),
                    total_assignments: (15, 22),
                    consecutive_work: (3, 5),
                    consecutive_off: (2, 3),
                    max_working_weekends: 2,
                    complete_weekend: true,
                },
                RawContract {
                    name: "PartTime".into(),
                    total_assignments: (7, 11),
                    consecutive_work: (3, 5),
                    consecutive_off: (3, 5),
                    max_working_weekends: 2,
                    complete_weekend: true,
                },
            ],
            nurses: vec![
                RawNurse {
                    name: "Patrick".into(),
                    contract: "FullTime".into(),
                    skills: vec!["HeadNurse".into(), "Nurse".into()],
                },
                RawNurse {
                    name: "Andrea".into(),
                    contract: "FullTime".into(),
                    skills: vec!["HeadNurse".into(), "Nurse".into()],
                },
                RawNurse {
                    name: "Stefaan".into(),
                    contract: "PartTime".into(),
                    skills: vec!["HeadNurse".into(), "Nurse".into()],
                },
                RawNurse {
                    name: "Sara".into(),
                    contract: "PartTime".into(),
                    skills: vec!["Nurse".into()],
                },
                RawNurse {
                    name: "Nguyen".into(),
                    contract: "FullTime".into(),
                    skills: vec!["Nurse".into()],
                },
            ],
        }
    }

    #[test]
    fn resolves_sample_scenario() {
        let sc = resolve_scenario(sample_raw()).unwrap();
        assert_eq!(sc.num_weeks, 4);
        assert_eq!(sc.nurses.len(), 5);
        assert_eq!(sc.shift_types.len(), 3);
        assert_eq!(sc.contracts[0].total_assignments, Interval { min: 15, max: 22 });
        let late = sc.shift_id("Late").unwrap();
        let early = sc.shift_id("Early").unwrap();
        let night = sc.shift_id("Night").unwrap();
        assert!(sc.successions.is_forbidden(late, early));
        assert!(sc.successions.is_forbidden(night, late));
        assert!(!sc.successions.is_forbidden(early, late));
        assert_eq!(sc.nurse_id("Sara"), Some(NurseId(3)));
        assert_eq!(sc.contract_of(NurseId(3)).name, "PartTime");
    }

    #[test]
    fn minimal_scenario_is_valid() {
        let raw = RawScenario {
            id: "n001w1".into(),
            num_weeks: 1,
            skills: vec!["Nurse".into()],
            shift_types: vec![RawShiftType {
                name: "Day".into(),
                min_consecutive: 1,
                max_consecutive: 7,
            }],
            successions: vec![],
            contracts: vec![RawContract {
                name: "Std".into(),
                total_assignments: (0, 7),
                consecutive_work: (1, 7),
                consecutive_off: (1, 7),
                max_working_weekends: 1,
                complete_weekend: false,
            }],
            nurses: vec![RawNurse {
                name: "Ann".into(),
                contract: "Std".into(),
                skills: vec!["Nurse".into()],
            }],
        };
        let sc = resolve_scenario(raw).unwrap();
        assert_eq!(sc.nurses.len(), 1);
        assert!(!sc.successions.is_forbidden(ShiftId(0), ShiftId(0)));
    }

    #[test]
    fn rejects_inverted_interval() {
        let mut raw = sample_raw();
        raw.contracts[0].total_assignments = (5, 3);
        match resolve_scenario(raw) {
            Err(ModelError::BadInterval { min: 5, max: 3, .. }) => {}
            other => panic!("expected BadInterval, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_contract() {
        let mut raw = sample_raw();
        raw.nurses[0].contract = "Ghost".into();
        match resolve_scenario(raw) {
            Err(ModelError::UnknownReference { kind: "contract", name }) => {
                assert_eq!(name, "Ghost")
            }
            other => panic!("expected UnknownReference, got {other:?}"),
        }
    }

    #[test]
    fn rejects_duplicate_nurse() {
        let mut raw = sample_raw();
        raw.nurses[1].name = "Patrick".into();
        assert!(matches!(
            resolve_scenario(raw),
            Err(ModelError::DuplicateName { kind: "nurse", .. })
        ));
    }

    #[test]
    fn rejects_reserved_shift_name() {
        let mut raw = sample_raw();
        raw.shift_types[0].name = "Any".into();
        assert!(matches!(resolve_scenario(raw), Err(ModelError::Invariant(_))));
    }

    #[test]
    fn history_invariants() {
        let ok = NurseHistory {
            nurse: NurseId(0),
            total_assignments: 0,
            total_weekends: 0,
            last_shift: Some(ShiftId(1)),
            consec_same_shift: 1,
            consec_work: 4,
            consec_off: 0,
        };
        ok.validate().unwrap();

        let mut bad = ok;
        bad.last_shift = None;
        assert!(bad.validate().is_err());

        let mut bad = ok;
        bad.consec_off = 2;
        assert!(bad.validate().is_err());

        let mut bad = ok;
        bad.consec_work = 0;
        assert!(bad.validate().is_err());

        NurseHistory::zeroed(NurseId(0)).validate().unwrap();
    }

    #[test]
    fn day_ordering_starts_monday() {
        assert_eq!(Day::Mon.index(), 0);
        assert_eq!(Day::Sun.index(), 6);
        assert_eq!(Day::parse("Thu"), Some(Day::Thu));
        assert_eq!(Day::parse("thu"), None);
        assert!(Day::Sat.is_weekend() && Day::Sun.is_weekend() && !Day::Fri.is_weekend());
    }
}
