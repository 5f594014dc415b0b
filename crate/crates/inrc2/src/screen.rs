//! Necessary-condition feasibility screen.
//!
//! A fast counting check that catches instances which cannot possibly have
//! a hard-feasible solution: skill demand above the number of holders,
//! daily demand above the number of nurses, or a history that locks a
//! needed nurse out of Monday. Passing the screen does not certify
//! feasibility.

use std::fmt;

use crate::model::{Day, History, Scenario, SkillId, WeekData};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScreenOutcome {
    Pass,
    Fail(ScreenReason),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScreenReason {
    /// Some (shift, skill, day) minimum exceeds the nurses holding the skill.
    SkillShortage {
        shift: String,
        skill: String,
        day: Day,
        minimum: u32,
        holders: u32,
    },
    /// Some day's total minimum exceeds the number of nurses.
    DayOverload {
        day: Day,
        required: u32,
        nurses: u32,
    },
    /// Nurses locked out of Monday by their border shift are needed to
    /// meet Monday's minimum.
    BlockedNurses {
        blocked: Vec<String>,
        required: u32,
        available: u32,
    },
}

impl fmt::Display for ScreenReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScreenReason::SkillShortage {
                shift,
                skill,
                day,
                minimum,
                holders,
            } => write!(
                f,
                "minimum coverage {minimum} for ({shift}, {skill}) on {day} exceeds the {holders} nurse(s) holding the skill"
            ),
            ScreenReason::DayOverload {
                day,
                required,
                nurses,
            } => write!(
                f,
                "total minimum coverage {required} on {day} exceeds the {nurses} available nurse(s)"
            ),
            ScreenReason::BlockedNurses {
                blocked,
                required,
                available,
            } => write!(
                f,
                "history blocks {} from any Monday shift, leaving {available} nurse(s) for a minimum demand of {required}",
                blocked.join(", ")
            ),
        }
    }
}

fn holders(scenario: &Scenario, skill: SkillId) -> u32 {
    scenario
        .nurses
        .iter()
        .filter(|n| n.skills.contains(&skill))
        .count() as u32
}

/// Checks the necessary conditions. `Fail` means no hard-feasible solution
/// exists; `Pass` promises nothing.
pub fn feasibility_screen(
    scenario: &Scenario,
    week: &WeekData,
    history: &History,
) -> ScreenOutcome {
    // (a) Per-cell skill demand.
    for req in &week.requirements {
        let held = holders(scenario, req.skill);
        for (d, cov) in req.per_day.iter().enumerate() {
            if cov.minimum > held {
                return ScreenOutcome::Fail(ScreenReason::SkillShortage {
                    shift: scenario.shift_name(req.shift).to_string(),
                    skill: scenario.skill_name(req.skill).to_string(),
                    day: Day::from_index(d).unwrap(),
                    minimum: cov.minimum,
                    holders: held,
                });
            }
        }
    }

    // (b) Per-day total demand.
    let nurses = scenario.nurses.len() as u32;
    for day in Day::ALL {
        let required: u32 = week
            .requirements
            .iter()
            .map(|r| r.per_day[day.index()].minimum)
            .sum();
        if required > nurses {
            return ScreenOutcome::Fail(ScreenReason::DayOverload {
                day,
                required,
                nurses,
            });
        }
    }

    // (c) Nurses whose border shift forbids every Monday shift cannot work
    // Monday at all; if Monday's demand needs them, the instance is dead.
    let blocked: Vec<_> = scenario
        .nurse_ids()
        .filter(|&n| {
            history.of(n).last_shift.is_some_and(|last| {
                scenario
                    .shift_ids()
                    .all(|s| scenario.successions.is_forbidden(last, s))
            })
        })
        .collect();
    if !blocked.is_empty() {
        let monday_total: u32 = week
            .requirements
            .iter()
            .map(|r| r.per_day[0].minimum)
            .sum();
        let available = nurses - blocked.len() as u32;
        if monday_total > available {
            return ScreenOutcome::Fail(ScreenReason::BlockedNurses {
                blocked: blocked
                    .iter()
                    .map(|&n| scenario.nurse_name(n).to_string())
                    .collect(),
                required: monday_total,
                available,
            });
        }
        for req in &week.requirements {
            let minimum = req.per_day[0].minimum;
            let free_holders = scenario
                .nurse_ids()
                .filter(|n| scenario.nurses[n.0].skills.contains(&req.skill))
                .filter(|n| !blocked.contains(n))
                .count() as u32;
            if minimum > free_holders {
                return ScreenOutcome::Fail(ScreenReason::BlockedNurses {
                    blocked: blocked
                        .iter()
                        .map(|&n| scenario.nurse_name(n).to_string())
                        .collect(),
                    required: minimum,
                    available: free_holders,
                });
            }
        }
    }

    ScreenOutcome::Pass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        resolve_scenario, Coverage, NurseHistory, NurseId, RawContract, RawNurse, RawScenario,
        RawShiftType, Requirement,
    };

    fn scenario() -> Scenario {
        resolve_scenario(RawScenario {
            id: "n003w1".into(),
            num_weeks: 1,
            skills: vec!["HeadNurse".into(), "Nurse".into()],
            shift_types: vec![
                RawShiftType {
                    name: "Early".into(),
                    min_consecutive: 1,
                    max_consecutive: 5,
                },
                RawShiftType {
                    name: "Late".into(),
                    min_consecutive: 1,
                    max_consecutive: 5,
                },
            ],
            // After a Late, nothing is allowed: blocks the next Monday.
            successions: vec![("Late".into(), vec!["Early".into(), "Late".into()])],
            contracts: vec![RawContract {
                name: "Std".into(),
                total_assignments: (0, 7),
                consecutive_work: (1, 7),
                consecutive_off: (1, 7),
                max_working_weekends: 1,
                complete_weekend: false,
            }],
            nurses: vec![
                RawNurse {
                    name: "Ann".into(),
                    contract: "Std".into(),
                    skills: vec!["HeadNurse".into(), "Nurse".into()],
                },
                RawNurse {
                    name: "Ben".into(),
                    contract: "Std".into(),
                    skills: vec!["Nurse".into()],
                },
                RawNurse {
                    name: "Cem".into(),
                    contract: "Std".into(),
                    skills: vec!["Nurse".into()],
                },
            ],
        })
        .unwrap()
    }

    fn week(scenario: &Scenario, cells: &[(usize, usize, usize, u32)]) -> WeekData {
        let mut requirements = Vec::new();
        for shift in scenario.shift_ids() {
            for skill in scenario.skill_ids() {
                let mut per_day = [Coverage::default(); 7];
                for &(s, k, d, m) in cells {
                    if s == shift.0 && k == skill.0 {
                        per_day[d] = Coverage {
                            minimum: m,
                            optimal: m,
                        };
                    }
                }
                requirements.push(Requirement {
                    shift,
                    skill,
                    per_day,
                });
            }
        }
        WeekData::new(scenario, scenario.id.clone(), requirements, vec![]).unwrap()
    }

    fn rested(scenario: &Scenario) -> History {
        History {
            week_index: 0,
            scenario_id: scenario.id.clone(),
            entries: scenario
                .nurse_ids()
                .map(|n| {
                    let mut e = NurseHistory::zeroed(n);
                    e.consec_off = 1;
                    e
                })
                .collect(),
        }
    }

    #[test]
    fn skill_shortage_fails() {
        let scenario = scenario();
        // Three head nurses wanted, one exists.
        let week = week(&scenario, &[(0, 0, 2, 3)]);
        match feasibility_screen(&scenario, &week, &rested(&scenario)) {
            ScreenOutcome::Fail(ScreenReason::SkillShortage {
                minimum: 3,
                holders: 1,
                ..
            }) => {}
            other => panic!("expected skill shortage, got {other:?}"),
        }
    }

    #[test]
    fn all_zero_minimums_pass() {
        let scenario = scenario();
        let week = week(&scenario, &[]);
        assert_eq!(
            feasibility_screen(&scenario, &week, &rested(&scenario)),
            ScreenOutcome::Pass
        );
    }

    #[test]
    fn day_overload_fails() {
        let scenario = scenario();
        let week = week(&scenario, &[(0, 1, 4, 2), (1, 1, 4, 2)]);
        match feasibility_screen(&scenario, &week, &rested(&scenario)) {
            ScreenOutcome::Fail(ScreenReason::DayOverload {
                required: 4,
                nurses: 3,
                ..
            }) => {}
            other => panic!("expected day overload, got {other:?}"),
        }
    }

    #[test]
    fn blocked_nurse_fails_when_needed_on_monday() {
        let scenario = scenario();
        // Ann is the only head nurse and ended the week on Late, which
        // forbids every successor; Monday needs a head nurse.
        let monday = week(&scenario, &[(0, 0, 0, 1)]);
        let mut history = rested(&scenario);
        history.entries[0] = NurseHistory {
            nurse: NurseId(0),
            total_assignments: 0,
            total_weekends: 0,
            last_shift: scenario.shift_id("Late"),
            consec_same_shift: 1,
            consec_work: 1,
            consec_off: 0,
        };
        match feasibility_screen(&scenario, &monday, &history) {
            ScreenOutcome::Fail(ScreenReason::BlockedNurses { blocked, .. }) => {
                assert_eq!(blocked, vec!["Ann".to_string()])
            }
            other => panic!("expected blocked nurse, got {other:?}"),
        }
        // Tuesday demand instead: the border does not reach it.
        let tuesday = week(&scenario, &[(0, 0, 1, 1)]);
        assert_eq!(
            feasibility_screen(&scenario, &tuesday, &history),
            ScreenOutcome::Pass
        );
    }
}
