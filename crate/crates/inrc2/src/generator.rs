//! Seeded instance generator.
//!
//! Produces a full dataset in the text format: one scenario, three initial
//! history files (one all-zero, two with randomized but valid border
//! data), and ten week data files. Coverage minima are sized so that total
//! daily demand stays within 80% of the available nurse-days, leaving
//! feasibility headroom, and every skill's demand stays within 80% of the
//! nurses holding it.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{
    resolve_scenario, Coverage, Day, History, NurseHistory, RawContract, RawNurse, RawScenario,
    RawShiftType, Requirement, Scenario, ShiftOffRequest, ShiftRequest, WeekData,
};
use crate::textio::{write_history, write_scenario, write_week_data};

#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub n_nurses: u32,
    pub n_weeks: u32,
    pub seed: u64,
    pub skill_count: u32,
    pub shift_count: u32,
    /// Fraction of (nurse, day) cells carrying a shift-off request.
    pub request_density: f64,
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.n_nurses == 0 || self.n_weeks == 0 || self.skill_count == 0 || self.shift_count == 0
        {
            return Err("all counts must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.request_density) {
            return Err("request density must lie in [0, 1]".into());
        }
        if self.skill_count > self.n_nurses {
            return Err("cannot have more skills than nurses".into());
        }
        Ok(())
    }
}

/// A complete dataset: enough material to assemble many instances.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub scenario: Scenario,
    pub initial_histories: Vec<History>,
    pub weeks: Vec<WeekData>,
}

const SKILL_POOL: [&str; 8] = [
    "HeadNurse",
    "Nurse",
    "Trainee",
    "Caretaker",
    "Midwife",
    "Anesthetist",
    "Pediatric",
    "Geriatric",
];
const SHIFT_POOL: [&str; 8] = [
    "Early", "Day", "Late", "Night", "Dawn", "Noon", "Dusk", "Standby",
];
const NAME_POOL: [&str; 20] = [
    "Patrick", "Andrea", "Stefaan", "Sara", "Nguyen", "Mary", "John", "Lucia", "Marco", "Elena",
    "Peter", "Greet", "Tommy", "Ines", "Burak", "Fatma", "Jorge", "Wei", "Amara", "Olga",
];

fn pool_name(pool: &[&str], index: usize, prefix: &str) -> String {
    match pool.get(index) {
        Some(name) => (*name).to_string(),
        None => format!("{prefix}{index}"),
    }
}

/// Deterministically generates a dataset: the same config yields the same
/// dataset, byte for byte.
pub fn generate_instance(cfg: &GeneratorConfig) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let id = format!("n{:03}w{}", cfg.n_nurses, cfg.n_weeks);

    let skills: Vec<String> = (0..cfg.skill_count as usize)
        .map(|i| pool_name(&SKILL_POOL, i, "Skill"))
        .collect();

    let shift_types: Vec<RawShiftType> = (0..cfg.shift_count as usize)
        .map(|i| {
            let min = rng.random_range(1..=2);
            RawShiftType {
                name: pool_name(&SHIFT_POOL, i, "Shift"),
                min_consecutive: min,
                max_consecutive: min + rng.random_range(1..=3),
            }
        })
        .collect();

    // Random forbidden successions, but every shift keeps at least one
    // legal successor so no border can dead-end an entire day.
    let n_shifts = cfg.shift_count as usize;
    let mut forbidden = vec![vec![false; n_shifts]; n_shifts];
    for (pred, row) in forbidden.iter_mut().enumerate() {
        for (succ, cell) in row.iter_mut().enumerate() {
            if pred != succ && rng.random_bool(0.2) {
                *cell = true;
            }
        }
        if row.iter().all(|&f| f) {
            let keep = rng.random_range(0..n_shifts);
            row[keep] = false;
        }
    }
    let successions: Vec<(String, Vec<String>)> = shift_types
        .iter()
        .enumerate()
        .map(|(pred, st)| {
            let succs = forbidden[pred]
                .iter()
                .enumerate()
                .filter(|&(_s, &f)| f).map(|(s, &_f)| shift_types[s].name.clone())
                .collect();
            (st.name.clone(), succs)
        })
        .collect();

    let weeks_total = cfg.n_weeks;
    let contracts = vec![
        RawContract {
            name: "FullTime".into(),
            total_assignments: (3 * weeks_total + weeks_total / 2, 5 * weeks_total + 2),
            consecutive_work: (rng.random_range(2..=3), rng.random_range(5..=6)),
            consecutive_off: (rng.random_range(1..=2), rng.random_range(3..=4)),
            max_working_weekends: weeks_total / 2 + 1,
            complete_weekend: rng.random_bool(0.5),
        },
        RawContract {
            name: "PartTime".into(),
            total_assignments: (weeks_total + weeks_total / 2, 3 * weeks_total + 2),
            consecutive_work: (rng.random_range(1..=2), rng.random_range(4..=5)),
            consecutive_off: (rng.random_range(1..=2), rng.random_range(4..=5)),
            max_working_weekends: weeks_total / 2 + 1,
            complete_weekend: rng.random_bool(0.5),
        },
    ];

    let nurses: Vec<RawNurse> = (0..cfg.n_nurses as usize)
        .map(|i| {
            // Base skill by rotation keeps every skill held by someone.
            let mut held = vec![skills[i % skills.len()].clone()];
            for skill in &skills {
                if !held.contains(skill) && rng.random_bool(0.5) {
                    held.push(skill.clone());
                }
            }
            held.sort_by_key(|s| skills.iter().position(|k| k == s).unwrap());
            RawNurse {
                name: pool_name(&NAME_POOL, i, "Nurse"),
                contract: if rng.random_bool(0.7) {
                    "FullTime".into()
                } else {
                    "PartTime".into()
                },
                skills: held,
            }
        })
        .collect();

    let scenario = resolve_scenario(RawScenario {
        id: id.clone(),
        num_weeks: cfg.n_weeks,
        skills,
        shift_types,
        successions,
        contracts,
        nurses,
    })
    .expect("generated scenario is well formed");

    let weeks = (0..10).map(|_| generate_week(&scenario, cfg, &mut rng)).collect();

    let mut initial_histories = Vec::with_capacity(3);
    initial_histories.push(History {
        week_index: 0,
        scenario_id: id.clone(),
        entries: scenario
            .nurse_ids()
            .map(|n| {
                let mut e = NurseHistory::zeroed(n);
                e.consec_off = 1;
                e
            })
            .collect(),
    });
    for _ in 0..2 {
        initial_histories.push(History {
            week_index: 0,
            scenario_id: id.clone(),
            entries: scenario
                .nurse_ids()
                .map(|n| {
                    let mut e = NurseHistory::zeroed(n);
                    if rng.random_bool(0.6) {
                        let shift = crate::model::ShiftId(rng.random_range(0..n_shifts));
                        e.last_shift = Some(shift);
                        e.consec_same_shift = rng.random_range(1..=2);
                        e.consec_work = e.consec_same_shift + rng.random_range(0..=2);
                    } else {
                        e.consec_off = rng.random_range(1..=4);
                    }
                    e
                })
                .collect(),
        });
    }

    Dataset {
        scenario,
        initial_histories,
        weeks,
    }
}

fn generate_week(scenario: &Scenario, cfg: &GeneratorConfig, rng: &mut ChaCha8Rng) -> WeekData {
    let n_nurses = scenario.nurses.len();
    let n_skills = scenario.skills.len();
    let n_shifts = scenario.shift_types.len();
    let holders: Vec<u32> = scenario
        .skill_ids()
        .map(|k| scenario.nurses.iter().filter(|n| n.skills.contains(&k)).count() as u32)
        .collect();

    let mut minima = vec![[0u32; 7]; n_shifts * n_skills];
    #[allow(clippy::needless_range_loop)] // `day` indexes a column across cells
    for day in 0..7 {
        let day_budget = (n_nurses * 4 / 5) as u32;
        let target = rng.random_range(0..=day_budget);
        let mut spent_per_skill = vec![0u32; n_skills];
        let mut spent = 0;
        for _ in 0..target {
            let open: Vec<usize> = (0..n_shifts * n_skills)
                .filter(|cell| {
                    let skill = cell % n_skills;
                    spent_per_skill[skill] < holders[skill] * 4 / 5
                })
                .collect();
            let Some(&cell) = open.choose(rng) else { break };
            minima[cell][day] += 1;
            spent_per_skill[cell % n_skills] += 1;
            spent += 1;
            if spent >= day_budget {
                break;
            }
        }
    }

    let mut requirements = Vec::with_capacity(n_shifts * n_skills);
    for shift in scenario.shift_ids() {
        for skill in scenario.skill_ids() {
            let cell = shift.0 * n_skills + skill.0;
            let mut per_day = [Coverage::default(); 7];
            for (d, cov) in per_day.iter_mut().enumerate() {
                let minimum = minima[cell][d];
                *cov = Coverage {
                    minimum,
                    optimal: minimum + rng.random_range(0..=1),
                };
            }
            requirements.push(Requirement {
                shift,
                skill,
                per_day,
            });
        }
    }

    let mut requests = Vec::new();
    for nurse in scenario.nurse_ids() {
        for day in Day::ALL {
            if rng.random_bool(cfg.request_density) {
                let shift = if rng.random_bool(1.0 / 3.0) {
                    ShiftRequest::Any
                } else {
                    ShiftRequest::Shift(crate::model::ShiftId(rng.random_range(0..n_shifts)))
                };
                requests.push(ShiftOffRequest { nurse, shift, day });
            }
        }
    }

    WeekData::new(scenario, scenario.id.clone(), requirements, requests)
        .expect("generated week data is well formed")
}

/// Writes the dataset with the conventional file names and returns them:
/// `Sc-<id>.txt`, `H0-<id>-{0,1,2}.txt`, `WD-<id>-{0..9}.txt`.
pub fn write_dataset(dataset: &Dataset, dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let id = &dataset.scenario.id;
    let mut paths = Vec::new();

    let path = dir.join(format!("Sc-{id}.txt"));
    fs::write(&path, write_scenario(&dataset.scenario))?;
    paths.push(path);

    for (i, history) in dataset.initial_histories.iter().enumerate() {
        let path = dir.join(format!("H0-{id}-{i}.txt"));
        fs::write(&path, write_history(history, &dataset.scenario))?;
        paths.push(path);
    }
    for (i, week) in dataset.weeks.iter().enumerate() {
        let path = dir.join(format!("WD-{id}-{i}.txt"));
        fs::write(&path, write_week_data(week, &dataset.scenario))?;
        paths.push(path);
    }
    Ok(paths)
}
