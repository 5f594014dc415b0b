//! Validator report rendering.
//!
//! Produces the text report of a horizon evaluation: a roster grid (one
//! letter per shift per day, `-` for a day off, one block per week), the
//! hard violation counts, the cost per constraint type, and the total.

use crate::evaluation::{canonical_patterns, nurse_series_units, HorizonReport};
use crate::model::{Day, History, Scenario, ShiftRequest, Solution, WeekData};

/// Display token per shift type: the shortest prefix (uppercased) that is
/// unique among the shift names, usually a single letter.
pub fn shift_tokens(scenario: &Scenario) -> Vec<String> {
    let names: Vec<String> = scenario
        .shift_types
        .iter()
        .map(|s| s.name.to_uppercase())
        .collect();
    names
        .iter()
        .map(|name| {
            for len in 1..=name.len() {
                let prefix = &name[..len];
                let unique = names
                    .iter()
                    .filter(|other| other.len() >= len && &other[..len] == prefix)
                    .count()
                    == 1;
                if unique {
                    return prefix.to_string();
                }
            }
            name.clone()
        })
        .collect()
}

fn pad(text: &str, width: usize) -> String {
    format!("{text:<width$}")
}

/// Renders the full validator report. `verbose` adds a per-nurse breakdown
/// of every nonzero soft violation.
pub fn render_report(
    scenario: &Scenario,
    initial: &History,
    weeks: &[WeekData],
    solutions: &[Solution],
    horizon: &HorizonReport,
    verbose: bool,
) -> String {
    let tokens = shift_tokens(scenario);
    let cell = tokens.iter().map(|t| t.len()).max().unwrap_or(1).max(1);
    let name_width = scenario
        .nurses
        .iter()
        .map(|n| n.name.len())
        .max()
        .unwrap_or(0)
        + 1;

    let mut out = String::new();

    // Header: one block of day initials per week.
    let day_letters = ["M", "T", "W", "T", "F", "S", "S"];
    let week_block = |cells: &[String]| -> String {
        let mut block = String::from("|");
        for c in cells {
            block.push_str(&pad(c, cell));
            block.push('|');
        }
        block
    };
    let header_cells: Vec<String> = day_letters.iter().map(|d| d.to_string()).collect();
    out.push_str(&" ".repeat(name_width));
    for w in 0..solutions.len() {
        if w > 0 {
            out.push(' ');
        }
        out.push_str(&week_block(&header_cells));
    }
    out.push('\n');
    let width = out.len() - 1;
    out.push_str(&"-".repeat(width));
    out.push('\n');

    let patterns: Vec<_> = solutions
        .iter()
        .map(|s| canonical_patterns(scenario, s))
        .collect();
    for nurse in scenario.nurse_ids() {
        out.push_str(&pad(scenario.nurse_name(nurse), name_width));
        for (w, weekly) in patterns.iter().enumerate() {
            if w > 0 {
                out.push(' ');
            }
            let cells: Vec<String> = (0..7)
                .map(|d| match weekly[nurse.0][d] {
                    Some((shift, _)) => tokens[shift.0].clone(),
                    None => "-".to_string(),
                })
                .collect();
            out.push_str(&week_block(&cells));
        }
        out.push('\n');
    }

    let hard = &horizon.total.hard;
    out.push_str("\nHard constraint violations\n");
    out.push_str("--------------------------\n");
    out.push_str(&format!("Minimal coverage constraints: {}\n", hard.understaffing));
    out.push_str(&format!("Required skill constraints: {}\n", hard.missing_skill));
    out.push_str(&format!(
        "Illegal shift type succession constraints: {}\n",
        hard.succession
    ));
    out.push_str(&format!("Single assignment per day: {}\n", hard.single_assignment));

    let soft = &horizon.total.soft;
    out.push_str("\nCost per constraint type\n");
    out.push_str("------------------------\n");
    out.push_str(&format!(
        "Total assignment constraints: {}\n",
        soft.s6_total_assignments
    ));
    out.push_str(&format!(
        "Consecutive constraints: {}\n",
        soft.s2_consecutive_shift + soft.s2_consecutive_work
    ));
    out.push_str(&format!(
        "Non working days constraints: {}\n",
        soft.s3_consecutive_off
    ));
    out.push_str(&format!("Preferences: {}\n", soft.s4_preference));
    out.push_str(&format!("Max working weekend: {}\n", soft.s7_total_weekends));
    out.push_str(&format!("Complete weekends: {}\n", soft.s5_complete_weekend));
    out.push_str(&format!(
        "Optimal coverage constraints: {}\n",
        soft.s1_optimal_coverage
    ));

    if verbose {
        out.push_str(&render_verbose(scenario, initial, weeks, solutions, horizon));
    }

    out.push_str("\n------------------------\n");
    out.push_str(&format!("Total cost: {}\n", horizon.total.total_cost()));
    out
}

fn render_verbose(
    scenario: &Scenario,
    initial: &History,
    weeks: &[WeekData],
    solutions: &[Solution],
    horizon: &HorizonReport,
) -> String {
    let mut out = String::from("\nPer-nurse violations\n--------------------\n");
    let mut history = initial.clone();
    for (w, (week, solution)) in weeks.iter().zip(solutions).enumerate() {
        let patterns = canonical_patterns(scenario, solution);
        let mut lines = Vec::new();
        for nurse in scenario.nurse_ids() {
            let pattern = &patterns[nurse.0];
            let units = nurse_series_units(scenario, history.of(nurse), pattern);
            let mut parts = Vec::new();
            if units.work > 0 {
                parts.push(format!("consecutive work {}", units.work));
            }
            if units.same_shift > 0 {
                parts.push(format!("consecutive shift {}", units.same_shift));
            }
            if units.off > 0 {
                parts.push(format!("consecutive off {}", units.off));
            }
            let broken_requests = week
                .requests
                .iter()
                .filter(|r| r.nurse == nurse)
                .filter(|r| match r.shift {
                    ShiftRequest::Any => pattern[r.day.index()].is_some(),
                    ShiftRequest::Shift(s) => {
                        matches!(pattern[r.day.index()], Some((worked, _)) if worked == s)
                    }
                })
                .count();
            if broken_requests > 0 {
                parts.push(format!("preferences {broken_requests}"));
            }
            let sat = pattern[Day::Sat.index()].is_some();
            let sun = pattern[Day::Sun.index()].is_some();
            if scenario.contract_of(nurse).complete_weekend && sat != sun {
                parts.push("incomplete weekend".to_string());
            }
            if !parts.is_empty() {
                lines.push(format!("  {}: {}\n", scenario.nurse_name(nurse), parts.join(", ")));
            }
        }
        if !lines.is_empty() {
            out.push_str(&format!("Week {w}\n"));
            for line in lines {
                out.push_str(&line);
            }
        }
        history = crate::evaluation::advance_history(&history, solution, scenario)
            .unwrap_or_else(|_| history.clone());
    }

    let mut counter_lines = Vec::new();
    for nurse in scenario.nurse_ids() {
        let contract = scenario.contract_of(nurse);
        let entry = horizon.final_history.of(nurse);
        let mut parts = Vec::new();
        let dist = contract.total_assignments.distance(entry.total_assignments);
        if dist > 0 {
            let side = if entry.total_assignments < contract.total_assignments.min {
                "under"
            } else {
                "over"
            };
            parts.push(format!("total assignments {dist} {side}"));
        }
        let excess = entry
            .total_weekends
            .saturating_sub(contract.max_working_weekends);
        if excess > 0 {
            parts.push(format!("working weekends {excess} over"));
        }
        if !parts.is_empty() {
            counter_lines.push(format!("  {}: {}\n", scenario.nurse_name(nurse), parts.join(", ")));
        }
    }
    if !counter_lines.is_empty() {
        out.push_str("Counters\n");
        for line in counter_lines {
            out.push_str(&line);
        }
    }
    out
}
