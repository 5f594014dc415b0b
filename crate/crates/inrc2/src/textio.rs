//! Readers and writers for the text-only instance file formats.
//!
//! Four file kinds exist: scenario, week data, history, and solution. The
//! grammar is line oriented and space delimited; any run of spaces or tabs
//! separates tokens, trailing whitespace is tolerated, and blank lines
//! between sections are ignored. The file kind is always chosen by the
//! caller, never sniffed from content.
//!
//! Every writer produces text that parses back to an equal value, and the
//! parsers never panic on arbitrary input: all failures surface as
//! [`FormatError`] or a resolution error from the model layer.

use std::fmt;

use thiserror::Error;

use crate::model::{
    resolve_scenario, Assignment, Coverage, Day, History, ModelError, NurseHistory, RawContract,
    RawNurse, RawScenario, RawShiftType, Requirement, Scenario, ShiftOffRequest, ShiftRequest,
    Solution, WeekData,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Scenario,
    Week,
    History,
    Solution,
}

impl fmt::Display for FileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FileKind::Scenario => "scenario",
            FileKind::Week => "week data",
            FileKind::History => "history",
            FileKind::Solution => "solution",
        })
    }
}

/// Syntax error, pointing at the first offending line (1-based).
#[derive(Debug, Error, PartialEq, Eq)]
#[error("{file_kind} file, line {line}: {message}")]
pub struct FormatError {
    pub file_kind: FileKind,
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum TextError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Cursor over the non-blank lines of a file, tracking 1-based numbers.
struct Lines<'a> {
    kind: FileKind,
    lines: Vec<(usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(kind: FileKind, text: &'a str) -> Lines<'a> {
        let mut lines = Vec::new();
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            last_line = i + 1;
            let trimmed = raw.trim();
            if !trimmed.is_empty() {
                lines.push((i + 1, trimmed));
            }
        }
        Lines {
            kind,
            lines,
            pos: 0,
            last_line,
        }
    }

    fn err(&self, line: usize, message: impl Into<String>) -> FormatError {
        FormatError {
            file_kind: self.kind,
            line,
            message: message.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str), FormatError> {
        match self.lines.get(self.pos) {
            Some(&(n, s)) => {
                self.pos += 1;
                Ok((n, s))
            }
            None => Err(self.err(
                self.last_line + 1,
                format!("unexpected end of file, expected {what}"),
            )),
        }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    /// Consumes a `KEY = value` header; `=` may carry any amount of space
    /// around it, including none.
    fn header_value(&mut self, key: &str) -> Result<(usize, &'a str), FormatError> {
        let (n, line) = self.next(&format!("`{key} = ...`"))?;
        let rest = line
            .strip_prefix(key)
            .ok_or_else(|| self.err(n, format!("expected `{key} = ...`, found `{line}`")))?;
        let rest = rest.trim_start();
        let value = rest
            .strip_prefix('=')
            .ok_or_else(|| self.err(n, format!("expected `=` after {key}")))?
            .trim();
        if value.is_empty() {
            return Err(self.err(n, format!("missing value after `{key} =`")));
        }
        Ok((n, value))
    }

    fn header_count(&mut self, key: &str) -> Result<(usize, usize), FormatError> {
        let (n, value) = self.header_value(key)?;
        let count = value
            .parse::<usize>()
            .map_err(|_| self.err(n, format!("`{key}` expects a nonnegative count, found `{value}`")))?;
        Ok((n, count))
    }

    fn bare_header(&mut self, key: &str) -> Result<usize, FormatError> {
        let (n, line) = self.next(&format!("`{key}`"))?;
        if line != key {
            return Err(self.err(n, format!("expected `{key}`, found `{line}`")));
        }
        Ok(n)
    }

    fn expect_eof(&mut self) -> Result<(), FormatError> {
        if let Some((n, line)) = self.peek() {
            return Err(self.err(n, format!("unexpected trailing content: `{line}`")));
        }
        Ok(())
    }
}

fn tokens(line: &str) -> Vec<&str> {
    line.split_whitespace().collect()
}

/// Parses `(a,b)` into a pair of numbers.
fn parse_pair(
    lines: &Lines<'_>,
    line_no: usize,
    token: &str,
    what: &str,
) -> Result<(u32, u32), FormatError> {
    let bad = || {
        lines.err(
            line_no,
            format!("expected {what} as `(min,max)`, found `{token}`"),
        )
    };
    let inner = token
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(bad)?;
    let (a, b) = inner.split_once(',').ok_or_else(bad)?;
    Ok((
        a.parse().map_err(|_| bad())?,
        b.parse().map_err(|_| bad())?,
    ))
}

fn parse_u32(lines: &Lines<'_>, line_no: usize, token: &str, what: &str) -> Result<u32, FormatError> {
    token.parse::<u32>().map_err(|_| {
        lines.err(
            line_no,
            format!("expected {what} as a nonnegative integer, found `{token}`"),
        )
    })
}

fn single_token<'a>(
    lines: &Lines<'_>,
    line_no: usize,
    value: &'a str,
    what: &str,
) -> Result<&'a str, FormatError> {
    let toks = tokens(value);
    if toks.len() != 1 {
        return Err(lines.err(line_no, format!("expected a single {what} token")));
    }
    Ok(toks[0])
}

/// Parses a scenario file and resolves it against itself.
pub fn parse_scenario(text: &str) -> Result<Scenario, TextError> {
    let mut lines = Lines::new(FileKind::Scenario, text);
    let mut raw = RawScenario::default();

    let (n, id) = lines.header_value("SCENARIO")?;
    raw.id = single_token(&lines, n, id, "scenario id")?.to_string();

    let (n, weeks) = lines.header_value("WEEKS")?;
    raw.num_weeks = parse_u32(&lines, n, single_token(&lines, n, weeks, "week count")?, "WEEKS")?;

    let (_, n_skills) = lines.header_count("SKILLS")?;
    for _ in 0..n_skills {
        let (n, line) = lines.next("a skill name")?;
        raw.skills
            .push(single_token(&lines, n, line, "skill name")?.to_string());
    }

    let (_, n_shifts) = lines.header_count("SHIFT_TYPES")?;
    for _ in 0..n_shifts {
        let (n, line) = lines.next("a shift type line")?;
        let toks = tokens(line);
        if toks.len() != 2 {
            return Err(lines
                .err(n, format!("expected `Name (min,max)`, found `{line}`"))
                .into());
        }
        let (min, max) = parse_pair(&lines, n, toks[1], "consecutive bounds")?;
        raw.shift_types.push(RawShiftType {
            name: toks[0].to_string(),
            min_consecutive: min,
            max_consecutive: max,
        });
    }

    lines.bare_header("FORBIDDEN_SHIFT_TYPES_SUCCESSIONS")?;
    while let Some((n, line)) = lines.peek() {
        if line.starts_with("CONTRACTS") {
            break;
        }
        lines.next("")?;
        let toks = tokens(line);
        if toks.len() < 2 {
            return Err(lines
                .err(n, "expected `Shift K succ1 .. succK`".to_string())
                .into());
        }
        let count = parse_u32(&lines, n, toks[1], "succession count")? as usize;
        if toks.len() != 2 + count {
            return Err(lines
                .err(
                    n,
                    format!(
                        "succession line declares {count} successors but lists {}",
                        toks.len() - 2
                    ),
                )
                .into());
        }
        raw.successions.push((
            toks[0].to_string(),
            toks[2..].iter().map(|s| s.to_string()).collect(),
        ));
    }

    let (_, n_contracts) = lines.header_count("CONTRACTS")?;
    for _ in 0..n_contracts {
        let (n, line) = lines.next("a contract line")?;
        let toks = tokens(line);
        if toks.len() != 6 {
            return Err(lines
                .err(
                    n,
                    format!("expected `Name (a,b) (c,d) (e,f) W B`, found `{line}`"),
                )
                .into());
        }
        let complete = match toks[5] {
            "0" => false,
            "1" => true,
            other => {
                return Err(lines
                    .err(n, format!("complete-weekend flag must be 0 or 1, found `{other}`"))
                    .into())
            }
        };
        raw.contracts.push(RawContract {
            name: toks[0].to_string(),
            total_assignments: parse_pair(&lines, n, toks[1], "total assignments")?,
            consecutive_work: parse_pair(&lines, n, toks[2], "consecutive working days")?,
            consecutive_off: parse_pair(&lines, n, toks[3], "consecutive days off")?,
            max_working_weekends: parse_u32(&lines, n, toks[4], "maximum working weekends")?,
            complete_weekend: complete,
        });
    }

    let (_, n_nurses) = lines.header_count("NURSES")?;
    for _ in 0..n_nurses {
        let (n, line) = lines.next("a nurse line")?;
        let toks = tokens(line);
        if toks.len() < 3 {
            return Err(lines
                .err(n, format!("expected `Name Contract K skill1 .. skillK`, found `{line}`"))
                .into());
        }
        let count = parse_u32(&lines, n, toks[2], "skill count")? as usize;
        if toks.len() != 3 + count {
            return Err(lines
                .err(
                    n,
                    format!("nurse line declares {count} skills but lists {}", toks.len() - 3),
                )
                .into());
        }
        raw.nurses.push(RawNurse {
            name: toks[0].to_string(),
            contract: toks[1].to_string(),
            skills: toks[3..].iter().map(|s| s.to_string()).collect(),
        });
    }

    lines.expect_eof()?;
    Ok(resolve_scenario(raw)?)
}

/// Parses a week data file against a resolved scenario.
pub fn parse_week_data(text: &str, scenario: &Scenario) -> Result<WeekData, TextError> {
    let mut lines = Lines::new(FileKind::Week, text);
    lines.bare_header("WEEK_DATA")?;
    let (n, id_line) = lines.next("the scenario id")?;
    let id = single_token(&lines, n, id_line, "scenario id")?;
    if id != scenario.id {
        return Err(lines
            .err(n, format!("scenario id `{id}` does not match `{}`", scenario.id))
            .into());
    }

    lines.bare_header("REQUIREMENTS")?;
    let mut requirements = Vec::new();
    while let Some((n, line)) = lines.peek() {
        if line.starts_with("SHIFT_OFF_REQUESTS") {
            break;
        }
        lines.next("")?;
        let toks = tokens(line);
        if toks.len() != 9 {
            return Err(lines
                .err(n, format!("expected `Shift Skill` plus 7 coverage pairs, found `{line}`"))
                .into());
        }
        let shift = scenario.shift_id(toks[0]).ok_or(ModelError::UnknownReference {
            kind: "shift type",
            name: toks[0].to_string(),
        })?;
        let skill = scenario.skill_id(toks[1]).ok_or(ModelError::UnknownReference {
            kind: "skill",
            name: toks[1].to_string(),
        })?;
        let mut per_day = [Coverage::default(); 7];
        for (d, tok) in toks[2..].iter().enumerate() {
            let (minimum, optimal) = parse_pair(&lines, n, tok, "coverage")?;
            per_day[d] = Coverage { minimum, optimal };
        }
        requirements.push(Requirement {
            shift,
            skill,
            per_day,
        });
    }

    let (_, n_requests) = lines.header_count("SHIFT_OFF_REQUESTS")?;
    let mut requests: Vec<ShiftOffRequest> = Vec::with_capacity(n_requests);
    for _ in 0..n_requests {
        let (n, line) = lines.next("a shift-off request")?;
        let toks = tokens(line);
        if toks.len() != 3 {
            return Err(lines
                .err(n, format!("expected `Nurse Shift Day`, found `{line}`"))
                .into());
        }
        let nurse = scenario.nurse_id(toks[0]).ok_or(ModelError::UnknownReference {
            kind: "nurse",
            name: toks[0].to_string(),
        })?;
        let shift = if toks[1] == "Any" {
            ShiftRequest::Any
        } else {
            ShiftRequest::Shift(scenario.shift_id(toks[1]).ok_or(
                ModelError::UnknownReference {
                    kind: "shift type",
                    name: toks[1].to_string(),
                },
            )?)
        };
        let day = Day::parse(toks[2])
            .ok_or_else(|| lines.err(n, format!("unknown day `{}`", toks[2])))?;
        let request = ShiftOffRequest { nurse, shift, day };
        // Requests have set semantics; exact duplicates collapse.
        if !requests.contains(&request) {
            requests.push(request);
        }
    }

    lines.expect_eof()?;
    Ok(WeekData::new(scenario, id.to_string(), requirements, requests)?)
}

/// Parses a history file against a resolved scenario. Requires exactly one
/// line per scenario nurse; entries are returned in nurse id order.
pub fn parse_history(text: &str, scenario: &Scenario) -> Result<History, TextError> {
    let mut lines = Lines::new(FileKind::History, text);
    lines.bare_header("HISTORY")?;
    let (n, head) = lines.next("`<week> <scenario id>`")?;
    let toks = tokens(head);
    if toks.len() != 2 {
        return Err(lines
            .err(n, format!("expected `<week> <scenario id>`, found `{head}`"))
            .into());
    }
    let week_index = parse_u32(&lines, n, toks[0], "week index")?;
    if toks[1] != scenario.id {
        return Err(lines
            .err(n, format!("scenario id `{}` does not match `{}`", toks[1], scenario.id))
            .into());
    }
    if week_index > scenario.num_weeks {
        return Err(lines
            .err(
                n,
                format!("week index {week_index} exceeds the {}-week horizon", scenario.num_weeks),
            )
            .into());
    }

    lines.bare_header("NURSE_HISTORY")?;
    let mut entries: Vec<Option<NurseHistory>> = vec![None; scenario.nurses.len()];
    while let Some((n, line)) = lines.peek() {
        lines.next("")?;
        let toks = tokens(line);
        if toks.len() != 7 {
            return Err(lines
                .err(n, format!("expected 7 history fields, found {}", toks.len()))
                .into());
        }
        let nurse = scenario.nurse_id(toks[0]).ok_or(ModelError::UnknownReference {
            kind: "nurse",
            name: toks[0].to_string(),
        })?;
        let last_shift = if toks[3] == "None" {
            None
        } else {
            Some(scenario.shift_id(toks[3]).ok_or(ModelError::UnknownReference {
                kind: "shift type",
                name: toks[3].to_string(),
            })?)
        };
        let entry = NurseHistory {
            nurse,
            total_assignments: parse_u32(&lines, n, toks[1], "total assignments")?,
            total_weekends: parse_u32(&lines, n, toks[2], "total weekends")?,
            last_shift,
            consec_same_shift: parse_u32(&lines, n, toks[4], "consecutive same-shift days")?,
            consec_work: parse_u32(&lines, n, toks[5], "consecutive working days")?,
            consec_off: parse_u32(&lines, n, toks[6], "consecutive days off")?,
        };
        entry
            .validate()
            .map_err(|e| lines.err(n, e.to_string()))?;
        if entries[nurse.0].is_some() {
            return Err(lines
                .err(n, format!("duplicate history line for nurse {}", toks[0]))
                .into());
        }
        entries[nurse.0] = Some(entry);
    }

    let mut resolved = Vec::with_capacity(entries.len());
    for (i, entry) in entries.into_iter().enumerate() {
        match entry {
            Some(e) => resolved.push(e),
            None => {
                return Err(lines
                    .err(
                        lines.last_line,
                        format!("missing history line for nurse {}", scenario.nurses[i].name),
                    )
                    .into())
            }
        }
    }

    Ok(History {
        week_index,
        scenario_id: scenario.id.clone(),
        entries: resolved,
    })
}

/// Parses a solution file against a resolved scenario. Assignment order is
/// preserved; multiple assignments per (nurse, day) are accepted here and
/// reported by the evaluator as H1 violations.
pub fn parse_solution(text: &str, scenario: &Scenario) -> Result<Solution, TextError> {
    let mut lines = Lines::new(FileKind::Solution, text);
    lines.bare_header("SOLUTION")?;
    let (n, head) = lines.next("`<week> <scenario id>`")?;
    let toks = tokens(head);
    if toks.len() != 2 {
        return Err(lines
            .err(n, format!("expected `<week> <scenario id>`, found `{head}`"))
            .into());
    }
    let week_index = parse_u32(&lines, n, toks[0], "week index")?;
    if toks[1] != scenario.id {
        return Err(lines
            .err(n, format!("scenario id `{}` does not match `{}`", toks[1], scenario.id))
            .into());
    }

    let (_, count) = lines.header_count("ASSIGNMENTS")?;
    let mut assignments = Vec::with_capacity(count);
    for _ in 0..count {
        let (n, line) = lines.next("an assignment line")?;
        let toks = tokens(line);
        if toks.len() != 4 {
            return Err(lines
                .err(n, format!("expected `Nurse Day Shift Skill`, found `{line}`"))
                .into());
        }
        let nurse = scenario.nurse_id(toks[0]).ok_or(ModelError::UnknownReference {
            kind: "nurse",
            name: toks[0].to_string(),
        })?;
        let day = Day::parse(toks[1])
            .ok_or_else(|| lines.err(n, format!("unknown day `{}`", toks[1])))?;
        let shift = scenario.shift_id(toks[2]).ok_or(ModelError::UnknownReference {
            kind: "shift type",
            name: toks[2].to_string(),
        })?;
        let skill = scenario.skill_id(toks[3]).ok_or(ModelError::UnknownReference {
            kind: "skill",
            name: toks[3].to_string(),
        })?;
        assignments.push(Assignment {
            nurse,
            day,
            shift,
            skill,
        });
    }

    lines.expect_eof()?;
    Ok(Solution {
        week_index,
        scenario_id: scenario.id.clone(),
        assignments,
    })
}

pub fn write_scenario(scenario: &Scenario) -> String {
    let mut out = String::new();
    out.push_str(&format!("SCENARIO = {}\n\n", scenario.id));
    out.push_str(&format!("WEEKS = {}\n\n", scenario.num_weeks));
    out.push_str(&format!("SKILLS = {}\n", scenario.skills.len()));
    for skill in &scenario.skills {
        out.push_str(skill);
        out.push('\n');
    }
    out.push_str(&format!("\nSHIFT_TYPES = {}\n", scenario.shift_types.len()));
    for st in &scenario.shift_types {
        out.push_str(&format!(
            "{} ({},{})\n",
            st.name, st.consecutive.min, st.consecutive.max
        ));
    }
    out.push_str("\nFORBIDDEN_SHIFT_TYPES_SUCCESSIONS\n");
    for pred in scenario.shift_ids() {
        let succs: Vec<&str> = scenario
            .successions
            .forbidden_after(pred)
            .map(|s| scenario.shift_name(s))
            .collect();
        out.push_str(scenario.shift_name(pred));
        out.push_str(&format!(" {}", succs.len()));
        for s in succs {
            out.push(' ');
            out.push_str(s);
        }
        out.push('\n');
    }
    out.push_str(&format!("\nCONTRACTS = {}\n", scenario.contracts.len()));
    for c in &scenario.contracts {
        out.push_str(&format!(
            "{} ({},{}) ({},{}) ({},{}) {} {}\n",
            c.name,
            c.total_assignments.min,
            c.total_assignments.max,
            c.consecutive_work.min,
            c.consecutive_work.max,
            c.consecutive_off.min,
            c.consecutive_off.max,
            c.max_working_weekends,
            if c.complete_weekend { 1 } else { 0 }
        ));
    }
    out.push_str(&format!("\nNURSES = {}\n", scenario.nurses.len()));
    for n in &scenario.nurses {
        out.push_str(&format!(
            "{} {} {}",
            n.name,
            scenario.contracts[n.contract.0].name,
            n.skills.len()
        ));
        for &sk in &n.skills {
            out.push(' ');
            out.push_str(scenario.skill_name(sk));
        }
        out.push('\n');
    }
    out
}

pub fn write_week_data(week: &WeekData, scenario: &Scenario) -> String {
    let mut out = String::new();
    out.push_str(&format!("WEEK_DATA\n{}\n\nREQUIREMENTS\n", week.scenario_id));
    for req in &week.requirements {
        out.push_str(&format!(
            "{} {}",
            scenario.shift_name(req.shift),
            scenario.skill_name(req.skill)
        ));
        for cov in &req.per_day {
            out.push_str(&format!(" ({},{})", cov.minimum, cov.optimal));
        }
        out.push('\n');
    }
    out.push_str(&format!("\nSHIFT_OFF_REQUESTS = {}\n", week.requests.len()));
    for r in &week.requests {
        let shift = match r.shift {
            ShiftRequest::Any => "Any",
            ShiftRequest::Shift(s) => scenario.shift_name(s),
        };
        out.push_str(&format!(
            "{} {} {}\n",
            scenario.nurse_name(r.nurse),
            shift,
            r.day
        ));
    }
    out
}

pub fn write_history(history: &History, scenario: &Scenario) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "HISTORY\n{} {}\n\nNURSE_HISTORY\n",
        history.week_index, history.scenario_id
    ));
    for e in &history.entries {
        let last = match e.last_shift {
            None => "None",
            Some(s) => scenario.shift_name(s),
        };
        out.push_str(&format!(
            "{} {} {} {} {} {} {}\n",
            scenario.nurse_name(e.nurse),
            e.total_assignments,
            e.total_weekends,
            last,
            e.consec_same_shift,
            e.consec_work,
            e.consec_off
        ));
    }
    out
}

pub fn write_solution(solution: &Solution, scenario: &Scenario) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "SOLUTION\n{} {}\n\nASSIGNMENTS = {}\n",
        solution.week_index,
        solution.scenario_id,
        solution.assignments.len()
    ));
    for a in &solution.assignments {
        out.push_str(&format!(
            "{} {} {} {}\n",
            scenario.nurse_name(a.nurse),
            a.day,
            scenario.shift_name(a.shift),
            scenario.skill_name(a.skill)
        ));
    }
    out
}

#[cfg(test)]
pub(crate) mod fixtures {
    /// Scenario file mirroring the n005w4 test dataset, trailing spaces
    /// included on purpose.
    pub const SCENARIO: &str = "\
SCENARIO = n005w4

WEEKS = 4

SKILLS = 2
HeadNurse
Nurse

SHIFT_TYPES = 3
Early (2,5)
Late (2,3)
Night (4,5)

FORBIDDEN_SHIFT_TYPES_SUCCESSIONS
Early 0
Late 1 Early
Night 2 Early Late

CONTRACTS = 2
FullTime (15,22) (3,5) (2,3) 2 1
PartTime (7,11) (3,5) (3,5) 2 1

NURSES = 5
Patrick FullTime 2 HeadNurse Nurse\x20
Andrea FullTime 2 HeadNurse Nurse
Stefaan PartTime 2 HeadNurse Nurse
Sara PartTime 1 Nurse
Nguyen FullTime 1 Nurse
";

    pub const WEEK: &str = "\
WEEK_DATA
n005w4

REQUIREMENTS
Early HeadNurse (1,1) (0,0) (0,0) (0,0) (0,0) (1,1) (0,0)
Early Nurse (1,2) (1,1) (1,1) (0,1) (1,1) (1,1) (0,1)
Late HeadNurse (1,1) (0,1) (1,1) (0,0) (0,0) (0,0) (0,0)
Late Nurse (1,1) (1,1) (0,1) (0,1) (1,1) (1,1) (1,1)
Night HeadNurse (0,0) (1,1) (0,0) (0,0) (1,1) (1,1) (0,0)
Night Nurse (0,1) (1,1) (1,1) (1,1) (1,1) (0,1) (1,1)

SHIFT_OFF_REQUESTS = 3
Sara Any Thu\x20
Sara Night Sat\x20
Stefaan Late Sat\x20
";

    pub const HISTORY: &str = "\
HISTORY
0 n005w4

NURSE_HISTORY
Patrick 0 0 Night 1 4 0
Andrea 0 0 Early 3 3 0
Stefaan 0 0 None 0 0 3
Sara 0 0 Late 1 4 0
Nguyen 0 0 None 0 0 1
";

    pub const SOLUTION: &str = "\
SOLUTION
3 n005w4

ASSIGNMENTS = 5
Patrick Mon Late HeadNurse
Patrick Tue Night HeadNurse
Andrea Mon Early HeadNurse
Nguyen Sat Late Nurse
Nguyen Sun Night Nurse
";
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::model::{Interval, NurseId, ShiftId};

    #[test]
    fn parses_sample_scenario() {
        let sc = parse_scenario(SCENARIO).unwrap();
        assert_eq!(sc.id, "n005w4");
        assert_eq!(sc.num_weeks, 4);
        assert_eq!(sc.nurses.len(), 5);
        let full = &sc.contracts[sc.contract_id("FullTime").unwrap().0];
        assert_eq!(full.total_assignments, Interval { min: 15, max: 22 });
        assert_eq!(full.consecutive_work, Interval { min: 3, max: 5 });
        assert_eq!(full.consecutive_off, Interval { min: 2, max: 3 });
        assert_eq!(full.max_working_weekends, 2);
        assert!(full.complete_weekend);
    }

    #[test]
    fn succession_block_becomes_pairs() {
        let sc = parse_scenario(SCENARIO).unwrap();
        let (early, late, night) = (
            sc.shift_id("Early").unwrap(),
            sc.shift_id("Late").unwrap(),
            sc.shift_id("Night").unwrap(),
        );
        let mut forbidden = Vec::new();
        for pred in sc.shift_ids() {
            for succ in sc.shift_ids() {
                if sc.successions.is_forbidden(pred, succ) {
                    forbidden.push((pred, succ));
                }
            }
        }
        assert_eq!(forbidden, vec![(late, early), (night, early), (night, late)]);
    }

    #[test]
    fn shift_count_mismatch_is_rejected() {
        let text = SCENARIO.replace("SHIFT_TYPES = 3", "SHIFT_TYPES = 2");
        match parse_scenario(&text) {
            Err(TextError::Format(e)) => assert_eq!(e.file_kind, FileKind::Scenario),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn equals_sign_spacing_is_free() {
        let text = SCENARIO.replace("SCENARIO = n005w4", "SCENARIO=n005w4");
        assert_eq!(parse_scenario(&text).unwrap().id, "n005w4");
        let text = SCENARIO.replace("WEEKS = 4", "WEEKS   =\t4");
        assert_eq!(parse_scenario(&text).unwrap().num_weeks, 4);
    }

    #[test]
    fn parses_sample_week() {
        let sc = parse_scenario(SCENARIO).unwrap();
        let week = parse_week_data(WEEK, &sc).unwrap();
        assert_eq!(week.requirements.len(), 6);
        let early_nurse = &week.requirements[1];
        assert_eq!(early_nurse.per_day[Day::Mon.index()], Coverage { minimum: 1, optimal: 2 });
        assert_eq!(early_nurse.per_day[Day::Sun.index()], Coverage { minimum: 0, optimal: 1 });
        assert_eq!(week.requests.len(), 3);
        assert_eq!(
            week.requests[0],
            ShiftOffRequest {
                nurse: sc.nurse_id("Sara").unwrap(),
                shift: ShiftRequest::Any,
                day: Day::Thu,
            }
        );
    }

    #[test]
    fn week_rejects_unknown_nurse_request() {
        let sc = parse_scenario(SCENARIO).unwrap();
        let text = WEEK.replace("Sara Any Thu", "Nobody Any Thu");
        match parse_week_data(&text, &sc) {
            Err(TextError::Model(ModelError::UnknownReference { kind: "nurse", name })) => {
                assert_eq!(name, "Nobody")
            }
            other => panic!("expected unknown nurse, got {other:?}"),
        }
    }

    #[test]
    fn week_duplicate_requests_collapse() {
        let sc = parse_scenario(SCENARIO).unwrap();
        let text = WEEK
            .replace("SHIFT_OFF_REQUESTS = 3", "SHIFT_OFF_REQUESTS = 4")
            .replace("Sara Any Thu\x20\n", "Sara Any Thu\x20\nSara Any Thu\n");
        let week = parse_week_data(&text, &sc).unwrap();
        assert_eq!(week.requests.len(), 3);
    }

    #[test]
    fn parses_sample_history() {
        let sc = parse_scenario(SCENARIO).unwrap();
        let h = parse_history(HISTORY, &sc).unwrap();
        assert_eq!(h.week_index, 0);
        let patrick = h.of(sc.nurse_id("Patrick").unwrap());
        assert_eq!(patrick.total_assignments, 0);
        assert_eq!(patrick.total_weekends, 0);
        assert_eq!(patrick.last_shift, sc.shift_id("Night"));
        assert_eq!(
            (patrick.consec_same_shift, patrick.consec_work, patrick.consec_off),
            (1, 4, 0)
        );
        let stefaan = h.of(sc.nurse_id("Stefaan").unwrap());
        assert_eq!(stefaan.last_shift, None);
        assert_eq!(stefaan.consec_off, 3);
    }

    #[test]
    fn history_rejects_counter_with_none_shift() {
        let sc = parse_scenario(SCENARIO).unwrap();
        let text = HISTORY.replace("Stefaan 0 0 None 0 0 3", "Stefaan 0 0 None 1 0 3");
        match parse_history(&text, &sc) {
            Err(TextError::Format(e)) => assert_eq!(e.line, 7),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn history_requires_every_nurse() {
        let sc = parse_scenario(SCENARIO).unwrap();
        let text = HISTORY.replace("Nguyen 0 0 None 0 0 1\n", "");
        match parse_history(&text, &sc) {
            Err(TextError::Format(e)) => assert!(e.message.contains("Nguyen")),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn parses_sample_solution() {
        let sc = parse_scenario(SCENARIO).unwrap();
        let sol = parse_solution(SOLUTION, &sc).unwrap();
        assert_eq!(sol.week_index, 3);
        assert_eq!(sol.assignments.len(), 5);
        assert_eq!(
            sol.assignments[1],
            Assignment {
                nurse: sc.nurse_id("Patrick").unwrap(),
                day: Day::Tue,
                shift: sc.shift_id("Night").unwrap(),
                skill: sc.skill_id("HeadNurse").unwrap(),
            }
        );
    }

    #[test]
    fn empty_solution_roundtrips() {
        let sc = parse_scenario(SCENARIO).unwrap();
        let sol = Solution {
            week_index: 0,
            scenario_id: "n005w4".into(),
            assignments: vec![],
        };
        let text = write_solution(&sol, &sc);
        assert!(text.contains("ASSIGNMENTS = 0"));
        assert_eq!(parse_solution(&text, &sc).unwrap(), sol);
    }

    #[test]
    fn solution_count_mismatch_is_rejected() {
        let sc = parse_scenario(SCENARIO).unwrap();
        let text = SOLUTION.replace("ASSIGNMENTS = 5", "ASSIGNMENTS = 4");
        assert!(matches!(parse_solution(&text, &sc), Err(TextError::Format(_))));
        let text = SOLUTION.replace("ASSIGNMENTS = 5", "ASSIGNMENTS = 6");
        assert!(matches!(parse_solution(&text, &sc), Err(TextError::Format(_))));
    }

    #[test]
    fn all_four_kinds_roundtrip() {
        let sc = parse_scenario(SCENARIO).unwrap();
        assert_eq!(parse_scenario(&write_scenario(&sc)).unwrap(), sc);

        let week = parse_week_data(WEEK, &sc).unwrap();
        assert_eq!(parse_week_data(&write_week_data(&week, &sc), &sc).unwrap(), week);

        let h = parse_history(HISTORY, &sc).unwrap();
        assert_eq!(parse_history(&write_history(&h, &sc), &sc).unwrap(), h);

        let sol = parse_solution(SOLUTION, &sc).unwrap();
        assert_eq!(parse_solution(&write_solution(&sol, &sc), &sc).unwrap(), sol);
    }

    #[test]
    fn crlf_input_is_accepted() {
        let text = SCENARIO.replace('\n', "\r\n");
        assert_eq!(parse_scenario(&text).unwrap().nurses.len(), 5);
    }

    #[test]
    fn history_entries_are_canonicalized_by_nurse_order() {
        let sc = parse_scenario(SCENARIO).unwrap();
        // Swap two lines; parsed value must be identical.
        let swapped = HISTORY
            .replace("Patrick 0 0 Night 1 4 0\nAndrea 0 0 Early 3 3 0", "Andrea 0 0 Early 3 3 0\nPatrick 0 0 Night 1 4 0");
        assert_eq!(parse_history(&swapped, &sc).unwrap(), parse_history(HISTORY, &sc).unwrap());
        assert_eq!(
            parse_history(HISTORY, &sc).unwrap().entries[0].nurse,
            NurseId(0)
        );
        let _ = ShiftId(0);
    }
}
