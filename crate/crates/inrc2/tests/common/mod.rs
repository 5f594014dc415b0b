//! Shared material for the integration test suites: the canonical sample
//! files and an independent oracle for series scoring over a concatenated
//! multi-week timeline.

#![allow(dead_code)]

/// Sample scenario in the n005w4 shape (trailing spaces intentional).
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

/// Independent series-scoring oracle over a whole timeline.
///
/// The carry is materialized as real member days prefixed to the flags, so
/// the timeline is scored in one pass with no border bookkeeping at all:
/// every maximal run is charged `max(0, len - max)` plus, when it closes
/// before the end, `max(0, min - len)`. The portion of the prefix run's
/// maximum-side violation attributable to the carry alone was charged to
/// an earlier horizon and is subtracted once. The final run's minimum side
/// is never charged (the future is unknown), matching the evaluator's
/// treatment of a horizon's last week.
pub fn timeline_units(min: i64, max: i64, carry: i64, flags: &[bool]) -> i64 {
    let mut full = vec![true; carry.max(0) as usize];
    full.extend_from_slice(flags);

    let mut units = 0i64;
    let mut day = 0;
    let n = full.len();
    while day < n {
        if !full[day] {
            day += 1;
            continue;
        }
        let start = day;
        while day < n && full[day] {
            day += 1;
        }
        let len = (day - start) as i64;
        units += (len - max).max(0);
        if day < n {
            units += (min - len).max(0);
        }
    }
    units - (carry - max).max(0)
}

#[cfg(test)]
mod oracle_sanity {
    use super::timeline_units;

    #[test]
    fn closed_and_open_runs() {
        // One interior run of 4 against (3,3): one over.
        let mut f = [false; 7];
        f[1] = true;
        f[2] = true;
        f[3] = true;
        f[4] = true;
        assert_eq!(timeline_units(3, 3, 0, &f), 1);
        // Ongoing final run: only the max side counts.
        assert_eq!(timeline_units(3, 3, 0, &[false, true, true, true, true, true, true]), 3);
        // Short closed run: minimum side.
        assert_eq!(timeline_units(3, 3, 0, &[true, false, false, false, false, false, false]), 2);
        // Carry of 5 absorbed: only the new day is charged.
        assert_eq!(timeline_units(3, 3, 5, &[true, false, false, false, false, false, false]), 1);
        // Carry closing immediately: its minimum side becomes due.
        assert_eq!(timeline_units(3, 3, 2, &[false; 7]), 1);
    }
}
