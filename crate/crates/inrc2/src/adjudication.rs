//! Rank-based competition scoring.
//!
//! Objective values per (participant, instance) are turned into per-column
//! ranks (1 = best, ties share the average of their positional ranks), the
//! mean rank decides finalists and the winner. Means are kept as exact
//! rationals throughout; rounding happens only at display time, so a cut
//! between participants never depends on how a mean is printed.

use num_rational::Rational64;
use thiserror::Error;

/// Objective values, `None` when a participant submitted nothing (or an
/// infeasible answer) for an instance. Missing entries are ranked through a
/// penalty value exceeding every present value of the same column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreMatrix {
    participants: usize,
    values: Vec<Vec<Option<u64>>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AdjudicationError {
    #[error("score matrix needs at least one participant and one instance")]
    Empty,
    #[error("participant {participant} has {got} scores, expected {expected}")]
    RaggedRow {
        participant: usize,
        got: usize,
        expected: usize,
    },
    #[error("trial {trial} has a different shape than trial 0")]
    ShapeMismatch { trial: usize },
}

impl ScoreMatrix {
    /// Rows are participants, columns are instances.
    pub fn new(values: Vec<Vec<Option<u64>>>) -> Result<ScoreMatrix, AdjudicationError> {
        if values.is_empty() || values[0].is_empty() {
            return Err(AdjudicationError::Empty);
        }
        let width = values[0].len();
        for (i, row) in values.iter().enumerate() {
            if row.len() != width {
                return Err(AdjudicationError::RaggedRow {
                    participant: i,
                    got: row.len(),
                    expected: width,
                });
            }
        }
        Ok(ScoreMatrix {
            participants: values.len(),
            values,
        })
    }

    pub fn participants(&self) -> usize {
        self.participants
    }

    pub fn instances(&self) -> usize {
        self.values[0].len()
    }

    /// The column with missing entries replaced by the per-instance penalty
    /// value: one more than the largest present value, so it ranks strictly
    /// last. Any larger substitute would produce the same ranks.
    fn column_with_penalty(&self, instance: usize) -> Vec<u64> {
        let max_present = self
            .values
            .iter()
            .filter_map(|row| row[instance])
            .max()
            .unwrap_or(0);
        let penalty = max_present + 1;
        self.values
            .iter()
            .map(|row| row[instance].unwrap_or(penalty))
            .collect()
    }
}

/// Per-cell ranks in `[1, k]`; every column sums to `k(k+1)/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankMatrix {
    ranks: Vec<Vec<Rational64>>,
}

impl RankMatrix {
    pub fn rank(&self, participant: usize, instance: usize) -> Rational64 {
        self.ranks[participant][instance]
    }

    pub fn participants(&self) -> usize {
        self.ranks.len()
    }

    pub fn instances(&self) -> usize {
        self.ranks[0].len()
    }
}

/// Ranks every column of the score matrix: ascending by value, rank 1 for
/// the smallest, tied values sharing the average of their positions.
#[allow(clippy::needless_range_loop)] // column-major update of a row-major matrix
pub fn compute_ranks(scores: &ScoreMatrix) -> RankMatrix {
    let k = scores.participants();
    let m = scores.instances();
    let mut ranks = vec![vec![Rational64::from_integer(0); m]; k];
    for j in 0..m {
        let column = scores.column_with_penalty(j);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| column[i]);
        let mut pos = 0;
        while pos < k {
            let mut end = pos + 1;
            while end < k && column[order[end]] == column[order[pos]] {
                end += 1;
            }
            // Positions pos..end (0-based) share the average 1-based rank.
            let sum: i64 = (pos..end).map(|p| p as i64 + 1).sum();
            let shared = Rational64::new(sum, (end - pos) as i64);
            for &i in &order[pos..end] {
                ranks[i][j] = shared;
            }
            pos = end;
        }
    }
    RankMatrix { ranks }
}

/// Arithmetic mean of each participant's ranks across instances, exact.
pub fn mean_ranks(ranks: &RankMatrix) -> Vec<Rational64> {
    let m = ranks.instances() as i64;
    ranks
        .ranks
        .iter()
        .map(|row| row.iter().sum::<Rational64>() / Rational64::from_integer(m))
        .collect()
}

/// Formats a rational rounded to two decimals, half away from zero — for
/// display only, never for comparisons.
pub fn format_mean(mean: Rational64) -> String {
    let scaled = mean * Rational64::from_integer(100);
    let (num, den) = (*scaled.numer(), *scaled.denom());
    let rounded = (2 * num + den).div_euclid(2 * den); // round half up for positive ranks
    format!("{}.{:02}", rounded / 100, (rounded % 100).abs())
}

/// Picks the `quota` participants with the lowest mean ranks, ordered by
/// (mean, participant id). A tie at the cut admits every tied participant,
/// so the result may exceed the quota.
pub fn select_finalists(means: &[Rational64], quota: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..means.len()).collect();
    order.sort_by(|&a, &b| means[a].cmp(&means[b]).then(a.cmp(&b)));
    let mut cut = quota.min(order.len());
    while cut < order.len() && means[order[cut]] == means[order[cut - 1]] {
        cut += 1;
    }
    order.truncate(cut);
    order
}

/// Outcome of the final phase across independent trials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinalRanking {
    /// Participants ordered by (mean rank, id).
    pub order: Vec<usize>,
    /// Mean rank per participant over all trials and instances.
    pub means: Vec<Rational64>,
    /// Lowest mean rank, unless tied for first.
    pub winner: Option<usize>,
    /// Participants tied for first when `winner` is `None`; the remedy is
    /// to rerun with one more trial until a single winner emerges.
    pub tied_for_first: Vec<usize>,
}

/// Ranks every trial independently and averages over all trials and all
/// instances. All trials must have the same shape.
pub fn final_ranking(trials: &[ScoreMatrix]) -> Result<FinalRanking, AdjudicationError> {
    let first = trials.first().ok_or(AdjudicationError::Empty)?;
    let k = first.participants();
    let m = first.instances();
    let mut sums = vec![Rational64::from_integer(0); k];
    for (t, trial) in trials.iter().enumerate() {
        if trial.participants() != k || trial.instances() != m {
            return Err(AdjudicationError::ShapeMismatch { trial: t });
        }
        let ranks = compute_ranks(trial);
        for (i, sum) in sums.iter_mut().enumerate() {
            *sum += ranks.ranks[i].iter().sum::<Rational64>();
        }
    }
    let cells = Rational64::from_integer((trials.len() * m) as i64);
    let means: Vec<Rational64> = sums.into_iter().map(|s| s / cells).collect();

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| means[a].cmp(&means[b]).then(a.cmp(&b)));
    let best = means[order[0]];
    let tied: Vec<usize> = order.iter().copied().filter(|&i| means[i] == best).collect();
    let winner = (tied.len() == 1).then(|| tied[0]);
    Ok(FinalRanking {
        order,
        means,
        winner,
        tied_for_first: if winner.is_some() { vec![] } else { tied },
    })
}

/// Parses a comma-separated score table: one row per participant, one
/// column per instance, empty cell = missing. An optional non-numeric
/// leading field per row is accepted as a label and returned alongside.
pub fn parse_score_table(text: &str) -> Result<(Vec<String>, ScoreMatrix), AdjudicationError> {
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    for (i, line) in text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
    {
        let mut fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let label = if !fields[0].is_empty() && fields[0].parse::<u64>().is_err() {
            fields.remove(0).to_string()
        } else {
            format!("Solver {}", i + 1)
        };
        labels.push(label);
        rows.push(
            fields
                .iter()
                .map(|f| {
                    if f.is_empty() {
                        None
                    } else {
                        f.parse::<u64>().ok().map(Some).unwrap_or(None)
                    }
                })
                .collect(),
        );
    }
    Ok((labels, ScoreMatrix::new(rows)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Example score matrix: 7 solvers over 6 instances.
    pub(crate) fn example_scores() -> ScoreMatrix {
        let rows: Vec<Vec<u64>> = vec![
            vec![34, 35, 42, 32, 10, 12],
            vec![32, 24, 44, 33, 13, 15],
            vec![33, 36, 30, 12, 10, 17],
            vec![36, 32, 46, 32, 12, 13],
            vec![37, 30, 43, 29, 9, 4],
            vec![68, 29, 41, 55, 10, 5],
            vec![36, 30, 43, 58, 10, 4],
        ];
        ScoreMatrix::new(
            rows.into_iter()
                .map(|r| r.into_iter().map(Some).collect())
                .collect(),
        )
        .unwrap()
    }

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn ranks_with_tied_cells() {
        let ranks = compute_ranks(&example_scores());
        // Instance 4 (index 3): values 32,33,12,32,29,55,58.
        let col4: Vec<Rational64> = (0..7).map(|i| ranks.rank(i, 3)).collect();
        assert_eq!(
            col4,
            vec![r(7, 2), r(5, 1), r(1, 1), r(7, 2), r(2, 1), r(6, 1), r(7, 1)]
        );
        // Instance 5 (index 4): values 10,13,10,12,9,10,10 — four-way tie.
        let col5: Vec<Rational64> = (0..7).map(|i| ranks.rank(i, 4)).collect();
        assert_eq!(
            col5,
            vec![r(7, 2), r(7, 1), r(7, 2), r(6, 1), r(1, 1), r(7, 2), r(7, 2)]
        );
    }

    #[test]
    fn all_equal_scores_share_middle_rank() {
        let scores = ScoreMatrix::new(vec![vec![Some(5)]; 4]).unwrap();
        let ranks = compute_ranks(&scores);
        for i in 0..4 {
            assert_eq!(ranks.rank(i, 0), r(5, 2)); // (k+1)/2
        }
    }

    #[test]
    fn example_mean_ranks_match() {
        let means = mean_ranks(&compute_ranks(&example_scores()));
        let displayed: Vec<String> = means.iter().map(|&m| format_mean(m)).collect();
        assert_eq!(displayed, vec!["3.83", "4.33", "3.58", "5.17", "3.08", "3.92", "4.08"]);
        assert_eq!(means[4], r(37, 12)); // solver 5, exactly 3.0833...
    }

    #[test]
    fn single_instance_mean_is_the_rank() {
        let scores = ScoreMatrix::new(vec![vec![Some(3)], vec![Some(1)]]).unwrap();
        let ranks = compute_ranks(&scores);
        let means = mean_ranks(&ranks);
        assert_eq!(means, vec![r(2, 1), r(1, 1)]);
    }

    #[test]
    fn example_finalists() {
        let means = mean_ranks(&compute_ranks(&example_scores()));
        let finalists = select_finalists(&means, 5);
        // 0-based ids of solvers 1, 3, 5, 6, 7.
        let mut sorted = finalists.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 2, 4, 5, 6]);
    }

    #[test]
    fn tie_at_cut_extends_finalists() {
        let means = vec![r(1, 1), r(2, 1), r(3, 1), r(4, 1), r(5, 1), r(5, 1), r(6, 1)];
        let finalists = select_finalists(&means, 5);
        assert_eq!(finalists, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn quota_equal_to_field_takes_everyone() {
        let means = vec![r(2, 1), r(1, 1), r(3, 1)];
        assert_eq!(select_finalists(&means, 3).len(), 3);
    }

    #[test]
    fn missing_entries_rank_last() {
        let scores = ScoreMatrix::new(vec![
            vec![Some(10), Some(5)],
            vec![None, Some(7)],
            vec![Some(12), None],
        ])
        .unwrap();
        let ranks = compute_ranks(&scores);
        assert_eq!(ranks.rank(1, 0), r(3, 1));
        assert_eq!(ranks.rank(2, 1), r(3, 1));
    }

    #[test]
    fn single_trial_final_matches_mean_ranks() {
        let scores = example_scores();
        let fr = final_ranking(std::slice::from_ref(&scores)).unwrap();
        assert_eq!(fr.means, mean_ranks(&compute_ranks(&scores)));
        assert_eq!(fr.winner, Some(4)); // solver 5
    }

    #[test]
    fn duplicated_trials_keep_the_winner() {
        let trials: Vec<ScoreMatrix> = std::iter::repeat_n(example_scores(), 10).collect();
        let fr = final_ranking(&trials).unwrap();
        assert_eq!(fr.winner, Some(4));
        assert_eq!(fr.means, mean_ranks(&compute_ranks(&example_scores())));
    }

    #[test]
    fn exact_first_place_tie_is_unresolved() {
        let scores = ScoreMatrix::new(vec![
            vec![Some(1), Some(2)],
            vec![Some(2), Some(1)],
            vec![Some(3), Some(3)],
        ])
        .unwrap();
        let fr = final_ranking(&[scores]).unwrap();
        assert_eq!(fr.winner, None);
        assert_eq!(fr.tied_for_first, vec![0, 1]);
    }

    #[test]
    fn three_trial_fixture_matches_direct_recomputation() {
        // Independent recomputation: sum the per-trial ranks by hand.
        let t1 = ScoreMatrix::new(vec![
            vec![Some(10), Some(20)],
            vec![Some(30), Some(10)],
            vec![Some(20), Some(30)],
        ])
        .unwrap();
        let t2 = ScoreMatrix::new(vec![
            vec![Some(5), Some(5)],
            vec![Some(5), Some(9)],
            vec![Some(9), Some(5)],
        ])
        .unwrap();
        let t3 = ScoreMatrix::new(vec![
            vec![Some(7), None],
            vec![None, Some(4)],
            vec![Some(6), Some(4)],
        ])
        .unwrap();
        // t1 ranks: p0: 1,2  p1: 3,1  p2: 2,3
        // t2 ranks: p0: 1.5,1.5  p1: 1.5,3  p2: 3,1.5
        // t3 ranks: p0: 2,3  p1: 3,1.5  p2: 1,1.5
        let expected = [
            r(1 + 2, 1) + r(3, 2) + r(3, 2) + r(2 + 3, 1),
            r(3 + 1, 1) + r(3, 2) + r(3, 1) + r(3, 1) + r(3, 2),
            r(2 + 3, 1) + r(3, 1) + r(3, 2) + r(1, 1) + r(3, 2),
        ];
        let fr = final_ranking(&[t1, t2, t3]).unwrap();
        for (mean, expected) in fr.means.iter().zip(&expected) {
            assert_eq!(*mean, *expected / r(6, 1));
        }
    }

    #[test]
    fn parses_csv_with_labels_and_gaps() {
        let (labels, scores) = parse_score_table("alpha, 10, 20\nbeta, , 15\n30, 40\n").unwrap();
        assert_eq!(labels, vec!["alpha", "beta", "Solver 3"]);
        assert_eq!(scores.participants(), 3);
        assert_eq!(scores.instances(), 2);
        let ranks = compute_ranks(&scores);
        assert_eq!(ranks.rank(1, 0), r(3, 1)); // missing ranks last
    }

    proptest! {
        // Tie averaging conserves the column sum k(k+1)/2.
        #[test]
        fn column_sums_conserved(values in prop::collection::vec(prop::collection::vec(prop::option::of(0u64..20), 4), 1..8)) {
            let scores = match ScoreMatrix::new(values) {
                Ok(s) => s,
                Err(_) => return Ok(()),
            };
            let k = scores.participants() as i64;
            let ranks = compute_ranks(&scores);
            for j in 0..scores.instances() {
                let sum: Rational64 = (0..scores.participants()).map(|i| ranks.rank(i, j)).sum();
                prop_assert_eq!(sum, Rational64::from_integer(k * (k + 1) / 2));
            }
        }

        // Ranks depend only on the ordering of a column, not its values.
        #[test]
        fn ranks_are_argrank_invariant(col in prop::collection::vec(0u64..50, 2..8), scale in 1u64..5, offset in 0u64..100) {
            let a = ScoreMatrix::new(col.iter().map(|&v| vec![Some(v)]).collect()).unwrap();
            // x -> scale*x + offset is strictly increasing.
            let b = ScoreMatrix::new(col.iter().map(|&v| vec![Some(v * scale + offset)]).collect()).unwrap();
            prop_assert_eq!(compute_ranks(&a), compute_ranks(&b));
        }

        // Any penalty above the column maximum yields identical ranks.
        #[test]
        fn penalty_magnitude_is_irrelevant(col in prop::collection::vec(prop::option::of(0u64..30), 3..8), boost in 1u64..1000) {
            let with_none = ScoreMatrix::new(col.iter().map(|&v| vec![v]).collect()).unwrap();
            let max = col.iter().flatten().max().copied().unwrap_or(0);
            let explicit = ScoreMatrix::new(
                col.iter().map(|&v| vec![Some(v.unwrap_or(max + boost))]).collect(),
            )
            .unwrap();
            prop_assert_eq!(compute_ranks(&with_none), compute_ranks(&explicit));
        }
    }
}
