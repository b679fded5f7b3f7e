//! Small counterexample games used throughout the test and verification
//! suites. All fixtures are returned in raw (unnormalized) units.

use super::MatrixGame;
use crate::{Error, Result};

/// Identifies a fixture game and its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum FixtureSpec {
    /// `[[1, 0, 1/2], [0, 1, 1/2], [0, 0, 1/2]]` - the unique-equilibrium
    /// game where the equilibrium support of the column player makes a poor
    /// portfolio.
    Theorem2,
    /// `[[1, d, 1/2], [d, 1, 1/2], [0, 0, 1/2]]` for `d` in `(0, 1/2)`.
    Theorem3 { delta: f64 },
    /// `[[-1, 1, -101, -99], [1, -1, -99, -101]]` - the game whose optimal
    /// size-2 portfolio gets strictly worse when any column is added.
    Incremental,
    /// `-I` of size `n`: every pure portfolio of size `k < n` is maximally
    /// exploitable.
    NegIdentity { n: usize },
    /// `[[-I, 0], [0, 1]]` with `n + 1` columns: full column rank, yet the
    /// last column alone is an unexploitable portfolio.
    RankGame { n: usize },
    /// Rock-Paper-Scissors.
    Rps,
}

impl FixtureSpec {
    /// Parses `name` or `name:param` (e.g. `theorem_3:0.1`,
    /// `neg_identity:4`).
    pub fn parse(text: &str) -> Result<FixtureSpec> {
        let (name, param) = match text.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (text, None),
        };
        let need_f64 = |what: &str| -> Result<f64> {
            param
                .ok_or_else(|| Error::parameter(format!("{name} requires a {what} parameter")))?
                .parse::<f64>()
                .map_err(|e| Error::parameter(format!("bad {what} for {name}: {e}")))
        };
        let need_usize = |what: &str| -> Result<usize> {
            param
                .ok_or_else(|| Error::parameter(format!("{name} requires a {what} parameter")))?
                .parse::<usize>()
                .map_err(|e| Error::parameter(format!("bad {what} for {name}: {e}")))
        };
        match name {
            "theorem_2" => Ok(FixtureSpec::Theorem2),
            "theorem_3" => Ok(FixtureSpec::Theorem3 {
                delta: need_f64("delta")?,
            }),
            "incremental" => Ok(FixtureSpec::Incremental),
            "neg_identity" => Ok(FixtureSpec::NegIdentity {
                n: need_usize("size")?,
            }),
            "rank_game" => Ok(FixtureSpec::RankGame {
                n: need_usize("size")?,
            }),
            "rps" => Ok(FixtureSpec::Rps),
            other => Err(Error::FixtureLookup(other.to_string())),
        }
    }
}

impl std::fmt::Display for FixtureSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FixtureSpec::Theorem2 => write!(f, "theorem_2"),
            FixtureSpec::Theorem3 { delta } => write!(f, "theorem_3:{delta}"),
            FixtureSpec::Incremental => write!(f, "incremental"),
            FixtureSpec::NegIdentity { n } => write!(f, "neg_identity:{n}"),
            FixtureSpec::RankGame { n } => write!(f, "rank_game:{n}"),
            FixtureSpec::Rps => write!(f, "rps"),
        }
    }
}

/// Builds the exact fixture matrix. Parameters outside their documented
/// domain produce [`Error::Parameter`].
pub fn fixture(spec: &FixtureSpec) -> Result<MatrixGame> {
    match spec {
        FixtureSpec::Theorem2 => MatrixGame::from_rows(vec![
            vec![1.0, 0.0, 0.5],
            vec![0.0, 1.0, 0.5],
            vec![0.0, 0.0, 0.5],
        ]),
        FixtureSpec::Theorem3 { delta } => {
            if !(*delta > 0.0 && *delta < 0.5) {
                return Err(Error::parameter(format!(
                    "theorem_3 delta must lie in (0, 0.5), got {delta}"
                )));
            }
            MatrixGame::from_rows(vec![
                vec![1.0, *delta, 0.5],
                vec![*delta, 1.0, 0.5],
                vec![0.0, 0.0, 0.5],
            ])
        }
        // The second-row second-column entry is -1, not the -0.8 that
        // appears in one rendering of this game: with -0.8 the restricted
        // equilibrium moves off (1/2, 1/2) and the size-2 portfolio {b0, b1}
        // has exploitability 1/19 instead of the intended 0.
        FixtureSpec::Incremental => MatrixGame::from_rows(vec![
            vec![-1.0, 1.0, -101.0, -99.0],
            vec![1.0, -1.0, -99.0, -101.0],
        ]),
        FixtureSpec::NegIdentity { n } => {
            if *n < 1 {
                return Err(Error::parameter("neg_identity size must be at least 1"));
            }
            MatrixGame::from_rows(
                (0..*n)
                    .map(|i| (0..*n).map(|j| if i == j { -1.0 } else { 0.0 }).collect())
                    .collect(),
            )
        }
        FixtureSpec::RankGame { n } => {
            if *n < 1 {
                return Err(Error::parameter("rank_game size must be at least 1"));
            }
            let size = n + 1;
            MatrixGame::from_rows(
                (0..size)
                    .map(|i| {
                        (0..size)
                            .map(|j| {
                                if i < *n && j < *n {
                                    if i == j {
                                        -1.0
                                    } else {
                                        0.0
                                    }
                                } else if i == *n && j == *n {
                                    1.0
                                } else {
                                    0.0
                                }
                            })
                            .collect()
                    })
                    .collect(),
            )
        }
        FixtureSpec::Rps => {
            let mut game = MatrixGame::from_rows(vec![
                vec![0.0, -1.0, 1.0],
                vec![1.0, 0.0, -1.0],
                vec![-1.0, 1.0, 0.0],
            ])?;
            let labels = vec!["R".to_string(), "P".to_string(), "S".to_string()];
            game.row_labels = labels.clone();
            game.col_labels = labels;
            Ok(game)
        }
    }
}
