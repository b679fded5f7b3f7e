//! Matrix-game data model, generators, counterexample fixtures and file I/O.
//!
//! All games are two-player zero-sum: the stored matrix holds the row
//! player's utility, the column player receives its negation. Games are
//! immutable after construction and freely shareable across threads.

pub mod fixtures;
mod generators;
mod io;

pub use fixtures::{fixture, FixtureSpec};
pub use generators::{blotto, goofspiel3, kuhn_poker, random_game};
pub use io::{load_game, load_portfolio, save_game, save_portfolio, PortfolioMetadata};

use crate::{Error, Player, Result};

/// Payoff matrix of the row player in a zero-sum game, with labels and
/// normalization metadata.
///
/// When `normalized` is set every entry lies in `[-1, 1]` and
/// `denorm_offset` / `denorm_scale` map values back to the original units:
/// `raw = offset + scale * normalized`. Raw games carry the identity map.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGame {
    rows: usize,
    cols: usize,
    payoffs: Vec<f64>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub normalized: bool,
    pub denorm_offset: f64,
    pub denorm_scale: f64,
}

impl MatrixGame {
    /// Builds a raw (unnormalized) game from nested rows.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<MatrixGame> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::model("game must have at least one row"));
        }
        let n = rows[0].len();
        if n == 0 {
            return Err(Error::model("game must have at least one column"));
        }
        let mut payoffs = Vec::with_capacity(m * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::model(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            payoffs.extend_from_slice(row);
        }
        if payoffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::model("payoff matrix contains a non-finite entry"));
        }
        Ok(MatrixGame {
            rows: m,
            cols: n,
            payoffs,
            row_labels: (0..m).map(|i| format!("r{i}")).collect(),
            col_labels: (0..n).map(|j| format!("c{j}")).collect(),
            normalized: false,
            denorm_offset: 0.0,
            denorm_scale: 1.0,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.payoffs[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.payoffs[i * self.cols..(i + 1) * self.cols]
    }

    pub fn min_entry(&self) -> f64 {
        self.payoffs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_entry(&self) -> f64 {
        self.payoffs
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Payoff range `max - min`.
    pub fn payoff_range(&self) -> f64 {
        self.max_entry() - self.min_entry()
    }

    /// Maps a value in this game's units back to the pre-normalization
    /// units.
    pub fn value_to_raw(&self, v: f64) -> f64 {
        self.denorm_offset + self.denorm_scale * v
    }

    /// Maps a value difference (e.g. an exploitability or an epsilon) back
    /// to the pre-normalization units; offsets cancel.
    pub fn difference_to_raw(&self, d: f64) -> f64 {
        self.denorm_scale * d
    }

    /// Column player's expected payoff column under `strategy` of the row
    /// player: entry `j` is `sum_i strategy_i * U[i][j]`.
    pub fn row_mix(&self, strategy: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (i, &p) in strategy.iter().enumerate() {
            if p != 0.0 {
                for (o, &u) in out.iter_mut().zip(self.row(i)) {
                    *o += p * u;
                }
            }
        }
        out
    }

    /// Row player's expected payoff per row under `strategy` of the column
    /// player: entry `i` is `sum_j U[i][j] * strategy_j`.
    pub fn col_mix(&self, strategy: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(strategy).map(|(u, p)| u * p).sum())
            .collect()
    }
}

/// Probability vector over one player's actions.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy {
    pub probabilities: Vec<f64>,
    pub owner: Player,
}

impl MixedStrategy {
    pub fn new(probabilities: Vec<f64>, owner: Player) -> Result<MixedStrategy> {
        if probabilities.iter().any(|p| !p.is_finite() || *p < -1e-12) {
            return Err(Error::model("strategy probabilities must be nonnegative"));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::model(format!(
                "strategy probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(MixedStrategy {
            probabilities,
            owner,
        })
    }

    pub fn uniform(n: usize, owner: Player) -> MixedStrategy {
        MixedStrategy {
            probabilities: vec![1.0 / n as f64; n],
            owner,
        }
    }

    pub fn pure(action: usize, n: usize, owner: Player) -> MixedStrategy {
        let mut probabilities = vec![0.0; n];
        probabilities[action] = 1.0;
        MixedStrategy {
            probabilities,
            owner,
        }
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

/// Removes duplicate-payoff strategies: rows (and then columns) whose
/// payoff vectors are entry-identical to an earlier one are dropped,
/// keeping the first occurrence. Generators emit the full normal form and
/// leave this pass to the caller.
pub fn reduce_duplicate_strategies(game: &MatrixGame) -> MatrixGame {
    let mut kept_rows: Vec<usize> = Vec::new();
    for i in 0..game.rows() {
        if !kept_rows.iter().any(|&r| game.row(r) == game.row(i)) {
            kept_rows.push(i);
        }
    }
    let mut kept_cols: Vec<usize> = Vec::new();
    for j in 0..game.cols() {
        let duplicate = kept_cols
            .iter()
            .any(|&c| kept_rows.iter().all(|&r| game.at(r, c) == game.at(r, j)));
        if !duplicate {
            kept_cols.push(j);
        }
    }
    let payoffs = kept_rows
        .iter()
        .flat_map(|&r| kept_cols.iter().map(move |&c| game.at(r, c)))
        .collect();
    MatrixGame {
        rows: kept_rows.len(),
        cols: kept_cols.len(),
        payoffs,
        row_labels: kept_rows
            .iter()
            .map(|&r| game.row_labels[r].clone())
            .collect(),
        col_labels: kept_cols
            .iter()
            .map(|&c| game.col_labels[c].clone())
            .collect(),
        normalized: game.normalized,
        denorm_offset: game.denorm_offset,
        denorm_scale: game.denorm_scale,
    }
}

/// Affine min-max map of the payoffs onto `[-1, 1]`.
///
/// Non-constant matrices attain both endpoints; constant matrices map to all
/// zeros. The affine parameters are recorded so values can be mapped back:
/// `raw = denorm_offset + denorm_scale * normalized`.
pub fn normalize(game: &MatrixGame) -> MatrixGame {
    let min = game.min_entry();
    let max = game.max_entry();
    let (offset, scale) = if max > min {
        ((max + min) / 2.0, (max - min) / 2.0)
    } else {
        (min, 1.0)
    };
    let payoffs = game
        .payoffs
        .iter()
        .map(|v| ((v - offset) / scale).clamp(-1.0, 1.0))
        .collect();
    MatrixGame {
        rows: game.rows,
        cols: game.cols,
        payoffs,
        row_labels: game.row_labels.clone(),
        col_labels: game.col_labels.clone(),
        normalized: true,
        denorm_offset: offset,
        denorm_scale: scale,
    }
}
