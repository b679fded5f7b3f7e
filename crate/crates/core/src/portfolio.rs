//! Portfolios of column-player strategies, game restriction and the
//! pessimistic / optimistic / RM+ portfolio evaluations.
//!
//! Evaluating a portfolio means: restrict the column player to the
//! portfolio, pick a Nash equilibrium of the restricted game for the row
//! player, then measure that strategy against an unrestricted best response
//! in the full game. The equilibrium selection decides which restricted
//! equilibrium is used; pessimistic selection is the worst case for the row
//! player, optimistic the best, and RM+ the one regret matching converges
//! to.

use crate::equilibrium::{argmin, game_value, rm_plus};
use crate::games::{MatrixGame, MixedStrategy};
use crate::solver::{
    solve_lp, solve_milp, LinearProgram, MilpParams, MixedIntegerProgram, ObjectiveSense, Relation,
};
use crate::{Error, Player, Result};

/// Big-M constant used to deactivate best-response rows in the pessimistic
/// evaluation; valid because evaluated games are normalized to `[-1, 1]`.
pub const BIG_M: f64 = 10.0;

/// Default iteration count for RM+-based evaluations.
pub const DEFAULT_RM_ITERATIONS: usize = 10_000;

/// An ordered set of `k` mixed strategies of the column player, stored as a
/// `k x n` row-stochastic matrix. Duplicate rows are permitted.
#[derive(Debug, Clone, PartialEq)]
pub struct Portfolio {
    strategies: Vec<Vec<f64>>,
}

impl Portfolio {
    pub fn from_rows(strategies: Vec<Vec<f64>>) -> Result<Portfolio> {
        if strategies.is_empty() {
            return Err(Error::model("portfolio must contain at least one strategy"));
        }
        let n = strategies[0].len();
        for (z, row) in strategies.iter().enumerate() {
            if row.len() != n {
                return Err(Error::model(format!(
                    "portfolio row {z} has {} entries, expected {n}",
                    row.len()
                )));
            }
            MixedStrategy::new(row.clone(), Player::Two)
                .map_err(|e| Error::model(format!("portfolio row {z}: {e}")))?;
        }
        Ok(Portfolio { strategies })
    }

    /// Pure portfolio selecting the given columns of an `n`-action game.
    pub fn from_columns(columns: &[usize], n: usize) -> Result<Portfolio> {
        if columns.is_empty() {
            return Err(Error::model("portfolio must contain at least one strategy"));
        }
        if let Some(&j) = columns.iter().find(|&&j| j >= n) {
            return Err(Error::model(format!("portfolio column {j} out of range")));
        }
        Ok(Portfolio {
            strategies: columns
                .iter()
                .map(|&j| {
                    let mut row = vec![0.0; n];
                    row[j] = 1.0;
                    row
                })
                .collect(),
        })
    }

    /// The identity portfolio: every column as a pure strategy.
    pub fn identity(n: usize) -> Portfolio {
        Portfolio::from_columns(&(0..n).collect::<Vec<_>>(), n).expect("identity is well-formed")
    }

    pub fn k(&self) -> usize {
        self.strategies.len()
    }

    /// Number of underlying column-player actions.
    pub fn num_actions(&self) -> usize {
        self.strategies[0].len()
    }

    pub fn strategies(&self) -> &[Vec<f64>] {
        &self.strategies
    }

    pub fn row(&self, z: usize) -> &[f64] {
        &self.strategies[z]
    }

    /// True iff every row is a standard basis vector.
    pub fn is_pure(&self) -> bool {
        self.pure_columns().is_some()
    }

    /// The selected column per row when the portfolio is pure.
    pub fn pure_columns(&self) -> Option<Vec<usize>> {
        self.strategies
            .iter()
            .map(|row| {
                let mut ones = row.iter().enumerate().filter(|(_, &p)| p != 0.0);
                match (ones.next(), ones.next()) {
                    (Some((j, &1.0)), None) => Some(j),
                    _ => None,
                }
            })
            .collect()
    }
}

/// Equilibrium selection used when evaluating a portfolio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionFunction {
    Pessimistic,
    Optimistic,
    RmPlus { iterations: usize },
}

impl std::fmt::Display for SelectionFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SelectionFunction::Pessimistic => write!(f, "pessimistic"),
            SelectionFunction::Optimistic => write!(f, "optimistic"),
            SelectionFunction::RmPlus { .. } => write!(f, "rm-plus"),
        }
    }
}

/// Result of evaluating one portfolio under one selection function. All
/// values are in the evaluated (normalized) game's units.
#[derive(Debug, Clone)]
pub struct PortfolioEvaluation {
    /// Row player's guaranteed payoff `u_f` when assuming the portfolio.
    pub utility: f64,
    /// `u* - u_f`.
    pub exploitability: f64,
    /// The selected restricted-equilibrium strategy, in the full game's row
    /// space.
    pub p1_strategy: MixedStrategy,
    /// The column player's best-responding action in the full game.
    pub responder_action: usize,
}

/// Restricted game: the column player may only play portfolio strategies.
/// Entry `(i, z)` is `sum_j U[i][j] * P[z][j]`.
pub fn restrict(game: &MatrixGame, portfolio: &Portfolio) -> Result<MatrixGame> {
    if portfolio.num_actions() != game.cols() {
        return Err(Error::model(format!(
            "portfolio is over {} actions but the game has {} columns",
            portfolio.num_actions(),
            game.cols()
        )));
    }
    let rows = (0..game.rows())
        .map(|i| {
            let row = game.row(i);
            portfolio
                .strategies()
                .iter()
                .map(|p| row.iter().zip(p).map(|(u, w)| u * w).sum())
                .collect()
        })
        .collect();
    let mut restricted = MatrixGame::from_rows(rows)?;
    restricted.row_labels = game.row_labels.clone();
    restricted.col_labels = portfolio
        .strategies()
        .iter()
        .enumerate()
        .map(
            |(z, row)| match row.iter().enumerate().find(|(_, &p)| p == 1.0) {
                Some((j, _)) => game.col_labels[j].clone(),
                None => format!("mix{z}"),
            },
        )
        .collect();
    restricted.normalized = game.normalized;
    restricted.denorm_offset = game.denorm_offset;
    restricted.denorm_scale = game.denorm_scale;
    Ok(restricted)
}

fn require_normalized(game: &MatrixGame) -> Result<()> {
    if !game.normalized {
        return Err(Error::parameter(
            "portfolio evaluation requires a normalized game (payoffs in [-1, 1])",
        ));
    }
    Ok(())
}

/// Evaluates portfolios against one game, computing the full-game value
/// once.
pub struct Evaluator<'g> {
    game: &'g MatrixGame,
    full_value: f64,
}

impl<'g> Evaluator<'g> {
    pub fn new(game: &'g MatrixGame) -> Result<Evaluator<'g>> {
        require_normalized(game)?;
        let full_value = game_value(game)?.value;
        Ok(Evaluator { game, full_value })
    }

    /// The full game's value `u*`.
    pub fn full_value(&self) -> f64 {
        self.full_value
    }

    pub fn evaluate(
        &self,
        portfolio: &Portfolio,
        selection: SelectionFunction,
    ) -> Result<PortfolioEvaluation> {
        match selection {
            SelectionFunction::Pessimistic => self.pessimistic(portfolio),
            SelectionFunction::Optimistic => self.optimistic(portfolio),
            SelectionFunction::RmPlus { iterations } => self.rm(portfolio, iterations),
        }
    }

    /// Pessimistic evaluation: among restricted equilibria the row player
    /// picks the one with the worst full-game guarantee. Solved as a MILP:
    /// `x` a distribution over rows, exactly one best-response selector
    /// `b_i = 1`, `x U_R >= v_r`, `x U e_i <= v_o + M (1 - b_i)`, minimize
    /// `v_o`.
    pub fn pessimistic(&self, portfolio: &Portfolio) -> Result<PortfolioEvaluation> {
        let restricted = restrict(self.game, portfolio)?;
        let restricted_value = game_value(&restricted)?.value;
        let m = self.game.rows();
        let n = self.game.cols();
        let k = portfolio.k();

        // Variables: x_0..x_{m-1}, v_o, b_0..b_{n-1}.
        let v_o = m;
        let b0 = m + 1;
        let mut objective = vec![0.0; m + 1 + n];
        objective[v_o] = 1.0;
        let mut lp = LinearProgram::new(ObjectiveSense::Minimize, objective);
        for i in 0..m {
            lp.bounds[i] = (0.0, 1.0);
        }
        lp.bounds[v_o] = (self.game.min_entry(), self.game.max_entry());
        for b in 0..n {
            lp.bounds[b0 + b] = (0.0, 1.0);
        }
        let width = m + 1 + n;
        let mut x_sum = vec![0.0; width];
        x_sum[..m].fill(1.0);
        lp.add_constraint(x_sum, Relation::Eq, 1.0);
        let mut b_sum = vec![0.0; width];
        b_sum[b0..].fill(1.0);
        lp.add_constraint(b_sum, Relation::Eq, 1.0);
        for z in 0..k {
            let mut coeffs = vec![0.0; width];
            for (i, slot) in coeffs[..m].iter_mut().enumerate() {
                *slot = restricted.at(i, z);
            }
            lp.add_constraint(coeffs, Relation::Ge, restricted_value);
        }
        for j in 0..n {
            let mut coeffs = vec![0.0; width];
            for (i, slot) in coeffs[..m].iter_mut().enumerate() {
                *slot = self.game.at(i, j);
            }
            coeffs[v_o] = -1.0;
            coeffs[b0 + j] = BIG_M;
            lp.add_constraint(coeffs, Relation::Le, BIG_M);
        }
        let mip = MixedIntegerProgram::new(lp, b0..b0 + n);
        let solved = solve_milp(&mip, &MilpParams::default())?;
        if !solved.is_optimal() {
            return Err(Error::SolverFailure(format!(
                "pessimistic evaluation MILP ended with status {:?}",
                solved.status
            )));
        }
        let p1_strategy = clean_strategy(&solved.primal[..m])?;
        let responder_action = (0..n)
            .find(|&j| solved.primal[b0 + j] == 1.0)
            .unwrap_or_else(|| argmin(&self.game.row_mix(&p1_strategy.probabilities)));
        let utility = solved.objective_value;
        Ok(PortfolioEvaluation {
            utility,
            exploitability: self.full_value - utility,
            p1_strategy,
            responder_action,
        })
    }

    /// Optimistic evaluation: the restricted equilibrium with the best
    /// full-game guarantee. Pure LP: maximize `v_o` subject to `x` a
    /// distribution, `x U_R >= v_r`, `v_o <= x U e_i` for all columns.
    pub fn optimistic(&self, portfolio: &Portfolio) -> Result<PortfolioEvaluation> {
        let restricted = restrict(self.game, portfolio)?;
        let restricted_value = game_value(&restricted)?.value;
        let m = self.game.rows();
        let n = self.game.cols();
        let k = portfolio.k();

        let v_o = m;
        let width = m + 1;
        let mut objective = vec![0.0; width];
        objective[v_o] = 1.0;
        let mut lp = LinearProgram::new(ObjectiveSense::Maximize, objective);
        for i in 0..m {
            lp.bounds[i] = (0.0, 1.0);
        }
        lp.bounds[v_o] = (self.game.min_entry(), self.game.max_entry());
        let mut x_sum = vec![0.0; width];
        x_sum[..m].fill(1.0);
        lp.add_constraint(x_sum, Relation::Eq, 1.0);
        for z in 0..k {
            let mut coeffs = vec![0.0; width];
            for (i, slot) in coeffs[..m].iter_mut().enumerate() {
                *slot = restricted.at(i, z);
            }
            lp.add_constraint(coeffs, Relation::Ge, restricted_value);
        }
        for j in 0..n {
            let mut coeffs = vec![0.0; width];
            for (i, slot) in coeffs[..m].iter_mut().enumerate() {
                *slot = self.game.at(i, j);
            }
            coeffs[v_o] = -1.0;
            lp.add_constraint(coeffs, Relation::Ge, 0.0);
        }
        let solved = solve_lp(&lp)?;
        if !solved.is_optimal() {
            return Err(Error::SolverFailure(format!(
                "optimistic evaluation LP ended with status {:?}",
                solved.status
            )));
        }
        let p1_strategy = clean_strategy(&solved.primal[..m])?;
        let responder_action = argmin(&self.game.row_mix(&p1_strategy.probabilities));
        let utility = solved.objective_value;
        Ok(PortfolioEvaluation {
            utility,
            exploitability: self.full_value - utility,
            p1_strategy,
            responder_action,
        })
    }

    /// RM+ evaluation: run RM+ on the restricted game and measure the
    /// averaged row strategy in the full game.
    pub fn rm(&self, portfolio: &Portfolio, iterations: usize) -> Result<PortfolioEvaluation> {
        if iterations == 0 {
            return Err(Error::parameter(
                "rm+ selection needs at least one iteration",
            ));
        }
        let restricted = restrict(self.game, portfolio)?;
        let state = rm_plus(&restricted, iterations);
        let p1_strategy = state.average_p1;
        let payoffs = self.game.row_mix(&p1_strategy.probabilities);
        let responder_action = argmin(&payoffs);
        let utility = payoffs[responder_action];
        Ok(PortfolioEvaluation {
            utility,
            exploitability: self.full_value - utility,
            p1_strategy,
            responder_action,
        })
    }
}

fn clean_strategy(raw: &[f64]) -> Result<MixedStrategy> {
    let mut probs: Vec<f64> = raw.iter().map(|&p| p.max(0.0)).collect();
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > 1e-6 {
        return Err(Error::SolverFailure(format!(
            "evaluation strategy sums to {sum}"
        )));
    }
    for p in &mut probs {
        *p /= sum;
    }
    MixedStrategy::new(probs, Player::One)
}

/// Worst-case portfolio utility over the restricted equilibria. Requires a
/// normalized game.
pub fn pessimistic_utility(
    game: &MatrixGame,
    portfolio: &Portfolio,
) -> Result<PortfolioEvaluation> {
    Evaluator::new(game)?.pessimistic(portfolio)
}

/// Best-case portfolio utility over the restricted equilibria. Requires a
/// normalized game.
pub fn optimistic_utility(game: &MatrixGame, portfolio: &Portfolio) -> Result<PortfolioEvaluation> {
    Evaluator::new(game)?.optimistic(portfolio)
}

/// Portfolio utility under the RM+ averaged strategy of the restricted
/// game. Requires a normalized game.
pub fn rm_utility(
    game: &MatrixGame,
    portfolio: &Portfolio,
    iterations: usize,
) -> Result<PortfolioEvaluation> {
    Evaluator::new(game)?.rm(portfolio, iterations)
}

/// Exploitability of the portfolio under the given selection function, in
/// the (normalized) game's units.
pub fn exploitability(
    game: &MatrixGame,
    portfolio: &Portfolio,
    selection: SelectionFunction,
) -> Result<f64> {
    Ok(Evaluator::new(game)?
        .evaluate(portfolio, selection)?
        .exploitability)
}
