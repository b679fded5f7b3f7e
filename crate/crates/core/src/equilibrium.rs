//! Core game-theoretic computations: game value and Nash equilibrium via
//! LP, best responses, strategy exploitability, Regret Matching+ dynamics
//! and the epsilon-dominance LPs.

use crate::games::{MatrixGame, MixedStrategy};
use crate::solver::{solve_lp, LinearProgram, ObjectiveSense, Relation};
use crate::{Error, Player, Result};

/// Game value and one equilibrium profile.
#[derive(Debug, Clone)]
pub struct EquilibriumResult {
    pub value: f64,
    pub strategy_p1: MixedStrategy,
    pub strategy_p2: MixedStrategy,
}

/// Builds the row player's maximin LP: variables `x_0..x_{m-1}, v`,
/// maximize `v` subject to `x^T U e_j >= v` per column and `sum x = 1`.
fn maximin_lp(game: &MatrixGame) -> LinearProgram {
    let m = game.rows();
    let n = game.cols();
    let mut objective = vec![0.0; m + 1];
    objective[m] = 1.0;
    let mut lp = LinearProgram::new(ObjectiveSense::Maximize, objective);
    lp.bounds[m] = (f64::NEG_INFINITY, f64::INFINITY);
    for j in 0..n {
        let mut coeffs = vec![0.0; m + 1];
        for (i, slot) in coeffs[..m].iter_mut().enumerate() {
            *slot = game.at(i, j);
        }
        coeffs[m] = -1.0;
        lp.add_constraint(coeffs, Relation::Ge, 0.0);
    }
    lp.add_constraint(
        (0..=m).map(|i| if i < m { 1.0 } else { 0.0 }).collect(),
        Relation::Eq,
        1.0,
    );
    lp
}

fn clean_distribution(raw: &[f64], owner: Player) -> Result<MixedStrategy> {
    let mut probs: Vec<f64> = raw.iter().map(|&p| p.max(0.0)).collect();
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > 1e-6 {
        return Err(Error::SolverFailure(format!(
            "equilibrium strategy sums to {sum}"
        )));
    }
    for p in &mut probs {
        *p /= sum;
    }
    MixedStrategy::new(probs, owner)
}

/// Game value and one Nash equilibrium profile from the standard minimax LP.
/// The row player's strategy is the LP primal; the column player's strategy
/// comes from the duals of the column constraints. Deterministic.
pub fn game_value(game: &MatrixGame) -> Result<EquilibriumResult> {
    let lp = maximin_lp(game);
    let solved = solve_lp(&lp)?;
    if !solved.is_optimal() {
        return Err(Error::SolverFailure(format!(
            "minimax LP ended with status {:?}",
            solved.status
        )));
    }
    let m = game.rows();
    let n = game.cols();
    let strategy_p1 = clean_distribution(&solved.primal[..m], Player::One)?;
    let dual = solved
        .dual
        .as_ref()
        .ok_or_else(|| Error::SolverFailure("minimax LP returned no duals".into()))?;
    // Duals of the >= rows are nonpositive for this maximization; their
    // negations form the column player's equilibrium strategy.
    let p2_raw: Vec<f64> = dual[..n].iter().map(|&y| -y).collect();
    let strategy_p2 = clean_distribution(&p2_raw, Player::Two)?;
    Ok(EquilibriumResult {
        value: solved.objective_value,
        strategy_p1,
        strategy_p2,
    })
}

/// Best pure response of `player` against the opponent's mixed strategy.
///
/// Returns the action index and the row player's expected payoff of the
/// response; player one maximizes that payoff, player two minimizes it.
/// Ties break toward the lowest index.
pub fn best_response(
    game: &MatrixGame,
    opponent: &MixedStrategy,
    player: Player,
) -> Result<(usize, f64)> {
    match player {
        Player::One => {
            if opponent.len() != game.cols() || opponent.owner != Player::Two {
                return Err(Error::model(
                    "player-one response needs a column-player strategy of matching dimension",
                ));
            }
            let values = game.col_mix(&opponent.probabilities);
            let best = argmax(&values);
            Ok((best, values[best]))
        }
        Player::Two => {
            if opponent.len() != game.rows() || opponent.owner != Player::One {
                return Err(Error::model(
                    "player-two response needs a row-player strategy of matching dimension",
                ));
            }
            let values = game.row_mix(&opponent.probabilities);
            let best = argmin(&values);
            Ok((best, values[best]))
        }
    }
}

pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] {
            best = i;
        }
    }
    best
}

/// Exploitability of a row-player strategy: `u* - min_j (strategy^T U)_j`.
/// Zero exactly for maximin strategies.
pub fn exploitability_of(game: &MatrixGame, strategy: &MixedStrategy) -> Result<f64> {
    if strategy.len() != game.rows() || strategy.owner != Player::One {
        return Err(Error::model(
            "exploitability needs a row-player strategy of matching dimension",
        ));
    }
    let eq = game_value(game)?;
    let payoffs = game.row_mix(&strategy.probabilities);
    let worst = payoffs.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(eq.value - worst)
}

/// State of a Regret Matching+ run.
#[derive(Debug, Clone)]
pub struct RmPlusState {
    /// Clipped cumulative regrets, nonnegative.
    pub regrets_p1: Vec<f64>,
    pub regrets_p2: Vec<f64>,
    /// Uniformly averaged strategies over all iterations.
    pub average_p1: MixedStrategy,
    pub average_p2: MixedStrategy,
    pub iterations: usize,
}

fn regret_matching_strategy(regrets: &[f64], out: &mut [f64]) {
    let total: f64 = regrets.iter().sum();
    if total > 0.0 {
        for (o, &r) in out.iter_mut().zip(regrets) {
            *o = r / total;
        }
    } else {
        let u = 1.0 / out.len() as f64;
        out.fill(u);
    }
}

/// Regret Matching+ with alternating updates, clipped cumulative regrets,
/// uniform play while all clipped regrets are zero, and linearly weighted
/// strategy averaging (iteration `t` enters the average with weight `t`).
/// Each iteration the column player's regrets are updated against the row
/// player's current strategy, then the row player's against the column
/// player's refreshed one. Deterministic.
pub fn rm_plus(game: &MatrixGame, iterations: usize) -> RmPlusState {
    assert!(iterations >= 1, "rm_plus needs at least one iteration");
    let m = game.rows();
    let n = game.cols();
    let mut regrets_p1 = vec![0.0; m];
    let mut regrets_p2 = vec![0.0; n];
    let mut sum_p1 = vec![0.0; m];
    let mut sum_p2 = vec![0.0; n];
    let mut strat_p1 = vec![0.0; m];
    let mut strat_p2 = vec![0.0; n];

    for t in 1..=iterations {
        let weight = t as f64;

        regret_matching_strategy(&regrets_p1, &mut strat_p1);
        let payoff_p2 = game.row_mix(&strat_p1);
        regret_matching_strategy(&regrets_p2, &mut strat_p2);
        let expected_p2: f64 = strat_p2.iter().zip(&payoff_p2).map(|(p, u)| p * u).sum();
        for (r, &u) in regrets_p2.iter_mut().zip(&payoff_p2) {
            // Player two's utility is the negation of the matrix entry.
            *r = (*r + (expected_p2 - u)).max(0.0);
        }

        regret_matching_strategy(&regrets_p2, &mut strat_p2);
        let payoff_p1 = game.col_mix(&strat_p2);
        let expected_p1: f64 = strat_p1.iter().zip(&payoff_p1).map(|(p, u)| p * u).sum();
        for (r, &u) in regrets_p1.iter_mut().zip(&payoff_p1) {
            *r = (*r + u - expected_p1).max(0.0);
        }

        for (s, p) in sum_p1.iter_mut().zip(&strat_p1) {
            *s += weight * p;
        }
        for (s, p) in sum_p2.iter_mut().zip(&strat_p2) {
            *s += weight * p;
        }
    }

    let total_weight = (iterations * (iterations + 1)) as f64 / 2.0;
    for s in &mut sum_p1 {
        *s /= total_weight;
    }
    for s in &mut sum_p2 {
        *s /= total_weight;
    }
    RmPlusState {
        regrets_p1,
        regrets_p2,
        average_p1: MixedStrategy {
            probabilities: sum_p1,
            owner: Player::One,
        },
        average_p2: MixedStrategy {
            probabilities: sum_p2,
            owner: Player::Two,
        },
        iterations,
    }
}

/// Smallest `eps` such that some mixture over `allowed` columns is, against
/// every row, at most `eps` worse for the column player than column
/// `target`. Returns the epsilon and the dominating mixture (over the full
/// column space, zero outside `allowed`).
pub fn individual_epsilon(
    game: &MatrixGame,
    target: usize,
    allowed: &[usize],
) -> Result<(f64, MixedStrategy)> {
    let n = game.cols();
    if target >= n {
        return Err(Error::model(format!("target column {target} out of range")));
    }
    if allowed.is_empty() {
        return Err(Error::model("allowed set must be nonempty"));
    }
    if allowed.contains(&target) {
        return Err(Error::model(
            "target column may not appear in the allowed set",
        ));
    }
    if allowed.iter().any(|&h| h >= n) {
        return Err(Error::model("allowed column out of range"));
    }

    // Variables: one weight per allowed column, then eps.
    let s = allowed.len();
    let mut objective = vec![0.0; s + 1];
    objective[s] = 1.0;
    let mut lp = LinearProgram::new(ObjectiveSense::Minimize, objective);
    lp.add_constraint(
        (0..=s).map(|c| if c < s { 1.0 } else { 0.0 }).collect(),
        Relation::Eq,
        1.0,
    );
    for i in 0..game.rows() {
        let mut coeffs = vec![0.0; s + 1];
        for (c, &h) in allowed.iter().enumerate() {
            coeffs[c] = game.at(i, h);
        }
        coeffs[s] = -1.0;
        lp.add_constraint(coeffs, Relation::Le, game.at(i, target));
    }
    let solved = solve_lp(&lp)?;
    if !solved.is_optimal() {
        return Err(Error::SolverFailure(format!(
            "dominance LP ended with status {:?}",
            solved.status
        )));
    }
    let mut probabilities = vec![0.0; n];
    for (c, &h) in allowed.iter().enumerate() {
        probabilities[h] = solved.primal[c].max(0.0);
    }
    let total: f64 = probabilities.iter().sum();
    for p in &mut probabilities {
        *p /= total;
    }
    Ok((
        solved.objective_value,
        MixedStrategy {
            probabilities,
            owner: Player::Two,
        },
    ))
}

/// Smallest shared `eps` such that every column in `removed` is
/// eps-dominated by some mixture over the remaining columns (one mixture per
/// removed column, single LP).
pub fn joint_epsilon(game: &MatrixGame, removed: &[usize]) -> Result<f64> {
    if removed.is_empty() {
        return Ok(0.0);
    }
    let n = game.cols();
    if removed.iter().any(|&t| t >= n) {
        return Err(Error::model("removed column out of range"));
    }
    let keep: Vec<usize> = (0..n).filter(|j| !removed.contains(j)).collect();
    if keep.is_empty() {
        return Err(Error::model("cannot remove every column"));
    }

    // Variables: |removed| blocks of |keep| weights, then eps.
    let s = keep.len();
    let eps_var = removed.len() * s;
    let mut objective = vec![0.0; eps_var + 1];
    objective[eps_var] = 1.0;
    let mut lp = LinearProgram::new(ObjectiveSense::Minimize, objective);
    for (b, &t) in removed.iter().enumerate() {
        let mut coeffs = vec![0.0; eps_var + 1];
        for c in 0..s {
            coeffs[b * s + c] = 1.0;
        }
        lp.add_constraint(coeffs, Relation::Eq, 1.0);
        for i in 0..game.rows() {
            let mut coeffs = vec![0.0; eps_var + 1];
            for (c, &h) in keep.iter().enumerate() {
                coeffs[b * s + c] = game.at(i, h);
            }
            coeffs[eps_var] = -1.0;
            lp.add_constraint(coeffs, Relation::Le, game.at(i, t));
        }
    }
    let solved = solve_lp(&lp)?;
    if !solved.is_optimal() {
        return Err(Error::SolverFailure(format!(
            "joint dominance LP ended with status {:?}",
            solved.status
        )));
    }
    Ok(solved.objective_value)
}
