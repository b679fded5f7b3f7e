//! Portfolio-construction algorithms: the dominance MILPs and their
//! size-minimizing variant, Greedy-K, Double Oracle, brute-force optima and
//! the random-mixed baseline.
//!
//! Methods that optimize a dominance epsilon return it as `epsilon_bound`;
//! by the dominance argument the pessimistic exploitability of the returned
//! portfolio never exceeds that bound. Double Oracle and the random
//! baseline carry no bound.

mod assignment;
mod pure_search;

use crate::equilibrium::{best_response, game_value, individual_epsilon, joint_epsilon};
use crate::games::{MatrixGame, MixedStrategy, PortfolioMetadata};
use crate::portfolio::{Evaluator, Portfolio, SelectionFunction};
use crate::solver::{
    solve_milp, LinearProgram, MilpParams, MixedIntegerProgram, ObjectiveSense, Relation,
};
use crate::{Error, Player, Result};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use std::time::Instant;

/// Default cap on the number of subsets brute force will enumerate.
pub const BRUTE_FORCE_BUDGET: u64 = 200_000;

/// A constructed portfolio plus its provenance.
#[derive(Debug, Clone)]
pub struct ConstructionResult {
    pub portfolio: Portfolio,
    /// Upper bound on pessimistic exploitability, for the dominance-based
    /// methods; absent for methods without a guarantee.
    pub epsilon_bound: Option<f64>,
    pub method: String,
    pub seed: Option<u64>,
    pub runtime_ms: f64,
}

impl ConstructionResult {
    pub fn metadata(&self) -> PortfolioMetadata {
        PortfolioMetadata {
            method: self.method.clone(),
            seed: self.seed,
            epsilon_bound: self.epsilon_bound,
            runtime_ms: self.runtime_ms,
        }
    }
}

fn require_normalized(game: &MatrixGame) -> Result<()> {
    if !game.normalized {
        return Err(Error::parameter(
            "portfolio construction requires a normalized game (payoffs in [-1, 1])",
        ));
    }
    Ok(())
}

fn check_k(game: &MatrixGame, k: usize) -> Result<()> {
    if k < 1 || k > game.cols() {
        return Err(Error::parameter(format!(
            "portfolio size {k} must lie in [1, {}]",
            game.cols()
        )));
    }
    Ok(())
}

fn finish(
    portfolio: Portfolio,
    epsilon_bound: Option<f64>,
    method: &str,
    seed: Option<u64>,
    started: Instant,
) -> ConstructionResult {
    ConstructionResult {
        portfolio,
        epsilon_bound,
        method: method.to_string(),
        seed,
        runtime_ms: started.elapsed().as_secs_f64() * 1e3,
    }
}

/// Shared builder for the pure-dominance program. Variables are the column
/// selectors `b`, one dominating mixture per column (`l[j][h]`, restricted
/// to selected columns by `l_jh <= b_h`) and the dominance slack `eps`.
/// With `fixed_epsilon` absent the objective minimizes `eps` under
/// `sum b = k`; with it present `eps` is pinned and the objective minimizes
/// `sum b`.
fn pure_dominance_model(
    game: &MatrixGame,
    k: Option<usize>,
    fixed_epsilon: Option<f64>,
) -> MixedIntegerProgram {
    let n = game.cols();
    let m = game.rows();
    let l0 = n;
    let eps = n + n * n;
    let width = eps + 1;

    let mut objective = vec![0.0; width];
    match fixed_epsilon {
        None => objective[eps] = 1.0,
        Some(_) => objective[..n].fill(1.0),
    }
    let mut lp = LinearProgram::new(ObjectiveSense::Minimize, objective);
    for b in 0..n {
        lp.bounds[b] = (0.0, 1.0);
    }
    for v in l0..eps {
        lp.bounds[v] = (0.0, 1.0);
    }
    lp.bounds[eps] = match fixed_epsilon {
        None => (0.0, game.payoff_range()),
        Some(e) => (e, e),
    };

    if let Some(k) = k {
        let mut coeffs = vec![0.0; width];
        coeffs[..n].fill(1.0);
        lp.add_constraint(coeffs, Relation::Eq, k as f64);
    }
    for j in 0..n {
        let mut coeffs = vec![0.0; width];
        for h in 0..n {
            coeffs[l0 + j * n + h] = 1.0;
        }
        lp.add_constraint(coeffs, Relation::Eq, 1.0);
    }
    for j in 0..n {
        for h in 0..n {
            let mut coeffs = vec![0.0; width];
            coeffs[l0 + j * n + h] = 1.0;
            coeffs[h] = -1.0;
            lp.add_constraint(coeffs, Relation::Le, 0.0);
        }
    }
    for i in 0..m {
        for j in 0..n {
            let mut coeffs = vec![0.0; width];
            for h in 0..n {
                coeffs[l0 + j * n + h] = game.at(i, h);
            }
            coeffs[eps] = -1.0;
            lp.add_constraint(coeffs, Relation::Le, game.at(i, j));
        }
    }
    MixedIntegerProgram::new(lp, 0..n)
}

/// Feasible starting point for the pure-dominance program derived from a
/// column subset: kept columns dominate themselves, removed columns use
/// their cheapest mixture over the kept set.
fn pure_dominance_incumbent(game: &MatrixGame, keep: &[usize]) -> Result<Vec<f64>> {
    let n = game.cols();
    let mut primal = vec![0.0; n + n * n + 1];
    for &j in keep {
        primal[j] = 1.0;
    }
    let mut epsilon: f64 = 0.0;
    for j in 0..n {
        let weights: Vec<f64> = if keep.contains(&j) {
            let mut w = vec![0.0; n];
            w[j] = 1.0;
            w
        } else {
            individual_epsilon(game, j, keep)?.1.probabilities
        };
        for i in 0..game.rows() {
            let mixed: f64 = weights.iter().zip(game.row(i)).map(|(w, u)| w * u).sum();
            epsilon = epsilon.max(mixed - game.at(i, j));
        }
        for (h, &w) in weights.iter().enumerate() {
            primal[n + j * n + h] = w;
        }
    }
    primal[n + n * n] = epsilon;
    Ok(primal)
}

fn selected_columns(primal: &[f64], n: usize) -> Vec<usize> {
    (0..n).filter(|&j| primal[j] == 1.0).collect()
}

/// Pure portfolio with the smallest dominance bound: selects `k` columns
/// whose mixtures eps-dominate all columns, minimizing eps. Solved by the
/// exact subset search in [`pure_search`], which computes the same optimum
/// as the monolithic MILP built by [`pure_dominance_model`].
pub fn eps_dom_pure(game: &MatrixGame, k: usize) -> Result<ConstructionResult> {
    let started = Instant::now();
    require_normalized(game)?;
    check_k(game, k)?;
    let n = game.cols();
    if k == n {
        return Ok(finish(
            Portfolio::identity(n),
            Some(0.0),
            "eps-dom-pure",
            None,
            started,
        ));
    }
    let outcome = pure_search::optimal_pure_cover(game, k)?;
    Ok(finish(
        Portfolio::from_columns(&outcome.columns, n)?,
        Some(outcome.epsilon.max(0.0)),
        "eps-dom-pure",
        None,
        started,
    ))
}

/// Mixed portfolio with the smallest dominance bound.
///
/// Two exact candidate solutions are compared and the better one returned:
///
/// * the column-assignment optimum (`k` mixed strategies, every column
///   dominated by the one strategy assigned to it), solved by the search in
///   [`assignment`], which computes the same optimum as the monolithic
///   big-M program;
/// * the pure optimum of [`eps_dom_pure`], whose per-column mixtures over
///   the selected columns are linear combinations of the (pure) portfolio
///   members and therefore carry the same dominance guarantee.
///
/// Neither candidate space contains the other - a pure certificate may use
/// a different mixture for every column, while an assignment certificate
/// may mix columns outside any pure support - so taking the better of the
/// two is what makes the mixed bound never worse than the pure bound. Ties
/// keep the assignment's mixed strategies. Both bounds are sound for the
/// returned portfolio.
pub fn eps_dom_mixed(game: &MatrixGame, k: usize) -> Result<ConstructionResult> {
    eps_dom_mixed_with_pure(game, k, None)
}

/// [`eps_dom_mixed`] with an already-computed [`eps_dom_pure`] result, so
/// experiment grids running both methods do not solve the pure program
/// twice.
pub fn eps_dom_mixed_with_pure(
    game: &MatrixGame,
    k: usize,
    pure: Option<&ConstructionResult>,
) -> Result<ConstructionResult> {
    let started = Instant::now();
    require_normalized(game)?;
    check_k(game, k)?;
    let outcome = assignment::optimal_mixed_cover(game, k)?;

    let pure_candidate = match pure {
        Some(result) if result.portfolio.k() == k && result.epsilon_bound.is_some() => (
            result.epsilon_bound.expect("checked"),
            result.portfolio.clone(),
        ),
        _ => {
            let result = eps_dom_pure(game, k)?;
            (
                result.epsilon_bound.expect("pure carries a bound"),
                result.portfolio,
            )
        }
    };
    let (pure_eps, pure_portfolio) = pure_candidate;
    if pure_eps < outcome.epsilon - 1e-12 {
        return Ok(finish(
            pure_portfolio,
            Some(pure_eps),
            "eps-dom-mixed",
            None,
            started,
        ));
    }
    Ok(finish(
        Portfolio::from_rows(outcome.strategies)?,
        Some(outcome.epsilon),
        "eps-dom-mixed",
        None,
        started,
    ))
}

/// Monolithic big-M formulation of the mixed-dominance program, kept as the
/// cross-check route for [`eps_dom_mixed`] on small instances.
pub fn mixed_dominance_model(game: &MatrixGame, k: usize, big_m: f64) -> MixedIntegerProgram {
    let n = game.cols();
    let m = game.rows();
    // Variables: l[z][h] (k blocks of n weights), d[z][j] selectors, eps.
    let d0 = k * n;
    let eps = d0 + k * n;
    let width = eps + 1;
    let mut objective = vec![0.0; width];
    objective[eps] = 1.0;
    let mut lp = LinearProgram::new(ObjectiveSense::Minimize, objective);
    for v in 0..eps {
        lp.bounds[v] = (0.0, 1.0);
    }
    lp.bounds[eps] = (0.0, game.payoff_range());
    for z in 0..k {
        let mut coeffs = vec![0.0; width];
        for h in 0..n {
            coeffs[z * n + h] = 1.0;
        }
        lp.add_constraint(coeffs, Relation::Eq, 1.0);
    }
    for j in 0..n {
        let mut coeffs = vec![0.0; width];
        for z in 0..k {
            coeffs[d0 + z * n + j] = 1.0;
        }
        lp.add_constraint(coeffs, Relation::Eq, 1.0);
    }
    for z in 0..k {
        for i in 0..m {
            for j in 0..n {
                let mut coeffs = vec![0.0; width];
                for h in 0..n {
                    coeffs[z * n + h] = game.at(i, h);
                }
                coeffs[eps] = -1.0;
                coeffs[d0 + z * n + j] = big_m;
                lp.add_constraint(coeffs, Relation::Le, game.at(i, j) + big_m);
            }
        }
    }
    MixedIntegerProgram::new(lp, d0..eps)
}

/// Smallest pure portfolio whose dominance slack stays within the given
/// eps: same constraints as [`eps_dom_pure`] with eps pinned and the
/// objective minimizing the portfolio size.
pub fn eps_dom_min_size(game: &MatrixGame, epsilon: f64) -> Result<ConstructionResult> {
    let started = Instant::now();
    require_normalized(game)?;
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::parameter(format!(
            "epsilon must be nonnegative, got {epsilon}"
        )));
    }
    let n = game.cols();
    let mip = pure_dominance_model(game, None, Some(epsilon));
    let mut incumbent = pure_dominance_incumbent(game, &(0..n).collect::<Vec<_>>())?;
    *incumbent.last_mut().expect("eps slot") = epsilon;
    let params = MilpParams {
        initial_incumbent: Some(incumbent),
        ..MilpParams::default()
    };
    let solved = solve_milp(&mip, &params)?;
    if !solved.is_optimal() {
        return Err(Error::SolverFailure(format!(
            "size-minimizing dominance MILP ended with status {:?}",
            solved.status
        )));
    }
    let columns = selected_columns(&solved.primal, n);
    Ok(finish(
        Portfolio::from_columns(&columns, n)?,
        Some(epsilon),
        "eps-dom-min-size",
        None,
        started,
    ))
}

/// The Greedy-K keep set: rank columns once by their individual dominance
/// eps against all other columns, remove the `n - k` smallest (lowest index
/// on ties), keep the rest.
fn greedy_keep_set(game: &MatrixGame, k: usize) -> Result<Vec<usize>> {
    let n = game.cols();
    let mut ranked: Vec<(f64, usize)> = Vec::with_capacity(n);
    for j in 0..n {
        let others: Vec<usize> = (0..n).filter(|&h| h != j).collect();
        let (eps, _) = individual_epsilon(game, j, &others)?;
        ranked.push((eps, j));
    }
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut removed: Vec<usize> = ranked[..n - k].iter().map(|&(_, j)| j).collect();
    removed.sort_unstable();
    Ok((0..n).filter(|j| !removed.contains(j)).collect())
}

/// Greedy-K: remove the `n - k` columns with the lowest individual
/// dominance eps (computed against all other columns in a single ranking
/// pass), then report the joint eps of the removed set as the bound.
pub fn greedy_k(game: &MatrixGame, k: usize) -> Result<ConstructionResult> {
    let started = Instant::now();
    check_k(game, k)?;
    let n = game.cols();
    let keep = greedy_keep_set(game, k)?;
    let removed: Vec<usize> = (0..n).filter(|j| !keep.contains(j)).collect();
    let bound = joint_epsilon(game, &removed)?;
    Ok(finish(
        Portfolio::from_columns(&keep, n)?,
        Some(bound),
        "greedy-k",
        None,
        started,
    ))
}

/// Double Oracle: grow both players' action subsets with best responses to
/// the current sub-game equilibrium, starting from responses to uniform
/// play, until the column subset reaches `k` or no response is new. Early
/// convergence is padded with responses to noise-perturbed equilibrium
/// strategies (noise doubling from 1%), falling back to the lowest-index
/// unused column, so the result always has exactly `min(k, n)` columns. No
/// dominance bound is attached.
pub fn double_oracle(game: &MatrixGame, k: usize) -> Result<ConstructionResult> {
    let started = Instant::now();
    check_k(game, k)?;
    let m = game.rows();
    let n = game.cols();

    let (first_row, _) = best_response(game, &MixedStrategy::uniform(n, Player::Two), Player::One)?;
    let (first_col, _) = best_response(game, &MixedStrategy::uniform(m, Player::One), Player::Two)?;
    let mut rows = vec![first_row];
    let mut cols = vec![first_col];

    let subgame_profile =
        |rows: &[usize], cols: &[usize]| -> Result<(MixedStrategy, MixedStrategy)> {
            let sub = MatrixGame::from_rows(
                rows.iter()
                    .map(|&i| cols.iter().map(|&j| game.at(i, j)).collect())
                    .collect(),
            )?;
            let eq = game_value(&sub)?;
            let mut full_x = vec![0.0; m];
            for (pos, &i) in rows.iter().enumerate() {
                full_x[i] = eq.strategy_p1.probabilities[pos];
            }
            let mut full_y = vec![0.0; n];
            for (pos, &j) in cols.iter().enumerate() {
                full_y[j] = eq.strategy_p2.probabilities[pos];
            }
            Ok((
                MixedStrategy::new(full_x, Player::One)?,
                MixedStrategy::new(full_y, Player::Two)?,
            ))
        };

    while cols.len() < k {
        let (x, y) = subgame_profile(&rows, &cols)?;
        let (row_reply, _) = best_response(game, &y, Player::One)?;
        let (col_reply, _) = best_response(game, &x, Player::Two)?;
        let mut added = false;
        if !rows.contains(&row_reply) {
            rows.push(row_reply);
            added = true;
        }
        if cols.len() < k && !cols.contains(&col_reply) {
            cols.push(col_reply);
            added = true;
        }
        if !added {
            break;
        }
    }

    // Converged early: perturb the equilibrium strategy until a fresh best
    // response appears.
    while cols.len() < k.min(n) {
        let (x, _) = subgame_profile(&rows, &cols)?;
        let mut noise = 0.01;
        let mut addition = None;
        while noise <= 1.0 {
            let perturbed: Vec<f64> = x
                .probabilities
                .iter()
                .map(|p| (1.0 - noise) * p + noise / m as f64)
                .collect();
            let perturbed = MixedStrategy::new(perturbed, Player::One)?;
            let (reply, _) = best_response(game, &perturbed, Player::Two)?;
            if !cols.contains(&reply) {
                addition = Some(reply);
                break;
            }
            noise *= 2.0;
        }
        let fallback = (0..n).find(|j| !cols.contains(j));
        match addition.or(fallback) {
            Some(j) => cols.push(j),
            None => break,
        }
    }

    cols.sort_unstable();
    Ok(finish(
        Portfolio::from_columns(&cols, n)?,
        None,
        "double-oracle",
        None,
        started,
    ))
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result = 1u128;
    for i in 0..k as u128 {
        result = result * (u128::from(n) - i) / (i + 1);
    }
    u64::try_from(result).unwrap_or(u64::MAX)
}

pub(crate) fn subsets_lex(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // Advance to the next subset in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Ground-truth optimal pure portfolio of size `k` under the given
/// selection function, by exhaustive enumeration of all column subsets in
/// lexicographic order (first optimum wins ties). Subsets are evaluated in
/// parallel with an order-independent reduction. Fails with a resource
/// error when `C(n, k)` exceeds [`BRUTE_FORCE_BUDGET`].
pub fn brute_force_pure(
    game: &MatrixGame,
    k: usize,
    selection: SelectionFunction,
) -> Result<ConstructionResult> {
    let started = Instant::now();
    require_normalized(game)?;
    check_k(game, k)?;
    let n = game.cols();
    let count = binomial(n as u64, k as u64);
    if count > BRUTE_FORCE_BUDGET {
        return Err(Error::Resource {
            message: format!(
                "brute force over C({n}, {k}) = {count} subsets exceeds the budget of {BRUTE_FORCE_BUDGET}"
            ),
            incumbent: None,
        });
    }
    let evaluator = Evaluator::new(game)?;
    let subsets = subsets_lex(n, k);
    let evaluations: Vec<f64> = subsets
        .par_iter()
        .map(|columns| {
            let portfolio = Portfolio::from_columns(columns, n)?;
            Ok(evaluator.evaluate(&portfolio, selection)?.exploitability)
        })
        .collect::<Result<_>>()?;
    let minimum = evaluations.iter().copied().fold(f64::INFINITY, f64::min);
    // Exact mathematical ties come back with solver noise; treat anything
    // within 1e-9 of the minimum as tied and take the lexicographically
    // first subset.
    let idx = evaluations
        .iter()
        .position(|&ex| ex <= minimum + 1e-9)
        .expect("at least one subset");
    Ok(finish(
        Portfolio::from_columns(&subsets[idx], n)?,
        None,
        "brute-force-pure",
        None,
        started,
    ))
}

/// `k` strategies drawn uniformly from the simplex via exponential
/// spacings: each weight is `-ln(1 - u)` for a ChaCha8 uniform `u`,
/// normalized to sum one. Reproducible per seed.
pub fn random_mixed(game: &MatrixGame, k: usize, seed: u64) -> Result<ConstructionResult> {
    let started = Instant::now();
    if k < 1 {
        return Err(Error::parameter("portfolio size must be at least 1"));
    }
    let n = game.cols();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut strategies = Vec::with_capacity(k);
    for _ in 0..k {
        let mut row: Vec<f64> = (0..n)
            .map(|_| {
                let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
                -(1.0 - u).ln()
            })
            .collect();
        let total: f64 = row.iter().sum();
        if total <= 0.0 {
            row.fill(1.0 / n as f64);
        } else {
            for w in &mut row {
                *w /= total;
            }
        }
        strategies.push(row);
    }
    Ok(finish(
        Portfolio::from_rows(strategies)?,
        None,
        "random-mixed",
        Some(seed),
        started,
    ))
}

#[cfg(test)]
mod tests;
