//! Exact minimizer for the pure-dominance program.
//!
//! For a fixed keep-set `S` the program's optimal eps is
//! `max_{j not in S} min_{l in Delta(S)} max_i (l . U_i - U_ij)`, a bundle
//! of small per-column LPs. The search below branches on remove/keep
//! decisions per column. Removing a column prices it against the most
//! permissive support still possible (kept plus undecided columns), which
//! only underestimates its final cost, so the running maximum is a valid
//! lower bound and pruning against the incumbent preserves exactness.
//! Leaves recompute every removed column against the final keep-set. The
//! result matches the monolithic MILP optimum; the cross-check lives in the
//! module tests.

use crate::equilibrium::individual_epsilon;
use crate::games::MatrixGame;
use crate::{Error, Result};

pub(super) struct PureOutcome {
    pub epsilon: f64,
    pub columns: Vec<usize>,
}

struct SearchState<'g> {
    game: &'g MatrixGame,
    keep_target: usize,
    order: Vec<usize>,
    incumbent: f64,
    best_keep: Vec<usize>,
    lp_budget: usize,
    lp_used: usize,
}

impl SearchState<'_> {
    fn price(&mut self, column: usize, allowed: &[usize]) -> Result<f64> {
        self.lp_used += 1;
        if self.lp_used > self.lp_budget {
            return Err(Error::Resource {
                message: format!(
                    "pure-dominance search exceeded its LP budget of {}",
                    self.lp_budget
                ),
                incumbent: None,
            });
        }
        Ok(individual_epsilon(self.game, column, allowed)?.0)
    }

    /// Exact cost of a complete keep-set, maximizing over all other
    /// columns; reports infinity as soon as the incumbent is unbeatable.
    fn finalize(&mut self, keep: &[usize]) -> Result<f64> {
        let mut eps = 0.0f64;
        for j in 0..self.game.cols() {
            if keep.contains(&j) {
                continue;
            }
            eps = eps.max(self.price(j, keep)?);
            if eps >= self.incumbent - 1e-12 {
                return Ok(f64::INFINITY);
            }
        }
        Ok(eps)
    }

    fn offer(&mut self, keep: &[usize], eps: f64) {
        if eps < self.incumbent {
            self.incumbent = eps;
            let mut sorted = keep.to_vec();
            sorted.sort_unstable();
            self.best_keep = sorted;
        }
    }

    fn descend(
        &mut self,
        depth: usize,
        kept: &mut Vec<usize>,
        removed: usize,
        bound: f64,
    ) -> Result<()> {
        let n = self.game.cols();
        if self.incumbent <= 1e-12 {
            return Ok(());
        }
        if kept.len() == self.keep_target {
            let keep = kept.clone();
            let eps = self.finalize(&keep)?;
            self.offer(&keep, eps);
            return Ok(());
        }
        if n - removed == self.keep_target {
            // Every undecided column is forced into the keep-set.
            let mut keep = kept.clone();
            keep.extend(self.order[depth..].iter().copied());
            let eps = self.finalize(&keep)?;
            self.offer(&keep, eps);
            return Ok(());
        }
        let column = self.order[depth];

        // Remove-first: the ordering puts easily dominated columns early,
        // so the first leaf reproduces a greedy-style removal.
        let allowed: Vec<usize> = kept
            .iter()
            .copied()
            .chain(self.order[depth + 1..].iter().copied())
            .collect();
        let price = self.price(column, &allowed)?;
        let child_bound = bound.max(price);
        if child_bound < self.incumbent - 1e-12 {
            self.descend(depth + 1, kept, removed + 1, child_bound)?;
        }

        if bound < self.incumbent - 1e-12 {
            kept.push(column);
            self.descend(depth + 1, kept, removed, bound)?;
            kept.pop();
        }
        Ok(())
    }
}

/// Exact optimum of the pure-dominance program: the size-`k` keep-set
/// minimizing the dominance eps over the removed columns.
pub(super) fn optimal_pure_cover(game: &MatrixGame, k: usize) -> Result<PureOutcome> {
    let n = game.cols();
    if k >= n {
        return Ok(PureOutcome {
            epsilon: 0.0,
            columns: (0..n).collect(),
        });
    }

    // Rank columns once by how cheaply the rest dominates them; cheap
    // columns come first so removals happen near the root.
    let mut ranked: Vec<(f64, usize)> = Vec::with_capacity(n);
    for j in 0..n {
        let others: Vec<usize> = (0..n).filter(|&h| h != j).collect();
        ranked.push((individual_epsilon(game, j, &others)?.0, j));
    }
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let order: Vec<usize> = ranked.iter().map(|&(_, j)| j).collect();

    let mut state = SearchState {
        game,
        keep_target: k,
        order,
        incumbent: f64::INFINITY,
        best_keep: Vec::new(),
        lp_budget: 5_000_000,
        lp_used: 0,
    };
    state.descend(0, &mut Vec::new(), 0, 0.0)?;
    Ok(PureOutcome {
        epsilon: state.incumbent,
        columns: state.best_keep,
    })
}
