//! Exact minimizer for the mixed-dominance program.
//!
//! The mixed program asks for `k` mixed strategies and an assignment of
//! every column to one of them so that each strategy eps-dominates its
//! assigned columns, with the shared eps minimized. For any fixed
//! assignment the per-group subproblem collapses: a strategy `l` dominates
//! a set `S` within eps iff for every row `i`
//! `l . U_i <= min_{j in S} U_ij + eps`, an LP with one row per game row
//! regardless of `|S|`. The search below branches on column-to-group
//! assignments, bounds each node by the exact group costs (which only grow
//! as groups gain columns) and prunes against the incumbent. It returns the
//! same optimum as the monolithic MILP: assignments are exactly the
//! feasible selector patterns, and group costs are exactly the tightest
//! feasible eps for a fixed pattern.

use crate::games::MatrixGame;
use crate::solver::{solve_lp, LinearProgram, ObjectiveSense, Relation, SolveStatus};
use crate::{Error, Result};

/// Result of the assignment search.
pub(super) struct AssignmentOutcome {
    pub epsilon: f64,
    /// One mixed strategy per group, `k` in total.
    pub strategies: Vec<Vec<f64>>,
}

/// Smallest eps such that one mixture over all columns stays within eps of
/// `rhs` row-wise, plus the witnessing mixture.
fn group_cost(game: &MatrixGame, rhs: &[f64]) -> Result<(f64, Vec<f64>)> {
    let n = game.cols();
    let mut objective = vec![0.0; n + 1];
    objective[n] = 1.0;
    let mut lp = LinearProgram::new(ObjectiveSense::Minimize, objective);
    lp.add_constraint(
        (0..=n).map(|c| if c < n { 1.0 } else { 0.0 }).collect(),
        Relation::Eq,
        1.0,
    );
    for (i, &bound) in rhs.iter().enumerate() {
        let mut coeffs = Vec::with_capacity(n + 1);
        coeffs.extend_from_slice(game.row(i));
        coeffs.push(-1.0);
        lp.add_constraint(coeffs, Relation::Le, bound);
    }
    let solved = solve_lp(&lp)?;
    if solved.status != SolveStatus::Optimal {
        return Err(Error::SolverFailure(format!(
            "group dominance LP ended with status {:?}",
            solved.status
        )));
    }
    let mut weights: Vec<f64> = solved.primal[..n].iter().map(|&w| w.max(0.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ok((solved.objective_value.max(0.0), weights))
}

#[derive(Clone)]
struct Group {
    /// Per-row minimum payoff over the columns assigned to this group.
    rhs: Vec<f64>,
}

struct SearchState<'g> {
    game: &'g MatrixGame,
    k: usize,
    order: Vec<usize>,
    incumbent: f64,
    /// Group index per position in `order`, for the incumbent.
    best_assignment: Vec<usize>,
    assignment: Vec<usize>,
    lp_budget: usize,
    lp_used: usize,
}

impl SearchState<'_> {
    fn descend(&mut self, depth: usize, groups: &mut Vec<Group>, current_max: f64) -> Result<()> {
        if self.incumbent <= 1e-12 {
            return Ok(()); // eps is bounded below by zero
        }
        if depth == self.order.len() {
            if current_max < self.incumbent {
                self.incumbent = current_max;
                self.best_assignment = self.assignment.clone();
            }
            return Ok(());
        }
        let column = self.order[depth];

        // Candidate moves: insert into an existing group (cost via LP) or
        // open a fresh group (cost stays zero). Cheapest resulting bound
        // first, group index breaking ties.
        let mut candidates: Vec<(f64, usize, Option<Group>)> = Vec::new();
        for (z, group) in groups.iter().enumerate() {
            self.lp_used += 1;
            if self.lp_used > self.lp_budget {
                return Err(Error::Resource {
                    message: format!(
                        "mixed-dominance search exceeded its LP budget of {}",
                        self.lp_budget
                    ),
                    incumbent: None,
                });
            }
            let mut rhs = group.rhs.clone();
            for (r, slot) in rhs.iter_mut().enumerate() {
                *slot = slot.min(self.game.at(r, column));
            }
            let (cost, _) = group_cost(self.game, &rhs)?;
            let bound = current_max.max(cost);
            if bound < self.incumbent - 1e-12 {
                candidates.push((bound, z, Some(Group { rhs })));
            }
        }
        if groups.len() < self.k {
            let rhs = (0..self.game.rows())
                .map(|r| self.game.at(r, column))
                .collect();
            candidates.push((current_max, groups.len(), Some(Group { rhs })));
        }
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        for (bound, z, replacement) in candidates {
            if bound >= self.incumbent - 1e-12 || self.incumbent <= 1e-12 {
                continue;
            }
            let replacement = replacement.expect("candidate carries its group");
            self.assignment[depth] = z;
            if z == groups.len() {
                groups.push(replacement);
                self.descend(depth + 1, groups, bound)?;
                groups.pop();
            } else {
                let saved = std::mem::replace(&mut groups[z], replacement);
                self.descend(depth + 1, groups, bound)?;
                groups[z] = saved;
            }
        }
        Ok(())
    }
}

/// Exact optimum of the mixed-dominance program for a normalized game.
pub(super) fn optimal_mixed_cover(game: &MatrixGame, k: usize) -> Result<AssignmentOutcome> {
    let n = game.cols();
    let m = game.rows();
    if k >= n {
        // One group per column dominates itself exactly.
        let mut strategies = Vec::with_capacity(k);
        for j in 0..k {
            let mut row = vec![0.0; n];
            row[j.min(n - 1)] = 1.0;
            strategies.push(row);
        }
        return Ok(AssignmentOutcome {
            epsilon: 0.0,
            strategies,
        });
    }

    // Process quarrelsome columns first: order by the worst pairwise
    // conflict, so branching decisions that matter happen near the root.
    let mut conflict = vec![0.0f64; n];
    if k > 1 {
        for a in 0..n {
            for b in (a + 1)..n {
                let rhs: Vec<f64> = (0..m).map(|r| game.at(r, a).min(game.at(r, b))).collect();
                let (cost, _) = group_cost(game, &rhs)?;
                conflict[a] = conflict[a].max(cost);
                conflict[b] = conflict[b].max(cost);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| conflict[b].total_cmp(&conflict[a]).then(a.cmp(&b)));

    let mut state = SearchState {
        game,
        k,
        order,
        incumbent: f64::INFINITY,
        best_assignment: vec![0; n],
        assignment: vec![0; n],
        lp_budget: 5_000_000,
        lp_used: 0,
    };
    state.descend(0, &mut Vec::new(), 0.0)?;

    // Rebuild the witnesses for the winning assignment.
    let mut strategies = Vec::with_capacity(k);
    for z in 0..k {
        let members: Vec<usize> = state
            .best_assignment
            .iter()
            .zip(&state.order)
            .filter(|(g, _)| **g == z)
            .map(|(_, &col)| col)
            .collect();
        if members.is_empty() {
            strategies.push(vec![1.0 / n as f64; n]);
            continue;
        }
        let rhs: Vec<f64> = (0..m)
            .map(|r| {
                members
                    .iter()
                    .map(|&j| game.at(r, j))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let (_, weights) = group_cost(game, &rhs)?;
        strategies.push(weights);
    }
    Ok(AssignmentOutcome {
        epsilon: state.incumbent,
        strategies,
    })
}
