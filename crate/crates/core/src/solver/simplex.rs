//! Dense two-phase primal simplex.
//!
//! The input program is rewritten into the computational standard form
//! `min c.y, A y = b, y >= 0`:
//!
//! * variables with a finite lower bound are shifted, variables bounded only
//!   above are mirrored, free variables are split into a positive and a
//!   negative part, and variables fixed by equal bounds are substituted out;
//! * finite upper bounds of shifted variables become explicit rows, appended
//!   after the original constraint rows so dual multipliers keep their
//!   positions;
//! * rows are sign-normalized to nonnegative right-hand sides, slack
//!   variables are added to inequalities and artificial variables complete
//!   the initial basis.
//!
//! Pivoting uses the largest-coefficient rule and falls back to Bland's rule
//! after a run of degenerate pivots, which guarantees termination. The
//! iteration cap is `50 * (columns + rows)` of the transformed program.

use super::{tol, LinearProgram, ObjectiveSense, Relation, SolveResult, SolveStatus};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
enum VarMap {
    Fixed(f64),
    Shift { col: usize, lower: f64 },
    Mirror { col: usize, upper: f64 },
    Split { pos: usize, neg: usize },
}

struct Standard {
    maps: Vec<VarMap>,
    num_cols: usize,
    /// Transformed rows over the structural columns; original constraint
    /// rows first, upper-bound rows after.
    rows: Vec<(Vec<f64>, Relation, f64)>,
    objective: Vec<f64>,
    objective_const: f64,
    negated: bool,
    orig_rows: usize,
}

fn standardize(lp: &LinearProgram) -> Standard {
    let n = lp.num_vars();
    let mut maps = Vec::with_capacity(n);
    let mut num_cols = 0;
    for &(lo, hi) in &lp.bounds {
        let map = if lo == hi {
            VarMap::Fixed(lo)
        } else if lo.is_finite() {
            let col = num_cols;
            num_cols += 1;
            VarMap::Shift { col, lower: lo }
        } else if hi.is_finite() {
            let col = num_cols;
            num_cols += 1;
            VarMap::Mirror { col, upper: hi }
        } else {
            let pos = num_cols;
            num_cols += 2;
            VarMap::Split { pos, neg: pos + 1 }
        };
        maps.push(map);
    }

    let transform_row = |coeffs: &[f64], rhs: f64| -> (Vec<f64>, f64) {
        let mut row = vec![0.0; num_cols];
        let mut r = rhs;
        for (j, &a) in coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            match maps[j] {
                VarMap::Fixed(v) => r -= a * v,
                VarMap::Shift { col, lower } => {
                    row[col] += a;
                    if lower != 0.0 {
                        r -= a * lower;
                    }
                }
                VarMap::Mirror { col, upper } => {
                    row[col] -= a;
                    r -= a * upper;
                }
                VarMap::Split { pos, neg } => {
                    row[pos] += a;
                    row[neg] -= a;
                }
            }
        }
        (row, r)
    };

    let mut rows = Vec::with_capacity(lp.constraints.len());
    for c in &lp.constraints {
        let (row, rhs) = transform_row(&c.coeffs, c.rhs);
        rows.push((row, c.relation, rhs));
    }
    let orig_rows = rows.len();
    // Upper bounds of shifted variables become rows of their own.
    for (j, &(lo, hi)) in lp.bounds.iter().enumerate() {
        if lo != hi && lo.is_finite() && hi.is_finite() {
            if let VarMap::Shift { col, lower } = maps[j] {
                let mut row = vec![0.0; num_cols];
                row[col] = 1.0;
                rows.push((row, Relation::Le, hi - lower));
            }
        }
    }

    let negated = lp.sense == ObjectiveSense::Maximize;
    let sign = if negated { -1.0 } else { 1.0 };
    let mut objective = vec![0.0; num_cols];
    let mut objective_const = 0.0;
    for (j, &c) in lp.objective.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let c = c * sign;
        match maps[j] {
            VarMap::Fixed(v) => objective_const += c * v,
            VarMap::Shift { col, lower } => {
                objective[col] += c;
                objective_const += c * lower;
            }
            VarMap::Mirror { col, upper } => {
                objective[col] -= c;
                objective_const += c * upper;
            }
            VarMap::Split { pos, neg } => {
                objective[pos] += c;
                objective[neg] -= c;
            }
        }
    }

    Standard {
        maps,
        num_cols,
        rows,
        objective,
        objective_const,
        negated,
        orig_rows,
    }
}

struct Tableau {
    /// `rows * width` matrix, last column is the right-hand side.
    data: Vec<f64>,
    rows: usize,
    width: usize,
    basis: Vec<usize>,
    /// Reduced costs of the real objective; last slot holds `-z`.
    cost: Vec<f64>,
    /// Phase-1 reduced costs while artificials are being driven to zero.
    phase1: Option<Vec<f64>>,
    /// First artificial column; artificials never re-enter in phase 2.
    artificial_start: usize,
    /// Initial identity column of each row, used for dual extraction.
    unit_col: Vec<usize>,
    /// Sign applied to each row while normalizing the rhs.
    row_sign: Vec<f64>,
    /// Normalized right-hand sides at build time.
    rhs0: Vec<f64>,
}

enum Step {
    Optimal,
    Unbounded,
    Pivoted { degenerate: bool },
}

impl Tableau {
    fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.width..(r + 1) * self.width]
    }

    fn build(std_form: &Standard) -> Tableau {
        let m = std_form.rows.len();
        let mut num_slack = 0;
        let mut num_art = 0;
        for (_, rel, rhs) in &std_form.rows {
            let rel = effective_relation(*rel, *rhs);
            match rel {
                Relation::Le => num_slack += 1,
                Relation::Ge => {
                    num_slack += 1;
                    num_art += 1;
                }
                Relation::Eq => num_art += 1,
            }
        }
        let slack_start = std_form.num_cols;
        let artificial_start = slack_start + num_slack;
        let total = artificial_start + num_art;
        let width = total + 1;

        let mut data = vec![0.0; m * width];
        let mut basis = vec![0usize; m];
        let mut unit_col = vec![0usize; m];
        let mut row_sign = vec![1.0; m];
        let mut rhs0 = vec![0.0; m];
        let mut next_slack = slack_start;
        let mut next_art = artificial_start;
        for (i, (coeffs, rel, rhs)) in std_form.rows.iter().enumerate() {
            let flip = *rhs < 0.0;
            let sign = if flip { -1.0 } else { 1.0 };
            row_sign[i] = sign;
            let row = &mut data[i * width..(i + 1) * width];
            for (slot, &a) in row.iter_mut().zip(coeffs) {
                *slot = a * sign;
            }
            row[total] = rhs * sign;
            rhs0[i] = rhs * sign;
            match effective_relation(*rel, *rhs) {
                Relation::Le => {
                    row[next_slack] = 1.0;
                    basis[i] = next_slack;
                    unit_col[i] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -1.0;
                    next_slack += 1;
                    row[next_art] = 1.0;
                    basis[i] = next_art;
                    unit_col[i] = next_art;
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = 1.0;
                    basis[i] = next_art;
                    unit_col[i] = next_art;
                    next_art += 1;
                }
            }
        }

        let mut cost = vec![0.0; width];
        cost[..std_form.num_cols].copy_from_slice(&std_form.objective);

        // Phase-1 costs: one per artificial, priced out against the initial
        // basis so basic columns start with zero reduced cost.
        let mut phase1 = None;
        if num_art > 0 {
            let mut p1 = vec![0.0; width];
            p1[artificial_start..total].fill(1.0);
            for (i, &b) in basis.iter().enumerate() {
                if b >= artificial_start {
                    let row = &data[i * width..(i + 1) * width];
                    for (slot, &v) in p1.iter_mut().zip(row) {
                        *slot -= v;
                    }
                }
            }
            phase1 = Some(p1);
        }

        Tableau {
            data,
            rows: m,
            width,
            basis,
            cost,
            phase1,
            artificial_start,
            unit_col,
            row_sign,
            rhs0,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let width = self.width;
        let pivot_value = self.data[r * width + c];
        let (before, rest) = self.data.split_at_mut(r * width);
        let (pivot_row, after) = rest.split_at_mut(width);
        if pivot_value != 1.0 {
            let inv = 1.0 / pivot_value;
            for v in pivot_row.iter_mut() {
                *v *= inv;
            }
        }
        pivot_row[c] = 1.0;
        let eliminate = |row: &mut [f64]| {
            let factor = row[c];
            if factor != 0.0 {
                for (v, &p) in row.iter_mut().zip(pivot_row.iter()) {
                    *v -= factor * p;
                }
                row[c] = 0.0;
            }
        };
        for row in before.chunks_exact_mut(width) {
            eliminate(row);
        }
        for row in after.chunks_exact_mut(width) {
            eliminate(row);
        }
        eliminate(&mut self.cost);
        if let Some(p1) = &mut self.phase1 {
            eliminate(p1);
        }
        self.basis[r] = c;
    }

    /// One simplex step on the given cost row. Artificial columns never
    /// enter the basis; they only leave during phase 1.
    fn step(&mut self, phase_one: bool, bland: bool) -> Step {
        let limit = self.artificial_start;
        let costs: &[f64] = if phase_one {
            self.phase1.as_ref().expect("phase-1 costs present")
        } else {
            &self.cost
        };

        let mut entering = None;
        if bland {
            for (c, &rc) in costs[..limit].iter().enumerate() {
                if rc < -tol::PIVOT {
                    entering = Some(c);
                    break;
                }
            }
        } else {
            let mut best = -tol::PIVOT;
            for (c, &rc) in costs[..limit].iter().enumerate() {
                if rc < best {
                    best = rc;
                    entering = Some(c);
                }
            }
        }
        let Some(c) = entering else {
            return Step::Optimal;
        };

        let mut leaving: Option<(usize, f64)> = None;
        for r in 0..self.rows {
            let a = self.data[r * self.width + c];
            if a > tol::PIVOT {
                let ratio = self.data[r * self.width + self.width - 1] / a;
                match leaving {
                    None => leaving = Some((r, ratio)),
                    Some((lr, lratio)) => {
                        if ratio < lratio - tol::PIVOT
                            || ((ratio - lratio).abs() <= tol::PIVOT
                                && self.basis[r] < self.basis[lr])
                        {
                            leaving = Some((r, ratio));
                        }
                    }
                }
            }
        }
        let Some((r, ratio)) = leaving else {
            return Step::Unbounded;
        };
        self.pivot(r, c);
        Step::Pivoted {
            degenerate: ratio.abs() <= tol::PIVOT,
        }
    }

    fn run_phase(&mut self, phase_one: bool, iters_left: &mut usize) -> Result<Step> {
        let stall_limit = 2 * (self.rows + self.width);
        let mut bland = false;
        let mut degenerate_streak = 0usize;
        loop {
            if *iters_left == 0 {
                return Err(Error::SolverFailure(
                    "simplex iteration cap exceeded".into(),
                ));
            }
            *iters_left -= 1;
            match self.step(phase_one, bland) {
                Step::Optimal => return Ok(Step::Optimal),
                Step::Unbounded => return Ok(Step::Unbounded),
                Step::Pivoted { degenerate } => {
                    if degenerate {
                        degenerate_streak += 1;
                        if degenerate_streak > stall_limit {
                            bland = true;
                        }
                    } else {
                        degenerate_streak = 0;
                        bland = false;
                    }
                }
            }
        }
    }

    /// Pivot basic artificials out of the basis where possible after a
    /// feasible phase 1. Rows where no pivot exists are redundant.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.rows {
            if self.basis[r] < self.artificial_start {
                continue;
            }
            let row = self.row(r);
            let col = (0..self.artificial_start).find(|&c| row[c].abs() > 1e-7);
            if let Some(c) = col {
                self.pivot(r, c);
            }
        }
    }
}

fn effective_relation(rel: Relation, rhs: f64) -> Relation {
    if rhs >= 0.0 {
        rel
    } else {
        match rel {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            Relation::Eq => Relation::Eq,
        }
    }
}

pub(super) fn solve(lp: &LinearProgram) -> Result<SolveResult> {
    let std_form = standardize(lp);
    let mut tab = Tableau::build(&std_form);
    let mut iters_left = 50 * (tab.width + tab.rows);

    if tab.phase1.is_some() {
        let outcome = tab.run_phase(true, &mut iters_left)?;
        let infeasibility = -tab.phase1.as_ref().expect("phase 1")[tab.width - 1];
        if infeasibility > tol::FEASIBILITY {
            return match outcome {
                Step::Unbounded => Err(Error::SolverFailure("phase 1 stalled".into())),
                _ => Ok(SolveResult::non_optimal(SolveStatus::Infeasible)),
            };
        }
        tab.drive_out_artificials();
        tab.phase1 = None;
    }

    if let Step::Unbounded = tab.run_phase(false, &mut iters_left)? {
        return Ok(SolveResult::non_optimal(SolveStatus::Unbounded));
    }

    // Transformed primal solution.
    let mut y = vec![0.0; tab.width - 1];
    for (r, &b) in tab.basis.iter().enumerate() {
        y[b] = tab.data[r * tab.width + tab.width - 1];
    }
    let mut primal = Vec::with_capacity(lp.num_vars());
    for map in &std_form.maps {
        primal.push(match *map {
            VarMap::Fixed(v) => v,
            VarMap::Shift { col, lower } => lower + y[col],
            VarMap::Mirror { col, upper } => upper - y[col],
            VarMap::Split { pos, neg } => y[pos] - y[neg],
        });
    }

    let z = -tab.cost[tab.width - 1] + std_form.objective_const;
    let sense_sign = if std_form.negated { -1.0 } else { 1.0 };

    // Row multipliers come from the reduced costs of the initial identity
    // columns: cost[unit] = 0 - y_i at optimality.
    let mut dual_internal = Vec::with_capacity(tab.rows);
    for i in 0..tab.rows {
        dual_internal.push(-tab.cost[tab.unit_col[i]]);
    }
    let dual_objective_internal: f64 = dual_internal
        .iter()
        .zip(&tab.rhs0)
        .map(|(yi, bi)| yi * bi)
        .sum::<f64>()
        + std_form.objective_const;
    let dual = (0..std_form.orig_rows)
        .map(|i| dual_internal[i] * tab.row_sign[i] * sense_sign)
        .collect();

    Ok(SolveResult {
        status: SolveStatus::Optimal,
        objective_value: sense_sign * z,
        primal,
        dual: Some(dual),
        dual_objective: Some(sense_sign * dual_objective_internal),
    })
}
