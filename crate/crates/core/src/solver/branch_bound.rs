//! Best-first branch and bound over the binary variables of a
//! [`MixedIntegerProgram`].
//!
//! Nodes carry their parent's relaxation bound and are solved lazily when
//! popped, so each node costs one LP solve. The heap pops the smallest bound
//! first, preferring deeper and more recently created nodes on ties, which
//! makes equal-bound regions explore depth first. Branching picks the most
//! fractional binary (lowest index on ties) and visits the nearest-integer
//! child first. A rounding dive at the root seeds the incumbent. All rules
//! are deterministic, so identical models yield identical results.

use super::{simplex, tol, MilpParams, MixedIntegerProgram, SolveResult, SolveStatus};
use crate::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

struct Node {
    /// Relaxation bound inherited from the parent, minimize orientation.
    bound: f64,
    depth: usize,
    seq: usize,
    fixings: Vec<(usize, f64)>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.depth == other.depth && self.seq == other.seq
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // BinaryHeap is a max-heap; invert the bound so the smallest bound pops
    // first, then prefer deeper and more recent nodes.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| self.depth.cmp(&other.depth))
            .then_with(|| self.seq.cmp(&other.seq))
    }
}

struct Search<'a> {
    binaries: &'a [usize],
    minimize: bool,
    incumbent: Option<(f64, Vec<f64>)>,
    lp_template: super::LinearProgram,
}

impl Search<'_> {
    fn orient(&self, objective: f64) -> f64 {
        if self.minimize {
            objective
        } else {
            -objective
        }
    }

    fn solve_relaxation(&self, fixings: &[(usize, f64)]) -> Result<SolveResult> {
        let mut lp = self.lp_template.clone();
        for &(var, value) in fixings {
            lp.bounds[var] = (value, value);
        }
        simplex::solve(&lp)
    }

    /// The most fractional binary, if any.
    fn fractional_binary(&self, primal: &[f64]) -> Option<(usize, f64)> {
        let mut chosen: Option<(usize, f64)> = None;
        for &b in self.binaries {
            let v = primal[b];
            if (v - v.round()).abs() > tol::INTEGRALITY {
                let score = (v - 0.5).abs();
                match chosen {
                    Some((_, best)) if score >= best => {}
                    _ => chosen = Some((b, score)),
                }
            }
        }
        chosen.map(|(b, _)| (b, primal[b]))
    }

    fn incumbent_cutoff(&self, gap: f64) -> f64 {
        match &self.incumbent {
            Some((best, _)) => best - gap,
            None => f64::INFINITY,
        }
    }

    fn offer_incumbent(&mut self, objective: f64, mut primal: Vec<f64>) {
        for &b in self.binaries {
            primal[b] = primal[b].round();
        }
        let score = self.orient(objective);
        match &self.incumbent {
            Some((best, _)) if score >= *best => {}
            _ => self.incumbent = Some((score, primal)),
        }
    }

    /// Fix fractional binaries to their nearest integer one at a time,
    /// re-solving in between; seeds the incumbent cheaply.
    fn dive(&mut self, root: &SolveResult) -> Result<()> {
        let mut fixings: Vec<(usize, f64)> = Vec::new();
        let mut current = root.clone();
        loop {
            match self.fractional_binary(&current.primal) {
                None => {
                    self.offer_incumbent(current.objective_value, current.primal);
                    return Ok(());
                }
                Some((var, value)) => {
                    fixings.push((var, value.round()));
                    let next = self.solve_relaxation(&fixings)?;
                    if next.status != SolveStatus::Optimal {
                        return Ok(());
                    }
                    current = next;
                }
            }
        }
    }

    fn take_result(&mut self) -> Option<SolveResult> {
        let minimize = self.minimize;
        self.incumbent.take().map(|(score, primal)| SolveResult {
            status: SolveStatus::Optimal,
            objective_value: if minimize { score } else { -score },
            primal,
            dual: None,
            dual_objective: None,
        })
    }
}

pub(super) fn solve(mip: &MixedIntegerProgram, params: &MilpParams) -> Result<SolveResult> {
    let binaries: Vec<usize> = mip.binary_indices.iter().copied().collect();
    let mut search = Search {
        binaries: &binaries,
        minimize: mip.base.sense == super::ObjectiveSense::Minimize,
        incumbent: None,
        lp_template: mip.base.clone(),
    };

    if let Some(start) = &params.initial_incumbent {
        let integral = binaries.iter().all(|&b| {
            start
                .get(b)
                .is_some_and(|v| (v - v.round()).abs() <= tol::INTEGRALITY)
        });
        if start.len() == mip.base.num_vars() && integral && mip.base.is_feasible(start, 1e-7) {
            let objective: f64 = mip
                .base
                .objective
                .iter()
                .zip(start)
                .map(|(c, x)| c * x)
                .sum();
            search.offer_incumbent(objective, start.clone());
        }
    }

    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    heap.push(Node {
        bound: f64::NEG_INFINITY,
        depth: 0,
        seq,
        fixings: Vec::new(),
    });

    let mut explored = 0usize;
    while let Some(node) = heap.pop() {
        if node.bound >= search.incumbent_cutoff(params.gap_tolerance) {
            break; // every remaining node is at least as bad
        }
        explored += 1;
        if explored > params.node_limit {
            return Err(Error::Resource {
                message: format!("MILP node limit {} exhausted", params.node_limit),
                incumbent: search.take_result().map(Box::new),
            });
        }

        let relaxation = search.solve_relaxation(&node.fixings)?;
        match relaxation.status {
            SolveStatus::Infeasible => continue,
            SolveStatus::Unbounded => {
                if node.depth == 0 {
                    return Ok(SolveResult::non_optimal(SolveStatus::Unbounded));
                }
                return Err(Error::SolverFailure(
                    "unbounded relaxation below a bounded root".into(),
                ));
            }
            SolveStatus::Optimal => {}
        }
        let bound = search.orient(relaxation.objective_value);
        if bound >= search.incumbent_cutoff(params.gap_tolerance) {
            continue;
        }

        match search.fractional_binary(&relaxation.primal) {
            None => search.offer_incumbent(relaxation.objective_value, relaxation.primal),
            Some((var, value)) => {
                if node.depth == 0 {
                    search.dive(&relaxation)?;
                }
                // Push the nearest-integer child last so it pops first on
                // equal bounds.
                let near = value.round();
                for fix in [1.0 - near, near] {
                    let mut fixings = node.fixings.clone();
                    fixings.push((var, fix));
                    seq += 1;
                    heap.push(Node {
                        bound,
                        depth: node.depth + 1,
                        seq,
                        fixings,
                    });
                }
            }
        }
    }

    match search.take_result() {
        Some(result) => Ok(result),
        None => Ok(SolveResult::non_optimal(SolveStatus::Infeasible)),
    }
}
