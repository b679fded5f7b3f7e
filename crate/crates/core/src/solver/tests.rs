use super::*;
use rand_core::{RngCore, SeedableRng};

fn lp(
    sense: ObjectiveSense,
    objective: Vec<f64>,
    constraints: Vec<(Vec<f64>, Relation, f64)>,
    bounds: Vec<(f64, f64)>,
) -> LinearProgram {
    LinearProgram {
        sense,
        objective,
        constraints: constraints
            .into_iter()
            .map(|(c, r, b)| Constraint::new(c, r, b))
            .collect(),
        bounds,
    }
}

fn assert_close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

/// Exhaustive oracle: try every 0/1 assignment of the binaries, solve the
/// continuous LP for each leaf and keep the best. Independent of the
/// branch-and-bound path.
fn enumerate_milp(mip: &MixedIntegerProgram) -> Option<f64> {
    let binaries: Vec<usize> = mip.binary_indices.iter().copied().collect();
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << binaries.len()) {
        let mut lp = mip.base.clone();
        for (pos, &b) in binaries.iter().enumerate() {
            let v = f64::from((mask >> pos) & 1);
            lp.bounds[b] = (v, v);
        }
        let result = solve_lp(&lp).unwrap();
        if result.is_optimal() {
            let better = match (mip.base.sense, best) {
                (_, None) => true,
                (ObjectiveSense::Minimize, Some(b)) => result.objective_value < b,
                (ObjectiveSense::Maximize, Some(b)) => result.objective_value > b,
            };
            if better {
                best = Some(result.objective_value);
            }
        }
    }
    best
}

#[test]
fn single_variable_bound() {
    let p = lp(
        ObjectiveSense::Maximize,
        vec![1.0],
        vec![(vec![1.0], Relation::Le, 1.0)],
        vec![(0.0, f64::INFINITY)],
    );
    let r = solve_lp(&p).unwrap();
    assert!(r.is_optimal());
    assert_close(r.objective_value, 1.0, 1e-9);
    assert_close(r.primal[0], 1.0, 1e-9);
}

#[test]
fn rock_paper_scissors_minimax_value_is_zero() {
    // max v subject to x^T U >= v columnwise, sum x = 1.
    let u = [[0.0, -1.0, 1.0], [1.0, 0.0, -1.0], [-1.0, 1.0, 0.0]];
    let mut p = LinearProgram::new(ObjectiveSense::Maximize, vec![0.0, 0.0, 0.0, 1.0]);
    p.bounds[3] = (f64::NEG_INFINITY, f64::INFINITY);
    for j in 0..3 {
        let mut coeffs = vec![0.0; 4];
        for (i, row) in u.iter().enumerate() {
            coeffs[i] = row[j];
        }
        coeffs[3] = -1.0;
        p.add_constraint(coeffs, Relation::Ge, 0.0);
    }
    p.add_constraint(vec![1.0, 1.0, 1.0, 0.0], Relation::Eq, 1.0);
    let r = solve_lp(&p).unwrap();
    assert!(r.is_optimal());
    assert_close(r.objective_value, 0.0, 1e-9);
    for i in 0..3 {
        assert_close(r.primal[i], 1.0 / 3.0, 1e-9);
    }
}

#[test]
fn contradictory_bounds_are_infeasible() {
    let p = lp(
        ObjectiveSense::Minimize,
        vec![1.0],
        vec![
            (vec![1.0], Relation::Ge, 2.0),
            (vec![1.0], Relation::Le, 1.0),
        ],
        vec![(0.0, f64::INFINITY)],
    );
    let r = solve_lp(&p).unwrap();
    assert_eq!(r.status, SolveStatus::Infeasible);
}

#[test]
fn unbounded_maximization() {
    let p = lp(
        ObjectiveSense::Maximize,
        vec![1.0],
        vec![],
        vec![(0.0, f64::INFINITY)],
    );
    let r = solve_lp(&p).unwrap();
    assert_eq!(r.status, SolveStatus::Unbounded);
}

#[test]
fn strong_duality_and_feasibility_on_mixed_relations() {
    let p = lp(
        ObjectiveSense::Minimize,
        vec![2.0, 3.0, 1.0],
        vec![
            (vec![1.0, 1.0, 0.0], Relation::Ge, 2.0),
            (vec![0.0, 1.0, 2.0], Relation::Eq, 3.0),
            (vec![1.0, 0.0, 1.0], Relation::Le, 10.0),
        ],
        vec![(0.0, f64::INFINITY), (-1.0, 4.0), (f64::NEG_INFINITY, 5.0)],
    );
    let r = solve_lp(&p).unwrap();
    assert!(r.is_optimal());
    assert!(p.is_feasible(&r.primal, tol::FEASIBILITY));
    assert_close(r.objective_value, r.dual_objective.unwrap(), 1e-6);
}

#[test]
fn known_dual_values() {
    // min x + y s.t. x + y >= 2: dual of the single row is 1.
    let p = lp(
        ObjectiveSense::Minimize,
        vec![1.0, 1.0],
        vec![(vec![1.0, 1.0], Relation::Ge, 2.0)],
        vec![(0.0, f64::INFINITY); 2],
    );
    let r = solve_lp(&p).unwrap();
    assert_close(r.objective_value, 2.0, 1e-9);
    assert_close(r.dual.as_ref().unwrap()[0], 1.0, 1e-9);

    // max x s.t. x <= 1: dual 1 as well under the max convention.
    let p = lp(
        ObjectiveSense::Maximize,
        vec![1.0],
        vec![(vec![1.0], Relation::Le, 1.0)],
        vec![(0.0, f64::INFINITY)],
    );
    let r = solve_lp(&p).unwrap();
    assert_close(r.dual.as_ref().unwrap()[0], 1.0, 1e-9);
}

#[test]
fn free_and_fixed_variables() {
    // Free variable pushed negative; fixed variable substituted.
    let p = lp(
        ObjectiveSense::Minimize,
        vec![1.0, 5.0],
        vec![(vec![1.0, 1.0], Relation::Ge, -3.0)],
        vec![(f64::NEG_INFINITY, f64::INFINITY), (2.0, 2.0)],
    );
    let r = solve_lp(&p).unwrap();
    assert!(r.is_optimal());
    assert_close(r.primal[0], -5.0, 1e-9);
    assert_close(r.primal[1], 2.0, 1e-9);
    assert_close(r.objective_value, 5.0, 1e-9);
}

#[test]
fn dimension_mismatch_is_a_model_error() {
    let p = lp(
        ObjectiveSense::Minimize,
        vec![1.0, 1.0],
        vec![(vec![1.0], Relation::Le, 1.0)],
        vec![(0.0, 1.0); 2],
    );
    assert!(matches!(solve_lp(&p), Err(crate::Error::Model(_))));
}

#[test]
fn deterministic_across_calls() {
    let p = lp(
        ObjectiveSense::Maximize,
        vec![3.0, 1.0, 4.0, 1.0],
        vec![
            (vec![1.0, 1.0, 1.0, 1.0], Relation::Le, 10.0),
            (vec![2.0, 0.0, 1.0, 3.0], Relation::Le, 15.0),
            (vec![0.0, 1.0, 2.0, 1.0], Relation::Ge, 1.0),
        ],
        vec![(0.0, 8.0); 4],
    );
    let a = solve_lp(&p).unwrap();
    let b = solve_lp(&p).unwrap();
    assert_eq!(a.status, b.status);
    assert_eq!(a.objective_value.to_bits(), b.objective_value.to_bits());
    assert_eq!(a.primal, b.primal);
}

#[test]
fn degenerate_lp_terminates() {
    // Many redundant rows through the same vertex.
    let mut p = LinearProgram::new(ObjectiveSense::Maximize, vec![1.0, 1.0]);
    for _ in 0..20 {
        p.add_constraint(vec![1.0, 1.0], Relation::Le, 1.0);
        p.add_constraint(vec![1.0, 0.0], Relation::Le, 1.0);
    }
    let r = solve_lp(&p).unwrap();
    assert!(r.is_optimal());
    assert_close(r.objective_value, 1.0, 1e-9);
}

#[test]
fn forced_rounding_up() {
    // binary y, minimize y, y >= 0.3 -> y = 1.
    let mut base = LinearProgram::new(ObjectiveSense::Minimize, vec![1.0]);
    base.bounds[0] = (0.0, 1.0);
    base.add_constraint(vec![1.0], Relation::Ge, 0.3);
    let mip = MixedIntegerProgram::new(base, [0]);
    let r = solve_milp(&mip, &MilpParams::default()).unwrap();
    assert!(r.is_optimal());
    assert_eq!(r.primal[0], 1.0);
    assert_close(r.objective_value, 1.0, 1e-9);
}

#[test]
fn infeasible_milp() {
    let mut base = LinearProgram::new(ObjectiveSense::Minimize, vec![1.0, 1.0]);
    base.bounds = vec![(0.0, 1.0), (0.0, 1.0)];
    base.add_constraint(vec![1.0, 1.0], Relation::Ge, 3.0);
    let mip = MixedIntegerProgram::new(base, [0, 1]);
    let r = solve_milp(&mip, &MilpParams::default()).unwrap();
    assert_eq!(r.status, SolveStatus::Infeasible);
}

fn random_milp(seed: u64) -> MixedIntegerProgram {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut next =
        |lo: f64, hi: f64| lo + (hi - lo) * (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let n_cont = 2 + (next(0.0, 3.0) as usize);
    let n_bin = 3 + (next(0.0, 7.0) as usize);
    let n = n_cont + n_bin;
    let objective: Vec<f64> = (0..n).map(|_| (next(-5.0, 5.0)).round()).collect();
    let mut base = LinearProgram::new(ObjectiveSense::Minimize, objective);
    for j in 0..n {
        base.bounds[j] = if j < n_cont { (0.0, 4.0) } else { (0.0, 1.0) };
    }
    let rows = 3 + (next(0.0, 4.0) as usize);
    for i in 0..rows {
        let coeffs: Vec<f64> = (0..n).map(|_| next(-3.0, 3.0).round()).collect();
        let relation = match i % 3 {
            0 => Relation::Le,
            1 => Relation::Ge,
            _ => Relation::Le,
        };
        let rhs = match relation {
            Relation::Ge => next(-6.0, 1.0).round(),
            _ => next(0.0, 8.0).round(),
        };
        base.add_constraint(coeffs, relation, rhs);
    }
    MixedIntegerProgram::new(base, n_cont..n)
}

#[test]
fn milp_matches_enumeration_oracle() {
    for seed in 0..12 {
        let mip = random_milp(seed);
        let oracle = enumerate_milp(&mip);
        let solved = solve_milp(&mip, &MilpParams::default()).unwrap();
        match oracle {
            Some(best) => {
                assert!(solved.is_optimal(), "seed {seed}");
                assert_close(solved.objective_value, best, 1e-6);
                assert!(mip.base.is_feasible(&solved.primal, 1e-7), "seed {seed}");
                for &b in &mip.binary_indices {
                    let v = solved.primal[b];
                    assert!(v == 0.0 || v == 1.0, "binary {b} not exactly integral: {v}");
                }
            }
            None => assert_eq!(solved.status, SolveStatus::Infeasible, "seed {seed}"),
        }
    }
}

#[test]
fn milp_determinism() {
    let mip = random_milp(7);
    let a = solve_milp(&mip, &MilpParams::default()).unwrap();
    let b = solve_milp(&mip, &MilpParams::default()).unwrap();
    assert_eq!(a.status, b.status);
    assert_eq!(a.objective_value.to_bits(), b.objective_value.to_bits());
    assert_eq!(a.primal, b.primal);
}

#[test]
fn node_limit_carries_incumbent() {
    let mip = random_milp(3);
    let reference = solve_milp(&mip, &MilpParams::default()).unwrap();
    if !reference.is_optimal() {
        return;
    }
    let params = MilpParams {
        node_limit: 1,
        ..MilpParams::default()
    };
    match solve_milp(&mip, &params) {
        Err(crate::Error::Resource { incumbent, .. }) => {
            // The root dive usually finds something; when it does, the
            // incumbent must be feasible.
            if let Some(inc) = incumbent {
                assert!(mip.base.is_feasible(&inc.primal, 1e-7));
            }
        }
        Ok(r) => assert!(r.is_optimal()), // solved within a single node
        Err(other) => panic!("unexpected error: {other}"),
    }
}

#[test]
fn lp_format_dump_is_stable() {
    let mut base = LinearProgram::new(ObjectiveSense::Minimize, vec![1.0, -2.0]);
    base.bounds[1] = (0.0, 1.0);
    base.add_constraint(vec![1.0, 1.0], Relation::Le, 4.0);
    let mip = MixedIntegerProgram::new(base.clone(), [1]);
    let text = milp_to_lp_format(&mip);
    assert!(text.contains("Minimize"));
    assert!(text.contains("c0: 1 x0 + 1 x1 <= 4"));
    assert!(text.contains("Binary\n x1"));
    assert!(lp_to_lp_format(&base).contains("Subject To"));
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn arbitrary_lp(seed: u64) -> LinearProgram {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut next =
            |lo: f64, hi: f64| lo + (hi - lo) * (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        let n = 2 + (next(0.0, 5.0) as usize);
        let objective: Vec<f64> = (0..n).map(|_| next(-4.0, 4.0)).collect();
        let mut lp = LinearProgram::new(
            if next(0.0, 1.0) < 0.5 {
                ObjectiveSense::Minimize
            } else {
                ObjectiveSense::Maximize
            },
            objective,
        );
        for j in 0..n {
            // A mix of boxed, one-sided and free variables.
            lp.bounds[j] = match (next(0.0, 4.0)) as usize {
                0 => (0.0, next(1.0, 5.0)),
                1 => (next(-3.0, 0.0), f64::INFINITY),
                2 => (f64::NEG_INFINITY, next(0.0, 3.0)),
                _ => (next(-2.0, 0.0), next(0.5, 4.0)),
            };
        }
        let rows = 1 + (next(0.0, 5.0) as usize);
        for i in 0..rows {
            let coeffs: Vec<f64> = (0..n).map(|_| next(-3.0, 3.0)).collect();
            let relation = match i % 3 {
                0 => Relation::Le,
                1 => Relation::Ge,
                _ => Relation::Eq,
            };
            lp.add_constraint(coeffs, relation, next(-4.0, 6.0));
        }
        lp
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // Strong duality, primal feasibility and determinism hold on every
        // optimal solve.
        #[test]
        fn optimal_solves_are_feasible_dual_tight_and_deterministic(seed in 0u64..4000) {
            let lp = arbitrary_lp(seed);
            let first = solve_lp(&lp).unwrap();
            if first.is_optimal() {
                prop_assert!(lp.is_feasible(&first.primal, tol::FEASIBILITY));
                let dual_objective = first.dual_objective.unwrap();
                prop_assert!(
                    (first.objective_value - dual_objective).abs() <= 1e-6,
                    "primal {} vs dual {}",
                    first.objective_value,
                    dual_objective
                );
            }
            let second = solve_lp(&lp).unwrap();
            prop_assert_eq!(first.status, second.status);
            if first.is_optimal() {
                prop_assert_eq!(
                    first.objective_value.to_bits(),
                    second.objective_value.to_bits()
                );
            }
        }
    }
}
