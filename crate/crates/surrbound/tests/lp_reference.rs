//! Reference checks for the simplex: exhaustive basic-solution enumeration
//! on random bounded problems, dual certificates, determinism.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surrbound::lp::scalar::solve_square;
use surrbound::lp::{
    simplex_solve, solve_fractional, verify_certificate, AffineForm, Direction,
    FractionalProblem, LpProblem, LpSolution,
};

/// Optimum over all basic solutions: every invertible m-column basis with a
/// nonnegative solve is a vertex candidate.
fn brute_force_min(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Option<f64> {
    let m = a.len();
    let n = c.len();
    let mut best: Option<f64> = None;
    for cols in (0..n).combinations(m) {
        let basis: Vec<Vec<f64>> =
            (0..m).map(|i| cols.iter().map(|&j| a[i][j]).collect()).collect();
        let Some(x_basis) = solve_square(&basis, b) else { continue };
        if x_basis.iter().any(|&x| x < -1e-9) {
            continue;
        }
        let value: f64 = cols.iter().zip(&x_basis).map(|(&j, x)| c[j] * x).sum();
        best = Some(best.map_or(value, |v: f64| v.min(value)));
    }
    best
}

fn random_bounded_problem(rng: &mut ChaCha8Rng) -> LpProblem {
    let m = rng.gen_range(2..=4usize);
    let n = rng.gen_range(m + 1..=8usize);
    // A feasible point manufactures the right-hand side; the all-ones first
    // row keeps the feasible set bounded.
    let x0: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let mut a: Vec<Vec<f64>> = vec![vec![1.0; n]];
    for _ in 1..m {
        a.push((0..n).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect());
    }
    let b: Vec<f64> = a.iter().map(|row| row.iter().zip(&x0).map(|(r, x)| r * x).sum()).collect();
    let objective: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
    LpProblem { direction: Direction::Min, objective, eq_matrix: a, eq_rhs: b }
}

#[test]
fn simplex_matches_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let mut checked = 0;
    while checked < 1000 {
        let problem = random_bounded_problem(&mut rng);
        let Some(reference) =
            brute_force_min(&problem.eq_matrix, &problem.eq_rhs, &problem.objective)
        else {
            continue; // no clean basic solution found; resample
        };
        let sol = simplex_solve(&problem).expect("solver runs");
        let LpSolution::Optimal(opt) = sol else {
            panic!("constructed problem is feasible and bounded");
        };
        assert!(
            (opt.value - reference).abs() < 1e-9,
            "simplex {} vs enumeration {}",
            opt.value,
            reference
        );
        checked += 1;
    }
}

#[test]
fn dual_certificates_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..200 {
        let mut problem = random_bounded_problem(&mut rng);
        if rng.gen::<bool>() {
            problem.direction = Direction::Max;
        }
        let sol = simplex_solve(&problem).expect("solver runs");
        let LpSolution::Optimal(opt) = sol else {
            panic!("constructed problem is feasible and bounded");
        };
        assert!(verify_certificate(&problem, &opt, 1e-8));
        let by: f64 = problem.eq_rhs.iter().zip(&opt.dual).map(|(b, y)| b * y).sum();
        assert!((by - opt.value).abs() < 1e-8, "strong duality residual");
    }
}

/// A linear-fractional objective with positive denominator attains its
/// extrema at polytope vertices; the transformed LP must agree with direct
/// evaluation of the ratio over every basic feasible solution.
#[test]
fn fractional_transform_matches_vertex_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut checked = 0;
    while checked < 200 {
        let problem = random_bounded_problem(&mut rng);
        let n = problem.objective.len();
        let numerator: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let denominator: Vec<f64> = (0..n).map(|_| 0.2 + rng.gen::<f64>()).collect();
        let den_const = 0.1;

        // Vertex-wise maximum of the ratio.
        let m = problem.eq_matrix.len();
        let mut best: Option<f64> = None;
        for cols in (0..n).combinations(m) {
            let basis: Vec<Vec<f64>> = (0..m)
                .map(|i| cols.iter().map(|&j| problem.eq_matrix[i][j]).collect())
                .collect();
            let Some(x_basis) = solve_square(&basis, &problem.eq_rhs) else { continue };
            if x_basis.iter().any(|&x| x < -1e-9) {
                continue;
            }
            let num: f64 = cols.iter().zip(&x_basis).map(|(&j, x)| numerator[j] * x).sum();
            let den: f64 =
                cols.iter().zip(&x_basis).map(|(&j, x)| denominator[j] * x).sum::<f64>()
                    + den_const;
            let ratio = num / den;
            best = Some(best.map_or(ratio, |v: f64| v.max(ratio)));
        }
        let Some(reference) = best else { continue };

        let fp = FractionalProblem {
            direction: Direction::Max,
            numerator: AffineForm { coeffs: numerator, constant: 0.0 },
            denominator: AffineForm { coeffs: denominator, constant: den_const },
            eq_matrix: problem.eq_matrix.clone(),
            eq_rhs: problem.eq_rhs.clone(),
        };
        let sol = solve_fractional(&fp).expect("denominator is positive on x >= 0");
        let LpSolution::Optimal(opt) = sol else { panic!("feasible and bounded") };
        assert!(
            (opt.value - reference).abs() < 1e-8,
            "transform {} vs vertex evaluation {}",
            opt.value,
            reference
        );
        checked += 1;
    }
}

#[test]
fn identical_inputs_give_bit_identical_outputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..50 {
        let problem = random_bounded_problem(&mut rng);
        let a = simplex_solve(&problem).unwrap();
        let b = simplex_solve(&problem).unwrap();
        match (a, b) {
            (LpSolution::Optimal(x), LpSolution::Optimal(y)) => {
                assert_eq!(x.value.to_bits(), y.value.to_bits());
                assert_eq!(
                    x.point.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                    y.point.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
                );
            }
            (x, y) => assert_eq!(x, y),
        }
    }
}
