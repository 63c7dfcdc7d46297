//! Dense two-phase primal simplex on equality-form problems
//! `optimize c'x subject to Ax = b, x >= 0`.
//!
//! Equalities are kept as equalities: phase 1 introduces one artificial
//! variable per row and minimizes their sum; artificial variables still
//! basic at zero afterwards are pivoted out, and rows where that is
//! impossible are dropped as redundant. Pivoting uses Dantzig's rule for
//! the first `2(m+n)` iterations, then switches to Bland's rule so the
//! highly degenerate systems built here cannot cycle.

use super::scalar::{solve_square, LpScalar};
use super::LpError;

#[derive(Debug, Clone, PartialEq)]
pub enum CoreSolution<S> {
    Optimal(CoreOptimum<S>),
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoreOptimum<S> {
    /// Minimum of `c'x`.
    pub value: S,
    /// Attaining basic feasible solution.
    pub point: Vec<S>,
    /// Simplex multipliers for the rows of `a` in their original order and
    /// orientation; zero for rows dropped as redundant.
    pub dual: Vec<S>,
}

struct Tableau<S> {
    rows: Vec<Vec<S>>, // m rows, each n + m + 1 wide (structural | artificial | rhs)
    basis: Vec<usize>,
    n: usize,
    obj: Vec<S>, // reduced-cost row, n + m wide
    obj_val: S,  // current objective value
}

impl<S: LpScalar> Tableau<S> {
    fn rhs_col(&self) -> usize {
        self.obj.len()
    }

    fn reset_objective(&mut self, cost: &[S]) {
        let width = self.obj.len();
        let rhs = self.rhs_col();
        self.obj.clone_from_slice(&cost[..width]);
        self.obj_val = S::zero();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = cost[self.basis[i]].clone();
            if cb == S::zero() {
                continue;
            }
            for j in 0..width {
                let delta = cb.clone() * row[j].clone();
                self.obj[j] = self.obj[j].clone() - delta;
            }
            self.obj_val = self.obj_val.clone() + cb * row[rhs].clone();
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let width = self.rhs_col() + 1;
        let inv = S::one() / self.rows[r][c].clone();
        for j in 0..width {
            self.rows[r][j] = self.rows[r][j].clone() * inv.clone();
        }
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let factor = self.rows[i][c].clone();
            if factor == S::zero() {
                continue;
            }
            for j in 0..width {
                let delta = factor.clone() * self.rows[r][j].clone();
                self.rows[i][j] = self.rows[i][j].clone() - delta;
            }
        }
        let factor = self.obj[c].clone();
        if factor != S::zero() {
            for j in 0..self.rhs_col() {
                let delta = factor.clone() * self.rows[r][j].clone();
                self.obj[j] = self.obj[j].clone() - delta;
            }
            self.obj_val = self.obj_val.clone() + factor * self.rows[r][self.rhs_col()].clone();
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations on the current objective row. `allowed` caps
    /// the entering-variable index (used to shut out artificial columns in
    /// phase 2). Returns false on unboundedness.
    fn iterate(&mut self, allowed: usize) -> Result<bool, LpError> {
        let m = self.rows.len();
        let dantzig_budget = 2 * (m + allowed);
        let max_iters = 50 * (m + allowed) + 1000;
        let rhs = self.rhs_col();
        for iter in 0..max_iters {
            let bland = iter >= dantzig_budget;
            let mut entering: Option<usize> = None;
            let mut best = -S::opt_tol();
            for j in 0..allowed {
                if self.obj[j] < -S::opt_tol() {
                    if bland {
                        entering = Some(j);
                        break;
                    }
                    if self.obj[j] < best {
                        best = self.obj[j].clone();
                        entering = Some(j);
                    }
                }
            }
            let Some(c) = entering else {
                return Ok(true);
            };
            // Ratio test; ties broken on the smallest basis variable index
            // as Bland's rule requires.
            let mut leaving: Option<usize> = None;
            let mut best_ratio: Option<S> = None;
            for i in 0..m {
                if self.rows[i][c] > S::pivot_tol() {
                    let ratio = self.rows[i][rhs].clone() / self.rows[i][c].clone();
                    let better = match &best_ratio {
                        None => true,
                        Some(r) => {
                            ratio < *r
                                || (ratio == *r
                                    && self.basis[i] < self.basis[leaving.expect("set with ratio")])
                        }
                    };
                    if better {
                        best_ratio = Some(ratio);
                        leaving = Some(i);
                    }
                }
            }
            let Some(r) = leaving else {
                return Ok(false);
            };
            self.pivot(r, c);
        }
        Err(LpError::NumericalBreakdown)
    }
}

/// Minimizes `c'x` over `{x >= 0 : a x = b}`.
pub fn solve_min<S: LpScalar>(
    a: &[Vec<S>],
    b: &[S],
    c: &[S],
) -> Result<CoreSolution<S>, LpError> {
    let m = a.len();
    let n = c.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), m);

    // Orient rows so the right-hand side is nonnegative.
    let mut flipped = vec![false; m];
    let mut rows: Vec<Vec<S>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i] < S::zero();
        flipped[i] = flip;
        let mut row: Vec<S> = Vec::with_capacity(n + m + 1);
        for j in 0..n {
            row.push(if flip { -a[i][j].clone() } else { a[i][j].clone() });
        }
        for k in 0..m {
            row.push(if k == i { S::one() } else { S::zero() });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        rows.push(row);
    }

    let mut tab = Tableau {
        rows,
        basis: (n..n + m).collect(),
        n,
        obj: vec![S::zero(); n + m],
        obj_val: S::zero(),
    };

    // Phase 1: minimize the sum of artificial variables.
    let mut phase1_cost = vec![S::zero(); n + m];
    for j in n..n + m {
        phase1_cost[j] = S::one();
    }
    tab.reset_objective(&phase1_cost);
    if !tab.iterate(n + m)? {
        return Err(LpError::NumericalBreakdown); // phase 1 is bounded below by 0
    }
    if tab.obj_val > S::feas_tol() {
        return Ok(CoreSolution::Infeasible);
    }

    // Pivot remaining artificial variables out of the basis; rows that offer
    // no structural pivot are redundant and get dropped.
    let mut dropped: Vec<usize> = Vec::new();
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= tab.n {
            let pivot_col = (0..tab.n).find(|&j| tab.rows[i][j].abs() > S::pivot_tol());
            match pivot_col {
                Some(j) => tab.pivot(i, j),
                None => {
                    let artificial = tab.basis[i];
                    dropped.push(artificial - tab.n);
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // Phase 2 on the original costs, artificial columns locked out.
    let mut phase2_cost = vec![S::zero(); n + m];
    phase2_cost[..n].clone_from_slice(c);
    tab.reset_objective(&phase2_cost);
    if !tab.iterate(n)? {
        return Ok(CoreSolution::Unbounded);
    }

    let rhs = tab.rhs_col();
    let mut point = vec![S::zero(); n];
    for (i, &bv) in tab.basis.iter().enumerate() {
        if bv < n {
            point[bv] = tab.rows[i][rhs].clone();
        }
    }
    let value = c
        .iter()
        .zip(&point)
        .fold(S::zero(), |acc, (cj, xj)| acc + cj.clone() * xj.clone());

    let dual = recover_dual(a, c, &tab.basis, &flipped, &dropped, m, n);
    Ok(CoreSolution::Optimal(CoreOptimum { value, point, dual }))
}

/// Solves `B'y = c_B` for the simplex multipliers of the final basis and
/// maps them back onto the original row order and orientation.
fn recover_dual<S: LpScalar>(
    a: &[Vec<S>],
    c: &[S],
    basis: &[usize],
    flipped: &[bool],
    dropped: &[usize],
    m: usize,
    n: usize,
) -> Vec<S> {
    let kept: Vec<usize> = (0..m).filter(|i| !dropped.contains(i)).collect();
    debug_assert_eq!(kept.len(), basis.len());
    // bt[r][k]: column `basis[r]` of the kept, reoriented matrix, transposed.
    let mut bt: Vec<Vec<S>> = Vec::with_capacity(basis.len());
    let mut cb: Vec<S> = Vec::with_capacity(basis.len());
    for &bv in basis {
        let mut row: Vec<S> = Vec::with_capacity(kept.len());
        for &orig in &kept {
            let entry = if bv < n {
                a[orig][bv].clone()
            } else if bv - n == orig {
                S::one() // artificial still basic at zero on its own row
            } else {
                S::zero()
            };
            row.push(if flipped[orig] { -entry } else { entry });
        }
        bt.push(row);
        cb.push(if bv < n { c[bv].clone() } else { S::zero() });
    }
    let y_kept = solve_square(&bt, &cb).unwrap_or_else(|| vec![S::zero(); kept.len()]);
    let mut dual = vec![S::zero(); m];
    for (k, &orig) in kept.iter().enumerate() {
        dual[orig] = if flipped[orig] { -y_kept[k].clone() } else { y_kept[k].clone() };
    }
    dual
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;
    use num::FromPrimitive;

    fn q(v: f64) -> BigRational {
        <BigRational as LpScalar>::from_f64(v)
    }

    #[test]
    fn min_on_segment() {
        // min -x1 s.t. x1 + x2 = 1 -> value -1 at (1, 0)
        let sol = solve_min(&[vec![1.0, 1.0]], &[1.0], &[-1.0, 0.0]).unwrap();
        let CoreSolution::Optimal(opt) = sol else { panic!("expected optimum") };
        assert!((opt.value + 1.0).abs() < 1e-12);
        assert!((opt.point[0] - 1.0).abs() < 1e-12);
        assert!(opt.point[1].abs() < 1e-12);
    }

    #[test]
    fn detects_infeasible() {
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let sol = solve_min(&a, &[1.0, 2.0], &[0.0, 0.0]).unwrap();
        assert_eq!(sol, CoreSolution::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        // min -x1 s.t. x1 - x2 = 0: ray (t, t) drives the objective down.
        let sol = solve_min(&[vec![1.0, -1.0]], &[0.0], &[-1.0, 0.0]).unwrap();
        assert_eq!(sol, CoreSolution::Unbounded);
    }

    #[test]
    fn drops_redundant_rows() {
        // Second row duplicates the first; dual for it must be zero.
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let sol = solve_min(&a, &[1.0, 1.0], &[1.0, 2.0]).unwrap();
        let CoreSolution::Optimal(opt) = sol else { panic!("expected optimum") };
        assert!((opt.value - 1.0).abs() < 1e-12);
        let covered = opt.dual[0].clone() + opt.dual[1].clone();
        assert!((covered - 1.0).abs() < 1e-9); // b'y equals the optimum
    }

    #[test]
    fn negative_rhs_rows_are_reoriented() {
        // -x1 - x2 = -1 with min x1: optimum 0 at (0, 1).
        let sol = solve_min(&[vec![-1.0, -1.0]], &[-1.0], &[1.0, 0.0]).unwrap();
        let CoreSolution::Optimal(opt) = sol else { panic!("expected optimum") };
        assert!(opt.value.abs() < 1e-12);
        assert!((opt.point[1] - 1.0).abs() < 1e-12);
        // Dual reported against the original orientation: y = 0 here.
        assert!(opt.dual[0].abs() < 1e-9);
    }

    #[test]
    fn exact_rational_min() {
        let a = vec![vec![q(1.0), q(1.0), q(1.0)]];
        let sol = solve_min(&a, &[q(1.0)], &[q(0.3), q(0.1), q(0.7)]).unwrap();
        let CoreSolution::Optimal(opt) = sol else { panic!("expected optimum") };
        assert_eq!(opt.value, q(0.1));
        assert_eq!(opt.point[1], q(1.0));
    }
}
