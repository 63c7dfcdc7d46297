//! Self-contained linear-programming core: two-phase simplex, the
//! constraint systems tying latent type tables to observables, and the
//! fractional-programming reduction used for relative-risk bounds.

pub mod scalar;
pub mod simplex;

use crate::law::{
    outcome_bit, surrogate_bit, BoundsReport, CriterionVerdict, ObservedLaw, QTableStrong,
};
use num::rational::BigRational;
use simplex::{CoreOptimum, CoreSolution};
use thiserror::Error;

pub use scalar::LpScalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("simplex iteration cap exhausted (numerical breakdown)")]
    NumericalBreakdown,
    #[error("no latent table reproduces the stated observables and effect")]
    InfeasibleInputs,
    #[error("fractional objective denominator can reach zero on the feasible set")]
    DegenerateDenominator,
    #[error("control-arm outcome risk is zero; relative risk undefined")]
    ZeroControlRisk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

/// Equality-form linear program over nonnegative variables.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub direction: Direction,
    pub objective: Vec<f64>,
    pub eq_matrix: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
}

/// Outcome of a solve.
#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal(LpOptimum),
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOptimum {
    pub value: f64,
    /// An attaining basic feasible solution.
    pub point: Vec<f64>,
    /// Dual certificate: `b'dual = value`, and the reduced costs
    /// `c - A'dual` are nonnegative for Min (nonpositive for Max).
    pub dual: Vec<f64>,
}

impl LpSolution {
    pub fn optimal(&self) -> Option<&LpOptimum> {
        match self {
            LpSolution::Optimal(opt) => Some(opt),
            _ => None,
        }
    }
}

/// Solves the problem to a global optimum with an attaining vertex.
pub fn simplex_solve(problem: &LpProblem) -> Result<LpSolution, LpError> {
    let c: Vec<f64> = match problem.direction {
        Direction::Min => problem.objective.clone(),
        Direction::Max => problem.objective.iter().map(|v| -v).collect(),
    };
    let sol = simplex::solve_min(&problem.eq_matrix, &problem.eq_rhs, &c)?;
    Ok(match sol {
        CoreSolution::Infeasible => LpSolution::Infeasible,
        CoreSolution::Unbounded => LpSolution::Unbounded,
        CoreSolution::Optimal(CoreOptimum { value, point, dual }) => {
            let opt = match problem.direction {
                Direction::Min => LpOptimum { value, point, dual },
                Direction::Max => LpOptimum {
                    value: -value,
                    point,
                    dual: dual.into_iter().map(|y| -y).collect(),
                },
            };
            debug_assert!(verify_certificate(problem, &opt, 1e-8));
            LpSolution::Optimal(opt)
        }
    })
}

/// Exact-arithmetic solve; inputs are converted from f64 bit-for-bit.
pub fn simplex_solve_exact(problem: &LpProblem) -> Result<CoreSolution<BigRational>, LpError> {
    let conv = |v: &f64| <BigRational as LpScalar>::from_f64(*v);
    let a: Vec<Vec<BigRational>> =
        problem.eq_matrix.iter().map(|row| row.iter().map(conv).collect()).collect();
    let b: Vec<BigRational> = problem.eq_rhs.iter().map(conv).collect();
    let mut c: Vec<BigRational> = problem.objective.iter().map(conv).collect();
    if problem.direction == Direction::Max {
        c = c.into_iter().map(|v| -v).collect();
    }
    let mut sol = simplex::solve_min(&a, &b, &c)?;
    if problem.direction == Direction::Max {
        if let CoreSolution::Optimal(opt) = &mut sol {
            opt.value = -opt.value.clone();
            for y in opt.dual.iter_mut() {
                *y = -y.clone();
            }
        }
    }
    Ok(sol)
}

/// Checks primal feasibility, dual feasibility and strong duality of a
/// reported optimum.
pub fn verify_certificate(problem: &LpProblem, opt: &LpOptimum, tol: f64) -> bool {
    let n = problem.objective.len();
    if opt.point.len() != n || opt.point.iter().any(|&x| x < -1e-12) {
        return false;
    }
    for (row, &b) in problem.eq_matrix.iter().zip(&problem.eq_rhs) {
        let ax: f64 = row.iter().zip(&opt.point).map(|(a, x)| a * x).sum();
        if (ax - b).abs() > 1e-9 {
            return false;
        }
    }
    let cx: f64 = problem.objective.iter().zip(&opt.point).map(|(c, x)| c * x).sum();
    let by: f64 = problem.eq_rhs.iter().zip(&opt.dual).map(|(b, y)| b * y).sum();
    if (cx - by).abs() > tol || (cx - opt.value).abs() > tol {
        return false;
    }
    for j in 0..n {
        let aty: f64 = problem
            .eq_matrix
            .iter()
            .zip(&opt.dual)
            .map(|(row, y)| row[j] * y)
            .sum();
        let reduced = problem.objective[j] - aty;
        let ok = match problem.direction {
            Direction::Min => reduced >= -tol,
            Direction::Max => reduced <= tol,
        };
        if !ok {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Strong-surrogate system (16 variables).
// ---------------------------------------------------------------------------

/// Row-major indicator rows over the 16 strong-type cells: control cells
/// P(Y=0,S=0|T=0), P(Y=1,S=0|T=0), P(Y=0,S=1|T=0), then P(S=0|T=1), the
/// surrogate-effect row, and the all-ones normalization row.
pub fn strong_system_matrix() -> Vec<Vec<f64>> {
    let mut rows = vec![vec![0.0; 16]; 6];
    for i in 0..4 {
        for j in 0..4 {
            let k = 4 * i + j;
            let (s0, s1) = ((i >> 1) & 1, i & 1);
            let (y_s0, y_s1) = ((j >> 1) & 1, j & 1);
            let y_control = if s0 == 0 { y_s0 } else { y_s1 };
            if s0 == 0 && y_control == 0 {
                rows[0][k] = 1.0;
            }
            if s0 == 0 && y_control == 1 {
                rows[1][k] = 1.0;
            }
            if s0 == 1 && y_control == 0 {
                rows[2][k] = 1.0;
            }
            if s1 == 0 {
                rows[3][k] = 1.0;
            }
            rows[4][k] = match j {
                1 => 1.0,
                2 => -1.0,
                _ => 0.0,
            };
            rows[5][k] = 1.0;
        }
    }
    rows
}

/// Objective coefficients of the treatment-to-outcome effect:
/// +1 on cells (1,1) and (2,2), -1 on (1,2) and (2,1).
pub fn ace_objective_strong() -> Vec<f64> {
    let mut c = vec![0.0; 16];
    c[4 + 1] = 1.0;
    c[8 + 2] = 1.0;
    c[4 + 2] = -1.0;
    c[8 + 1] = -1.0;
    c
}

/// Right-hand side for the strong system:
/// (p00, p10, p01, P(S=0|T=1), gamma, 1).
pub fn strong_system_rhs(law: &ObservedLaw, gamma: f64) -> Vec<f64> {
    vec![law.p00, law.p10, law.p01, law.s0_treated(), gamma, 1.0]
}

/// The 6x16 equality system plus the treatment-effect objective.
pub fn build_strong_system(law: &ObservedLaw, gamma: f64, direction: Direction) -> LpProblem {
    LpProblem {
        direction,
        objective: ace_objective_strong(),
        eq_matrix: strong_system_matrix(),
        eq_rhs: strong_system_rhs(law, gamma),
    }
}

/// LP bounds with attaining type tables on both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct LpBounds {
    pub lower: f64,
    pub upper: f64,
    pub witness_lower: QTableStrong,
    pub witness_upper: QTableStrong,
}

/// Sharp treatment-effect bounds by direct LP solves of the strong system.
pub fn strong_bounds_lp(law: &ObservedLaw, gamma: f64) -> Result<LpBounds, LpError> {
    let min = simplex_solve(&build_strong_system(law, gamma, Direction::Min))?;
    let max = simplex_solve(&build_strong_system(law, gamma, Direction::Max))?;
    match (min, max) {
        (LpSolution::Optimal(lo), LpSolution::Optimal(hi)) => Ok(LpBounds {
            lower: lo.value,
            upper: hi.value,
            witness_lower: QTableStrong::from_vector(&lo.point)
                .map_err(|_| LpError::NumericalBreakdown)?,
            witness_upper: QTableStrong::from_vector(&hi.point)
                .map_err(|_| LpError::NumericalBreakdown)?,
        }),
        (LpSolution::Infeasible, _) | (_, LpSolution::Infeasible) => Err(LpError::InfeasibleInputs),
        _ => Err(LpError::NumericalBreakdown), // the simplex is a polytope
    }
}

/// Phase-1 feasibility of (law, gamma): does any strong type table
/// reproduce them?
pub fn strong_feasible(law: &ObservedLaw, gamma: f64) -> Result<bool, LpError> {
    let problem = LpProblem {
        direction: Direction::Min,
        objective: vec![0.0; 16],
        eq_matrix: strong_system_matrix(),
        eq_rhs: strong_system_rhs(law, gamma),
    };
    Ok(!matches!(simplex_solve(&problem)?, LpSolution::Infeasible))
}

/// The feasible range of the surrogate-to-outcome effect for a law:
/// optimizes the effect row subject to the four observable rows.
pub fn feasible_gamma_range(law: &ObservedLaw) -> Result<(f64, f64), LpError> {
    let full = strong_system_matrix();
    let eq_matrix: Vec<Vec<f64>> = vec![
        full[0].clone(),
        full[1].clone(),
        full[2].clone(),
        full[3].clone(),
        full[5].clone(),
    ];
    let eq_rhs = vec![law.p00, law.p10, law.p01, law.s0_treated(), 1.0];
    let gamma_row = full[4].clone();
    let mut range = [0.0; 2];
    for (slot, direction) in [(0, Direction::Min), (1, Direction::Max)] {
        let problem = LpProblem {
            direction,
            objective: gamma_row.clone(),
            eq_matrix: eq_matrix.clone(),
            eq_rhs: eq_rhs.clone(),
        };
        match simplex_solve(&problem)? {
            LpSolution::Optimal(opt) => range[slot] = opt.value,
            LpSolution::Infeasible => return Err(LpError::InfeasibleInputs),
            LpSolution::Unbounded => return Err(LpError::NumericalBreakdown),
        }
    }
    Ok((range[0], range[1]))
}

// ---------------------------------------------------------------------------
// Non-strong system (64 variables) and its 8-variable reduction.
// ---------------------------------------------------------------------------

/// What is known about the control arm when building the non-strong system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ControlArmInfo {
    /// Only P(Y=1 | T=0).
    Marginal { py1: f64 },
    /// The full control joint; adds one row per identified cell.
    Joint { p00: f64, p10: f64, p01: f64, p11: f64 },
}

impl ControlArmInfo {
    pub fn py1(&self) -> f64 {
        match *self {
            ControlArmInfo::Marginal { py1 } => py1,
            ControlArmInfo::Joint { p10, p11, .. } => p10 + p11,
        }
    }
}

/// Objective coefficients of the treatment effect over the 64 cells.
pub fn ace_objective_nonstrong() -> Vec<f64> {
    let mut c = vec![0.0; 64];
    for i in 0..16 {
        for j in 0..4 {
            let s0 = surrogate_bit(j, 0) as usize;
            let s1 = surrogate_bit(j, 1) as usize;
            c[4 * i + j] = outcome_bit(i, 1, s1) - outcome_bit(i, 0, s0);
        }
    }
    c
}

/// Equality system for the non-strong surrogate over the 64 type cells.
/// The surrogate-effect row for the control arm is optional; bounds are
/// unaffected by it.
pub fn build_nonstrong_system(
    control: ControlArmInfo,
    s1_treated: f64,
    gamma0: Option<f64>,
    gamma1: f64,
    direction: Direction,
) -> LpProblem {
    let mut eq_matrix: Vec<Vec<f64>> = Vec::new();
    let mut eq_rhs: Vec<f64> = Vec::new();
    let cell = |pred: &dyn Fn(usize, usize) -> bool| -> Vec<f64> {
        let mut row = vec![0.0; 64];
        for i in 0..16 {
            for j in 0..4 {
                if pred(i, j) {
                    row[4 * i + j] = 1.0;
                }
            }
        }
        row
    };
    let y_control = |i: usize, j: usize| outcome_bit(i, 0, surrogate_bit(j, 0) as usize) as usize;
    let s0_of = |j: usize| surrogate_bit(j, 0) as usize;
    match control {
        ControlArmInfo::Marginal { py1 } => {
            eq_matrix.push(cell(&|i, j| y_control(i, j) == 1));
            eq_rhs.push(py1);
        }
        ControlArmInfo::Joint { p00, p10, p01, .. } => {
            eq_matrix.push(cell(&|i, j| s0_of(j) == 0 && y_control(i, j) == 0));
            eq_rhs.push(p00);
            eq_matrix.push(cell(&|i, j| s0_of(j) == 0 && y_control(i, j) == 1));
            eq_rhs.push(p10);
            eq_matrix.push(cell(&|i, j| s0_of(j) == 1 && y_control(i, j) == 0));
            eq_rhs.push(p01);
        }
    }
    eq_matrix.push(cell(&|_, j| surrogate_bit(j, 1) == 0.0));
    eq_rhs.push(1.0 - s1_treated);
    if let Some(g0) = gamma0 {
        let mut row = vec![0.0; 64];
        for i in 0..16 {
            for j in 0..4 {
                row[4 * i + j] = outcome_bit(i, 0, 1) - outcome_bit(i, 0, 0);
            }
        }
        eq_matrix.push(row);
        eq_rhs.push(g0);
    }
    let mut g1_row = vec![0.0; 64];
    for i in 0..16 {
        for j in 0..4 {
            g1_row[4 * i + j] = outcome_bit(i, 1, 1) - outcome_bit(i, 1, 0);
        }
    }
    eq_matrix.push(g1_row);
    eq_rhs.push(gamma1);
    eq_matrix.push(vec![1.0; 64]);
    eq_rhs.push(1.0);
    LpProblem { direction, objective: ace_objective_nonstrong(), eq_matrix, eq_rhs }
}

/// The reduced non-strong system over the 8-cell joint law of the treated
/// potential outcomes and treated surrogate. Cell index is
/// `4*y(t=1,s=0) + 2*y(t=1,s=1) + s(t=1)`. The objective is the treated
/// outcome risk; subtract `py1` from the optimum to obtain the effect bound.
pub fn build_reduced_nonstrong_system(
    s1_treated: f64,
    gamma1: f64,
    direction: Direction,
) -> LpProblem {
    let mut objective = vec![0.0; 8];
    let mut s_row = vec![0.0; 8];
    let mut g_row = vec![0.0; 8];
    for y10 in 0..2usize {
        for y11 in 0..2usize {
            for s1 in 0..2usize {
                let k = 4 * y10 + 2 * y11 + s1;
                objective[k] =
                    if s1 == 0 { y10 as f64 } else { y11 as f64 };
                if s1 == 0 {
                    s_row[k] = 1.0;
                }
                g_row[k] = y11 as f64 - y10 as f64;
            }
        }
    }
    LpProblem {
        direction,
        objective,
        eq_matrix: vec![s_row, g_row, vec![1.0; 8]],
        eq_rhs: vec![1.0 - s1_treated, gamma1, 1.0],
    }
}

/// Treatment-effect bounds from the reduced 8-variable system.
pub fn nonstrong_bounds_reduced_lp(
    py1: f64,
    s1_treated: f64,
    gamma1: f64,
) -> Result<(f64, f64), LpError> {
    let mut out = [0.0; 2];
    for (slot, direction) in [(0, Direction::Min), (1, Direction::Max)] {
        let problem = build_reduced_nonstrong_system(s1_treated, gamma1, direction);
        match simplex_solve(&problem)? {
            LpSolution::Optimal(opt) => out[slot] = opt.value - py1,
            LpSolution::Infeasible => return Err(LpError::InfeasibleInputs),
            LpSolution::Unbounded => return Err(LpError::NumericalBreakdown),
        }
    }
    Ok((out[0], out[1]))
}

/// Treatment-effect bounds from the full 64-variable system.
pub fn nonstrong_bounds_full_lp(
    control: ControlArmInfo,
    s1_treated: f64,
    gamma0: Option<f64>,
    gamma1: f64,
) -> Result<(f64, f64), LpError> {
    let mut out = [0.0; 2];
    for (slot, direction) in [(0, Direction::Min), (1, Direction::Max)] {
        let problem = build_nonstrong_system(control, s1_treated, gamma0, gamma1, direction);
        match simplex_solve(&problem)? {
            LpSolution::Optimal(opt) => out[slot] = opt.value,
            LpSolution::Infeasible => return Err(LpError::InfeasibleInputs),
            LpSolution::Unbounded => return Err(LpError::NumericalBreakdown),
        }
    }
    Ok((out[0], out[1]))
}

// ---------------------------------------------------------------------------
// Linear-fractional programming and relative-risk bounds.
// ---------------------------------------------------------------------------

/// Affine form `coeffs'x + constant`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineForm {
    pub coeffs: Vec<f64>,
    pub constant: f64,
}

/// Optimize `numerator(x) / denominator(x)` over `{x >= 0 : Ax = b}` with a
/// denominator that stays positive on the feasible set.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalProblem {
    pub direction: Direction,
    pub numerator: AffineForm,
    pub denominator: AffineForm,
    pub eq_matrix: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
}

/// Variable substitution `y = x/den(x)`, `t = 1/den(x)` turning the
/// fractional program into an equivalent LP over `(y, t)`: each original
/// equality becomes `Ay - bt = 0`, and the denominator is normalized to 1.
/// Checks first that the denominator is bounded away from zero by
/// minimizing it over the feasible set.
pub fn charnes_cooper(fp: &FractionalProblem) -> Result<LpProblem, LpError> {
    let den_min = LpProblem {
        direction: Direction::Min,
        objective: fp.denominator.coeffs.clone(),
        eq_matrix: fp.eq_matrix.clone(),
        eq_rhs: fp.eq_rhs.clone(),
    };
    match simplex_solve(&den_min)? {
        LpSolution::Infeasible => return Err(LpError::InfeasibleInputs),
        LpSolution::Unbounded => return Err(LpError::DegenerateDenominator),
        LpSolution::Optimal(opt) => {
            if opt.value + fp.denominator.constant <= 1e-10 {
                return Err(LpError::DegenerateDenominator);
            }
        }
    }
    let n = fp.numerator.coeffs.len();
    let mut eq_matrix: Vec<Vec<f64>> = Vec::with_capacity(fp.eq_matrix.len() + 1);
    let mut eq_rhs: Vec<f64> = Vec::with_capacity(fp.eq_rhs.len() + 1);
    for (row, &b) in fp.eq_matrix.iter().zip(&fp.eq_rhs) {
        let mut r = row.clone();
        r.push(-b);
        eq_matrix.push(r);
        eq_rhs.push(0.0);
    }
    let mut norm = fp.denominator.coeffs.clone();
    norm.push(fp.denominator.constant);
    eq_matrix.push(norm);
    eq_rhs.push(1.0);
    let mut objective = fp.numerator.coeffs.clone();
    objective.push(fp.numerator.constant);
    debug_assert_eq!(objective.len(), n + 1);
    Ok(LpProblem { direction: fp.direction, objective, eq_matrix, eq_rhs })
}

/// Solves a fractional problem through the transformed LP and maps the
/// attaining point back to the original variables.
pub fn solve_fractional(fp: &FractionalProblem) -> Result<LpSolution, LpError> {
    let lp = charnes_cooper(fp)?;
    match simplex_solve(&lp)? {
        LpSolution::Optimal(opt) => {
            let n = fp.numerator.coeffs.len();
            let t = opt.point[n];
            if t <= 1e-12 {
                return Err(LpError::NumericalBreakdown);
            }
            let point: Vec<f64> = opt.point[..n].iter().map(|y| y / t).collect();
            Ok(LpSolution::Optimal(LpOptimum { value: opt.value, point, dual: opt.dual }))
        }
        other => Ok(other),
    }
}

/// Rows shared by the relative-risk system: the four control cells and
/// P(S=0|T=1), the linearized relative-risk row for the surrogate effect,
/// and normalization.
pub fn build_crr_system(law: &ObservedLaw, gamma_crr: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let strong = strong_system_matrix();
    let mut eq_matrix: Vec<Vec<f64>> = strong[..4].to_vec();
    let mut eq_rhs = vec![law.p00, law.p10, law.p01, law.s0_treated()];
    // gamma_crr = (col-1 + col-3 mass) / (col-2 + col-3 mass), cleared of
    // its denominator.
    let mut ratio_row = vec![0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            let k = 4 * i + j;
            let num = matches!(j, 1 | 3) as i32 as f64;
            let den = matches!(j, 2 | 3) as i32 as f64;
            ratio_row[k] = num - gamma_crr * den;
        }
    }
    eq_matrix.push(ratio_row);
    eq_rhs.push(0.0);
    eq_matrix.push(vec![1.0; 16]);
    eq_rhs.push(1.0);
    (eq_matrix, eq_rhs)
}

/// Numerator of the treated outcome risk over the 16 cells.
pub fn crr_numerator() -> Vec<f64> {
    let mut c = vec![0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            let (s1, y_s0, y_s1) = (i & 1, (j >> 1) & 1, j & 1);
            let y_treated = if s1 == 0 { y_s0 } else { y_s1 };
            if y_treated == 1 {
                c[4 * i + j] = 1.0;
            }
        }
    }
    c
}

/// Denominator: the control outcome risk, fixed by the observables.
pub fn crr_denominator() -> Vec<f64> {
    let mut c = vec![0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            let (s0, y_s0, y_s1) = ((i >> 1) & 1, (j >> 1) & 1, j & 1);
            let y_control = if s0 == 0 { y_s0 } else { y_s1 };
            if y_control == 1 {
                c[4 * i + j] = 1.0;
            }
        }
    }
    c
}

/// Sharp bounds on the treatment relative risk given the observed law and a
/// relative-risk surrogate effect, by the fractional-to-linear reduction.
/// The exclusion verdict compares the lower bound against 1.
pub fn crr_bounds(law: &ObservedLaw, gamma_crr: f64) -> Result<BoundsReport, LpError> {
    if law.py1_control() <= 0.0 {
        return Err(LpError::ZeroControlRisk);
    }
    let (eq_matrix, eq_rhs) = build_crr_system(law, gamma_crr);
    let mut ends = [0.0; 2];
    let mut witnesses: [Option<QTableStrong>; 2] = [None, None];
    for (slot, direction) in [(0, Direction::Min), (1, Direction::Max)] {
        let fp = FractionalProblem {
            direction,
            numerator: AffineForm { coeffs: crr_numerator(), constant: 0.0 },
            denominator: AffineForm { coeffs: crr_denominator(), constant: 0.0 },
            eq_matrix: eq_matrix.clone(),
            eq_rhs: eq_rhs.clone(),
        };
        match solve_fractional(&fp)? {
            LpSolution::Optimal(opt) => {
                ends[slot] = opt.value;
                witnesses[slot] = QTableStrong::from_vector(&opt.point).ok();
            }
            LpSolution::Infeasible => return Err(LpError::InfeasibleInputs),
            LpSolution::Unbounded => return Err(LpError::NumericalBreakdown),
        }
    }
    let criterion = if ends[0] > 1.0 {
        CriterionVerdict::Excluded
    } else if ends[0] == 1.0 {
        CriterionVerdict::Boundary
    } else {
        CriterionVerdict::NotExcludable
    };
    Ok(BoundsReport {
        lower: ends[0],
        upper: ends[1],
        active_lower_term: None,
        active_upper_term: None,
        witness_lower: witnesses[0],
        witness_upper: witnesses[1],
        criterion,
        threshold: 1.0,
    })
}
