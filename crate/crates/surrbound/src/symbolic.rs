//! Re-derives closed-form bound expressions from the dual polyhedron of the
//! bounding LP.
//!
//! For `min c'q  s.t.  Aq = b, q >= 0` with numeric `A`, `c` and symbolic
//! right-hand side `b`, every vertex `p` of the dual polyhedron
//! `{p : A'p <= c}` contributes the candidate lower bound `b'p`; the sharp
//! lower bound is the max over all vertices. Vertices are found by solving
//! every m-subset of the n dual inequalities at equality and keeping the
//! solutions that satisfy the rest. Upper bounds come from the same routine
//! applied to `-c`, with the vertex coordinates negated.

use crate::law::{ObservedLaw, QTableStrong};
use crate::lp::scalar::{solve_square, LpScalar};
use crate::lp::{self, Direction};
use itertools::Itertools;
use num::rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolicError {
    #[error("dimension {m} exceeds the combinatorial guard (max 8)")]
    DimensionTooLarge { m: usize },
    #[error("{combinations} basis combinations exceed the budget {budget}")]
    TooManyCombinations { combinations: u128, budget: u128 },
    #[error("the dual polyhedron is empty")]
    EmptyPolyhedron,
}

/// Dual polyhedron `{p in R^m : a_transpose p <= c}` with `n` inequality
/// rows.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPolyhedron {
    /// n rows of length m: the transposed constraint matrix.
    pub a_transpose: Vec<Vec<f64>>,
    /// n-vector: the primal objective.
    pub c: Vec<f64>,
}

impl DualPolyhedron {
    /// Dual of the lower-bound problem for a primal `min c'q, Aq=b, q>=0`.
    pub fn from_primal(a: &[Vec<f64>], c: &[f64]) -> Self {
        let m = a.len();
        let n = c.len();
        let a_transpose =
            (0..n).map(|j| (0..m).map(|i| a[i][j]).collect()).collect();
        Self { a_transpose, c: c.to_vec() }
    }
}

/// An affine bound expression over the symbolic right-hand-side basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicBoundExpr {
    pub coeffs: Vec<f64>,
}

impl SymbolicBoundExpr {
    pub fn eval(&self, rhs: &[f64]) -> f64 {
        self.coeffs.iter().zip(rhs).map(|(c, b)| c * b).sum()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerationOptions {
    /// Cap on the number of m-subsets examined.
    pub budget: u128,
    /// Feasibility and deduplication tolerance for the float path.
    pub tol: f64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self { budget: 10_000_000, tol: 1e-9 }
    }
}

fn binomial(n: usize, m: usize) -> u128 {
    let mut out: u128 = 1;
    for k in 0..m.min(n - m) {
        out = out * (n - k) as u128 / (k + 1) as u128;
    }
    out
}

fn guard(n: usize, m: usize, opts: &EnumerationOptions) -> Result<(), SymbolicError> {
    if m > 8 {
        return Err(SymbolicError::DimensionTooLarge { m });
    }
    let combinations = binomial(n, m);
    if combinations > opts.budget {
        return Err(SymbolicError::TooManyCombinations { combinations, budget: opts.budget });
    }
    Ok(())
}

fn enumerate_generic<S: LpScalar>(
    rows: &[Vec<S>],
    c: &[S],
    m: usize,
    feas_tol: &S,
) -> Vec<Vec<S>> {
    let n = rows.len();
    let mut vertices: Vec<Vec<S>> = Vec::new();
    'combos: for subset in (0..n).combinations(m) {
        let mat: Vec<Vec<S>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let rhs: Vec<S> = subset.iter().map(|&i| c[i].clone()).collect();
        let Some(p) = solve_square(&mat, &rhs) else { continue };
        for i in 0..n {
            let lhs = rows[i]
                .iter()
                .zip(&p)
                .fold(S::zero(), |acc, (a, x)| acc + a.clone() * x.clone());
            if lhs > c[i].clone() + feas_tol.clone() {
                continue 'combos;
            }
        }
        vertices.push(p);
    }
    vertices
}

fn dedup_f64(vertices: Vec<Vec<f64>>, tol: f64) -> Vec<Vec<f64>> {
    let mut kept: Vec<Vec<f64>> = Vec::new();
    for v in vertices {
        let duplicate = kept
            .iter()
            .any(|k| k.iter().zip(&v).all(|(a, b)| (a - b).abs() <= tol));
        if !duplicate {
            kept.push(v);
        }
    }
    kept
}

fn lex_sort(exprs: &mut [SymbolicBoundExpr]) {
    exprs.sort_by(|a, b| {
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            match x.partial_cmp(y).expect("finite coefficients") {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    });
}

/// Enumerates the vertices of the dual polyhedron; each vertex is one
/// candidate bound expression. Degenerate vertices are kept once.
pub fn enumerate_dual_vertices(
    poly: &DualPolyhedron,
    opts: &EnumerationOptions,
) -> Result<Vec<SymbolicBoundExpr>, SymbolicError> {
    let n = poly.a_transpose.len();
    let m = poly.a_transpose.first().map_or(0, |row| row.len());
    guard(n, m, opts)?;
    let vertices = enumerate_generic(&poly.a_transpose, &poly.c, m, &opts.tol);
    if vertices.is_empty() {
        return Err(SymbolicError::EmptyPolyhedron);
    }
    let mut exprs: Vec<SymbolicBoundExpr> = dedup_f64(vertices, opts.tol)
        .into_iter()
        .map(|coeffs| SymbolicBoundExpr { coeffs })
        .collect();
    lex_sort(&mut exprs);
    Ok(exprs)
}

/// Exact-rational vertex enumeration; deduplication is exact equality.
pub fn enumerate_dual_vertices_exact(
    poly: &DualPolyhedron,
    opts: &EnumerationOptions,
) -> Result<Vec<Vec<BigRational>>, SymbolicError> {
    let n = poly.a_transpose.len();
    let m = poly.a_transpose.first().map_or(0, |row| row.len());
    guard(n, m, opts)?;
    let conv = |v: &f64| <BigRational as LpScalar>::from_f64(*v);
    let rows: Vec<Vec<BigRational>> =
        poly.a_transpose.iter().map(|row| row.iter().map(conv).collect()).collect();
    let c: Vec<BigRational> = poly.c.iter().map(conv).collect();
    let mut vertices = enumerate_generic(&rows, &c, m, &<BigRational as LpScalar>::zero());
    if vertices.is_empty() {
        return Err(SymbolicError::EmptyPolyhedron);
    }
    let mut kept: Vec<Vec<BigRational>> = Vec::new();
    for v in vertices.drain(..) {
        if !kept.contains(&v) {
            kept.push(v);
        }
    }
    Ok(kept)
}

/// Removes expressions that never change the max over the sampled feasible
/// right-hand sides. An expression is dropped only when on every sample
/// either it does not attain the max (within `tol`) or another surviving
/// expression does. Output is in deterministic lexicographic order.
pub fn prune_redundant(
    exprs: &[SymbolicBoundExpr],
    samples: &[Vec<f64>],
    tol: f64,
) -> Vec<SymbolicBoundExpr> {
    let mut sorted: Vec<SymbolicBoundExpr> = exprs.to_vec();
    lex_sort(&mut sorted);
    // Exact-duplicate collapse first so ties cannot protect each other.
    let deduped: Vec<SymbolicBoundExpr> = dedup_f64(
        sorted.into_iter().map(|e| e.coeffs).collect(),
        tol,
    )
    .into_iter()
    .map(|coeffs| SymbolicBoundExpr { coeffs })
    .collect();

    let n = deduped.len();
    if n <= 1 || samples.is_empty() {
        return deduped;
    }
    let mut max_val = vec![f64::NEG_INFINITY; samples.len()];
    for (si, b) in samples.iter().enumerate() {
        for e in &deduped {
            let v = e.eval(b);
            if v > max_val[si] {
                max_val[si] = v;
            }
        }
    }
    // attains[e][s]: expression e reaches the sample max within tol.
    let attains: Vec<Vec<bool>> = deduped
        .iter()
        .map(|e| {
            samples
                .iter()
                .enumerate()
                .map(|(si, b)| e.eval(b) >= max_val[si] - tol)
                .collect()
        })
        .collect();
    let mut attain_count: Vec<u32> = vec![0; samples.len()];
    for row in &attains {
        for (si, &a) in row.iter().enumerate() {
            if a {
                attain_count[si] += 1;
            }
        }
    }
    let mut alive = vec![true; n];
    for e in 0..n {
        let essential = attains[e]
            .iter()
            .enumerate()
            .any(|(si, &a)| a && attain_count[si] == 1);
        if essential {
            continue;
        }
        alive[e] = false;
        for (si, &a) in attains[e].iter().enumerate() {
            if a {
                attain_count[si] -= 1;
            }
        }
    }
    deduped
        .into_iter()
        .zip(alive)
        .filter_map(|(e, keep)| keep.then_some(e))
        .collect()
}

/// Labels for rendering expressions over a right-hand-side basis.
#[derive(Debug, Clone)]
pub struct ExprBasis {
    pub labels: Vec<String>,
    /// Index of the effect coordinate; rendered first when present.
    pub gamma_index: Option<usize>,
    /// Index of the constant-1 coordinate; rendered last, as a bare number.
    pub constant_index: Option<usize>,
}

impl ExprBasis {
    /// Basis of the strong system right-hand side:
    /// (p00, p10, p01, P(S=0|T=1), gamma, 1).
    pub fn strong() -> Self {
        Self {
            labels: vec![
                "P(Y=0,S=0|T=0)".into(),
                "P(Y=1,S=0|T=0)".into(),
                "P(Y=0,S=1|T=0)".into(),
                "P(S=0|T=1)".into(),
                "gamma".into(),
                "1".into(),
            ],
            gamma_index: Some(4),
            constant_index: Some(5),
        }
    }

    /// Basis of the reduced non-strong right-hand side, with the control
    /// outcome marginal prepended for the objective shift:
    /// (P(Y=1|T=0), P(S=0|T=1), gamma1, 1).
    pub fn nonstrong_reduced() -> Self {
        Self {
            labels: vec![
                "P(Y=1|T=0)".into(),
                "P(S=0|T=1)".into(),
                "gamma1".into(),
                "1".into(),
            ],
            gamma_index: Some(2),
            constant_index: Some(3),
        }
    }
}

fn snap(v: f64) -> f64 {
    let snapped = (v * 1e9).round() / 1e9;
    if snapped == 0.0 {
        0.0
    } else {
        snapped
    }
}

fn format_coeff(c: f64) -> String {
    let c = c.abs();
    if (c - 1.0).abs() < 1e-9 {
        String::new()
    } else if (c - c.round()).abs() < 1e-9 {
        format!("{}", c.round())
    } else {
        format!("{c}")
    }
}

/// Human-readable affine form, coefficients rounded at 1e-9, effect term
/// first, constant last.
pub fn render_expression(expr: &SymbolicBoundExpr, basis: &ExprBasis) -> String {
    let mut order: Vec<usize> = Vec::with_capacity(expr.coeffs.len());
    if let Some(g) = basis.gamma_index {
        order.push(g);
    }
    for k in 0..expr.coeffs.len() {
        if Some(k) != basis.gamma_index && Some(k) != basis.constant_index {
            order.push(k);
        }
    }
    if let Some(c) = basis.constant_index {
        order.push(c);
    }
    let mut out = String::new();
    for k in order {
        let c = snap(expr.coeffs[k]);
        if c == 0.0 {
            continue;
        }
        let sign = if c < 0.0 { "-" } else { "+" };
        if out.is_empty() {
            if c < 0.0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if Some(k) == basis.constant_index {
            out.push_str(&format!("{}", c.abs()));
        } else {
            let mag = format_coeff(c);
            if mag.is_empty() {
                out.push_str(&basis.labels[k]);
            } else {
                out.push_str(&format!("{mag}*{}", basis.labels[k]));
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Random feasible right-hand sides of the strong system, drawn by mapping
/// uniform type tables forward.
pub fn strong_rhs_samples(count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let q = QTableStrong::sample(&mut rng);
            let (law, gamma) = q.observables();
            lp::strong_system_rhs(&law, gamma)
        })
        .collect()
}

/// Random feasible right-hand sides `(P(S=0|T=1), gamma1, 1)` of the
/// reduced non-strong system, drawn from uniform 8-cell joints.
pub fn reduced_rhs_samples(count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut cells = [0.0_f64; 8];
            let mut sum = 0.0;
            for c in cells.iter_mut() {
                *c = -(1.0 - rng.gen::<f64>()).ln();
                sum += *c;
            }
            for c in cells.iter_mut() {
                *c /= sum;
            }
            let s0: f64 = (0..8).filter(|k| k % 2 == 0).map(|k| cells[k]).sum();
            let gamma1: f64 = (0..8)
                .map(|k| {
                    let y10 = (k >> 2) & 1;
                    let y11 = (k >> 1) & 1;
                    (y11 as f64 - y10 as f64) * cells[k]
                })
                .sum();
            vec![s0, gamma1, 1.0]
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSide {
    Lower,
    Upper,
}

/// Enumerates and prunes the bound expressions of the strong system for one
/// side. Lower-side results combine by max, upper-side by min.
pub fn derive_strong_terms(
    side: BoundSide,
    opts: &EnumerationOptions,
    samples: &[Vec<f64>],
) -> Result<Vec<SymbolicBoundExpr>, SymbolicError> {
    let a = lp::strong_system_matrix();
    let c = lp::ace_objective_strong();
    derive_terms(&a, &c, side, opts, samples)
}

/// Same for the reduced non-strong system. Expressions are over the basis
/// `(P(S=0|T=1), gamma1, 1)`; the caller subtracts the control outcome
/// marginal, which enters the objective as a constant shift.
pub fn derive_reduced_nonstrong_terms(
    side: BoundSide,
    opts: &EnumerationOptions,
    samples: &[Vec<f64>],
) -> Result<Vec<SymbolicBoundExpr>, SymbolicError> {
    let problem = lp::build_reduced_nonstrong_system(0.5, 0.0, Direction::Min);
    derive_terms(&problem.eq_matrix, &problem.objective, side, opts, samples)
}

fn derive_terms(
    a: &[Vec<f64>],
    c: &[f64],
    side: BoundSide,
    opts: &EnumerationOptions,
    samples: &[Vec<f64>],
) -> Result<Vec<SymbolicBoundExpr>, SymbolicError> {
    let objective: Vec<f64> = match side {
        BoundSide::Lower => c.to_vec(),
        BoundSide::Upper => c.iter().map(|v| -v).collect(),
    };
    let poly = DualPolyhedron::from_primal(a, &objective);
    let exprs = enumerate_dual_vertices(&poly, opts)?;
    if side == BoundSide::Upper {
        // The raw vertices combine by max and equal the negated upper
        // expressions; prune in max form, then flip.
        let pruned = prune_redundant(&exprs, samples, opts.tol);
        let mut out: Vec<SymbolicBoundExpr> = pruned
            .into_iter()
            .map(|mut e| {
                for v in e.coeffs.iter_mut() {
                    *v = -*v;
                }
                e
            })
            .collect();
        lex_sort(&mut out);
        return Ok(out);
    }
    Ok(prune_redundant(&exprs, samples, opts.tol))
}

/// Max of the lower-side expressions at a right-hand side.
pub fn eval_lower(exprs: &[SymbolicBoundExpr], rhs: &[f64]) -> f64 {
    exprs.iter().map(|e| e.eval(rhs)).fold(f64::NEG_INFINITY, f64::max)
}

/// Min of the upper-side expressions at a right-hand side.
pub fn eval_upper(exprs: &[SymbolicBoundExpr], rhs: &[f64]) -> f64 {
    exprs.iter().map(|e| e.eval(rhs)).fold(f64::INFINITY, f64::min)
}

/// Right-hand side of the strong system for a law and effect value.
pub fn strong_rhs(law: &ObservedLaw, gamma: f64) -> Vec<f64> {
    lp::strong_system_rhs(law, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds;
    use rand::Rng;

    #[test]
    fn unit_box_has_four_vertices() {
        let poly = DualPolyhedron {
            a_transpose: vec![
                vec![1.0, 0.0],
                vec![-1.0, 0.0],
                vec![0.0, 1.0],
                vec![0.0, -1.0],
            ],
            c: vec![1.0, 1.0, 1.0, 1.0],
        };
        let exprs = enumerate_dual_vertices(&poly, &EnumerationOptions::default()).unwrap();
        assert_eq!(exprs.len(), 4);
        let exact = enumerate_dual_vertices_exact(&poly, &EnumerationOptions::default()).unwrap();
        assert_eq!(exact.len(), 4);
    }

    #[test]
    fn empty_polyhedron_is_reported() {
        let poly = DualPolyhedron {
            a_transpose: vec![vec![1.0], vec![-1.0]],
            c: vec![-1.0, -1.0], // p <= -1 and p >= 1
        };
        assert!(matches!(
            enumerate_dual_vertices(&poly, &EnumerationOptions::default()),
            Err(SymbolicError::EmptyPolyhedron)
        ));
    }

    #[test]
    fn budget_guard_trips() {
        let poly = DualPolyhedron {
            a_transpose: (0..40).map(|i| vec![i as f64, 1.0, 0.5]).collect(),
            c: vec![1.0; 40],
        };
        let opts = EnumerationOptions { budget: 100, tol: 1e-9 };
        assert!(matches!(
            enumerate_dual_vertices(&poly, &opts),
            Err(SymbolicError::TooManyCombinations { .. })
        ));
    }

    #[test]
    fn strong_lower_terms_match_closed_form() {
        let samples = strong_rhs_samples(20_000, 7);
        let exprs =
            derive_strong_terms(BoundSide::Lower, &EnumerationOptions::default(), &samples)
                .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..500 {
            let q = QTableStrong::sample(&mut rng);
            let (law, gamma) = q.observables();
            let rhs = strong_rhs(&law, gamma);
            let symbolic = eval_lower(&exprs, &rhs);
            let closed = bounds::strong_bounds(&law, gamma).lower;
            assert!(
                (symbolic - closed).abs() < 1e-9,
                "symbolic {symbolic} vs closed {closed}"
            );
        }
    }

    #[test]
    fn reduced_nonstrong_terms_match_closed_form() {
        let samples = reduced_rhs_samples(20_000, 9);
        let exprs = derive_reduced_nonstrong_terms(
            BoundSide::Lower,
            &EnumerationOptions::default(),
            &samples,
        )
        .unwrap();
        let upper = derive_reduced_nonstrong_terms(
            BoundSide::Upper,
            &EnumerationOptions::default(),
            &samples,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..500 {
            let s1: f64 = rng.gen();
            let gamma1: f64 = rng.gen::<f64>() * 2.0 - 1.0;
            let py1: f64 = rng.gen();
            let rhs = vec![1.0 - s1, gamma1, 1.0];
            let report = bounds::nonstrong_bounds(py1, s1, gamma1);
            assert!((eval_lower(&exprs, &rhs) - py1 - report.lower).abs() < 1e-9);
            assert!((eval_upper(&upper, &rhs) - py1 - report.upper).abs() < 1e-9);
        }
    }

    #[test]
    fn pruning_drops_duplicates_and_dominated_expressions() {
        let samples = strong_rhs_samples(5_000, 11);
        let base = SymbolicBoundExpr { coeffs: vec![0.0, -1.0, 0.0, -1.0, 0.0, 0.0] };
        let duplicate = base.clone();
        // Shifting by a negative constant is dominated everywhere: the
        // constant coordinate of every feasible right-hand side is 1.
        let mut dominated = base.clone();
        dominated.coeffs[5] -= 0.25;
        let kept = prune_redundant(&[base.clone(), duplicate, dominated], &samples, 1e-9);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0], base);
    }

    #[test]
    fn rendering_canonical_forms() {
        let basis = ExprBasis::strong();
        let l1 = SymbolicBoundExpr { coeffs: vec![0.0, -1.0, 0.0, -1.0, 0.0, 0.0] };
        assert_eq!(render_expression(&l1, &basis), "-P(Y=1,S=0|T=0) - P(S=0|T=1)");
        let zero = SymbolicBoundExpr { coeffs: vec![0.0; 6] };
        assert_eq!(render_expression(&zero, &basis), "0");
        let with_gamma = SymbolicBoundExpr { coeffs: vec![1.0, 0.0, 0.0, 0.0, -1.0, 0.0] };
        assert_eq!(render_expression(&with_gamma, &basis), "-gamma + P(Y=0,S=0|T=0)");
        let scaled = SymbolicBoundExpr { coeffs: vec![0.0, 2.0, 0.0, 0.0, 1.0, -2.0] };
        assert_eq!(render_expression(&scaled, &basis), "gamma + 2*P(Y=1,S=0|T=0) - 2");
    }

    #[test]
    fn emitted_vertices_satisfy_the_dual_inequalities() {
        let a = lp::strong_system_matrix();
        let c = lp::ace_objective_strong();
        let poly = DualPolyhedron::from_primal(&a, &c);
        let exprs = enumerate_dual_vertices(&poly, &EnumerationOptions::default()).unwrap();
        let m = 6;
        for e in &exprs {
            let mut active = 0;
            for (row, &bound) in poly.a_transpose.iter().zip(&poly.c) {
                let lhs: f64 = row.iter().zip(&e.coeffs).map(|(a, p)| a * p).sum();
                assert!(lhs <= bound + 1e-9, "vertex violates a dual inequality");
                if (lhs - bound).abs() <= 1e-9 {
                    active += 1;
                }
            }
            assert!(active >= m, "a vertex must sit on at least m facets");
        }
    }

    #[test]
    fn exact_enumeration_agrees_with_float() {
        let a = lp::strong_system_matrix();
        let c = lp::ace_objective_strong();
        let poly = DualPolyhedron::from_primal(&a, &c);
        let float = enumerate_dual_vertices(&poly, &EnumerationOptions::default()).unwrap();
        let exact = enumerate_dual_vertices_exact(&poly, &EnumerationOptions::default()).unwrap();
        assert_eq!(float.len(), exact.len());
        for v in &exact {
            let as_f64: Vec<f64> = v.iter().map(|x| x.to_f64()).collect();
            let matched = float.iter().any(|e| {
                e.coeffs.iter().zip(&as_f64).all(|(a, b)| (a - b).abs() < 1e-9)
            });
            assert!(matched, "exact vertex missing from float enumeration");
        }
    }
}
