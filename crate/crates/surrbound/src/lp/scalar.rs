//! Field abstraction so the simplex and the small dense solver run both in
//! double precision and in exact rational arithmetic.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{FromPrimitive, Signed, ToPrimitive, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait LpScalar:
    Clone
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + std::fmt::Debug
{
    fn zero() -> Self;
    fn one() -> Self;
    /// Exact conversion from the f64 inputs.
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    /// Phase-1 objective above this threshold means infeasible.
    fn feas_tol() -> Self;
    /// Reduced costs within this tolerance of zero count as optimal.
    fn opt_tol() -> Self;
    /// Pivots at or below this magnitude are treated as zero.
    fn pivot_tol() -> Self;
}

impl LpScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn feas_tol() -> Self {
        1e-7
    }
    fn opt_tol() -> Self {
        1e-9
    }
    fn pivot_tol() -> Self {
        1e-11
    }
}

impl LpScalar for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        BigRational::from_integer(BigInt::from(1))
    }
    fn from_f64(v: f64) -> Self {
        <BigRational as FromPrimitive>::from_f64(v)
            .expect("finite f64 converts exactly to a rational")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn feas_tol() -> Self {
        <BigRational as Zero>::zero()
    }
    fn opt_tol() -> Self {
        <BigRational as Zero>::zero()
    }
    fn pivot_tol() -> Self {
        <BigRational as Zero>::zero()
    }
}

/// Solves the square system `m x = rhs` by Gaussian elimination with
/// partial pivoting. Returns `None` when a pivot column has no entry above
/// the scalar's pivot tolerance (singular matrix).
pub fn solve_square<S: LpScalar>(m: &[Vec<S>], rhs: &[S]) -> Option<Vec<S>> {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n) && rhs.len() == n);
    let mut a: Vec<Vec<S>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("comparable pivots")
        })?;
        if a[pivot_row][col].abs() <= S::pivot_tol() {
            return None;
        }
        a.swap(col, pivot_row);
        for row in 0..n {
            if row == col || a[row][col] == S::zero() {
                continue;
            }
            let factor = a[row][col].clone() / a[col][col].clone();
            for k in col..=n {
                let delta = factor.clone() * a[col][k].clone();
                a[row][k] = a[row][k].clone() - delta;
            }
        }
    }
    Some((0..n).map(|i| a[i][n].clone() / a[i][i].clone()).collect())
}
