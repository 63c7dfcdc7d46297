//! Domain types and the algebra mapping latent potential-outcome tables to
//! observables and causal effects.
//!
//! Conventions used throughout the crate:
//! - The treatment, surrogate and outcome are all binary; larger is better.
//! - Control-arm cells `p{y}{s}` are `P(Y=y, S=s | T=0)` with the outcome
//!   index first.
//! - A strong-surrogate latent table indexes rows by the surrogate response
//!   pattern `(S under T=0, S under T=1)` and columns by the outcome response
//!   pattern `(Y under S=0, Y under S=1)`, both in the order
//!   `(0,0), (0,1), (1,0), (1,1)`.
//! - A non-strong latent table indexes rows by the 4-bit outcome word
//!   `(Y00, Y01, Y10, Y11)` (first index treatment, second surrogate) and
//!   columns by the surrogate pattern as above.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for probability-vector normalization checks.
pub const PROB_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LawError {
    #[error("{what} = {value} is not a probability in [0,1]")]
    NotAProbability { what: String, value: f64 },
    #[error("cells sum to {sum}, expected 1 within {PROB_SUM_TOL:e}")]
    NotNormalized { sum: f64 },
}

fn check_prob(what: &str, value: f64) -> Result<(), LawError> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(LawError::NotAProbability { what: what.to_string(), value })
    }
}

/// The identified probabilities: control-arm joint law of (Y, S) and the
/// treated-arm surrogate marginal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservedLaw {
    /// P(Y=0, S=0 | T=0)
    pub p00: f64,
    /// P(Y=1, S=0 | T=0)
    pub p10: f64,
    /// P(Y=0, S=1 | T=0)
    pub p01: f64,
    /// P(Y=1, S=1 | T=0)
    pub p11: f64,
    /// P(S=1 | T=1)
    #[serde(rename = "s1")]
    pub s1_treated: f64,
}

impl ObservedLaw {
    pub fn new(p00: f64, p10: f64, p01: f64, p11: f64, s1_treated: f64) -> Result<Self, LawError> {
        Self { p00, p10, p01, p11, s1_treated }.validated()
    }

    /// Returns the law unchanged iff every cell is a probability and the
    /// control cells sum to 1 within [`PROB_SUM_TOL`].
    pub fn validated(self) -> Result<Self, LawError> {
        check_prob("p00", self.p00)?;
        check_prob("p10", self.p10)?;
        check_prob("p01", self.p01)?;
        check_prob("p11", self.p11)?;
        check_prob("s1_treated", self.s1_treated)?;
        let sum = self.p00 + self.p10 + self.p01 + self.p11;
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(LawError::NotNormalized { sum });
        }
        Ok(self)
    }

    /// Rescales the control cells to sum to exactly 1. Never applied
    /// implicitly; callers opt in (the CLI exposes this as a flag).
    pub fn renormalized(mut self) -> Self {
        let sum = self.p00 + self.p10 + self.p01 + self.p11;
        if sum > 0.0 {
            self.p00 /= sum;
            self.p10 /= sum;
            self.p01 /= sum;
            self.p11 /= sum;
        }
        self
    }

    pub fn s0_treated(&self) -> f64 {
        1.0 - self.s1_treated
    }

    /// P(Y=1 | T=0)
    pub fn py1_control(&self) -> f64 {
        self.p10 + self.p11
    }

    /// P(Y=0 | T=0)
    pub fn py0_control(&self) -> f64 {
        self.p00 + self.p01
    }

    /// P(S=1 | T=0)
    pub fn s1_control(&self) -> f64 {
        self.p01 + self.p11
    }

    /// The identified treatment effect on the surrogate,
    /// P(S=1|T=1) - P(S=1|T=0).
    pub fn ace_ts(&self) -> f64 {
        self.s1_treated - self.s1_control()
    }
}

/// Validates an observed law; identity on valid input.
pub fn validate_observed(law: ObservedLaw) -> Result<ObservedLaw, LawError> {
    law.validated()
}

/// Scale on which a surrogate-to-outcome effect is expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaScale {
    /// Difference of potential-outcome risks, in [-1, 1].
    Difference,
    /// Ratio of potential-outcome risks, in (0, inf).
    RelativeRisk,
}

/// Upper end of an effect interval. Unbounded ranges are an explicit state;
/// no float infinity enters arithmetic paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalEnd {
    Finite(f64),
    Unbounded,
}

/// Form of the external surrogate-to-outcome knowledge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaForm {
    Point(f64),
    Interval { lo: f64, hi: IntervalEnd },
    /// Only the sign is known: shorthand for `Interval(0, inf)` on the
    /// difference scale and `Interval(1, inf)` on the relative-risk scale.
    SignPositive,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GammaSpecError {
    #[error("effect value {value} outside the admissible range for the {scale:?} scale")]
    OutOfRange { scale: GammaScale, value: f64 },
    #[error("interval lower end {lo} must be strictly below the upper end")]
    EmptyInterval { lo: f64 },
}

/// External surrogate-to-outcome effect knowledge: a point value, an
/// interval, or a bare positive sign, on either scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaSpec {
    pub scale: GammaScale,
    pub form: GammaForm,
}

impl GammaSpec {
    pub fn point(scale: GammaScale, value: f64) -> Result<Self, GammaSpecError> {
        Self { scale, form: GammaForm::Point(value) }.validated()
    }

    pub fn interval(scale: GammaScale, lo: f64, hi: IntervalEnd) -> Result<Self, GammaSpecError> {
        Self { scale, form: GammaForm::Interval { lo, hi } }.validated()
    }

    pub fn sign_positive(scale: GammaScale) -> Self {
        Self { scale, form: GammaForm::SignPositive }
    }

    fn admissible(scale: GammaScale, value: f64) -> bool {
        match scale {
            GammaScale::Difference => value.is_finite() && (-1.0..=1.0).contains(&value),
            GammaScale::RelativeRisk => value.is_finite() && value > 0.0,
        }
    }

    pub fn validated(self) -> Result<Self, GammaSpecError> {
        match self.form {
            GammaForm::Point(v) => {
                if !Self::admissible(self.scale, v) {
                    return Err(GammaSpecError::OutOfRange { scale: self.scale, value: v });
                }
            }
            GammaForm::Interval { lo, hi } => {
                if !Self::admissible(self.scale, lo) {
                    return Err(GammaSpecError::OutOfRange { scale: self.scale, value: lo });
                }
                if let IntervalEnd::Finite(h) = hi {
                    if !Self::admissible(self.scale, h) {
                        return Err(GammaSpecError::OutOfRange { scale: self.scale, value: h });
                    }
                    if lo >= h {
                        return Err(GammaSpecError::EmptyInterval { lo });
                    }
                }
            }
            GammaForm::SignPositive => {}
        }
        Ok(self)
    }

    /// The guaranteed lower end of the effect: the point value, the interval
    /// lower end, or the scale's null value for a bare sign.
    pub fn guaranteed_lower(&self) -> f64 {
        match self.form {
            GammaForm::Point(v) => v,
            GammaForm::Interval { lo, .. } => lo,
            GammaForm::SignPositive => match self.scale {
                GammaScale::Difference => 0.0,
                GammaScale::RelativeRisk => 1.0,
            },
        }
    }

    /// Normalizes the form to an interval `(lo, hi)`.
    pub fn as_interval(&self) -> (f64, IntervalEnd) {
        match self.form {
            GammaForm::Point(v) => (v, IntervalEnd::Finite(v)),
            GammaForm::Interval { lo, hi } => (lo, hi),
            GammaForm::SignPositive => (self.guaranteed_lower(), IntervalEnd::Unbounded),
        }
    }
}

/// Distribution over the 16 potential-outcome types of a strong surrogate.
///
/// `cells[i][j]` is the population share of the type with surrogate pattern
/// `i` and outcome pattern `j` (see the module docs for the encodings).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QTableStrong {
    cells: [[f64; 4]; 4],
}

impl QTableStrong {
    pub fn new(cells: [[f64; 4]; 4]) -> Result<Self, LawError> {
        let mut sum = 0.0;
        for (i, row) in cells.iter().enumerate() {
            for (j, &q) in row.iter().enumerate() {
                if !q.is_finite() || q < 0.0 {
                    return Err(LawError::NotAProbability { what: format!("q[{i}][{j}]"), value: q });
                }
                sum += q;
            }
        }
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(LawError::NotNormalized { sum });
        }
        Ok(Self { cells })
    }

    pub fn uniform() -> Self {
        Self { cells: [[1.0 / 16.0; 4]; 4] }
    }

    /// All mass on a single type.
    pub fn point_mass(row: usize, col: usize) -> Self {
        let mut cells = [[0.0; 4]; 4];
        cells[row][col] = 1.0;
        Self { cells }
    }

    /// Builds a table from a length-16 row-major vector, e.g. a simplex
    /// vertex returned by the LP engine. Components in `[-1e-12, 0)` are
    /// snapped to zero; anything more negative is rejected.
    pub fn from_vector(v: &[f64]) -> Result<Self, LawError> {
        assert_eq!(v.len(), 16, "strong type table has 16 cells");
        let mut cells = [[0.0; 4]; 4];
        for (k, &q) in v.iter().enumerate() {
            cells[k / 4][k % 4] = if (-1e-12..0.0).contains(&q) { 0.0 } else { q };
        }
        Self::new(cells)
    }

    pub fn to_vector(&self) -> [f64; 16] {
        let mut v = [0.0; 16];
        for i in 0..4 {
            for j in 0..4 {
                v[4 * i + j] = self.cells[i][j];
            }
        }
        v
    }

    pub fn cell(&self, row: usize, col: usize) -> f64 {
        self.cells[row][col]
    }

    pub fn rows(&self) -> [[f64; 4]; 4] {
        self.cells
    }

    /// Uniform sample from the 16-cell probability simplex.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut cells = [[0.0; 4]; 4];
        let mut sum = 0.0;
        for row in cells.iter_mut() {
            for q in row.iter_mut() {
                *q = -(1.0 - rng.gen::<f64>()).ln();
                sum += *q;
            }
        }
        for row in cells.iter_mut() {
            for q in row.iter_mut() {
                *q /= sum;
            }
        }
        Self { cells }
    }

    /// Observables induced by the table: the observed law and the
    /// surrogate-to-outcome effect on the difference scale.
    pub fn observables(&self) -> (ObservedLaw, f64) {
        observables_from_qtable_strong(self)
    }

    /// The treatment-to-outcome effect on the difference scale.
    pub fn ace_ty(&self) -> f64 {
        ace_from_qtable_strong(self)
    }
}

/// Applies the linear maps from a strong type table to its observables.
///
/// Control cells read the outcome through the realized control surrogate;
/// the treated marginal sums the rows with S=1 under treatment. The effect
/// is the column-1 mass minus the column-2 mass.
pub fn observables_from_qtable_strong(q: &QTableStrong) -> (ObservedLaw, f64) {
    let c = &q.cells;
    let p00 = c[0][0] + c[0][1] + c[1][0] + c[1][1];
    let p10 = c[0][2] + c[0][3] + c[1][2] + c[1][3];
    let p01 = c[2][0] + c[2][2] + c[3][0] + c[3][2];
    let p11 = c[2][1] + c[2][3] + c[3][1] + c[3][3];
    let s1_treated: f64 = (0..4).map(|j| c[1][j] + c[3][j]).sum();
    let gamma: f64 = (0..4).map(|i| c[i][1] - c[i][2]).sum();
    let law = ObservedLaw { p00, p10, p01, p11, s1_treated }
        .validated()
        .expect("a valid type table induces a valid observed law");
    (law, gamma)
}

/// The treatment-to-outcome effect of a strong type table:
/// `q[2][2] + q[1][1] - q[1][2] - q[2][1]`.
pub fn ace_from_qtable_strong(q: &QTableStrong) -> f64 {
    q.cells[2][2] + q.cells[1][1] - q.cells[1][2] - q.cells[2][1]
}

/// Surrogate-to-outcome effects of a non-strong surrogate, one per
/// treatment arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonStrongGammas {
    /// P(Y01=1) - P(Y00=1): effect of the surrogate with treatment held at 0.
    pub gamma0: f64,
    /// P(Y11=1) - P(Y10=1): effect of the surrogate with treatment held at 1.
    pub gamma1: f64,
}

/// Distribution over the 64 potential-outcome types of a non-strong
/// surrogate. `cells[i][j]`: row `i` is the 4-bit outcome word
/// `Y00*8 + Y01*4 + Y10*2 + Y11`, column `j` the surrogate pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct QTableNonStrong {
    cells: [[f64; 4]; 16],
}

/// Bit of the outcome word `i` for potential outcome Y under (t, s).
#[inline]
pub(crate) fn outcome_bit(i: usize, t: usize, s: usize) -> f64 {
    ((i >> (3 - (2 * t + s))) & 1) as f64
}

/// Surrogate value under T=t encoded by column `j`.
#[inline]
pub(crate) fn surrogate_bit(j: usize, t: usize) -> f64 {
    if t == 0 {
        ((j >> 1) & 1) as f64
    } else {
        (j & 1) as f64
    }
}

impl QTableNonStrong {
    pub fn new(cells: [[f64; 4]; 16]) -> Result<Self, LawError> {
        let mut sum = 0.0;
        for (i, row) in cells.iter().enumerate() {
            for (j, &q) in row.iter().enumerate() {
                if !q.is_finite() || q < 0.0 {
                    return Err(LawError::NotAProbability { what: format!("q[{i}][{j}]"), value: q });
                }
                sum += q;
            }
        }
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(LawError::NotNormalized { sum });
        }
        Ok(Self { cells })
    }

    pub fn uniform() -> Self {
        Self { cells: [[1.0 / 64.0; 4]; 16] }
    }

    pub fn point_mass(row: usize, col: usize) -> Self {
        let mut cells = [[0.0; 4]; 16];
        cells[row][col] = 1.0;
        Self { cells }
    }

    pub fn from_vector(v: &[f64]) -> Result<Self, LawError> {
        assert_eq!(v.len(), 64, "non-strong type table has 64 cells");
        let mut cells = [[0.0; 4]; 16];
        for (k, &q) in v.iter().enumerate() {
            cells[k / 4][k % 4] = if (-1e-12..0.0).contains(&q) { 0.0 } else { q };
        }
        Self::new(cells)
    }

    pub fn to_vector(&self) -> [f64; 64] {
        let mut v = [0.0; 64];
        for i in 0..16 {
            for j in 0..4 {
                v[4 * i + j] = self.cells[i][j];
            }
        }
        v
    }

    pub fn cell(&self, row: usize, col: usize) -> f64 {
        self.cells[row][col]
    }

    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut cells = [[0.0; 4]; 16];
        let mut sum = 0.0;
        for row in cells.iter_mut() {
            for q in row.iter_mut() {
                *q = -(1.0 - rng.gen::<f64>()).ln();
                sum += *q;
            }
        }
        for row in cells.iter_mut() {
            for q in row.iter_mut() {
                *q /= sum;
            }
        }
        Self { cells }
    }

    pub fn effects(&self) -> NonStrongEffects {
        effects_from_qtable_nonstrong(self)
    }
}

/// Effects and observables induced by a non-strong type table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonStrongEffects {
    pub ace_ty: f64,
    pub gammas: NonStrongGammas,
    pub observed: ObservedLaw,
}

/// Computes the per-arm surrogate effects, the treatment effect and the
/// induced observed law of a non-strong type table.
pub fn effects_from_qtable_nonstrong(q: &QTableNonStrong) -> NonStrongEffects {
    let mut gamma0 = 0.0;
    let mut gamma1 = 0.0;
    let mut ace_ty = 0.0;
    let (mut p00, mut p10, mut p01, mut p11, mut s1_treated) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..16 {
        for j in 0..4 {
            let cell = q.cells[i][j];
            gamma0 += (outcome_bit(i, 0, 1) - outcome_bit(i, 0, 0)) * cell;
            gamma1 += (outcome_bit(i, 1, 1) - outcome_bit(i, 1, 0)) * cell;
            let s0 = surrogate_bit(j, 0);
            let s1 = surrogate_bit(j, 1);
            // Observed outcome in each arm reads Y through the realized surrogate.
            let y_treated = outcome_bit(i, 1, s1 as usize);
            let y_control = outcome_bit(i, 0, s0 as usize);
            ace_ty += (y_treated - y_control) * cell;
            s1_treated += s1 * cell;
            match (y_control as usize, s0 as usize) {
                (0, 0) => p00 += cell,
                (1, 0) => p10 += cell,
                (0, 1) => p01 += cell,
                (1, 1) => p11 += cell,
                _ => unreachable!(),
            }
        }
    }
    let observed = ObservedLaw { p00, p10, p01, p11, s1_treated }
        .validated()
        .expect("a valid type table induces a valid observed law");
    NonStrongEffects { ace_ty, gammas: NonStrongGammas { gamma0, gamma1 }, observed }
}

/// Verdict of a paradox-exclusion criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionVerdict {
    /// The guaranteed effect strictly exceeds the threshold: the paradox
    /// cannot occur under any latent distribution matching the data.
    Excluded,
    /// Some latent distribution matching the data manifests the paradox.
    NotExcludable,
    /// The effect sits exactly at the threshold: a nonnegative treatment
    /// effect is guaranteed, strict positivity is not.
    Boundary,
}

/// Bounds on a treatment-to-outcome effect with attribution and the
/// associated exclusion verdict.
///
/// `lower > upper` is possible when the inputs are jointly infeasible and
/// feasibility checking was skipped; crossed bounds are reported as-is since
/// they diagnose inconsistent external effect information.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub lower: f64,
    pub upper: f64,
    /// 1-based index of the attaining closed-form term (lowest index among
    /// ties); `None` for LP-computed bounds without a closed form.
    pub active_lower_term: Option<usize>,
    pub active_upper_term: Option<usize>,
    /// Latent tables attaining each end, when an LP solve produced them.
    pub witness_lower: Option<QTableStrong>,
    pub witness_upper: Option<QTableStrong>,
    pub criterion: CriterionVerdict,
    /// Right-hand side of the exclusion inequality (1.0 on the
    /// relative-risk scale).
    pub threshold: f64,
}
