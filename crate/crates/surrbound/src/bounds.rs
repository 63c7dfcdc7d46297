//! Closed-form sharp bounds on the treatment-to-outcome effect and the
//! exclusion criteria built on them, with per-term attribution.
//!
//! Every bound here is a max (lower end) or min (upper end) of a small
//! stack of affine expressions in the observables and the
//! surrogate-to-outcome effect. The stacks are hardcoded; the `symbolic`
//! module re-derives them from the dual polyhedron and the `lp` module
//! checks them numerically, so the three routes stay independent.

use crate::law::{
    BoundsReport, CriterionVerdict, GammaScale, GammaSpec, IntervalEnd, ObservedLaw,
};
use crate::lp::{self, LpError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("effect specification must be on the {expected:?} scale")]
    WrongScale { expected: GammaScale },
    #[error("effect range [{lo}, {hi:?}] is not an admissible interval")]
    BadRange { lo: f64, hi: IntervalEnd },
    #[error("no latent table reproduces the stated observables and effect")]
    InfeasibleInputs,
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Labelled bound terms, e.g. for display of the full stacks.
#[derive(Debug, Clone, PartialEq)]
pub struct TermList {
    pub terms: Vec<(String, f64)>,
}

impl TermList {
    fn new(prefix: &str, values: &[f64]) -> Self {
        let terms =
            values.iter().enumerate().map(|(k, &v)| (format!("{prefix}{}", k + 1), v)).collect();
        Self { terms }
    }
}

/// A bound term affine in the effect: `slope * gamma + intercept`.
type Line = (f64, f64);

fn eval(line: Line, gamma: f64) -> f64 {
    line.0 * gamma + line.1
}

/// The seven lower-bound terms of the strong-surrogate sharp bounds.
fn strong_lower_lines(law: &ObservedLaw) -> [Line; 7] {
    let s0 = law.s0_treated();
    let s1 = law.s1_treated;
    [
        (0.0, -law.p10 - s0),
        (0.0, -law.p10 - law.p11),
        (0.0, -law.p11 - s1),
        (-1.0, -s1 - law.p10),
        (-1.0, -law.p01 - 2.0 * law.p10),
        (1.0, -2.0 * law.p11 - law.p00),
        (1.0, -s0 - law.p11),
    ]
}

/// The seven upper-bound terms.
fn strong_upper_lines(law: &ObservedLaw) -> [Line; 7] {
    let s0 = law.s0_treated();
    let s1 = law.s1_treated;
    [
        (0.0, law.p00 + s0),
        (0.0, law.p00 + law.p01),
        (0.0, law.p01 + s1),
        (1.0, law.p10 + 2.0 * law.p01),
        (1.0, law.p01 + s0),
        (-1.0, 2.0 * law.p00 + law.p11),
        (-1.0, law.p00 + s1),
    ]
}

fn argmax(values: &[f64]) -> (usize, f64) {
    let mut best = (0, values[0]);
    for (k, &v) in values.iter().enumerate().skip(1) {
        if v > best.1 {
            best = (k, v);
        }
    }
    best
}

fn argmin(values: &[f64]) -> (usize, f64) {
    let mut best = (0, values[0]);
    for (k, &v) in values.iter().enumerate().skip(1) {
        if v < best.1 {
            best = (k, v);
        }
    }
    best
}

/// Lower-bound term stack evaluated at a point effect value.
pub fn strong_lower_terms(law: &ObservedLaw, gamma: f64) -> TermList {
    let vals: Vec<f64> = strong_lower_lines(law).iter().map(|&l| eval(l, gamma)).collect();
    TermList::new("L", &vals)
}

/// Upper-bound term stack evaluated at a point effect value.
pub fn strong_upper_terms(law: &ObservedLaw, gamma: f64) -> TermList {
    let vals: Vec<f64> = strong_upper_lines(law).iter().map(|&l| eval(l, gamma)).collect();
    TermList::new("U", &vals)
}

/// Exclusion threshold for a strong surrogate:
/// `min(2*p11 + p00, (1 - s1_treated) + p11)`.
pub fn strong_threshold(law: &ObservedLaw) -> f64 {
    (2.0 * law.p11 + law.p00).min(law.s0_treated() + law.p11)
}

fn verdict(guaranteed_lower: f64, threshold: f64) -> CriterionVerdict {
    if guaranteed_lower > threshold {
        CriterionVerdict::Excluded
    } else if guaranteed_lower == threshold {
        CriterionVerdict::Boundary
    } else {
        CriterionVerdict::NotExcludable
    }
}

/// Sharp bounds on the treatment-to-outcome effect given the observed law
/// and a point surrogate-to-outcome effect on the difference scale.
///
/// Feasibility of `(law, gamma)` is not checked here; infeasible inputs can
/// yield crossed bounds, reported as-is. Use [`strong_bounds_strict`] to
/// reject them instead.
pub fn strong_bounds(law: &ObservedLaw, gamma: f64) -> BoundsReport {
    debug_assert!((-1.0..=1.0).contains(&gamma));
    let lower_vals: Vec<f64> = strong_lower_lines(law).iter().map(|&l| eval(l, gamma)).collect();
    let upper_vals: Vec<f64> = strong_upper_lines(law).iter().map(|&l| eval(l, gamma)).collect();
    let (li, lower) = argmax(&lower_vals);
    let (ui, upper) = argmin(&upper_vals);
    BoundsReport {
        lower,
        upper,
        active_lower_term: Some(li + 1),
        active_upper_term: Some(ui + 1),
        witness_lower: None,
        witness_upper: None,
        criterion: verdict(gamma, strong_threshold(law)),
        threshold: strong_threshold(law),
    }
}

/// As [`strong_bounds`], but first checks that some latent table reproduces
/// the inputs.
pub fn strong_bounds_strict(law: &ObservedLaw, gamma: f64) -> Result<BoundsReport, BoundsError> {
    if !lp::strong_feasible(law, gamma)? {
        return Err(BoundsError::InfeasibleInputs);
    }
    Ok(strong_bounds(law, gamma))
}

/// Outcome of an exclusion criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionOutcome {
    pub verdict: CriterionVerdict,
    pub threshold: f64,
}

/// Exclusion criterion for a strong surrogate on the difference scale.
///
/// Excluded iff the guaranteed lower end of the effect knowledge strictly
/// exceeds the threshold; equality is reported as Boundary. A bare positive
/// sign can never exclude the paradox.
pub fn strong_criterion(
    law: &ObservedLaw,
    gamma_spec: &GammaSpec,
) -> Result<CriterionOutcome, BoundsError> {
    if gamma_spec.scale != GammaScale::Difference {
        return Err(BoundsError::WrongScale { expected: GammaScale::Difference });
    }
    let threshold = strong_threshold(law);
    let verdict = match gamma_spec.form {
        crate::law::GammaForm::SignPositive => CriterionVerdict::NotExcludable,
        _ => verdict(gamma_spec.guaranteed_lower(), threshold),
    };
    Ok(CriterionOutcome { verdict, threshold })
}

/// The three lower-bound terms for a non-strong surrogate; they depend on
/// the control arm only through the outcome marginal.
fn nonstrong_lower_lines(py1: f64, s1_treated: f64) -> [Line; 3] {
    [
        (0.0, -py1),
        (-1.0, -py1 - s1_treated),
        (1.0, -py1 - (1.0 - s1_treated)),
    ]
}

fn nonstrong_upper_lines(py1: f64, s1_treated: f64) -> [Line; 3] {
    let py0 = 1.0 - py1;
    [
        (0.0, py0),
        (-1.0, py0 + s1_treated),
        (1.0, py0 + (1.0 - s1_treated)),
    ]
}

/// Sharp bounds for a non-strong surrogate from P(Y=1|T=0), P(S=1|T=1) and
/// the treated-arm surrogate effect. Independent of the control-arm
/// surrogate effect by construction.
pub fn nonstrong_bounds(py1_control: f64, s1_treated: f64, gamma1: f64) -> BoundsReport {
    debug_assert!((0.0..=1.0).contains(&py1_control));
    debug_assert!((0.0..=1.0).contains(&s1_treated));
    debug_assert!((-1.0..=1.0).contains(&gamma1));
    let lower_vals: Vec<f64> =
        nonstrong_lower_lines(py1_control, s1_treated).iter().map(|&l| eval(l, gamma1)).collect();
    let upper_vals: Vec<f64> =
        nonstrong_upper_lines(py1_control, s1_treated).iter().map(|&l| eval(l, gamma1)).collect();
    let (li, lower) = argmax(&lower_vals);
    let (ui, upper) = argmin(&upper_vals);
    let threshold = nonstrong_threshold(py1_control, s1_treated);
    BoundsReport {
        lower,
        upper,
        active_lower_term: Some(li + 1),
        active_upper_term: Some(ui + 1),
        witness_lower: None,
        witness_upper: None,
        criterion: verdict(gamma1, threshold),
        threshold,
    }
}

pub fn nonstrong_bounds_strict(
    py1_control: f64,
    s1_treated: f64,
    gamma1: f64,
) -> Result<BoundsReport, BoundsError> {
    // Any (s1, gamma1) in range admits a latent table; run phase 1 anyway so
    // strict mode carries the same guarantee as the strong path.
    match lp::nonstrong_bounds_reduced_lp(py1_control, s1_treated, gamma1) {
        Ok(_) => Ok(nonstrong_bounds(py1_control, s1_treated, gamma1)),
        Err(LpError::InfeasibleInputs) => Err(BoundsError::InfeasibleInputs),
        Err(e) => Err(BoundsError::Lp(e)),
    }
}

/// Exclusion threshold for a non-strong surrogate:
/// `P(Y=1|T=0) + P(S=0|T=1)`.
pub fn nonstrong_threshold(py1_control: f64, s1_treated: f64) -> f64 {
    py1_control + (1.0 - s1_treated)
}

/// Exclusion criterion for a non-strong surrogate on the difference scale.
pub fn nonstrong_criterion(
    py1_control: f64,
    s1_treated: f64,
    gamma1_spec: &GammaSpec,
) -> Result<CriterionOutcome, BoundsError> {
    if gamma1_spec.scale != GammaScale::Difference {
        return Err(BoundsError::WrongScale { expected: GammaScale::Difference });
    }
    let threshold = nonstrong_threshold(py1_control, s1_treated);
    let verdict = match gamma1_spec.form {
        crate::law::GammaForm::SignPositive => CriterionVerdict::NotExcludable,
        _ => verdict(gamma1_spec.guaranteed_lower(), threshold),
    };
    Ok(CriterionOutcome { verdict, threshold })
}

/// The five-term stacks valid when only the sign of the surrogate effect is
/// known. These bounds always contain zero.
pub fn sign_positive_lower_terms(law: &ObservedLaw) -> TermList {
    let s0 = law.s0_treated();
    let vals = [
        -law.p10 - s0,
        -law.p10 - law.p11,
        -law.p11 - law.s1_treated,
        -2.0 * law.p11 - law.p00,
        -law.p11 - s0,
    ];
    TermList::new("L", &vals)
}

pub fn sign_positive_upper_terms(law: &ObservedLaw) -> TermList {
    let s0 = law.s0_treated();
    let vals = [
        law.p00 + s0,
        law.p00 + law.p01,
        law.p01 + law.s1_treated,
        2.0 * law.p00 + law.p11,
        law.p00 + law.s1_treated,
    ];
    TermList::new("U", &vals)
}

/// Sharp bounds knowing only that the surrogate-to-outcome effect is
/// positive on the difference scale.
pub fn sign_positive_bounds(law: &ObservedLaw) -> BoundsReport {
    let lower_vals: Vec<f64> =
        sign_positive_lower_terms(law).terms.iter().map(|(_, v)| *v).collect();
    let upper_vals: Vec<f64> =
        sign_positive_upper_terms(law).terms.iter().map(|(_, v)| *v).collect();
    let (li, lower) = argmax(&lower_vals);
    let (ui, upper) = argmin(&upper_vals);
    BoundsReport {
        lower,
        upper,
        active_lower_term: Some(li + 1),
        active_upper_term: Some(ui + 1),
        witness_lower: None,
        witness_upper: None,
        criterion: CriterionVerdict::NotExcludable,
        threshold: strong_threshold(law),
    }
}

/// Candidate effect values for optimizing a piecewise-linear stack over an
/// interval: the interval ends plus every pairwise crossing of the lines
/// that falls inside. Minimizing a max (or maximizing a min) of lines over
/// an interval attains its optimum at one of these points.
fn stack_candidates(lines: &[Line], lo: f64, hi: f64) -> Vec<f64> {
    let mut candidates = vec![lo, hi];
    for (a, &(sa, ia)) in lines.iter().enumerate() {
        for &(sb, ib) in lines.iter().skip(a + 1) {
            if (sa - sb).abs() > 1e-12 {
                let x = (ib - ia) / (sa - sb);
                if x > lo && x < hi {
                    candidates.push(x);
                }
            }
        }
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).expect("finite candidates"));
    candidates.dedup();
    candidates
}

/// Bounds valid over an interval of surrogate-to-outcome effect values: the
/// union over the feasible part of the interval of the point bounds. The
/// lower end minimizes the lower stack over the interval and the upper end
/// maximizes the upper stack, each evaluated at the clipped piece endpoints.
///
/// With `lo = 0` and an unbounded upper end this reproduces the five-term
/// sign-only stacks.
pub fn strong_bounds_gamma_range(
    law: &ObservedLaw,
    lo: f64,
    hi: IntervalEnd,
) -> Result<BoundsReport, BoundsError> {
    let hi_ok = match hi {
        IntervalEnd::Finite(h) => h.is_finite() && h <= 1.0 && lo < h,
        IntervalEnd::Unbounded => true,
    };
    if !lo.is_finite() || lo < -1.0 || !hi_ok {
        return Err(BoundsError::BadRange { lo, hi });
    }
    let (gamma_min, gamma_max) = lp::feasible_gamma_range(law)?;
    let lo_eff = lo.max(gamma_min);
    let hi_eff = match hi {
        IntervalEnd::Finite(h) => h.min(gamma_max),
        IntervalEnd::Unbounded => gamma_max,
    };
    if lo_eff > hi_eff {
        return Err(BoundsError::InfeasibleInputs);
    }

    let lower_lines = strong_lower_lines(law);
    let upper_lines = strong_upper_lines(law);

    let mut lower = f64::INFINITY;
    let mut lower_at = lo_eff;
    for x in stack_candidates(&lower_lines, lo_eff, hi_eff) {
        let vals: Vec<f64> = lower_lines.iter().map(|&l| eval(l, x)).collect();
        let (_, v) = argmax(&vals);
        if v < lower {
            lower = v;
            lower_at = x;
        }
    }
    let lower_vals: Vec<f64> = lower_lines.iter().map(|&l| eval(l, lower_at)).collect();
    let (li, _) = argmax(&lower_vals);

    let mut upper = f64::NEG_INFINITY;
    let mut upper_at = lo_eff;
    for x in stack_candidates(&upper_lines, lo_eff, hi_eff) {
        let vals: Vec<f64> = upper_lines.iter().map(|&l| eval(l, x)).collect();
        let (_, v) = argmin(&vals);
        if v > upper {
            upper = v;
            upper_at = x;
        }
    }
    let upper_vals: Vec<f64> = upper_lines.iter().map(|&l| eval(l, upper_at)).collect();
    let (ui, _) = argmin(&upper_vals);

    let threshold = strong_threshold(law);
    Ok(BoundsReport {
        lower,
        upper,
        active_lower_term: Some(li + 1),
        active_upper_term: Some(ui + 1),
        witness_lower: None,
        witness_upper: None,
        criterion: verdict(lo, threshold),
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::QTableStrong;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn antiarrhythmic_law() -> ObservedLaw {
        ObservedLaw::new(0.01972, 0.67228, 0.00602, 0.30198, 0.93).unwrap()
    }

    #[test]
    fn antiarrhythmic_point_bounds() {
        let law = antiarrhythmic_law();
        let report = strong_bounds(&law, 0.301);
        assert!((report.lower - -0.07098).abs() < 1e-9);
        assert!((report.upper - 0.02574).abs() < 1e-9);
        assert_eq!(report.active_lower_term, Some(7));
        assert_eq!(report.active_upper_term, Some(2));
        assert_eq!(report.criterion, CriterionVerdict::NotExcludable);
        assert!((report.threshold - 0.37198).abs() < 1e-9);
        // The true effect of the generating process lies inside.
        assert!(report.lower <= -0.04907 && -0.04907 <= report.upper);
    }

    #[test]
    fn perfect_surrogate_effect_identifies_the_effect() {
        // gamma = 1 forces the responder outcome type, so the treatment
        // effect on the outcome equals its effect on the surrogate.
        let law = ObservedLaw::new(0.55, 0.0, 0.0, 0.45, 0.8).unwrap();
        let report = strong_bounds(&law, 1.0);
        let ace_ts = law.ace_ts();
        assert!((report.lower - ace_ts).abs() < 1e-12);
        assert!((report.upper - ace_ts).abs() < 1e-12);
    }

    #[test]
    fn deterministic_strata_pin_the_effect_to_zero() {
        let law = ObservedLaw::new(1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        for gamma in [0.0, 0.3, 0.9] {
            let report = strong_bounds(&law, gamma);
            assert_eq!((report.lower, report.upper), (0.0, 0.0));
        }
    }

    #[test]
    fn strict_mode_rejects_infeasible_inputs() {
        let law = antiarrhythmic_law();
        assert!(matches!(strong_bounds_strict(&law, 0.99), Err(BoundsError::InfeasibleInputs)));
        assert!(strong_bounds_strict(&law, 0.301).is_ok());
    }

    #[test]
    fn criterion_thresholds_on_worked_laws() {
        // Threshold 0.4864 with effect 0.575: excluded.
        let law2 = ObservedLaw::new(0.57516, 0.13284, 0.07156, 0.22044, 0.734).unwrap();
        let spec = GammaSpec::point(GammaScale::Difference, 0.575).unwrap();
        let out = strong_criterion(&law2, &spec).unwrap();
        assert!((out.threshold - 0.48644).abs() < 1e-9);
        assert_eq!(out.verdict, CriterionVerdict::Excluded);

        // Threshold 0.625 with effect 0.8: excluded.
        let law_s1 = ObservedLaw::new(0.675, 0.075, 0.025, 0.225, 0.6).unwrap();
        let spec = GammaSpec::point(GammaScale::Difference, 0.8).unwrap();
        let out = strong_criterion(&law_s1, &spec).unwrap();
        assert!((out.threshold - 0.625).abs() < 1e-9);
        assert_eq!(out.verdict, CriterionVerdict::Excluded);
    }

    #[test]
    fn criterion_boundary_and_sign_cases() {
        let law = ObservedLaw::new(0.3, 0.1, 0.3, 0.3, 0.7).unwrap();
        let threshold = strong_threshold(&law);
        assert!((threshold - 0.6).abs() < 1e-12);
        let spec = GammaSpec::point(GammaScale::Difference, threshold).unwrap();
        assert_eq!(strong_criterion(&law, &spec).unwrap().verdict, CriterionVerdict::Boundary);
        let sign = GammaSpec::sign_positive(GammaScale::Difference);
        assert_eq!(strong_criterion(&law, &sign).unwrap().verdict, CriterionVerdict::NotExcludable);
        let rr = GammaSpec::point(GammaScale::RelativeRisk, 1.3).unwrap();
        assert!(matches!(strong_criterion(&law, &rr), Err(BoundsError::WrongScale { .. })));
    }

    #[test]
    fn criterion_matches_positive_lower_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..500 {
            let q = QTableStrong::sample(&mut rng);
            let (law, gamma) = q.observables();
            let report = strong_bounds(&law, gamma);
            let excluded = report.criterion == CriterionVerdict::Excluded;
            assert_eq!(excluded, report.lower > 0.0, "verdict must match lower-bound sign");
        }
    }

    #[test]
    fn nonstrong_worked_values() {
        let report = nonstrong_bounds(0.4, 0.7, 0.9);
        assert!((report.lower - 0.2).abs() < 1e-12);
        assert!((report.upper - 0.4).abs() < 1e-12);
        assert_eq!(report.criterion, CriterionVerdict::Excluded);
        assert!((report.threshold - 0.7).abs() < 1e-12);
    }

    #[test]
    fn nonstrong_zero_effect_gives_no_information() {
        let report = nonstrong_bounds(0.35, 0.6, 0.0);
        assert!((report.lower + 0.35).abs() < 1e-12);
        assert!((report.upper - 0.65).abs() < 1e-12);
    }

    #[test]
    fn nonstrong_point_identification() {
        let report = nonstrong_bounds(0.5, 1.0, 1.0);
        assert!((report.lower - 0.5).abs() < 1e-12);
        assert!((report.upper - 0.5).abs() < 1e-12);
    }

    #[test]
    fn nonstrong_criterion_edge_cases() {
        let threshold = nonstrong_threshold(0.4, 0.7);
        let spec = GammaSpec::point(GammaScale::Difference, threshold).unwrap();
        let out = nonstrong_criterion(0.4, 0.7, &spec).unwrap();
        assert_eq!(out.verdict, CriterionVerdict::Boundary);
        // Threshold above 1 can never be beaten by an effect in range.
        let spec = GammaSpec::point(GammaScale::Difference, 0.99).unwrap();
        let out = nonstrong_criterion(0.9, 0.5, &spec).unwrap();
        assert!((out.threshold - 1.4).abs() < 1e-12);
        assert_eq!(out.verdict, CriterionVerdict::NotExcludable);
    }

    #[test]
    fn gamma_range_degenerate_interval_matches_point() {
        let law = antiarrhythmic_law();
        let eps = 1e-7;
        let report =
            strong_bounds_gamma_range(&law, 0.301 - eps, IntervalEnd::Finite(0.301 + eps)).unwrap();
        let point = strong_bounds(&law, 0.301);
        assert!((report.lower - point.lower).abs() < 3.0 * eps);
        assert!((report.upper - point.upper).abs() < 3.0 * eps);
    }

    #[test]
    fn gamma_range_optimum_can_sit_strictly_inside() {
        // Both ends of the interval give a lower stack value of -0.55 while
        // the minimum over the interval is the -0.65 plateau; endpoint-only
        // evaluation would miss it.
        let law = ObservedLaw::new(0.2, 0.25, 0.15, 0.4, 0.3).unwrap();
        let report = strong_bounds_gamma_range(&law, 0.0, IntervalEnd::Finite(0.45)).unwrap();
        assert!((report.lower + 0.65).abs() < 1e-12);
        let report = strong_bounds_gamma_range(&law, -0.3, IntervalEnd::Finite(0.3)).unwrap();
        assert!((report.upper - 0.35).abs() < 1e-12);
    }

    #[test]
    fn gamma_range_excluded_above_threshold() {
        let law_s1 = ObservedLaw::new(0.675, 0.075, 0.025, 0.225, 0.6).unwrap();
        let report =
            strong_bounds_gamma_range(&law_s1, 0.7, IntervalEnd::Finite(0.9)).unwrap();
        assert_eq!(report.criterion, CriterionVerdict::Excluded);
        assert!(report.lower > 0.0);
        assert!((report.threshold - 0.625).abs() < 1e-12);
    }

    #[test]
    fn gamma_range_sign_only_matches_five_term_stacks() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..50 {
            let q = QTableStrong::sample(&mut rng);
            let (law, _) = q.observables();
            let ranged = strong_bounds_gamma_range(&law, 0.0, IntervalEnd::Unbounded).unwrap();
            let stacks = sign_positive_bounds(&law);
            assert!((ranged.lower - stacks.lower).abs() < 1e-9);
            assert!((ranged.upper - stacks.upper).abs() < 1e-9);
            assert!(stacks.lower <= 1e-12 && stacks.upper >= -1e-12);
        }
    }

    #[test]
    fn gamma_range_monotone_in_information() {
        let law = antiarrhythmic_law();
        let wide = strong_bounds_gamma_range(&law, 0.0, IntervalEnd::Finite(0.32)).unwrap();
        let narrow = strong_bounds_gamma_range(&law, 0.25, IntervalEnd::Finite(0.31)).unwrap();
        assert!(wide.lower <= narrow.lower + 1e-12);
        assert!(narrow.upper <= wide.upper + 1e-12);
    }

    #[test]
    fn gamma_range_rejects_bad_input() {
        let law = antiarrhythmic_law();
        assert!(matches!(
            strong_bounds_gamma_range(&law, 0.5, IntervalEnd::Finite(0.4)),
            Err(BoundsError::BadRange { .. })
        ));
        assert!(matches!(
            strong_bounds_gamma_range(&law, -1.5, IntervalEnd::Unbounded),
            Err(BoundsError::BadRange { .. })
        ));
        // Entirely outside the feasible effect range for this law.
        assert!(matches!(
            strong_bounds_gamma_range(&law, 0.9, IntervalEnd::Finite(0.95)),
            Err(BoundsError::InfeasibleInputs)
        ));
    }

    #[test]
    fn point_identification_term_collapse() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let q = QTableStrong::sample(&mut rng);
            let (law, _) = q.observables();
            let gamma = (1.0 + law.p00 + law.p11) / 2.0;
            let l7 = strong_lower_terms(&law, gamma).terms[6].1;
            let u7 = strong_upper_terms(&law, gamma).terms[6].1;
            assert!((l7 - u7).abs() < 1e-12);
        }
    }
}
