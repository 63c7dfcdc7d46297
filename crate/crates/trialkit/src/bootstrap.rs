//! Nonparametric bootstrap uncertainty regions for partially identified
//! bounds: both arms are resampled independently, bounds recomputed per
//! replicate, and the region takes the alpha/2 quantile of the lower ends
//! against the 1 - alpha/2 quantile of the upper ends.

use crate::ingest::{law_from_counts, ControlCounts, TreatedCounts};
use rand::distributions::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Binomial;
use rayon::prelude::*;
use serde::Serialize;
use surrbound::bounds as cf;
use surrbound::law::ObservedLaw;
use surrbound::lp::{self, LpError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BootstrapError {
    #[error("replicate count must be at least 1")]
    NoReplicates,
    #[error("alpha must lie strictly between 0 and 1 (got {0})")]
    BadAlpha(f64),
    #[error("an arm has no observations")]
    DegenerateArm,
    #[error("all {0} replicates were infeasible with the stated effect")]
    AllReplicatesInfeasible(u32),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// External study counts used to resample the surrogate-to-outcome effect:
/// outcome events over totals in each surrogate group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExternalStudyCounts {
    pub events_s1: u64,
    pub n_s1: u64,
    pub events_s0: u64,
    pub n_s0: u64,
}

/// How the effect knowledge enters the replicates: held fixed (effect known
/// exactly), or re-estimated per replicate from a resampled external study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaResampling {
    Fixed,
    FromStudy(ExternalStudyCounts),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapConfig {
    pub replicates: u32,
    pub alpha: f64,
    pub seed: u64,
    pub gamma: GammaResampling,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self { replicates: 1000, alpha: 0.05, seed: 0, gamma: GammaResampling::Fixed }
    }
}

/// Which bounds are recomputed per replicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundsModel {
    StrongAce,
    NonStrongAce,
    StrongCrr,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyRegion {
    pub lo: f64,
    pub hi: f64,
    pub sd_lower: f64,
    pub sd_upper: f64,
    #[serde(skip)]
    pub replicates_used: u32,
    #[serde(skip)]
    pub skipped_replicates: u32,
}

impl UncertaintyRegion {
    /// More than half the replicates skipped signals that the stated
    /// effect sits at the edge of what the data allow.
    pub fn mostly_skipped(&self) -> bool {
        self.skipped_replicates > self.replicates_used
    }
}

/// Type-7 quantile (linear interpolation) of sorted data.
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = q * (n - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

fn stddev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    var.sqrt()
}

fn replicate_rng(seed: u64, replicate: u32) -> ChaCha8Rng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..12].copy_from_slice(&replicate.to_le_bytes());
    ChaCha8Rng::from_seed(bytes)
}

fn binomial(rng: &mut ChaCha8Rng, n: u64, p: f64) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    Binomial::new(n, p).expect("probability validated").sample(rng)
}

/// Multinomial draw by chained binomials, fixed category order.
fn resample_control(rng: &mut ChaCha8Rng, counts: &ControlCounts) -> ControlCounts {
    let n = counts.total();
    let probs = [
        counts.cells[0][0] as f64 / n as f64,
        counts.cells[1][0] as f64 / n as f64,
        counts.cells[0][1] as f64 / n as f64,
        counts.cells[1][1] as f64 / n as f64,
    ];
    let mut drawn = [0u64; 4];
    let mut remaining = n;
    let mut rest = 1.0;
    for k in 0..3 {
        let p = if rest > 0.0 { (probs[k] / rest).clamp(0.0, 1.0) } else { 0.0 };
        drawn[k] = binomial(rng, remaining, p);
        remaining -= drawn[k];
        rest -= probs[k];
    }
    drawn[3] = remaining;
    ControlCounts { cells: [[drawn[0], drawn[2]], [drawn[1], drawn[3]]] }
}

fn resample_gamma(
    rng: &mut ChaCha8Rng,
    mode: &GammaResampling,
    fixed: f64,
    ratio_scale: bool,
) -> Option<f64> {
    match mode {
        GammaResampling::Fixed => Some(fixed),
        GammaResampling::FromStudy(study) => {
            if study.n_s0 == 0 || study.n_s1 == 0 {
                return None;
            }
            let p1 = binomial(rng, study.n_s1, study.events_s1 as f64 / study.n_s1 as f64) as f64
                / study.n_s1 as f64;
            let p0 = binomial(rng, study.n_s0, study.events_s0 as f64 / study.n_s0 as f64) as f64
                / study.n_s0 as f64;
            if ratio_scale {
                (p0 > 0.0).then(|| p1 / p0)
            } else {
                Some(p1 - p0)
            }
        }
    }
}

fn replicate_bounds(
    law: &ObservedLaw,
    gamma: f64,
    model: BoundsModel,
) -> Result<Option<(f64, f64)>, LpError> {
    match model {
        BoundsModel::StrongAce => {
            if !(-1.0..=1.0).contains(&gamma) || !lp::strong_feasible(law, gamma)? {
                return Ok(None);
            }
            let report = cf::strong_bounds(law, gamma);
            Ok(Some((report.lower, report.upper)))
        }
        BoundsModel::NonStrongAce => {
            if !(-1.0..=1.0).contains(&gamma) {
                return Ok(None);
            }
            let report = cf::nonstrong_bounds(law.py1_control(), law.s1_treated, gamma);
            Ok(Some((report.lower, report.upper)))
        }
        BoundsModel::StrongCrr => {
            if gamma <= 0.0 {
                return Ok(None);
            }
            match lp::crr_bounds(law, gamma) {
                Ok(report) => Ok(Some((report.lower, report.upper))),
                Err(LpError::InfeasibleInputs) | Err(LpError::ZeroControlRisk) => Ok(None),
                Err(e) => Err(e),
            }
        }
    }
}

/// Bootstrap uncertainty region for the bounds implied by trial counts and
/// an effect value. Replicates resample both arms independently (and the
/// external effect study, when configured); infeasible replicates are
/// skipped and counted. Replicate `r` draws from a stream keyed by
/// `(seed, r)`, so results are independent of the worker count.
pub fn bootstrap_region(
    control: &ControlCounts,
    treated: &TreatedCounts,
    gamma: f64,
    model: BoundsModel,
    cfg: &BootstrapConfig,
) -> Result<UncertaintyRegion, BootstrapError> {
    if cfg.replicates == 0 {
        return Err(BootstrapError::NoReplicates);
    }
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
        return Err(BootstrapError::BadAlpha(cfg.alpha));
    }
    if control.total() == 0 || treated.total == 0 {
        return Err(BootstrapError::DegenerateArm);
    }
    let ratio_scale = model == BoundsModel::StrongCrr;
    let outcomes: Vec<Result<Option<(f64, f64)>, LpError>> = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(cfg.seed, r);
            let control_r = resample_control(&mut rng, control);
            let s1 = binomial(&mut rng, treated.total, treated.s1 as f64 / treated.total as f64);
            let treated_r = TreatedCounts { s1, total: treated.total };
            if control_r.total() == 0 || treated_r.total == 0 {
                return Ok(None); // unreachable with fixed-n resampling, guarded anyway
            }
            let law = law_from_counts(&control_r, &treated_r);
            let Some(gamma_r) = resample_gamma(&mut rng, &cfg.gamma, gamma, ratio_scale) else {
                return Ok(None);
            };
            replicate_bounds(&law, gamma_r, model)
        })
        .collect();

    let mut lowers = Vec::with_capacity(outcomes.len());
    let mut uppers = Vec::with_capacity(outcomes.len());
    let mut skipped = 0u32;
    for outcome in outcomes {
        match outcome? {
            Some((lo, hi)) => {
                lowers.push(lo);
                uppers.push(hi);
            }
            None => skipped += 1,
        }
    }
    if lowers.is_empty() {
        return Err(BootstrapError::AllReplicatesInfeasible(cfg.replicates));
    }
    let sd_lower = stddev(&lowers);
    let sd_upper = stddev(&uppers);
    lowers.sort_by(|a, b| a.partial_cmp(b).expect("finite bounds"));
    uppers.sort_by(|a, b| a.partial_cmp(b).expect("finite bounds"));
    Ok(UncertaintyRegion {
        lo: quantile_sorted(&lowers, cfg.alpha / 2.0),
        hi: quantile_sorted(&uppers, 1.0 - cfg.alpha / 2.0),
        sd_lower,
        sd_upper,
        replicates_used: lowers.len() as u32,
        skipped_replicates: skipped,
    })
}
