//! Ground-truth oracle over fully specified binary-confounder generating
//! processes: true effects, paradox classification, witness search, the
//! built-in worked examples, and the parameter-space partition grid.

use crate::bounds;
use crate::law::{
    CriterionVerdict, GammaScale, LawError, NonStrongGammas, ObservedLaw, QTableStrong,
};
use crate::lp::{self, Direction, LpError, LpSolution};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::{self, Write};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DgpError {
    #[error("probability {what} = {value} outside [0,1]")]
    BadProbability { what: String, value: f64 },
    #[error("witness search premises violated: {reason}")]
    PremiseViolated { reason: String },
    #[error("relative-risk effects undefined for this process")]
    CrrUndefined,
    #[error(transparent)]
    Law(#[from] LawError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Outcome mechanism of a binary-confounder process. A strong surrogate
/// screens the outcome off the treatment; the non-strong variant lets the
/// treatment act directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum YGiven {
    /// `[u][s]` = P(Y=1 | U=u, S=s)
    Strong([[f64; 2]; 2]),
    /// `[u][s][t]` = P(Y=1 | U=u, S=s, T=t)
    NonStrong([[[f64; 2]; 2]; 2]),
}

/// Fully specified generating process with one binary confounder of the
/// surrogate-outcome relationship and randomized treatment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DgpBinaryU {
    /// P(U=1)
    pub p_u: f64,
    /// P(T=1); irrelevant to the causal effects under randomization, kept
    /// for completeness of the process description.
    pub p_t: f64,
    /// `[u][t]` = P(S=1 | U=u, T=t)
    pub s_given: [[f64; 2]; 2],
    pub y_given: YGiven,
}

impl DgpBinaryU {
    pub fn validated(self) -> Result<Self, DgpError> {
        let check = |what: String, v: f64| -> Result<(), DgpError> {
            if v.is_finite() && (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(DgpError::BadProbability { what, value: v })
            }
        };
        check("p_u".into(), self.p_u)?;
        check("p_t".into(), self.p_t)?;
        for u in 0..2 {
            for t in 0..2 {
                check(format!("s_given[{u}][{t}]"), self.s_given[u][t])?;
            }
        }
        match self.y_given {
            YGiven::Strong(y) => {
                for u in 0..2 {
                    for s in 0..2 {
                        check(format!("y_given[{u}][{s}]"), y[u][s])?;
                    }
                }
            }
            YGiven::NonStrong(y) => {
                for u in 0..2 {
                    for s in 0..2 {
                        for t in 0..2 {
                            check(format!("y_given[{u}][{s}][{t}]"), y[u][s][t])?;
                        }
                    }
                }
            }
        }
        Ok(self)
    }

    fn y_prob(&self, u: usize, s: usize, t: usize) -> f64 {
        match self.y_given {
            YGiven::Strong(y) => y[u][s],
            YGiven::NonStrong(y) => y[u][s][t],
        }
    }

    /// All conditional probabilities i.i.d. uniform, treatment balanced.
    pub fn sample_strong<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self {
            p_u: rng.gen(),
            p_t: 0.5,
            s_given: [[rng.gen(), rng.gen()], [rng.gen(), rng.gen()]],
            y_given: YGiven::Strong([[rng.gen(), rng.gen()], [rng.gen(), rng.gen()]]),
        }
    }

    pub fn sample_nonstrong<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self {
            p_u: rng.gen(),
            p_t: 0.5,
            s_given: [[rng.gen(), rng.gen()], [rng.gen(), rng.gen()]],
            y_given: YGiven::NonStrong([
                [[rng.gen(), rng.gen()], [rng.gen(), rng.gen()]],
                [[rng.gen(), rng.gen()], [rng.gen(), rng.gen()]],
            ]),
        }
    }
}

/// Surrogate-to-outcome effect of a process, by mechanism.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurrogateEffect {
    Strong { gamma: f64 },
    NonStrong(NonStrongGammas),
}

impl SurrogateEffect {
    /// The effect relevant to the treated arm: the single effect for a
    /// strong surrogate, the treated-arm effect otherwise.
    pub fn treated_arm(&self) -> f64 {
        match *self {
            SurrogateEffect::Strong { gamma } => gamma,
            SurrogateEffect::NonStrong(g) => g.gamma1,
        }
    }
}

/// True causal effects of a process together with its observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrueEffects {
    pub ace_ts: f64,
    pub sy: SurrogateEffect,
    pub ace_ty: f64,
    /// Outcome risks under each arm-wide intervention.
    pub py_treated: f64,
    pub py_control: f64,
    pub crr_ts: Option<f64>,
    pub crr_sy: Option<f64>,
    pub crr_ty: Option<f64>,
    pub observed: ObservedLaw,
}

/// Evaluates a process exactly: intervention distributions by mixing over
/// the confounder, observables by marginalizing each arm.
pub fn evaluate_dgp(dgp: &DgpBinaryU) -> TrueEffects {
    let w = [1.0 - dgp.p_u, dgp.p_u];

    let s1_arm = |t: usize| -> f64 { (0..2).map(|u| w[u] * dgp.s_given[u][t]).sum() };
    let ace_ts = s1_arm(1) - s1_arm(0);
    let crr_ts = if s1_arm(0) > 0.0 { Some(s1_arm(1) / s1_arm(0)) } else { None };

    // Outcome risk under do(S=s), averaging the confounder; arm-specific
    // for the non-strong mechanism.
    let py_do_s = |s: usize, t: usize| -> f64 { (0..2).map(|u| w[u] * dgp.y_prob(u, s, t)).sum() };
    let sy = match dgp.y_given {
        YGiven::Strong(_) => SurrogateEffect::Strong { gamma: py_do_s(1, 0) - py_do_s(0, 0) },
        YGiven::NonStrong(_) => SurrogateEffect::NonStrong(NonStrongGammas {
            gamma0: py_do_s(1, 0) - py_do_s(0, 0),
            gamma1: py_do_s(1, 1) - py_do_s(0, 1),
        }),
    };
    let crr_sy = match dgp.y_given {
        YGiven::Strong(_) if py_do_s(0, 0) > 0.0 => Some(py_do_s(1, 0) / py_do_s(0, 0)),
        _ => None,
    };

    let py_arm = |t: usize| -> f64 {
        (0..2)
            .map(|u| {
                let s1 = dgp.s_given[u][t];
                w[u] * ((1.0 - s1) * dgp.y_prob(u, 0, t) + s1 * dgp.y_prob(u, 1, t))
            })
            .sum()
    };
    let py_treated = py_arm(1);
    let py_control = py_arm(0);
    let ace_ty = py_treated - py_control;
    let crr_ty = if py_control > 0.0 { Some(py_treated / py_control) } else { None };

    let cell = |y: usize, s: usize| -> f64 {
        (0..2)
            .map(|u| {
                let s1 = dgp.s_given[u][0];
                let ps = if s == 1 { s1 } else { 1.0 - s1 };
                let py = dgp.y_prob(u, s, 0);
                let py = if y == 1 { py } else { 1.0 - py };
                w[u] * ps * py
            })
            .sum()
    };
    let observed = ObservedLaw {
        p00: cell(0, 0),
        p10: cell(1, 0),
        p01: cell(0, 1),
        p11: cell(1, 1),
        s1_treated: s1_arm(1),
    }
    .validated()
    .expect("a valid process induces a valid observed law");

    TrueEffects { ace_ts, sy, ace_ty, py_treated, py_control, crr_ts, crr_sy, crr_ty, observed }
}

/// The four sign-flip variants of the surrogate paradox. Boundary (zero)
/// effects never count as a paradox.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParadoxClass {
    /// Positive effect on the surrogate, positive surrogate effect,
    /// negative effect on the outcome.
    ParadoxA,
    ParadoxB,
    ParadoxC,
    ParadoxD,
    None,
}

/// Classifies the paradox manifested by a set of true effects. On the
/// relative-risk scale the null value is 1 instead of 0 and the effects
/// must all be defined.
pub fn classify_paradox(
    effects: &TrueEffects,
    scale: GammaScale,
) -> Result<ParadoxClass, DgpError> {
    let (ts, sy, ty) = match scale {
        GammaScale::Difference => (effects.ace_ts, effects.sy.treated_arm(), effects.ace_ty),
        GammaScale::RelativeRisk => {
            let (Some(ts), Some(sy), Some(ty)) = (effects.crr_ts, effects.crr_sy, effects.crr_ty)
            else {
                return Err(DgpError::CrrUndefined);
            };
            (ts - 1.0, sy - 1.0, ty - 1.0)
        }
    };
    Ok(match (ts > 0.0, ts < 0.0, sy > 0.0, sy < 0.0, ty > 0.0, ty < 0.0) {
        (true, _, true, _, _, true) => ParadoxClass::ParadoxA,
        (true, _, _, true, true, _) => ParadoxClass::ParadoxB,
        (_, true, true, _, true, _) => ParadoxClass::ParadoxC,
        (_, true, _, true, _, true) => ParadoxClass::ParadoxD,
        _ => ParadoxClass::None,
    })
}

/// A latent table reproducing stated observables while manifesting the
/// positive-premise paradox, together with its outcome effect.
#[derive(Debug, Clone, PartialEq)]
pub struct ParadoxWitness {
    pub qtable: QTableStrong,
    /// Treatment-to-outcome effect of the witness: difference scale value,
    /// or relative risk on the relative-risk scale.
    pub effect_ty: f64,
}

/// Searches for a latent distribution that reproduces `(law, gamma)` while
/// manifesting the paradox: minimizes the outcome effect over all
/// compatible tables and returns the attaining table iff the minimum is
/// adverse. `None` means the paradox is excluded by the observed data.
///
/// Premises: the identified surrogate uplift must be positive and the
/// stated surrogate-to-outcome effect must be positive on its scale.
pub fn paradox_witness_search(
    law: &ObservedLaw,
    gamma: f64,
    scale: GammaScale,
) -> Result<Option<ParadoxWitness>, DgpError> {
    if law.ace_ts() <= 0.0 {
        return Err(DgpError::PremiseViolated {
            reason: format!("treatment effect on the surrogate is {:.4} <= 0", law.ace_ts()),
        });
    }
    let null = match scale {
        GammaScale::Difference => 0.0,
        GammaScale::RelativeRisk => 1.0,
    };
    if gamma <= null {
        return Err(DgpError::PremiseViolated {
            reason: format!("surrogate-to-outcome effect {gamma} is not positive on its scale"),
        });
    }
    match scale {
        GammaScale::Difference => {
            let problem = lp::build_strong_system(law, gamma, Direction::Min);
            match lp::simplex_solve(&problem)? {
                LpSolution::Optimal(opt) => {
                    if opt.value < 0.0 {
                        let qtable = QTableStrong::from_vector(&opt.point)?;
                        Ok(Some(ParadoxWitness { qtable, effect_ty: opt.value }))
                    } else {
                        Ok(None)
                    }
                }
                LpSolution::Infeasible => Err(DgpError::Lp(LpError::InfeasibleInputs)),
                LpSolution::Unbounded => Err(DgpError::Lp(LpError::NumericalBreakdown)),
            }
        }
        GammaScale::RelativeRisk => {
            let report = lp::crr_bounds(law, gamma)?;
            if report.lower < 1.0 {
                let qtable = report.witness_lower.ok_or(LpError::NumericalBreakdown)?;
                Ok(Some(ParadoxWitness { qtable, effect_ty: report.lower }))
            } else {
                Ok(None)
            }
        }
    }
}

/// Lift of a strong latent table to an explicit generating process whose
/// confounder is the 16-valued type indicator: each type determines its
/// surrogate and outcome responses deterministically.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeIndicatorDgp {
    pub weights: [f64; 16],
}

impl TypeIndicatorDgp {
    pub fn from_qtable(q: &QTableStrong) -> Self {
        Self { weights: q.to_vector() }
    }

    /// Evaluates the lifted process from its definition: within type
    /// `(i, j)` the surrogate under arm t and the outcome under level s
    /// are fixed bits.
    pub fn effects(&self) -> TrueEffects {
        let s_bit = |i: usize, t: usize| -> f64 {
            if t == 0 {
                ((i >> 1) & 1) as f64
            } else {
                (i & 1) as f64
            }
        };
        let y_bit = |j: usize, s: usize| -> f64 {
            if s == 0 {
                ((j >> 1) & 1) as f64
            } else {
                (j & 1) as f64
            }
        };
        let mut s1 = [0.0; 2];
        let mut py_do_s = [0.0; 2];
        let mut py_arm = [0.0; 2];
        let mut cells = [0.0; 4]; // p00, p10, p01, p11
        for k in 0..16 {
            let (i, j) = (k / 4, k % 4);
            let w = self.weights[k];
            for t in 0..2 {
                s1[t] += w * s_bit(i, t);
                py_arm[t] += w * y_bit(j, s_bit(i, t) as usize);
            }
            for s in 0..2 {
                py_do_s[s] += w * y_bit(j, s);
            }
            let s0 = s_bit(i, 0) as usize;
            let y0 = y_bit(j, s0) as usize;
            cells[2 * s0 + y0] += w;
        }
        let observed = ObservedLaw {
            p00: cells[0],
            p10: cells[1],
            p01: cells[2],
            p11: cells[3],
            s1_treated: s1[1],
        }
        .validated()
        .expect("valid table, valid law");
        TrueEffects {
            ace_ts: s1[1] - s1[0],
            sy: SurrogateEffect::Strong { gamma: py_do_s[1] - py_do_s[0] },
            ace_ty: py_arm[1] - py_arm[0],
            py_treated: py_arm[1],
            py_control: py_arm[0],
            crr_ts: (s1[0] > 0.0).then(|| s1[1] / s1[0]),
            crr_sy: (py_do_s[0] > 0.0).then(|| py_do_s[1] / py_do_s[0]),
            crr_ty: (py_arm[0] > 0.0).then(|| py_arm[1] / py_arm[0]),
            observed,
        }
    }
}

// ---------------------------------------------------------------------------
// Parameter-space partition grid.
// ---------------------------------------------------------------------------

/// Configuration of the two-parameter family scanned by the partition grid.
/// The confounder weight and the per-stratum surrogate uplifts are fixed;
/// the scanned coordinates are the per-stratum outcome effects of the
/// surrogate, added on top of the outcome baselines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PartitionConfig {
    pub p_u: f64,
    /// Per-stratum uplift P(S=1|T=1,U=u) - P(S=1|T=0,U=u).
    pub s_effect: [f64; 2],
    /// P(S=1|T=0,U=u)
    pub baseline_s: [f64; 2],
    /// P(Y=1|S=0,U=u)
    pub baseline_y: [f64; 2],
    pub delta_min: f64,
    pub delta_max: f64,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        Self {
            p_u: 0.5,
            s_effect: [0.7, 0.2],
            baseline_s: [0.15, 0.15],
            baseline_y: [0.10, 0.10],
            delta_min: -1.0,
            delta_max: 1.0,
        }
    }
}

impl PartitionConfig {
    fn dgp_at(&self, delta0: f64, delta1: f64) -> Option<DgpBinaryU> {
        let deltas = [delta0, delta1];
        let mut s_given = [[0.0; 2]; 2];
        let mut y = [[0.0; 2]; 2];
        for u in 0..2 {
            s_given[u][0] = self.baseline_s[u];
            s_given[u][1] = self.baseline_s[u] + self.s_effect[u];
            y[u][0] = self.baseline_y[u];
            y[u][1] = self.baseline_y[u] + deltas[u];
        }
        DgpBinaryU { p_u: self.p_u, p_t: 0.5, s_given, y_given: YGiven::Strong(y) }
            .validated()
            .ok()
    }

    /// The surrogate-to-outcome effect at a grid point is the mixture of
    /// the per-stratum effects.
    pub fn gamma_at(&self, delta0: f64, delta1: f64) -> f64 {
        (1.0 - self.p_u) * delta0 + self.p_u * delta1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionLabel {
    /// Some implied probability leaves [0,1]; no process exists there.
    OutOfDomain,
    /// The positive-premise region does not hold (surrogate uplift or
    /// surrogate effect not positive).
    OutsideTriangle,
    /// The paradox manifests: the treatment harms the outcome.
    ParadoxRegion,
    /// The threshold criterion certifies absence of the paradox from the
    /// observables alone.
    ExcludedByCriterion,
    /// No paradox, but the observables cannot exclude one.
    NoParadoxNotExcludable,
}

impl RegionLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionLabel::OutOfDomain => "out_of_domain",
            RegionLabel::OutsideTriangle => "outside_triangle",
            RegionLabel::ParadoxRegion => "paradox_region",
            RegionLabel::ExcludedByCriterion => "excluded_by_criterion",
            RegionLabel::NoParadoxNotExcludable => "no_paradox_not_excludable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionPoint {
    pub delta0: f64,
    pub delta1: f64,
    pub gamma: f64,
    pub ace_ty: Option<f64>,
    pub threshold: Option<f64>,
    pub region: RegionLabel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionGrid {
    pub resolution: usize,
    pub points: Vec<PartitionPoint>,
    /// Exclusion threshold evaluated at the centroid of the in-domain
    /// points: the single contour level a plot of the grid would draw.
    pub contour_level: Option<f64>,
}

/// Scans the (delta0, delta1) square on a `resolution x resolution` lattice
/// and labels each point by paradox status and criterion verdict. Points
/// are row-major in delta0 then delta1; evaluation is parallel but the
/// output is scheduling-independent.
pub fn partition_grid(config: &PartitionConfig, resolution: usize) -> PartitionGrid {
    assert!(resolution >= 2);
    let step = (config.delta_max - config.delta_min) / (resolution - 1) as f64;
    let coords: Vec<(f64, f64)> = (0..resolution * resolution)
        .map(|k| {
            let (i, j) = (k / resolution, k % resolution);
            (config.delta_min + step * i as f64, config.delta_min + step * j as f64)
        })
        .collect();
    let points: Vec<PartitionPoint> = coords
        .par_iter()
        .map(|&(delta0, delta1)| {
            let gamma = config.gamma_at(delta0, delta1);
            let Some(dgp) = config.dgp_at(delta0, delta1) else {
                return PartitionPoint {
                    delta0,
                    delta1,
                    gamma,
                    ace_ty: None,
                    threshold: None,
                    region: RegionLabel::OutOfDomain,
                };
            };
            let effects = evaluate_dgp(&dgp);
            let threshold = bounds::strong_threshold(&effects.observed);
            let inside = effects.ace_ts > 0.0 && gamma > 0.0;
            let region = if !inside {
                RegionLabel::OutsideTriangle
            } else if effects.ace_ty < 0.0 {
                RegionLabel::ParadoxRegion
            } else if gamma > threshold {
                RegionLabel::ExcludedByCriterion
            } else {
                RegionLabel::NoParadoxNotExcludable
            };
            PartitionPoint {
                delta0,
                delta1,
                gamma,
                ace_ty: Some(effects.ace_ty),
                threshold: Some(threshold),
                region,
            }
        })
        .collect();
    let in_domain: Vec<&PartitionPoint> =
        points.iter().filter(|p| p.region != RegionLabel::OutOfDomain).collect();
    let contour_level = if in_domain.is_empty() {
        None
    } else {
        let n = in_domain.len() as f64;
        let c0 = in_domain.iter().map(|p| p.delta0).sum::<f64>() / n;
        let c1 = in_domain.iter().map(|p| p.delta1).sum::<f64>() / n;
        config
            .dgp_at(c0, c1)
            .map(|dgp| bounds::strong_threshold(&evaluate_dgp(&dgp).observed))
    };
    PartitionGrid { resolution, points, contour_level }
}

impl PartitionGrid {
    /// CSV with columns delta0, delta1, gamma, ace_ty, region_label,
    /// threshold. Undefined values render as empty fields.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "delta0,delta1,gamma,ace_ty,region_label,threshold")?;
        for p in &self.points {
            let ace = p.ace_ty.map_or(String::new(), |v| format!("{v}"));
            let thr = p.threshold.map_or(String::new(), |v| format!("{v}"));
            writeln!(
                w,
                "{},{},{},{},{},{}",
                p.delta0,
                p.delta1,
                p.gamma,
                ace,
                p.region.as_str(),
                thr
            )?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Built-in worked examples.
// ---------------------------------------------------------------------------

/// Expected quantities for a registry entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedEffects {
    pub ace_ts: f64,
    pub gamma: f64,
    pub ace_ty: f64,
    pub threshold: f64,
    pub verdict: CriterionVerdict,
}

/// A named generating process with its reference expectations. Disputed
/// entries carry stated values that do not survive recomputation from the
/// process itself; consumers should report both rather than assert either.
#[derive(Debug, Clone, PartialEq)]
pub struct BuiltinExample {
    pub name: &'static str,
    pub dgp: DgpBinaryU,
    pub expected: ExpectedEffects,
    pub disputed: bool,
}

fn strong_dgp(p_u: f64, s: [[f64; 2]; 2], y: [[f64; 2]; 2]) -> DgpBinaryU {
    DgpBinaryU { p_u, p_t: 0.5, s_given: s, y_given: YGiven::Strong(y) }
}

/// The six worked processes used across the test suite and the CLI
/// self-check.
#[allow(clippy::approx_constant)] // 0.3010 is a reference effect value, not log10(2)
pub fn builtin_examples() -> Vec<BuiltinExample> {
    vec![
        // The classic antiarrhythmic-drug process: both premises positive,
        // yet the treatment harms the outcome, and the criterion correctly
        // refuses to exclude that.
        BuiltinExample {
            name: "antiarrhythmic",
            dgp: strong_dgp(
                0.7,
                [[0.98, 0.79], [0.02, 0.99]],
                [[0.00, 0.98], [0.98, 0.99]],
            ),
            expected: ExpectedEffects {
                ace_ts: 0.6220,
                gamma: 0.3010,
                ace_ty: -0.0491,
                threshold: 0.3720,
                verdict: CriterionVerdict::NotExcludable,
            },
            disputed: false,
        },
        // Surrogate effect big enough to clear the threshold: exclusion
        // certified from observables alone.
        BuiltinExample {
            name: "large-surrogate-effect",
            dgp: strong_dgp(
                0.3,
                [[0.28, 0.77], [0.32, 0.65]],
                [[0.13, 0.87], [0.33, 0.52]],
            ),
            expected: ExpectedEffects {
                ace_ts: 0.4420,
                gamma: 0.5750,
                ace_ty: 0.2726,
                threshold: 0.4864,
                verdict: CriterionVerdict::Excluded,
            },
            disputed: false,
        },
        // First of a pair sharing one observed law. The stated effect
        // values disagree with recomputation from the table (the process
        // yields gamma = 0.02 and an outcome effect of 0.068); flagged
        // disputed, stated values preserved for the record.
        BuiltinExample {
            name: "shared-law-benign",
            dgp: strong_dgp(
                0.5,
                [[0.70, 0.50], [0.50, 0.90]],
                [[0.60, 0.40], [0.40, 0.64]],
            ),
            expected: ExpectedEffects {
                ace_ts: 0.10,
                gamma: 0.20,
                ace_ty: 0.14,
                threshold: 0.60,
                verdict: CriterionVerdict::NotExcludable,
            },
            disputed: true,
        },
        // Second of the pair: same observables, same positive premises,
        // but the treatment harms the outcome.
        BuiltinExample {
            name: "shared-law-paradox",
            dgp: strong_dgp(
                0.5,
                [[0.70, 0.50], [0.50, 0.90]],
                [[0.20, 0.80], [0.28, 0.08]],
            ),
            expected: ExpectedEffects {
                ace_ts: 0.10,
                gamma: 0.20,
                ace_ty: -0.10,
                threshold: 0.60,
                verdict: CriterionVerdict::NotExcludable,
            },
            disputed: false,
        },
        // Exclusion holds although the surrogate response is not monotone
        // in the treatment within every stratum.
        BuiltinExample {
            name: "nonmonotone-surrogate",
            dgp: strong_dgp(
                0.5,
                [[0.40, 0.30], [0.10, 0.90]],
                [[0.10, 0.90], [0.10, 0.90]],
            ),
            expected: ExpectedEffects {
                ace_ts: 0.35,
                gamma: 0.8,
                ace_ty: 0.28,
                threshold: 0.625,
                verdict: CriterionVerdict::Excluded,
            },
            disputed: false,
        },
        // Exclusion holds although the arm-wise conditional outcome means
        // cross.
        BuiltinExample {
            name: "crossed-arm-means",
            dgp: strong_dgp(
                0.3,
                [[0.50, 0.90], [0.60, 0.80]],
                [[0.10, 0.80], [0.20, 0.90]],
            ),
            expected: ExpectedEffects {
                ace_ts: 0.34,
                gamma: 0.7,
                ace_ty: 0.238,
                threshold: 0.572,
                verdict: CriterionVerdict::Excluded,
            },
            disputed: false,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn antiarrhythmic() -> DgpBinaryU {
        builtin_examples()[0].dgp
    }

    #[test]
    fn antiarrhythmic_effects() {
        let e = evaluate_dgp(&antiarrhythmic());
        assert!((e.ace_ts - 0.6220).abs() < 1e-4);
        assert!((e.sy.treated_arm() - 0.3010).abs() < 1e-4);
        assert!((e.ace_ty - -0.0491).abs() < 1e-4);
        assert!((e.observed.p00 - 0.01972).abs() < 1e-12);
        assert!((e.observed.p10 - 0.67228).abs() < 1e-12);
        assert!((e.observed.p01 - 0.00602).abs() < 1e-12);
        assert!((e.observed.p11 - 0.30198).abs() < 1e-12);
        assert!((e.observed.s1_treated - 0.93).abs() < 1e-12);
        assert!((e.crr_ty.unwrap() - 0.9496).abs() < 1e-4);
        assert!((e.crr_sy.unwrap() - 1.4388).abs() < 1e-4);
        assert_eq!(classify_paradox(&e, GammaScale::Difference).unwrap(), ParadoxClass::ParadoxA);
        assert_eq!(classify_paradox(&e, GammaScale::RelativeRisk).unwrap(), ParadoxClass::ParadoxA);
    }

    #[test]
    fn large_effect_example_avoids_paradox() {
        let e = evaluate_dgp(&builtin_examples()[1].dgp);
        assert!((e.ace_ts - 0.4420).abs() < 1e-4);
        assert!((e.sy.treated_arm() - 0.5750).abs() < 1e-4);
        assert!((e.ace_ty - 0.2726).abs() < 1e-4);
        assert_eq!(classify_paradox(&e, GammaScale::Difference).unwrap(), ParadoxClass::None);
    }

    #[test]
    fn degenerate_confounder_gives_product_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let mut dgp = DgpBinaryU::sample_strong(&mut rng);
            dgp.p_u = if rng.gen::<bool>() { 1.0 } else { 0.0 };
            let e = evaluate_dgp(&dgp);
            assert!((e.ace_ty - e.ace_ts * e.sy.treated_arm()).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_effects_classify_as_none() {
        let e = TrueEffects {
            ace_ts: 0.1,
            sy: SurrogateEffect::Strong { gamma: 0.2 },
            ace_ty: 0.0,
            py_treated: 0.5,
            py_control: 0.5,
            crr_ts: Some(1.1),
            crr_sy: Some(1.2),
            crr_ty: Some(1.0),
            observed: ObservedLaw::new(0.25, 0.25, 0.25, 0.25, 0.5).unwrap(),
        };
        assert_eq!(classify_paradox(&e, GammaScale::Difference).unwrap(), ParadoxClass::None);
        assert_eq!(classify_paradox(&e, GammaScale::RelativeRisk).unwrap(), ParadoxClass::None);
    }

    #[test]
    fn witness_found_for_shared_law() {
        // Observables shared by the benign/paradox pair; the sharp minimum
        // of the outcome effect over compatible tables is -0.4.
        let law = ObservedLaw::new(0.3, 0.1, 0.3, 0.3, 0.7).unwrap();
        let witness = paradox_witness_search(&law, 0.2, GammaScale::Difference).unwrap().unwrap();
        assert!((witness.effect_ty - -0.4).abs() < 1e-9);
        let (wlaw, wgamma) = witness.qtable.observables();
        assert!((wlaw.p00 - 0.3).abs() < 1e-9);
        assert!((wlaw.p11 - 0.3).abs() < 1e-9);
        assert!((wlaw.s1_treated - 0.7).abs() < 1e-9);
        assert!((wgamma - 0.2).abs() < 1e-9);
        assert!(witness.qtable.ace_ty() < 0.0);
    }

    #[test]
    fn no_witness_when_excluded() {
        let law = ObservedLaw::new(0.57516, 0.13284, 0.07156, 0.22044, 0.734).unwrap();
        let found = paradox_witness_search(&law, 0.575, GammaScale::Difference).unwrap();
        assert!(found.is_none());
    }

    #[test]
    fn no_witness_at_the_boundary() {
        // At the threshold the minimum effect is exactly zero, which is not
        // a paradox.
        let law = ObservedLaw::new(0.3, 0.1, 0.3, 0.3, 0.7).unwrap();
        let found = paradox_witness_search(&law, 0.6, GammaScale::Difference).unwrap();
        assert!(found.is_none());
    }

    #[test]
    fn witness_premises_are_enforced() {
        let law = ObservedLaw::new(0.3, 0.1, 0.3, 0.3, 0.2).unwrap(); // surrogate uplift negative
        assert!(matches!(
            paradox_witness_search(&law, 0.2, GammaScale::Difference),
            Err(DgpError::PremiseViolated { .. })
        ));
        let law = ObservedLaw::new(0.3, 0.1, 0.3, 0.3, 0.7).unwrap();
        assert!(matches!(
            paradox_witness_search(&law, -0.1, GammaScale::Difference),
            Err(DgpError::PremiseViolated { .. })
        ));
    }

    #[test]
    fn crr_witness_for_antiarrhythmic() {
        let e = evaluate_dgp(&antiarrhythmic());
        let witness =
            paradox_witness_search(&e.observed, e.crr_sy.unwrap(), GammaScale::RelativeRisk)
                .unwrap()
                .unwrap();
        assert!(witness.effect_ty < 1.0);
        let (wlaw, _) = witness.qtable.observables();
        assert!((wlaw.p11 - e.observed.p11).abs() < 1e-9);
    }

    #[test]
    fn type_lift_reproduces_table_quantities() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..200 {
            let q = QTableStrong::sample(&mut rng);
            let lifted = TypeIndicatorDgp::from_qtable(&q).effects();
            let (law, gamma) = q.observables();
            assert!((lifted.ace_ty - q.ace_ty()).abs() < 1e-12);
            assert!((lifted.sy.treated_arm() - gamma).abs() < 1e-12);
            assert!((lifted.observed.p00 - law.p00).abs() < 1e-12);
            assert!((lifted.observed.s1_treated - law.s1_treated).abs() < 1e-12);
        }
    }

    #[test]
    fn partition_labels_are_coherent_at_low_resolution() {
        let grid = partition_grid(&PartitionConfig::default(), 41);
        assert_eq!(grid.points.len(), 41 * 41);
        assert!(grid.contour_level.is_some());
        for p in &grid.points {
            match p.region {
                RegionLabel::OutOfDomain => assert!(p.ace_ty.is_none()),
                RegionLabel::OutsideTriangle => assert!(p.gamma <= 0.0),
                RegionLabel::ParadoxRegion => {
                    assert!(p.gamma > 0.0);
                    assert!(p.ace_ty.unwrap() < 0.0);
                    // Sufficiency: a paradox point never clears the threshold.
                    assert!(p.gamma <= p.threshold.unwrap());
                }
                RegionLabel::ExcludedByCriterion => {
                    assert!(p.gamma > p.threshold.unwrap());
                    assert!(p.ace_ty.unwrap() >= 0.0);
                }
                RegionLabel::NoParadoxNotExcludable => {
                    assert!(p.ace_ty.unwrap() >= 0.0);
                }
            }
        }
        // The half-plane of nonpositive mixture effect sits outside the
        // triangle whenever the point is in-domain.
        for p in &grid.points {
            if p.delta0 + p.delta1 <= 0.0 && p.region != RegionLabel::OutOfDomain {
                assert_eq!(p.region, RegionLabel::OutsideTriangle);
            }
        }
    }

    #[test]
    fn partition_csv_shape() {
        let grid = partition_grid(&PartitionConfig::default(), 5);
        let mut buf = Vec::new();
        grid.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "delta0,delta1,gamma,ace_ty,region_label,threshold"
        );
        assert_eq!(lines.count(), 25);
    }

    #[test]
    fn registry_expectations_hold() {
        let examples = builtin_examples();
        assert!(examples.len() >= 6);
        for ex in &examples {
            let e = evaluate_dgp(&ex.dgp);
            let threshold = bounds::strong_threshold(&e.observed);
            assert!(
                (threshold - ex.expected.threshold).abs() < 1e-4,
                "{}: threshold {} vs expected {}",
                ex.name,
                threshold,
                ex.expected.threshold
            );
            if !ex.disputed {
                assert!((e.ace_ts - ex.expected.ace_ts).abs() < 1e-4, "{}: ace_ts", ex.name);
                assert!((e.sy.treated_arm() - ex.expected.gamma).abs() < 1e-4, "{}: gamma", ex.name);
                assert!((e.ace_ty - ex.expected.ace_ty).abs() < 1e-4, "{}: ace_ty", ex.name);
            }
        }
        // The disputed entry: recomputation from its table gives different
        // effect values than the stated ones.
        let disputed = &examples[2];
        assert!(disputed.disputed);
        let e = evaluate_dgp(&disputed.dgp);
        assert!((e.sy.treated_arm() - 0.02).abs() < 1e-12);
        assert!((e.ace_ty - 0.068).abs() < 1e-12);
    }
}
