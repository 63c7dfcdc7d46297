//! Partial-identification toolkit for surrogate-endpoint trials.
//!
//! Given the control-arm joint law of (outcome, surrogate), the treated-arm
//! surrogate marginal, and external knowledge about the surrogate-to-outcome
//! effect, this crate computes sharp bounds on the treatment-to-outcome
//! causal effect, evaluates criteria that exclude the surrogate paradox, and
//! constructs witness data-generating processes when exclusion fails.
//!
//! Modules:
//! - [`law`]: domain types (observed laws, latent type tables, effect specs)
//!   and the linear algebra mapping latent tables to observables.
//! - [`bounds`]: closed-form sharp bounds and exclusion criteria on the
//!   difference scale, for strong and non-strong surrogates.
//! - [`lp`]: self-contained two-phase simplex, constraint-system builders,
//!   and the fractional-programming reduction used on the relative-risk scale.
//! - [`symbolic`]: re-derivation of the closed-form bound expressions by
//!   dual-polyhedron vertex enumeration.
//! - [`dgp`]: ground-truth oracle over fully specified binary-confounder
//!   data-generating processes, paradox classification, witness search, and
//!   the parameter-space partition grid.

pub mod bounds;
pub mod dgp;
pub mod law;
pub mod lp;
pub mod symbolic;

pub use bounds::{
    nonstrong_bounds, nonstrong_criterion, sign_positive_bounds, strong_bounds,
    strong_bounds_gamma_range, strong_criterion,
};
pub use law::{
    BoundsReport, CriterionVerdict, GammaForm, GammaScale, GammaSpec, IntervalEnd, LawError,
    NonStrongGammas, ObservedLaw, QTableNonStrong, QTableStrong,
};
