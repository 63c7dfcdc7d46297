//! Stable machine-readable report schema, versioned as `surrbound/1`.

use crate::bootstrap::UncertaintyRegion;
use serde::Serialize;
use surrbound::law::{BoundsReport, CriterionVerdict, GammaSpec};

pub const SCHEMA: &str = "surrbound/1";

#[derive(Debug, Serialize)]
pub struct ReportJson {
    pub schema: &'static str,
    pub command: &'static str,
    pub model: String,
    pub scale: String,
    pub gamma: Option<GammaSpec>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub active_lower_term: Option<usize>,
    pub active_upper_term: Option<usize>,
    pub verdict: Option<CriterionVerdict>,
    pub threshold: Option<f64>,
    pub uncertainty_region: Option<UncertaintyRegion>,
    pub skipped_replicates: Option<u32>,
}

impl ReportJson {
    pub fn new(command: &'static str, model: &str, scale: &str) -> Self {
        Self {
            schema: SCHEMA,
            command,
            model: model.to_string(),
            scale: scale.to_string(),
            gamma: None,
            lower: None,
            upper: None,
            active_lower_term: None,
            active_upper_term: None,
            verdict: None,
            threshold: None,
            uncertainty_region: None,
            skipped_replicates: None,
        }
    }

    pub fn with_bounds(mut self, report: &BoundsReport) -> Self {
        self.lower = Some(report.lower);
        self.upper = Some(report.upper);
        self.active_lower_term = report.active_lower_term;
        self.active_upper_term = report.active_upper_term;
        self.verdict = Some(report.criterion);
        self.threshold = Some(report.threshold);
        self
    }

    pub fn with_region(mut self, region: &UncertaintyRegion) -> Self {
        self.uncertainty_region = Some(*region);
        self.skipped_replicates = Some(region.skipped_replicates);
        self
    }
}

#[derive(Debug, Serialize)]
pub struct WitnessJson {
    pub schema: &'static str,
    pub command: &'static str,
    pub scale: String,
    pub found: bool,
    /// Outcome effect of the witness on the requested scale.
    pub effect: Option<f64>,
    /// Row-major 4x4 latent table attaining the adverse effect.
    pub qtable: Option<[[f64; 4]; 4]>,
}

#[derive(Debug, Serialize)]
pub struct DeriveJson {
    pub schema: &'static str,
    pub command: &'static str,
    pub system: String,
    pub direction: String,
    pub expressions: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct PartitionJson {
    pub schema: &'static str,
    pub command: &'static str,
    pub resolution: usize,
    pub out: String,
    pub contour_level: Option<f64>,
    pub region_counts: Vec<(String, usize)>,
}

#[derive(Debug, Serialize)]
pub struct ExamplesJson {
    pub schema: &'static str,
    pub command: &'static str,
    pub results: Vec<ExampleResult>,
    pub all_passed: bool,
}

#[derive(Debug, Serialize)]
pub struct ExampleResult {
    pub name: String,
    /// "pass", "fail", or "disputed" (evaluated, stated values not asserted).
    pub status: String,
    pub expected_gamma: f64,
    pub computed_gamma: f64,
    pub expected_ace_ty: f64,
    pub computed_ace_ty: f64,
    pub expected_threshold: f64,
    pub computed_threshold: f64,
    pub verdict: CriterionVerdict,
}
