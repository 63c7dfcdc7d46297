//! Trial-data front end for the surrogate-bounds library: CSV ingestion,
//! empirical law estimation, bootstrap uncertainty regions and
//! machine-readable reports.

pub mod bootstrap;
pub mod ingest;
pub mod report;
pub mod synth;

pub use bootstrap::{
    bootstrap_region, BootstrapConfig, BootstrapError, BoundsModel, ExternalStudyCounts,
    GammaResampling, UncertaintyRegion,
};
pub use ingest::{law_from_counts, read_control_csv, read_treated_csv, ControlCounts, IngestError, TreatedCounts};
