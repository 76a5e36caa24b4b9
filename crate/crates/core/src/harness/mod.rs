//! Function catalog, experiment pipeline, demonstrations and reports.

mod catalog;
mod config;
mod experiment;
mod remarks;
mod report;

pub use catalog::{catalog, CATALOG_FORMS};
pub use config::{parse_flat_config, FlatConfig};
pub use experiment::{envelope, run_experiment, ExperimentConfig, ExperimentReport, GammaMode, ReportFormat, Verdict};
pub use remarks::{
    kappa_counterexample, twisted_prime_sum_check, twisted_prime_sum_grid, KappaCounterexample, TwistedPrimeSum,
};
pub use report::{emit_report, render, render_csv, render_json, render_svg, CSV_HEADER};
