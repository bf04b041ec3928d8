//! Command-line front end for trimmed ROC-curve comparison: data ingestion,
//! test and simulation drivers, and report shaping. The statistical engine
//! lives in `pauc-core`.

pub mod config;
pub mod dataset;
pub mod error;
pub mod presets;
pub mod report;
pub mod roc;
