//! Nonparametric partial-AUC inference for multi-marker diagnostic trials.
//!
//! The crate estimates trimmed ROC-area functionals for several markers
//! measured on the same subjects, derives the joint large-sample covariance
//! of the estimates, and runs studentized-bootstrap maximum contrast tests
//! with simultaneous confidence intervals. A simulation engine with Gaussian
//! copula data generation supports operating-characteristic studies.

pub mod contrasts;
pub mod covariance;
pub mod empdist;
pub mod error;
pub mod estimator;
pub mod inference;
pub mod simulation;

pub use error::CoreError;
