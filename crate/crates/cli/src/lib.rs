//! Command-line front end for `zchan`: code utilities, searches, two-stage
//! schemes and reports that recompute the published tables.

pub mod app;
pub mod cf;
pub mod published;
pub mod report;
pub mod reproduce;

pub use cf::{cf_best_size, cf_feedback_size};
pub use report::{Allowlist, ReproductionReport, Status};
