//! Two-stage transmission with one feedback: a first-stage word of length
//! `n1` selects a second-stage single-error code of length `n2`, and free
//! points of that code carry messages whose first stage was hit by an error.

mod graph;
mod optimize;
mod scheme;

pub use graph::{DegradationGraph, Direction};
pub use optimize::{build_symmetric, dp_optimize, dp_profile, general_optimize, DpResult, DEFAULT_MOVES, SymmetricProfile};
pub use scheme::{FailureCase, SchemeFile, TwoStageScheme, VerificationReport};
