//! Codes correcting a single asymmetric error on the Z-channel.
//!
//! The crate covers the whole pipeline: exact metrics and validation
//! ([`zcore`]), constant-weight code bounds ([`cwbounds`]), the
//! weight-distribution upper bound on free points ([`lpbound`]), searches for
//! codes with the most free points ([`fsearch`]) and two-stage transmission
//! schemes that use one round of feedback ([`twostage`]).

pub mod budget;
mod clique;
pub mod combin;
pub mod cwbounds;
pub mod error;
pub mod fsearch;
pub mod lpbound;
pub mod twostage;
pub mod zcore;

pub use budget::Budget;
pub use error::{Error, Result};
pub use zcore::{Code, Word, WeightDistribution};
