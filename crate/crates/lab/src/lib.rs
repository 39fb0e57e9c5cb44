//! Std companion of `lrs-core`: sequence spec files, thread-pool drivers,
//! CSV reports, forge certificates and the `lrs-lab` command line.

pub mod certificate;
pub mod cli;
pub mod error;
pub mod parallel;
pub mod report;
pub mod specfile;

pub use error::{LabError, LabResult};
