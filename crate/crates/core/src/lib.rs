//! Exact list regression on finite hypothesis classes.

pub mod compression;
pub mod dimensions;
pub mod error;
pub mod harness;
pub mod learner;
pub mod model;
pub mod oig;

pub use error::{Error, Result};
