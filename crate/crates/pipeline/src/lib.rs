//! Batch orchestration for building the matting/harmonization dataset:
//! corpus preparation, triplet synthesis, splitting, test-time compositing
//! and evaluation reports. Every per-record step is pure and keyed by its own
//! RNG stream, so outputs do not depend on worker count or scheduling.

pub mod composite;
pub mod config;
mod error;
pub mod eval;
pub mod losses;
pub mod manifest;
pub mod prepare;
pub mod report;
pub mod split;
pub mod triplets;

pub use config::{Config, Overrides};
pub use error::{Error, Result};
