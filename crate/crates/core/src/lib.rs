//! Wave-loss classifiers and the evaluation harness around them.
//!
//! The crate provides the wave loss and a set of baseline margin losses,
//! an Adam-trained Wave-SVM (linear and kernel), a fixed-point Wave-TSVM
//! (linear and kernel), dataset utilities and the statistics used to compare
//! models across benchmark collections.

pub mod cli;
pub mod data;
pub mod error;
pub mod eval;
pub mod kernels;
pub mod losses;
pub mod model;
pub mod wavesvm;
pub mod wavetsvm;

pub use error::{Error, ErrorClass, Result};
