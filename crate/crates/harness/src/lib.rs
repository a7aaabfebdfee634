//! Experiment harness for the semiclassical Hartree solver: configuration, sweeps, rate fits,
//! regime classification and CSV output.

pub mod classify;
pub mod config;
pub mod experiments;
pub mod fit;
pub mod output;
