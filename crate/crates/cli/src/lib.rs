//! Experiment runner behind the `apdi` binary: run configuration and
//! manifests, artifact files, and the paired DI / AP analysis.

pub mod analysis;
pub mod artifacts;
pub mod config;
pub mod runner;
