//! Configuration parsing and report emission for the `qjump` binary, exposed
//! as a library so the integration and acceptance suites can drive the same
//! code paths.

pub mod config;
pub mod report;
