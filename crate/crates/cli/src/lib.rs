//! Command implementations, corpora and the aggregated verification report
//! behind the `toric` binary.

pub mod app;
pub mod commands;
pub mod corpus;
pub mod inputs;
pub mod verify;
