pub mod error;
pub mod linalg;
pub mod mumford;
pub mod graph;
pub mod padic;
pub mod regulators;
pub mod report;
pub mod symbols;
pub mod weight;
