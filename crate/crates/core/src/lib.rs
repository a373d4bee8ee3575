//! Reserve site selection: instances, formulations, branch-and-cut and heuristics.

pub mod bench;
pub mod error;
pub mod flow;
pub mod formulation;
pub mod graph;
pub mod heuristics;
pub mod instance;
pub mod io;
pub mod milp;
pub mod oracle;
pub mod render;
pub mod separation;
pub mod solution;
pub mod solver;

pub use error::{Error, Result};
