//! Conic problems for the two convex steps and an ADMM solver for them.

mod admm;
mod build;
mod cholesky;
mod problem;

pub use admm::{psd_project, solve, solve_warm, SolveReport, SolveStatus, SolverConfig, FEASIBILITY_SLACK};
pub use build::{build_step1, build_step2};
pub use problem::{Constraint, Functional, Objective, SdpProblem};
