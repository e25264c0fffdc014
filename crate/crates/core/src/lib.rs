//! Kernels, inequalities and solution operators of the Dirichlet Laplacian on power-weighted
//! Lᵖ spaces over the half-line and the unit interval.

pub mod cli_report;
pub mod error;
pub mod inequality_lab;
pub mod kernels;
pub mod operators;
pub mod pde_solvers;
pub mod quad;
pub mod report;
pub mod weighted_spaces;

pub use error::{LabError, Result};
