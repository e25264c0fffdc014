//! Solution operators of the Dirichlet Laplacian on the half-line: the heat semigroup for
//! complex times, resolvents, the H∞ calculus and a spectral reference solver.

mod hinf;
mod norm_est;
mod odd_ext;
mod resolvent;
mod semigroup;

pub use hinf::{
    apply_hinf_symbol, apply_hinf_symbol_detailed, ContourDiagnostics, HinfEngine, HolomorphicSymbol, SectorContour, SymbolFn,
    DEFAULT_CONTOUR_NODES, DEFAULT_R_MAX,
};
pub use norm_est::{operator_norm_estimate, DenseOperator, LinearOperator, NormEstimate, PROBE_SEED_BASE};
pub use odd_ext::{odd_extension, odd_extension_solve, OddExtension, FFT_POINTS};
pub use resolvent::{apply_resolvent, rotation_for, RayCache, DEFAULT_LAPLACE_NODES};
pub use semigroup::{apply_semigroup, ProductLayout};

use std::sync::Arc;

use crate::error::Result;
use crate::kernels::ComplexTime;
use crate::weighted_spaces::{Geometry, GradedGrid};

/// Dense matrix of T(z) on a half-line grid.
pub fn semigroup_matrix(grid: &Arc<GradedGrid>, z: ComplexTime) -> Result<DenseOperator> {
    if grid.geometry != Geometry::HalfLine {
        return crate::error::arg_err("the half-line semigroup needs a half-line grid");
    }
    let layout = ProductLayout::new(grid);
    DenseOperator::new(grid.n, layout.matrix(z))
}
