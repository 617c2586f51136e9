//! Discrete calculus on masked rectangular grids.

mod field;
mod grid;
mod potential;
mod report;
mod stencil;

pub use field::{ScalarField, VectorField2};
pub use grid::{check_simply_connected, Bounds, Grid2D, MaskSpec};
pub use potential::{default_curl_tol, integrate_potential, integrate_potential_with, path_discrepancy, Potential};
pub use report::ResidualReport;
pub use stencil::{curl_residual, d_dx, d_dy, divergence, gradient, hessian, hessian_from_gradient, Hessian};

#[cfg(test)]
mod proptests;
