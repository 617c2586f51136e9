//! Twin correspondences between constant mean curvature graphs.
//!
//! A CMC graph over a planar domain in a Bianchi–Cartan–Vranceanu space
//! `E(κ, τ)` has a spacelike twin in the Lorentzian space `L(κ, τ')`, and a
//! minimal graph of codimension `n` in `R^{n+2}` with area-decreasing Gauss
//! map has a maximal twin in `R^{n+2}_n`. Everything here works on sampled
//! data: fields live on a masked rectangular grid, derivatives come from
//! second-order stencils, and the twin is obtained by integrating a closed
//! 1-form whose closedness is itself the PDE being checked.
//!
//! * [`numerics`] – grids, masks, stencils, potentials, residual reports.
//! * [`bcv`] – the ambient spaces: conformal factor, metric, frames.
//! * [`twin1`] – the codimension-one correspondence for `CMC_(κ,τ,H,ε)`.
//! * [`twin2`] – the higher-codimension correspondence.
//! * [`conformal`] – the shared conformal chart and Weierstrass data.
//! * [`catalog`] – closed-form and ODE examples, regression, mesh export.
//! * [`io`] – CSV readers/writers used by the command-line tool.

pub mod bcv;
pub mod catalog;
pub mod cli;
pub mod conformal;
pub mod error;
pub mod io;
pub mod numerics;
pub mod twin1;
pub mod twin2;

pub use error::{Axis, Error, Result};
pub use numerics::{Bounds, Grid2D, MaskSpec, ResidualReport, ScalarField, VectorField2};

/// Metric signature of a graph's ambient space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Signature {
    /// `ε = +1`
    Riemannian,
    /// `ε = −1`
    Lorentzian,
}

impl Signature {
    pub fn sign(self) -> f64 {
        match self {
            Signature::Riemannian => 1.0,
            Signature::Lorentzian => -1.0,
        }
    }

    pub fn from_sign(eps: f64) -> Result<Self> {
        if eps == 1.0 {
            Ok(Signature::Riemannian)
        } else if eps == -1.0 {
            Ok(Signature::Lorentzian)
        } else {
            Err(Error::Parse(format!("epsilon must be +1 or -1, got {eps}")))
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Signature::Riemannian => Signature::Lorentzian,
            Signature::Lorentzian => Signature::Riemannian,
        }
    }
}
