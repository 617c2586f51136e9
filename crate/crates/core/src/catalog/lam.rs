//! Flat graphs: the Hessian-zero equation and its divergence form.
//!
//! With `D = 1 + f_x² + f_y²` and fluxes
//! `P = (f_yy f_x − f_xy f_y)/(2D)`, `Q = (f_xx f_y − f_xy f_x)/(2D)`,
//! one has `∂x P + ∂y Q = (f_xx f_yy − f_xy²)/D²` identically, so the flat
//! graphs are those for which `(−Q, P)` is closed.

use crate::error::{Error, Result};
use crate::numerics::{divergence, gradient, hessian_from_gradient, integrate_potential_with, ResidualReport, ScalarField, VectorField2};

/// `(f_xx f_yy − f_xy²)/D²` and `∂x P + ∂y Q`, both from stencils.
#[derive(Clone, Debug)]
pub struct LamForms {
    pub hessian_form: ScalarField,
    pub divergence_form: ScalarField,
    pub fluxes: VectorField2,
}

impl LamForms {
    pub fn identity_report(&self) -> Result<ResidualReport> {
        Ok(ResidualReport::of(&self.hessian_form.sub(&self.divergence_form)?.abs()))
    }
}

pub fn hessian_zero_residuals(f: &ScalarField) -> Result<LamForms> {
    let g = f.grid().clone();
    let grad = gradient(f)?;
    let hs = hessian_from_gradient(&grad)?;
    let d = ScalarField::generate(&g, |k| 1.0 + grad.v1.at(k).powi(2) + grad.v2.at(k).powi(2));
    let hessian_form = ScalarField::generate(&g, |k| {
        (hs.fxx.at(k) * hs.fyy.at(k) - hs.fxy.at(k).powi(2)) / d.at(k).powi(2)
    });
    let fluxes = VectorField2 {
        v1: ScalarField::generate(&g, |k| {
            (hs.fyy.at(k) * grad.v1.at(k) - hs.fxy.at(k) * grad.v2.at(k)) / (2.0 * d.at(k))
        }),
        v2: ScalarField::generate(&g, |k| {
            (hs.fxx.at(k) * grad.v2.at(k) - hs.fxy.at(k) * grad.v1.at(k)) / (2.0 * d.at(k))
        }),
    };
    let divergence_form = divergence(&fluxes)?;
    Ok(LamForms { hessian_form, divergence_form, fluxes })
}

/// Potential of `(−Q, P)` anchored at zero; fails unless `f` is flat.
pub fn hessian_zero_potential(f: &ScalarField, curl_tol: Option<f64>) -> Result<ScalarField> {
    let forms = hessian_zero_residuals(f)?;
    let field = VectorField2 { v1: forms.fluxes.v2.scale(-1.0), v2: forms.fluxes.v1.clone() };
    match integrate_potential_with(&field, curl_tol) {
        Ok(p) => Ok(p.phi),
        Err(Error::NotAGradient { report, tol, .. }) => Err(Error::NotAGradient {
            context: "input is not flat".into(),
            report,
            tol,
        }),
        Err(e) => Err(e),
    }
}
