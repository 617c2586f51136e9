//! Conformal parametrisations of two Nil examples, checked by sampling.

use std::sync::Arc;

use crate::bcv::{frames_and_metric, BcvParams, BcvPoint};
use crate::error::Result;
use crate::numerics::{gradient, Bounds, Grid2D, ResidualReport, ScalarField, VectorField2};
use crate::Signature;

use super::nil_saddle;
use super::ode::{integrate_radial_ode, NilCatenoidProfile, RadialLaw, RadialOdeSpec};

/// Induced metric `(E, F, G)` of a sampled immersion `(u, v) ↦ X` into `E³(κ, τ)`.
pub fn induced_metric(x: &[ScalarField; 3], params: &BcvParams) -> Result<[ScalarField; 3]> {
    let g = x[0].grid().clone();
    let d: Vec<VectorField2> = x.iter().map(gradient).collect::<Result<_>>()?;
    let mut out = [vec![0.0; g.len()], vec![0.0; g.len()], vec![0.0; g.len()]];
    for k in g.masked_indices() {
        let p = BcvPoint { x: x[0].at(k), y: x[1].at(k), z: x[2].at(k) };
        let (m, _) = frames_and_metric(params, &p)?;
        let xu = [d[0].v1.at(k), d[1].v1.at(k), d[2].v1.at(k)];
        let xv = [d[0].v2.at(k), d[1].v2.at(k), d[2].v2.at(k)];
        let form = |a: &[f64; 3], b: &[f64; 3]| (0..3).map(|i| (0..3).map(|j| a[i] * m[i][j] * b[j]).sum::<f64>()).sum::<f64>();
        out[0][k] = form(&xu, &xu);
        out[1][k] = form(&xu, &xv);
        out[2][k] = form(&xv, &xv);
    }
    let [e, f, gg] = out;
    Ok([ScalarField::from_values(&g, e)?, ScalarField::from_values(&g, f)?, ScalarField::from_values(&g, gg)?])
}

/// `X^θ(u, v) = (cosh θ·u + sinh θ·cosh v, sinh v, (cosh θ/2)u sinh v − (sinh θ/2)v)`.
pub fn nil_saddle_chart(theta: f64, u: f64, v: f64) -> [f64; 3] {
    let (c, s) = (theta.cosh(), theta.sinh());
    [c * u + s * v.cosh(), v.sinh(), 0.5 * c * u * v.sinh() - 0.5 * s * v]
}

/// `max(|E − λ|, |F|, |G − λ|)` against `λ = cosh²θ cosh²v` on an `n × n` grid over `[−1, 1]²`.
pub fn nil_saddle_chart_residual(theta: f64, n: usize) -> Result<ResidualReport> {
    let g = Arc::new(Grid2D::new(n, n, Bounds::square(1.0))?);
    let x = [0, 1, 2].map(|c| ScalarField::from_fn(&g, |u, v| nil_saddle_chart(theta, u, v)[c]));
    let params = BcvParams { kappa: 0.0, tau: 0.5, signature: Signature::Riemannian };
    let [e, f, gg] = induced_metric(&x, &params)?;
    let res = ScalarField::generate(&g, |k| {
        let v = g.coords(k).1;
        let lambda = (theta.cosh() * v.cosh()).powi(2);
        (e.at(k) - lambda).abs().max(f.at(k).abs()).max((gg.at(k) - lambda).abs())
    });
    Ok(ResidualReport::of(&res))
}

/// `max |f^θ(x+a, y) − f^θ(x, y) − ½ay|` over the given samples.
pub fn nil_saddle_translation_defect(theta: f64, samples: &[(f64, f64, f64)]) -> f64 {
    samples
        .iter()
        .map(|&(x, y, a)| (nil_saddle(theta, x + a, y) - nil_saddle(theta, x, y) - 0.5 * a * y).abs())
        .fold(0.0, f64::max)
}

/// `max(|E − G|, |F|)/((E + G)/2)` for the rotational chart
/// `X(u, θ) = (λ cosh w cos(θ+τλu), λ cosh w sin(θ+τλu), λρ(w))` with
/// `w' = √(τ²λ²cosh²w + 1)`, `w(0) = w0`, over `u ∈ [0, 1]`, `θ ∈ [0, π]`.
pub fn nil_catenoid_chart_residual(lambda: f64, tau: f64, w0: f64, n: usize) -> Result<ResidualReport> {
    let w = integrate_radial_ode(&RadialOdeSpec {
        law: RadialLaw::CatenoidChart { lambda, tau },
        t0: 0.0,
        t1: 1.0,
        y0: vec![w0],
        steps: 4000,
    })?;
    let w_max = w.component(1.0, 0)?;
    let prof = NilCatenoidProfile::new(lambda, tau, lambda * (w_max.cosh() + 1e-9), 4000)?;
    let g = Arc::new(Grid2D::new(n, n, Bounds::new(0.0, 1.0, 0.0, std::f64::consts::PI))?);
    let mut x = [vec![0.0; g.len()], vec![0.0; g.len()], vec![0.0; g.len()]];
    for k in g.masked_indices() {
        let (u, th) = g.coords(k);
        let wk = w.component(u, 0)?;
        let r = lambda * wk.cosh();
        let phi = th + tau * lambda * u;
        x[0][k] = r * phi.cos();
        x[1][k] = r * phi.sin();
        x[2][k] = lambda * prof.rho_of_v(wk)?;
    }
    let [a, b, c] = x;
    let x = [ScalarField::from_values(&g, a)?, ScalarField::from_values(&g, b)?, ScalarField::from_values(&g, c)?];
    let params = BcvParams { kappa: 0.0, tau, signature: Signature::Riemannian };
    let [e, f, gg] = induced_metric(&x, &params)?;
    let res = ScalarField::generate(&g, |k| {
        let scale = 0.5 * (e.at(k) + gg.at(k));
        (e.at(k) - gg.at(k)).abs().max(f.at(k).abs()) / scale
    });
    Ok(ResidualReport::of(&res))
}
