//! Bianchi–Cartan–Vranceanu spaces `E³(κ, τ)` and their Lorentzian versions `L³(κ, τ)`.
//!
//! On `{δ_κ > 0}` with `δ_κ = 1 + κ(x² + y²)/4` the metric is
//! `(dx² + dy²)/δ² ± θ²` where `θ = τ(y dx − x dy)/δ + dz`.

use crate::error::{Error, Result};
use crate::Signature;

pub type Mat3 = [[f64; 3]; 3];
pub type Vec3 = [f64; 3];

/// Points with `δ` below this are treated as outside the space.
pub const DEFAULT_DELTA_MARGIN: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BcvParams {
    pub kappa: f64,
    pub tau: f64,
    pub signature: Signature,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BcvPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub fn delta(kappa: f64, x: f64, y: f64) -> f64 {
    1.0 + 0.25 * kappa * (x * x + y * y)
}

fn check_delta(kappa: f64, x: f64, y: f64) -> Result<f64> {
    let d = delta(kappa, x, y);
    if d > 0.0 {
        Ok(d)
    } else {
        Err(Error::Domain(format!("δ_κ = {d} ≤ 0 at ({x}, {y}) for κ = {kappa}")))
    }
}

/// `max |2/δ² − (∂x(x/δ) + ∂y(y/δ))|`, both sides in closed form.
///
/// The right side is expanded as `2/δ − κr²/(2δ²)`.
pub fn base_curvature_identity_residual(kappa: f64, points: &[(f64, f64)]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(x, y) in points {
        let d = check_delta(kappa, x, y)?;
        let lhs = 2.0 / (d * d);
        // ∂x(x/δ) = 1/δ − x·δ_x/δ² with δ_x = κx/2, likewise in y
        let dx = 1.0 / d - x * (0.5 * kappa * x) / (d * d);
        let dy = 1.0 / d - y * (0.5 * kappa * y) / (d * d);
        worst = worst.max((lhs - (dx + dy)).abs());
    }
    Ok(worst)
}

/// Metric tensor in `(x, y, z)` coordinates and the orthonormal frame
/// `E₁ = δ∂x − τy∂z`, `E₂ = δ∂y + τx∂z`, `E₃ = ∂z`.
pub fn frames_and_metric(params: &BcvParams, p: &BcvPoint) -> Result<(Mat3, [Vec3; 3])> {
    let d = check_delta(params.kappa, p.x, p.y)?;
    let s = params.signature.sign();
    let t = params.tau;
    let theta = [t * p.y / d, -t * p.x / d, 1.0];
    let mut g = [[0.0; 3]; 3];
    for (a, row) in g.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            let flat = if a == b && a < 2 { 1.0 / (d * d) } else { 0.0 };
            *v = flat + s * theta[a] * theta[b];
        }
    }
    let frame = [[d, 0.0, -t * p.y], [0.0, d, t * p.x], [0.0, 0.0, 1.0]];
    Ok((g, frame))
}

/// `G_ab = ⟨E_a, E_b⟩` under `metric`.
pub fn gram(metric: &Mat3, frame: &[Vec3; 3]) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s += frame[a][i] * metric[i][j] * frame[b][j];
                }
            }
            out[a][b] = s;
        }
    }
    out
}

/// Largest entry of `|gram − diag(1, 1, ε)|`.
pub fn frame_orthonormality_error(params: &BcvParams, p: &BcvPoint) -> Result<f64> {
    let (g, e) = frames_and_metric(params, p)?;
    let gm = gram(&g, &e);
    let target = [1.0, 1.0, params.signature.sign()];
    let mut worst = 0.0f64;
    for a in 0..3 {
        for b in 0..3 {
            let want = if a == b { target[a] } else { 0.0 };
            worst = worst.max((gm[a][b] - want).abs());
        }
    }
    Ok(worst)
}

/// Predicate for mask building: `δ_κ ≥ margin` (always true for κ ≥ 0).
pub fn admissible(kappa: f64, margin: f64) -> impl Fn(f64, f64) -> bool {
    move |x, y| delta(kappa, x, y) >= margin
}
