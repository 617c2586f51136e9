//! Codimension-one twins: CMC graphs in `E³(κ,τ)` against spacelike CMC graphs
//! in the Lorentzian family.
//!
//! A height function `f` belongs to `CMC_(κ,τ,H,ε)` when
//!
//! ```text
//! ∂x(α/ω) + ∂y(β/ω) = 2H/δ²,   (α, β) = (f_x + τy/δ, f_y − τx/δ),
//! ω² = 1 + ε δ²(α² + β²).
//! ```
//!
//! For `ε = +1` the 1-form `W = (−β/ω + Hy/δ, α/ω − Hx/δ)` is closed exactly
//! when `f` solves the equation (because `∂x(x/δ) + ∂y(y/δ) = 2/δ²`), and its
//! potential solves `CMC_(κ,−H,τ,−1)`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::bcv;
use crate::error::{Error, Result};
use crate::numerics::{divergence, gradient, integrate_potential_with, ResidualReport, ScalarField, VectorField2};
use crate::Signature;

/// Default floor for `1 − δ²(α̃² + β̃²)` on a constructed twin.
pub const LIGHTLIKE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CmcParams {
    pub kappa: f64,
    pub tau: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub epsilon: Signature,
}

impl CmcParams {
    pub fn new(kappa: f64, tau: f64, h: f64, epsilon: Signature) -> Self {
        CmcParams { kappa, tau, h, epsilon }
    }

    pub fn minimal_r3() -> Self {
        CmcParams::new(0.0, 0.0, 0.0, Signature::Riemannian)
    }

    pub fn maximal_l3() -> Self {
        CmcParams::new(0.0, 0.0, 0.0, Signature::Lorentzian)
    }

    /// Parameters of the twin equation (negation written as `0 − x` to avoid `−0`):
    /// `(κ,τ,H,+1) ↦ (κ,−H,τ,−1)` and `(κ,τ,H,−1) ↦ (κ,H,−τ,+1)`.
    pub fn twin(&self) -> CmcParams {
        match self.epsilon {
            Signature::Riemannian => CmcParams::new(self.kappa, 0.0 - self.h, self.tau, Signature::Lorentzian),
            Signature::Lorentzian => CmcParams::new(self.kappa, self.h, 0.0 - self.tau, Signature::Riemannian),
        }
    }
}

/// A height field with the quantities entering its equation.
#[derive(Clone, Debug)]
pub struct GraphData {
    pub f: ScalarField,
    pub params: CmcParams,
    pub grad: VectorField2,
    pub alpha: ScalarField,
    pub beta: ScalarField,
    /// `1 + ε δ²(α² + β²)`
    pub omega_sq: ScalarField,
    pub omega: ScalarField,
    pub delta: ScalarField,
}

impl GraphData {
    /// Derives `α, β, ω, δ`; a Lorentzian graph must be spacelike everywhere.
    pub fn new(f: ScalarField, params: CmcParams) -> Result<Self> {
        let grad = gradient(&f)?;
        Self::from_gradient(f, grad, params)
    }

    pub fn from_gradient(f: ScalarField, grad: VectorField2, params: CmcParams) -> Result<Self> {
        let data = Self::unchecked(f, grad, params)?;
        if params.epsilon == Signature::Lorentzian {
            let bad: Vec<usize> = data
                .f
                .grid()
                .masked_indices()
                .filter(|&k| !(data.omega_sq.at(k) > 0.0))
                .collect();
            if !bad.is_empty() {
                return Err(Error::SpacelikeViolation {
                    nodes: bad,
                    min_margin: data.omega_sq.min(),
                });
            }
        }
        Ok(data)
    }

    fn unchecked(f: ScalarField, grad: VectorField2, params: CmcParams) -> Result<Self> {
        let g = f.grid().clone();
        let delta = ScalarField::from_fn(&g, |x, y| bcv::delta(params.kappa, x, y));
        if let Some(k) = g.masked_indices().find(|&k| !(delta.at(k) > 0.0)) {
            let (x, y) = g.coords(k);
            return Err(Error::Domain(format!("δ_κ ≤ 0 at ({x}, {y})")));
        }
        let t = params.tau;
        let alpha = ScalarField::generate(&g, |k| grad.v1.at(k) + t * g.coords(k).1 / delta.at(k));
        let beta = ScalarField::generate(&g, |k| grad.v2.at(k) - t * g.coords(k).0 / delta.at(k));
        let eps = params.epsilon.sign();
        let omega_sq = ScalarField::generate(&g, |k| {
            let d = delta.at(k);
            1.0 + eps * d * d * (alpha.at(k).powi(2) + beta.at(k).powi(2))
        });
        let omega = omega_sq.map(f64::sqrt);
        Ok(GraphData { f, params, grad, alpha, beta, omega_sq, omega, delta })
    }

    pub fn grid(&self) -> &Arc<crate::Grid2D> {
        self.f.grid()
    }
}

/// `∂x(α/ω) + ∂y(β/ω) − 2H/δ²` with stencil divergence.
pub fn cmc_residual(data: &GraphData) -> Result<ScalarField> {
    let g = data.grid();
    let flux = VectorField2 {
        v1: ScalarField::generate(g, |k| data.alpha.at(k) / data.omega.at(k)),
        v2: ScalarField::generate(g, |k| data.beta.at(k) / data.omega.at(k)),
    };
    let h2 = 2.0 * data.params.h;
    divergence(&flux)?.zip_with(&data.delta, |div, d| div - h2 / (d * d))
}

#[derive(Clone, Debug)]
pub struct TwinResult {
    /// The twin height, zero at the anchor.
    pub g: ScalarField,
    /// Derived data of the twin under the twin parameters, with the
    /// integrated field as its gradient.
    pub twin: GraphData,
    pub curl_report: ResidualReport,
    pub curl_tol: f64,
    /// Equation residual of `g` from its own stencil gradient.
    pub dual_pde_report: ResidualReport,
    /// Minimum of `1 − δ²(α̃² + β̃²)` on the Lorentzian side.
    pub spacelike_margin: f64,
    pub path_discrepancy: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct TwinOptions {
    /// `None` selects `10·h²·(1 + max|W|)`.
    pub curl_tol: Option<f64>,
    pub lightlike_tol: f64,
}

impl Default for TwinOptions {
    fn default() -> Self {
        TwinOptions { curl_tol: None, lightlike_tol: LIGHTLIKE_TOL }
    }
}

fn tag(e: Error, context: &str) -> Error {
    match e {
        Error::NotAGradient { report, tol, .. } => Error::NotAGradient { context: context.into(), report, tol },
        other => other,
    }
}

/// Equation residual of the twin height itself, differenced afresh.
fn dual_report(g: &ScalarField, params: CmcParams) -> Result<ResidualReport> {
    let data = GraphData::unchecked(g.clone(), gradient(g)?, params)?;
    Ok(ResidualReport::of(&cmc_residual(&data)?))
}

pub fn twin_transform(data: &GraphData) -> Result<TwinResult> {
    twin_transform_with(data, &TwinOptions::default())
}

/// Integrates `W = (−β/ω + Hy/δ, α/ω − Hx/δ)` for a Riemannian graph.
pub fn twin_transform_with(data: &GraphData, opts: &TwinOptions) -> Result<TwinResult> {
    if data.params.epsilon != Signature::Riemannian {
        return Err(Error::WrongSignature("twin_transform expects ε = +1; use inverse_twin_transform".into()));
    }
    let grid = data.grid();
    let hh = data.params.h;
    let w = VectorField2 {
        v1: ScalarField::generate(grid, |k| {
            -data.beta.at(k) / data.omega.at(k) + hh * grid.coords(k).1 / data.delta.at(k)
        }),
        v2: ScalarField::generate(grid, |k| {
            data.alpha.at(k) / data.omega.at(k) - hh * grid.coords(k).0 / data.delta.at(k)
        }),
    };
    let pot = integrate_potential_with(&w, opts.curl_tol).map_err(|e| tag(e, "input is not a CMC solution"))?;
    // W is the twin's gradient; re-differencing the potential would amplify
    // the path-dependent part of the quadrature error
    let twin = GraphData::unchecked(pot.phi.clone(), w, data.params.twin())?;
    let margin = twin.omega_sq.min();
    if !(margin >= opts.lightlike_tol) {
        return Err(Error::LightlikeDegeneracy {
            min_margin: margin,
            guard: opts.lightlike_tol,
            margin: twin.omega_sq.values().to_vec(),
        });
    }
    let dual = dual_report(&pot.phi, twin.params)?;
    Ok(TwinResult {
        g: pot.phi,
        twin,
        curl_report: pot.curl,
        curl_tol: pot.curl_tol,
        dual_pde_report: dual,
        spacelike_margin: margin,
        path_discrepancy: pot.path_discrepancy,
    })
}

pub fn inverse_twin_transform(data: &GraphData) -> Result<TwinResult> {
    inverse_twin_transform_with(data, &TwinOptions::default())
}

/// Integrates `(β̃/ω̃ − τy/δ, −α̃/ω̃ + τx/δ)` for a spacelike Lorentzian graph,
/// where `τ` is the target's bundle curvature (the input's `H`).
pub fn inverse_twin_transform_with(data: &GraphData, opts: &TwinOptions) -> Result<TwinResult> {
    if data.params.epsilon != Signature::Lorentzian {
        return Err(Error::WrongSignature("inverse_twin_transform expects ε = −1".into()));
    }
    let margin = data.omega_sq.min();
    if !(margin >= opts.lightlike_tol) {
        return Err(Error::LightlikeDegeneracy {
            min_margin: margin,
            guard: opts.lightlike_tol,
            margin: data.omega_sq.values().to_vec(),
        });
    }
    let grid = data.grid();
    let target = data.params.twin();
    let t = target.tau;
    let w = VectorField2 {
        v1: ScalarField::generate(grid, |k| {
            data.beta.at(k) / data.omega.at(k) - t * grid.coords(k).1 / data.delta.at(k)
        }),
        v2: ScalarField::generate(grid, |k| {
            -data.alpha.at(k) / data.omega.at(k) + t * grid.coords(k).0 / data.delta.at(k)
        }),
    };
    let pot = integrate_potential_with(&w, opts.curl_tol).map_err(|e| tag(e, "input is not a spacelike CMC solution"))?;
    let twin = GraphData::from_gradient(pot.phi.clone(), w, target)?;
    let dual = dual_report(&pot.phi, twin.params)?;
    Ok(TwinResult {
        g: pot.phi,
        twin,
        curl_report: pot.curl,
        curl_tol: pot.curl_tol,
        dual_pde_report: dual,
        spacelike_margin: margin,
        path_discrepancy: pot.path_discrepancy,
    })
}

/// Applies the correspondence twice and compares with the input, both
/// normalised to vanish at the anchor.
pub fn involutivity_check(data: &GraphData) -> Result<ResidualReport> {
    let back = match data.params.epsilon {
        Signature::Riemannian => inverse_twin_transform(&twin_transform(data)?.twin)?,
        Signature::Lorentzian => twin_transform(&inverse_twin_transform(data)?.twin)?,
    };
    Ok(ResidualReport::of(&back.g.sub(&data.f.anchored())?))
}

/// First fundamental form `[[1/δ² + εα², εαβ], [εαβ, 1/δ² + εβ²]]` per node.
pub fn first_fundamental_form(data: &GraphData, k: usize) -> [[f64; 2]; 2] {
    let eps = data.params.epsilon.sign();
    let (a, b, d) = (data.alpha.at(k), data.beta.at(k), data.delta.at(k));
    let flat = 1.0 / (d * d);
    [[flat + eps * a * a, eps * a * b], [eps * a * b, flat + eps * b * b]]
}

/// Entrywise `max |I* − I/ω²|` where `I` belongs to the Riemannian graph and
/// `I*` to its Lorentzian twin.
pub fn conformal_factor_check(data: &GraphData, twin: &TwinResult) -> Result<ResidualReport> {
    let (riem, lor) = order_pair(data, &twin.twin)?;
    let g = riem.grid();
    let field = ScalarField::generate(g, |k| {
        let i = first_fundamental_form(riem, k);
        let j = first_fundamental_form(lor, k);
        let u2 = 1.0 / riem.omega_sq.at(k);
        let mut worst = 0.0f64;
        for a in 0..2 {
            for b in 0..2 {
                worst = worst.max((j[a][b] - u2 * i[a][b]).abs());
            }
        }
        worst
    });
    Ok(ResidualReport::of(&field))
}

/// Complex test directions `(p, q)` for the quadratic-form cross-check.
pub const TEST_DIRECTIONS: [(Complex64, Complex64); 3] = [
    (Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)),
    (Complex64::new(1.0, 0.0), Complex64::new(2.0, 1.0)),
    (Complex64::new(0.3, -1.0), Complex64::new(1.0, 0.0)),
];

/// Compares `⟨G_ζ, G_ζ⟩` with `⟨F_ζ, F_ζ⟩/ω²` for complex tangent vectors,
/// evaluating each through its orthonormal-frame components
/// `(p/δ, q/δ, αp + βq)`.
pub fn complexified_form_residual(data: &GraphData, twin: &TwinResult) -> Result<ResidualReport> {
    let (riem, lor) = order_pair(data, &twin.twin)?;
    let g = riem.grid();
    let field = ScalarField::generate(g, |k| {
        let frame = |d: &GraphData, p: Complex64, q: Complex64| {
            let del = d.delta.at(k);
            let c = p * d.alpha.at(k) + q * d.beta.at(k);
            (p / del, q / del, c)
        };
        TEST_DIRECTIONS
            .iter()
            .map(|&(p, q)| {
                let (a1, a2, a3) = frame(riem, p, q);
                let (b1, b2, b3) = frame(lor, p, q);
                let qf = a1 * a1 + a2 * a2 + a3 * a3;
                let qg = b1 * b1 + b2 * b2 - b3 * b3;
                (qg - qf / riem.omega_sq.at(k)).norm()
            })
            .fold(0.0, f64::max)
    });
    Ok(ResidualReport::of(&field))
}

fn order_pair<'a>(a: &'a GraphData, b: &'a GraphData) -> Result<(&'a GraphData, &'a GraphData)> {
    a.f.same_grid(&b.f)?;
    match (a.params.epsilon, b.params.epsilon) {
        (Signature::Riemannian, Signature::Lorentzian) => Ok((a, b)),
        (Signature::Lorentzian, Signature::Riemannian) => Ok((b, a)),
        _ => Err(Error::WrongSignature("pair must contain one graph of each signature".into())),
    }
}

/// Where the affine height `μ₁x + μ₂y` is spacelike in the Lorentzian
/// Heisenberg space of bundle curvature `τ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpacelikeRegion {
    Disk { cx: f64, cy: f64, r: f64 },
    Entire,
    Empty,
}

impl SpacelikeRegion {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        match *self {
            SpacelikeRegion::Disk { cx, cy, r } => (x - cx).hypot(y - cy) < r,
            SpacelikeRegion::Entire => true,
            SpacelikeRegion::Empty => false,
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, SpacelikeRegion::Entire)
    }
}

pub fn affine_spacelike_region(mu1: f64, mu2: f64, tau: f64) -> SpacelikeRegion {
    if tau != 0.0 {
        SpacelikeRegion::Disk { cx: mu2 / tau, cy: -mu1 / tau, r: 1.0 / tau.abs() }
    } else if mu1 * mu1 + mu2 * mu2 < 1.0 {
        SpacelikeRegion::Entire
    } else {
        SpacelikeRegion::Empty
    }
}

/// `1 − (μ₁ + τy)² − (μ₂ − τx)²`, positive exactly on the spacelike region.
pub fn affine_spacelike_margin(mu1: f64, mu2: f64, tau: f64, x: f64, y: f64) -> f64 {
    1.0 - (mu1 + tau * y).powi(2) - (mu2 - tau * x).powi(2)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use proptest::prelude::*;

    use super::*;
    use crate::numerics::{Bounds, Grid2D, MaskSpec};

    fn rect(n: usize, a: f64) -> Arc<Grid2D> {
        Arc::new(Grid2D::new(n, n, Bounds::square(a)).unwrap().with_anchor_near(0.0, 0.0).unwrap())
    }

    fn slit(n: usize) -> Arc<Grid2D> {
        Arc::new(
            Grid2D::masked(n, n, Bounds::square(3.0), &MaskSpec::SlitAnnulus { r0: 1.0, r1: 3.0 })
                .unwrap()
                .with_anchor_near(2.0, 0.0)
                .unwrap(),
        )
    }

    fn max_err(f: &ScalarField, exact: impl Fn(f64, f64) -> f64) -> f64 {
        let g = f.grid();
        let (ax, ay) = g.coords(g.anchor());
        let c = exact(ax, ay) - f.anchor_value();
        g.masked_indices()
            .map(|k| {
                let (x, y) = g.coords(k);
                (f.at(k) + c - exact(x, y)).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn twin_parameters() {
        let p = CmcParams::new(-1.0, 0.3, 0.7, Signature::Riemannian);
        assert_eq!(p.twin(), CmcParams::new(-1.0, -0.7, 0.3, Signature::Lorentzian));
        assert_eq!(p.twin().twin(), p);
    }

    #[test]
    fn plane_is_minimal() {
        let g = rect(21, 1.0);
        let d = GraphData::new(ScalarField::from_fn(&g, |x, y| 0.3 * x - 1.7 * y), CmcParams::minimal_r3()).unwrap();
        assert!(cmc_residual(&d).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn helicoid_is_minimal() {
        let g = slit(201);
        let h = g.h();
        let d = GraphData::new(ScalarField::from_fn(&g, |x, y| y.atan2(x)), CmcParams::minimal_r3()).unwrap();
        assert!(cmc_residual(&d).unwrap().max_abs() <= 10.0 * h * h);
    }

    #[test]
    fn sphere_cap_has_mean_curvature_one_over_r() {
        let r = 2.0;
        let g = Arc::new(Grid2D::masked(201, 201, Bounds::square(0.8 * r), &MaskSpec::disk(0.8 * r)).unwrap());
        let h = g.h();
        let f = ScalarField::from_fn(&g, |x, y| -(r * r - x * x - y * y).sqrt());
        let d = GraphData::new(f, CmcParams::new(0.0, 0.0, 1.0 / r, Signature::Riemannian)).unwrap();
        let res = cmc_residual(&d).unwrap().max_abs();
        assert!(res <= 10.0 * h * h, "{res:e}");
    }

    #[test]
    fn hyperboloid_is_spacelike_cmc_one() {
        let g = rect(201, 1.0);
        let h = g.h();
        let f = ScalarField::from_fn(&g, |x, y| (1.0 + x * x + y * y).sqrt());
        let d = GraphData::new(f, CmcParams::new(0.0, 0.0, 1.0, Signature::Lorentzian)).unwrap();
        assert!(cmc_residual(&d).unwrap().max_abs() <= 10.0 * h * h);
    }

    #[test]
    fn timelike_input_is_rejected() {
        let g = rect(21, 1.0);
        let f = ScalarField::from_fn(&g, |x, _| 2.0 * x);
        match GraphData::new(f, CmcParams::maximal_l3()) {
            Err(Error::SpacelikeViolation { nodes, .. }) => assert_eq!(nodes.len(), g.masked_count()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn helicoid_twin_is_reflected_lorentz_catenoid() {
        let g = slit(201);
        let h = g.h();
        let d = GraphData::new(ScalarField::from_fn(&g, |x, y| y.atan2(x)), CmcParams::minimal_r3()).unwrap();
        let t = twin_transform(&d).unwrap();
        // the correspondence produces the catenoid z = −sinh⁻¹ r
        let err = max_err(&t.g, |x, y| -x.hypot(y).asinh());
        assert!(err <= 10.0 * h * h, "err {err:e}");
        assert_eq!(t.g.anchor_value(), 0.0);
        assert!(t.spacelike_margin > 0.0);
        assert!(t.dual_pde_report.max_abs <= 20.0 * h * h, "{:?}", t.dual_pde_report);
    }

    #[test]
    fn scherk_twin() {
        let g = rect(201, 1.2);
        let h = g.h();
        let d = GraphData::new(
            ScalarField::from_fn(&g, |x, y| (y.cos() / x.cos()).ln()),
            CmcParams::minimal_r3(),
        )
        .unwrap();
        let t = twin_transform(&d).unwrap();
        let err = max_err(&t.g, |x, y| (x.sin() * y.sin()).asin());
        assert!(err <= 10.0 * h * h, "err {err:e}");
    }

    #[test]
    fn zero_maps_to_zero_both_ways() {
        let g = rect(11, 1.0);
        let z = ScalarField::constant(&g, 0.0);
        let t = twin_transform(&GraphData::new(z.clone(), CmcParams::minimal_r3()).unwrap()).unwrap();
        assert_eq!(t.g.max_abs(), 0.0);
        let t = inverse_twin_transform(&GraphData::new(z.clone(), CmcParams::maximal_l3()).unwrap()).unwrap();
        assert_eq!(t.g.max_abs(), 0.0);
        let d = GraphData::new(z, CmcParams::minimal_r3()).unwrap();
        assert_eq!(involutivity_check(&d).unwrap().max_abs, 0.0);
        let t = twin_transform(&d).unwrap();
        assert_eq!(conformal_factor_check(&d, &t).unwrap().max_abs, 0.0);
    }

    #[test]
    fn hyperbolic_cylinder_inverts_to_nil_saddle() {
        let theta: f64 = 1.0;
        let g = rect(201, 2.0);
        let h = g.h();
        let gt = ScalarField::from_fn(&g, |x, y| (y * y + 1.0).sqrt() / theta.cosh() + theta.tanh() * x);
        let d = GraphData::new(gt, CmcParams::new(0.0, 0.0, 0.5, Signature::Lorentzian)).unwrap();
        let t = inverse_twin_transform(&d).unwrap();
        assert_eq!(t.twin.params, CmcParams::new(0.0, 0.5, 0.0, Signature::Riemannian));
        let err = max_err(&t.g, |x, y| {
            0.5 * x * y - 0.5 * theta.sinh() * (y.asinh() + y * (1.0 + y * y).sqrt())
        });
        assert!(err <= 10.0 * h * h, "err {err:e}");
        assert!(t.dual_pde_report.max_abs <= 10.0 * h * h);
        let c = conformal_factor_check(&d, &t).unwrap();
        assert!(c.max_abs <= 20.0 * h * h, "{:e}", c.max_abs);
    }

    #[test]
    fn lorentz_catenoid_inverts_to_helicoid() {
        let g = slit(201);
        let h = g.h();
        let d = GraphData::new(ScalarField::from_fn(&g, |x, y| x.hypot(y).asinh()), CmcParams::maximal_l3()).unwrap();
        let t = inverse_twin_transform(&d).unwrap();
        // orientation: +sinh⁻¹ r comes back as −arctan
        let err = max_err(&t.g, |x, y| -y.atan2(x));
        assert!(err <= 10.0 * h * h, "err {err:e}");
    }

    #[test]
    fn helicoid_round_trip_and_metrics() {
        let g = slit(201);
        let h = g.h();
        let d = GraphData::new(ScalarField::from_fn(&g, |x, y| y.atan2(x)), CmcParams::minimal_r3()).unwrap();
        assert!(involutivity_check(&d).unwrap().max_abs <= 20.0 * h * h);
        let t = twin_transform(&d).unwrap();
        assert!(conformal_factor_check(&d, &t).unwrap().max_abs <= 20.0 * h * h);
        assert!(complexified_form_residual(&d, &t).unwrap().max_abs <= 20.0 * h * h);
        // 1 − δ²(α̃² + β̃²) = 1/ω²
        let spacelike = t.twin.omega_sq.zip_with(&d.omega_sq, |m, w2| m - 1.0 / w2).unwrap();
        assert!(spacelike.max_abs() <= 10.0 * h * h);
    }

    #[test]
    fn scherk_round_trip() {
        let g = rect(201, 1.2);
        let h = g.h();
        let d = GraphData::new(
            ScalarField::from_fn(&g, |x, y| (y.cos() / x.cos()).ln()),
            CmcParams::minimal_r3(),
        )
        .unwrap();
        let r = involutivity_check(&d).unwrap().max_abs;
        assert!(r <= 20.0 * h * h, "{r:e}");
    }

    #[test]
    fn non_solution_fails_curl_test() {
        let g = rect(101, 1.0);
        let d = GraphData::new(ScalarField::from_fn(&g, |x, y| x * x + y * y), CmcParams::minimal_r3()).unwrap();
        assert!(matches!(twin_transform(&d), Err(Error::NotAGradient { .. })));
    }

    #[test]
    fn steep_twin_trips_the_lightlike_guard() {
        // |∇f| large makes the twin nearly null: 1 − |∇g|² = 1/(1 + |∇f|²)
        let g = rect(21, 1.0);
        let d = GraphData::new(ScalarField::from_fn(&g, |x, _| 3000.0 * x), CmcParams::minimal_r3()).unwrap();
        assert!(matches!(twin_transform(&d), Err(Error::LightlikeDegeneracy { .. })));
    }

    #[test]
    fn wrong_signature_is_rejected() {
        let g = rect(11, 1.0);
        let z = ScalarField::constant(&g, 0.0);
        let lor = GraphData::new(z.clone(), CmcParams::maximal_l3()).unwrap();
        assert!(matches!(twin_transform(&lor), Err(Error::WrongSignature(_))));
        let riem = GraphData::new(z, CmcParams::minimal_r3()).unwrap();
        assert!(matches!(inverse_twin_transform(&riem), Err(Error::WrongSignature(_))));
    }

    #[test]
    fn affine_region_examples() {
        assert_eq!(affine_spacelike_region(0.0, 0.0, 1.0), SpacelikeRegion::Disk { cx: 0.0, cy: 0.0, r: 1.0 });
        assert_eq!(affine_spacelike_region(0.0, 0.0, 0.0), SpacelikeRegion::Entire);
        assert_eq!(affine_spacelike_region(2.0, 0.0, 0.0), SpacelikeRegion::Empty);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn family_symmetry(
            kappa in -1.0..1.0f64,
            tau in -1.0..1.0f64,
            hh in -1.0..1.0f64,
            a in -1.0..1.0f64,
            b in -1.0..1.0f64,
            lorentz in any::<bool>(),
        ) {
            let g = rect(21, 0.5);
            let eps = if lorentz { Signature::Lorentzian } else { Signature::Riemannian };
            let f = ScalarField::from_fn(&g, |x, y| 0.2 * a * (x + b * y).sin() + 0.1 * b * x * y);
            let p = CmcParams::new(kappa, tau, hh, eps);
            let q = CmcParams::new(kappa, -tau, -hh, eps);
            let r1 = cmc_residual(&GraphData::new(f.clone(), p).unwrap()).unwrap();
            let r2 = cmc_residual(&GraphData::new(f.scale(-1.0), q).unwrap()).unwrap();
            prop_assert!(r1.add(&r2).unwrap().max_abs() <= 1e-12);
        }

        #[test]
        fn twin_ignores_vertical_translation(c in -5.0..5.0f64) {
            let g = rect(41, 1.0);
            let f = ScalarField::from_fn(&g, |x, y| (y.cos() / x.cos()).ln());
            let t1 = twin_transform(&GraphData::new(f.clone(), CmcParams::minimal_r3()).unwrap()).unwrap();
            let t2 = twin_transform(&GraphData::new(f.map(|v| v + c), CmcParams::minimal_r3()).unwrap()).unwrap();
            prop_assert_eq!(t2.g.anchor_value(), 0.0);
            prop_assert!(t1.g.sub(&t2.g).unwrap().max_abs() <= 1e-12);
        }

        #[test]
        fn affine_region_matches_inequality(
            mu1 in -2.0..2.0f64,
            mu2 in -2.0..2.0f64,
            tau in -3.0..3.0f64,
            x in -5.0..5.0f64,
            y in -5.0..5.0f64,
        ) {
            let region = affine_spacelike_region(mu1, mu2, tau);
            let m = affine_spacelike_margin(mu1, mu2, tau, x, y);
            prop_assume!(m.abs() > 1e-9);
            prop_assert_eq!(region.contains(x, y), m > 0.0);
        }
    }
}
