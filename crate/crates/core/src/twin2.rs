//! Twins in higher codimension: minimal graphs of maps `Ω → ℝⁿ` in `ℝⁿ⁺²`
//! against maximal graphs in `ℝⁿ⁺²ₙ` sharing the same area angle.
//!
//! With `(α_k, β_k) = ∇f_k`, `E = 1 + Σα²`, `F = Σαβ`, `G = 1 + Σβ²` and
//! `ω² = EG − F²`, the minimal system is
//!
//! ```text
//! ∂x((Gα_k − Fβ_k)/ω) + ∂y((Eβ_k − Fα_k)/ω) = 0,
//! ```
//!
//! so `W_k = ((Fα_k − Eβ_k)/ω, (Gα_k − Fβ_k)/ω)` is closed and its potential
//! is the k-th twin height. On the Lorentzian side every sum enters with a
//! minus sign and the same formulas apply with hats.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{
    d_dx, d_dy, divergence, gradient, hessian_from_gradient, integrate_potential_with, Grid2D, ResidualReport,
    ScalarField, VectorField2,
};
use crate::twin1::LIGHTLIKE_TOL;
use crate::Signature;
use std::sync::Arc;

/// Default margin below 1 for the area-decreasing test `‖J‖ < 1 − tol`.
pub const AREA_TOL: f64 = 1e-3;
/// Default codimension cap.
pub const MAX_CODIM: usize = 8;

/// Height functions `f_1, …, f_n` on a shared grid.
#[derive(Clone, Debug)]
pub struct MultiGraph {
    fields: Vec<ScalarField>,
}

impl MultiGraph {
    pub fn new(fields: Vec<ScalarField>) -> Result<Self> {
        Self::with_cap(fields, MAX_CODIM)
    }

    pub fn with_cap(fields: Vec<ScalarField>, cap: usize) -> Result<Self> {
        if fields.is_empty() || fields.len() > cap {
            return Err(Error::Invariant(format!("codimension {} outside 1..={cap}", fields.len())));
        }
        for f in &fields[1..] {
            fields[0].same_grid(f)?;
        }
        for (i, f) in fields.iter().enumerate() {
            if let Some(k) = f.first_non_finite() {
                let (x, y) = f.grid().coords(k);
                return Err(Error::Invariant(format!("f{} is not finite at ({x}, {y})", i + 1)));
            }
        }
        Ok(MultiGraph { fields })
    }

    pub fn from_fns(grid: &Arc<Grid2D>, fs: &[&dyn Fn(f64, f64) -> f64]) -> Result<Self> {
        Self::new(fs.iter().map(|f| ScalarField::from_fn(grid, f)).collect())
    }

    pub fn n(&self) -> usize {
        self.fields.len()
    }

    pub fn fields(&self) -> &[ScalarField] {
        &self.fields
    }

    pub fn field(&self, k: usize) -> &ScalarField {
        &self.fields[k]
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        self.fields[0].grid()
    }

    pub fn gradients(&self) -> Result<Vec<VectorField2>> {
        self.fields.iter().map(gradient).collect()
    }

    /// Every component shifted to vanish at the anchor.
    pub fn anchored(&self) -> Self {
        MultiGraph { fields: self.fields.iter().map(ScalarField::anchored).collect() }
    }
}

/// Induced metric coefficients and area element of a graph.
#[derive(Clone, Debug)]
pub struct FirstFundamental {
    pub e: ScalarField,
    pub f: ScalarField,
    pub g: ScalarField,
    pub omega: ScalarField,
    pub signature: Signature,
}

impl FirstFundamental {
    /// `(E/ω, F/ω, G/ω)` at node `k`.
    pub fn ratios(&self, k: usize) -> [f64; 3] {
        let w = self.omega.at(k);
        [self.e.at(k) / w, self.f.at(k) / w, self.g.at(k) / w]
    }
}

fn metric_parts(grads: &[VectorField2], signature: Signature) -> (ScalarField, ScalarField, ScalarField, ScalarField) {
    let s = signature.sign();
    let grid = grads[0].grid();
    let sum = |f: &dyn Fn(&VectorField2, usize) -> f64| {
        ScalarField::generate(grid, |k| grads.iter().map(|v| f(v, k)).sum::<f64>())
    };
    let e = sum(&|v, k| v.v1.at(k).powi(2)).map(|t| 1.0 + s * t);
    let f = sum(&|v, k| v.v1.at(k) * v.v2.at(k)).scale(s);
    let g = sum(&|v, k| v.v2.at(k).powi(2)).map(|t| 1.0 + s * t);
    let det = ScalarField::generate(grid, |k| e.at(k) * g.at(k) - f.at(k).powi(2));
    (e, f, g, det)
}

/// Builds `E, F, G, ω` from given gradient fields.
pub fn first_fundamental_from(grads: &[VectorField2], signature: Signature) -> Result<FirstFundamental> {
    let (e, f, g, det) = metric_parts(grads, signature);
    let bad: Vec<usize> = det.grid().masked_indices().filter(|&k| !(det.at(k) > 0.0)).collect();
    if !bad.is_empty() {
        return Err(Error::SpacelikeViolation { nodes: bad, min_margin: det.min() });
    }
    Ok(FirstFundamental { omega: det.map(f64::sqrt), e, f, g, signature })
}

pub fn first_fundamental(mg: &MultiGraph, signature: Signature) -> Result<FirstFundamental> {
    first_fundamental_from(&mg.gradients()?, signature)
}

/// Jacobians `J_ij = α_i β_j − α_j β_i` for `i < j`, their norm and `Θ = arccos ‖J‖`.
#[derive(Clone, Debug)]
pub struct AreaAngle {
    pub pairs: Vec<(usize, usize)>,
    pub j: Vec<ScalarField>,
    pub norm_j: ScalarField,
    pub theta: ScalarField,
}

impl AreaAngle {
    pub fn jacobian(&self, i: usize, j: usize) -> Option<&ScalarField> {
        self.pairs.iter().position(|&p| p == (i, j)).map(|m| &self.j[m])
    }
}

fn jacobians(grads: &[VectorField2]) -> (Vec<(usize, usize)>, Vec<ScalarField>) {
    let n = grads.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let j = pairs
        .iter()
        .map(|&(a, b)| {
            let (ga, gb) = (&grads[a], &grads[b]);
            ga.v1.map_indexed(|k, aa| aa * gb.v2.at(k) - gb.v1.at(k) * ga.v2.at(k))
        })
        .collect();
    (pairs, j)
}

pub fn area_angle_from(grads: &[VectorField2], area_tol: f64) -> Result<AreaAngle> {
    let (pairs, j) = jacobians(grads);
    let grid = grads[0].grid();
    let norm_j = ScalarField::generate(grid, |k| j.iter().map(|f| f.at(k).powi(2)).sum::<f64>().sqrt());
    let limit = 1.0 - area_tol;
    let bad: Vec<usize> = grid.masked_indices().filter(|&k| !(norm_j.at(k) < limit)).collect();
    if !bad.is_empty() {
        return Err(Error::NotAreaDecreasing { nodes: bad, max_norm: norm_j.max() });
    }
    let theta = norm_j.map(f64::acos);
    Ok(AreaAngle { pairs, j, norm_j, theta })
}

pub fn area_angle(mg: &MultiGraph) -> Result<AreaAngle> {
    area_angle_with(mg, AREA_TOL)
}

pub fn area_angle_with(mg: &MultiGraph, area_tol: f64) -> Result<AreaAngle> {
    area_angle_from(&mg.gradients()?, area_tol)
}

/// `max |ω² − (1 + Σα² + Σβ² + ΣJ²)|`, an identity in the stencil values.
pub fn lagrange_identity_residual(mg: &MultiGraph, ff: &FirstFundamental, aa: &AreaAngle) -> Result<f64> {
    if ff.signature != Signature::Riemannian {
        return Err(Error::WrongSignature("Lagrange identity is stated for the Euclidean metric".into()));
    }
    let grads = mg.gradients()?;
    let worst = mg
        .grid()
        .masked_indices()
        .map(|k| {
            let sq: f64 = grads.iter().map(|v| v.v1.at(k).powi(2) + v.v2.at(k).powi(2)).sum();
            let jj: f64 = aa.j.iter().map(|f| f.at(k).powi(2)).sum();
            (ff.omega.at(k).powi(2) - (1.0 + sq + jj)).abs()
        })
        .fold(0.0, f64::max);
    Ok(worst)
}

/// Residuals of the minimal (or maximal) system per component.
#[derive(Clone, Debug)]
pub struct SystemResidual {
    /// `G f_xx − 2F f_xy + E f_yy`.
    pub second_order: Vec<ScalarField>,
    /// `∂x((Gα − Fβ)/ω) + ∂y((Eβ − Fα)/ω)`.
    pub divergence: Vec<ScalarField>,
}

fn worst_of(fields: &[ScalarField]) -> ScalarField {
    fields[0].map_indexed(|k, _| fields.iter().map(|f| f.at(k).abs()).fold(0.0, f64::max))
}

impl SystemResidual {
    /// Pointwise max over components of the second-order form.
    pub fn report(&self) -> ResidualReport {
        ResidualReport::of(&worst_of(&self.second_order))
    }

    pub fn divergence_report(&self) -> ResidualReport {
        ResidualReport::of(&worst_of(&self.divergence))
    }
}

fn system_residual(grads: &[VectorField2], ff: &FirstFundamental) -> Result<SystemResidual> {
    let mut second_order = Vec::with_capacity(grads.len());
    let mut div = Vec::with_capacity(grads.len());
    for v in grads {
        let hs = hessian_from_gradient(v)?;
        second_order.push(ff.g.map_indexed(|k, g| {
            g * hs.fxx.at(k) - 2.0 * ff.f.at(k) * hs.fxy.at(k) + ff.e.at(k) * hs.fyy.at(k)
        }));
        let flux = VectorField2 {
            v1: v.v1.map_indexed(|k, a| {
                let [_, f, g] = ff.ratios(k);
                g * a - f * v.v2.at(k)
            }),
            v2: v.v2.map_indexed(|k, b| {
                let [e, f, _] = ff.ratios(k);
                e * b - f * v.v1.at(k)
            }),
        };
        div.push(divergence(&flux)?);
    }
    Ok(SystemResidual { second_order, divergence: div })
}

pub fn minimal_system_residual(mg: &MultiGraph) -> Result<SystemResidual> {
    let grads = mg.gradients()?;
    system_residual(&grads, &first_fundamental_from(&grads, Signature::Riemannian)?)
}

/// Fails with a spacelike violation when `ÊĜ − F̂² ≤ 0` somewhere.
pub fn maximal_system_residual(mg: &MultiGraph) -> Result<SystemResidual> {
    let grads = mg.gradients()?;
    system_residual(&grads, &first_fundamental_from(&grads, Signature::Lorentzian)?)
}

/// Pointwise max of `|∂x(G/ω) − ∂y(F/ω)|` and `|∂x(F/ω) − ∂y(E/ω)|`.
pub fn mss2_identities_residual(ff: &FirstFundamental) -> Result<ResidualReport> {
    let over = |a: &ScalarField| a.zip_with(&ff.omega, |v, w| v / w);
    let (e, f, g) = (over(&ff.e)?, over(&ff.f)?, over(&ff.g)?);
    let r1 = d_dx(&g)?.sub(&d_dy(&f)?)?;
    let r2 = d_dx(&f)?.sub(&d_dy(&e)?)?;
    Ok(ResidualReport::of(&r1.zip_with(&r2, |a, b| a.abs().max(b.abs()))?))
}

fn sums(a: &[f64], b: &[f64]) -> (f64, f64, f64) {
    let aa = a.iter().map(|v| v * v).sum();
    let ab = a.iter().zip(b).map(|(u, v)| u * v).sum();
    let bb = b.iter().map(|v| v * v).sum();
    (aa, ab, bb)
}

/// Twin gradients `(α̂, β̂)` from `(α, β)` at one node.
pub fn twin_relation_forward(alpha: &[f64], beta: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (aa, ab, bb) = sums(alpha, beta);
    let (e, f, g) = (1.0 + aa, ab, 1.0 + bb);
    let w = (e * g - f * f).sqrt();
    alpha
        .iter()
        .zip(beta)
        .map(|(&a, &b)| ((f * a - e * b) / w, (g * a - f * b) / w))
        .unzip()
}

/// Recovers `(α, β)` from twin gradients `(α̂, β̂)` at one node; needs `ÊĜ > F̂²`.
pub fn twin_relation_inverse(alpha_hat: &[f64], beta_hat: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (aa, ab, bb) = sums(alpha_hat, beta_hat);
    let (e, f, g) = (1.0 - aa, -ab, 1.0 - bb);
    let w = (e * g - f * f).sqrt();
    alpha_hat
        .iter()
        .zip(beta_hat)
        .map(|(&a, &b)| ((e * b - f * a) / w, (f * b - g * a) / w))
        .unzip()
}

/// The closed 1-forms whose potentials are the twin heights.
fn twin_fields(grads: &[VectorField2], ff: &FirstFundamental) -> Vec<VectorField2> {
    let lorentz = ff.signature == Signature::Lorentzian;
    grads
        .iter()
        .map(|v| {
            let comp = |first: bool| {
                v.v1.map_indexed(|k, a| {
                    let b = v.v2.at(k);
                    let [e, f, g] = ff.ratios(k);
                    match (lorentz, first) {
                        (false, true) => f * a - e * b,
                        (false, false) => g * a - f * b,
                        (true, true) => e * b - f * a,
                        (true, false) => f * b - g * a,
                    }
                })
            };
            VectorField2 { v1: comp(true), v2: comp(false) }
        })
        .collect()
}

/// Residuals of the four dualities between a minimal graph and its maximal twin.
#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    /// `|J_ij(f) − J_ij(g)|`.
    pub jacobian: ResidualReport,
    /// `|ω̂ω − sin²Θ|` with `sin²Θ = 1 − ‖J(f)‖²`.
    pub angle: ResidualReport,
    /// Entrywise `|ds²_f − (ω/ω̂) ds²_g|`.
    pub conformal: ResidualReport,
    /// `|Ê/ω̂ − E/ω|`, `|F̂/ω̂ − F/ω|`, `|Ĝ/ω̂ − G/ω|`.
    pub ratios: ResidualReport,
    /// `|ω̂ − (1 − ‖J‖²)/ω|`.
    pub step_a3: ResidualReport,
}

fn dualities_from(gf: &[VectorField2], gg: &[VectorField2]) -> Result<DualityReport> {
    if gf.len() != gg.len() {
        return Err(Error::Invariant(format!("codimensions differ: {} vs {}", gf.len(), gg.len())));
    }
    gf[0].v1.same_grid(&gg[0].v1)?;
    let riem = first_fundamental_from(gf, Signature::Riemannian)?;
    let lor = first_fundamental_from(gg, Signature::Lorentzian)?;
    let (_, jf) = jacobians(gf);
    let (_, jg) = jacobians(gg);
    let grid = riem.e.grid();
    let sin2 = ScalarField::generate(grid, |k| 1.0 - jf.iter().map(|j| j.at(k).powi(2)).sum::<f64>());
    let jacobian = ScalarField::generate(grid, |k| {
        jf.iter().zip(&jg).map(|(a, b)| (a.at(k) - b.at(k)).abs()).fold(0.0, f64::max)
    });
    let angle = ScalarField::generate(grid, |k| (lor.omega.at(k) * riem.omega.at(k) - sin2.at(k)).abs());
    let conformal = ScalarField::generate(grid, |k| {
        let s = riem.omega.at(k) / lor.omega.at(k);
        (riem.e.at(k) - s * lor.e.at(k))
            .abs()
            .max((riem.f.at(k) - s * lor.f.at(k)).abs())
            .max((riem.g.at(k) - s * lor.g.at(k)).abs())
    });
    let ratios = ScalarField::generate(grid, |k| {
        let (a, b) = (riem.ratios(k), lor.ratios(k));
        (0..3).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max)
    });
    let step_a3 = ScalarField::generate(grid, |k| (lor.omega.at(k) - sin2.at(k) / riem.omega.at(k)).abs());
    Ok(DualityReport {
        jacobian: ResidualReport::of(&jacobian),
        angle: ResidualReport::of(&angle),
        conformal: ResidualReport::of(&conformal),
        ratios: ResidualReport::of(&ratios),
        step_a3: ResidualReport::of(&step_a3),
    })
}

/// Duality residuals from stencil derivatives of a minimal `f` and maximal `g`.
pub fn duality_checks(minimal: &MultiGraph, maximal: &MultiGraph) -> Result<DualityReport> {
    dualities_from(&minimal.gradients()?, &maximal.gradients()?)
}

#[derive(Clone, Copy, Debug)]
pub struct CodimOptions {
    /// `None` selects the default `10·h²·(1 + max|W_k|)` per component.
    pub curl_tol: Option<f64>,
    pub area_tol: f64,
    pub lightlike_tol: f64,
}

impl Default for CodimOptions {
    fn default() -> Self {
        CodimOptions { curl_tol: None, area_tol: AREA_TOL, lightlike_tol: LIGHTLIKE_TOL }
    }
}

#[derive(Clone, Debug)]
pub struct CodimTwin {
    /// Twin heights, each zero at the anchor.
    pub g: MultiGraph,
    pub curl_reports: Vec<ResidualReport>,
    pub curl_tols: Vec<f64>,
    /// System residual of the twin from its own stencil derivatives.
    pub system_report: ResidualReport,
    pub dualities: DualityReport,
    /// Minimum of `ÊĜ − F̂²` on the Lorentzian side.
    pub spacelike_margin: f64,
    pub path_discrepancy: f64,
    /// Integrated fields, i.e. the twin's gradients.
    grads: Vec<VectorField2>,
}

struct Leg {
    g: Vec<ScalarField>,
    w: Vec<VectorField2>,
    curl_reports: Vec<ResidualReport>,
    curl_tols: Vec<f64>,
    margin: f64,
    path_discrepancy: f64,
}

fn leg(grads: &[VectorField2], from: Signature, opts: &CodimOptions) -> Result<Leg> {
    let ff = first_fundamental_from(grads, from)?;
    if from == Signature::Lorentzian {
        let margin = ff.omega.map(|w| w * w).min();
        if !(margin >= opts.lightlike_tol) {
            return Err(Error::LightlikeDegeneracy {
                min_margin: margin,
                guard: opts.lightlike_tol,
                margin: ff.omega.map(|w| w * w).values().to_vec(),
            });
        }
    }
    area_angle_from(grads, opts.area_tol)?;
    let w = twin_fields(grads, &ff);
    let mut out = Leg {
        g: Vec::with_capacity(w.len()),
        w: Vec::new(),
        curl_reports: Vec::new(),
        curl_tols: Vec::new(),
        margin: 0.0,
        path_discrepancy: 0.0,
    };
    let what = match from {
        Signature::Riemannian => "minimal",
        Signature::Lorentzian => "maximal",
    };
    for (k, wk) in w.iter().enumerate() {
        let pot = integrate_potential_with(wk, opts.curl_tol).map_err(|e| match e {
            Error::NotAGradient { report, tol, .. } => Error::NotAGradient {
                context: format!("input is not a {what} multigraph (component {})", k + 1),
                report,
                tol,
            },
            other => other,
        })?;
        out.g.push(pot.phi);
        out.curl_reports.push(pot.curl);
        out.curl_tols.push(pot.curl_tol);
        out.path_discrepancy = out.path_discrepancy.max(pot.path_discrepancy);
    }
    let lorentz_side = if from == Signature::Riemannian { &w[..] } else { grads };
    let (_, _, _, det) = metric_parts(lorentz_side, Signature::Lorentzian);
    out.margin = det.min();
    if from == Signature::Riemannian && !(out.margin >= opts.lightlike_tol) {
        return Err(Error::LightlikeDegeneracy {
            min_margin: out.margin,
            guard: opts.lightlike_tol,
            margin: det.values().to_vec(),
        });
    }
    out.w = w;
    Ok(out)
}

fn finish(input: &MultiGraph, leg: Leg, from: Signature) -> Result<CodimTwin> {
    let g = MultiGraph::with_cap(leg.g, usize::MAX)?;
    let own = g.gradients()?;
    let system = system_residual(&own, &first_fundamental_from(&own, from.flip())?)?;
    let dualities = match from {
        Signature::Riemannian => dualities_from(&input.gradients()?, &own)?,
        Signature::Lorentzian => dualities_from(&own, &input.gradients()?)?,
    };
    Ok(CodimTwin {
        g,
        curl_reports: leg.curl_reports,
        curl_tols: leg.curl_tols,
        system_report: system.report(),
        dualities,
        spacelike_margin: leg.margin,
        path_discrepancy: leg.path_discrepancy,
        grads: leg.w,
    })
}

pub fn twin_transform_codim(mg: &MultiGraph) -> Result<CodimTwin> {
    twin_transform_codim_with(mg, &CodimOptions::default())
}

/// Maximal twin of an area-decreasing minimal multigraph.
pub fn twin_transform_codim_with(mg: &MultiGraph, opts: &CodimOptions) -> Result<CodimTwin> {
    let l = leg(&mg.gradients()?, Signature::Riemannian, opts)?;
    finish(mg, l, Signature::Riemannian)
}

pub fn inverse_twin_transform_codim(mg: &MultiGraph) -> Result<CodimTwin> {
    inverse_twin_transform_codim_with(mg, &CodimOptions::default())
}

/// Minimal twin of an area-decreasing spacelike maximal multigraph.
pub fn inverse_twin_transform_codim_with(mg: &MultiGraph, opts: &CodimOptions) -> Result<CodimTwin> {
    let l = leg(&mg.gradients()?, Signature::Lorentzian, opts)?;
    finish(mg, l, Signature::Lorentzian)
}

impl CodimTwin {
    /// The integrated fields, which are the twin's gradients up to quadrature error.
    pub fn gradients(&self) -> &[VectorField2] {
        &self.grads
    }
}

/// `max_k |f_k − twin(twin(f))_k|` after anchoring, for either signature.
pub fn involutivity_check_codim(mg: &MultiGraph, signature: Signature) -> Result<ResidualReport> {
    let opts = CodimOptions::default();
    let first = leg(&mg.gradients()?, signature, &opts)?;
    let back = leg(&first.w, signature.flip(), &opts)?;
    let diffs: Vec<ScalarField> =
        back.g.iter().zip(mg.fields()).map(|(b, f)| b.sub(&f.anchored())).collect::<Result<_>>()?;
    Ok(ResidualReport::of(&worst_of(&diffs)))
}
