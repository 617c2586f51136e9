//! Simultaneous conformal coordinates for a minimal multigraph and its twin.
//!
//! The closed forms `(E/ω, F/ω)` and `(F/ω, G/ω)` integrate to potentials
//! `M, N`, and `Ψ(x, y) = (x + M, y + N)` has Jacobian `2 + (E + G)/ω > 2`.
//! The chart inverts `Ψ` onto a rectangular ξ-grid by Newton iteration on the
//! bilinear interpolant of each source cell; ξ-derivatives follow from the
//! chain rule with interpolated nodal gradients.

mod weierstrass;

use std::sync::Arc;

pub use weierstrass::{cauchy_riemann_residual, reflect_vertical, weierstrass_data, weierstrass_twin_residual, WeierstrassData};

use crate::error::{Error, Result};
use crate::numerics::{d_dx, d_dy, gradient, integrate_potential, Bounds, Grid2D, ResidualReport, ScalarField, VectorField2};
use crate::twin2::{first_fundamental_from, FirstFundamental, MultiGraph};
use crate::Signature;

/// Newton stopping tolerance for `|Ψ(x, y) − ξ|`.
pub const NEWTON_TOL: f64 = 1e-10;
const NEWTON_MAX_ITER: usize = 50;
/// Slack on the unit cell when accepting a bilinear preimage.
const CELL_SLACK: f64 = 1e-9;

/// Location of a ξ-node inside the source grid: lower-left node and local coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
struct CellHit {
    corner: usize,
    u: f64,
    v: f64,
}

#[derive(Clone, Debug)]
pub struct ConformalChart {
    /// Potentials on the source grid, zero at its anchor.
    pub m: ScalarField,
    pub n: ScalarField,
    pub xi1: ScalarField,
    pub xi2: ScalarField,
    /// `det DΨ` from stencil derivatives of `M, N`.
    pub j_psi: ScalarField,
    pub xi_grid: Arc<Grid2D>,
    /// Preimage coordinates `x(ξ), y(ξ)` on the ξ-grid.
    pub x: ScalarField,
    pub y: ScalarField,
    /// `ω/J_Ψ` resampled on the ξ-grid.
    pub conformal_factor: ScalarField,
    /// ξ-nodes dropped because two cells claimed different preimages.
    pub ambiguous: usize,
    hits: Vec<Option<CellHit>>,
    /// `∂ξ₁/∂x, ∂ξ₁/∂y, ∂ξ₂/∂x, ∂ξ₂/∂y` on the source grid.
    dpsi: [ScalarField; 4],
}

fn bilinear(p: [(f64, f64); 4], u: f64, v: f64) -> (f64, f64) {
    let w = [(1.0 - u) * (1.0 - v), u * (1.0 - v), (1.0 - u) * v, u * v];
    (0..4).fold((0.0, 0.0), |(a, b), i| (a + w[i] * p[i].0, b + w[i] * p[i].1))
}

/// Solves `bilinear(p, u, v) = target`; corners ordered (0,0), (1,0), (0,1), (1,1).
fn invert_bilinear(p: [(f64, f64); 4], target: (f64, f64)) -> Option<(f64, f64)> {
    let (mut u, mut v) = (0.5, 0.5);
    for _ in 0..NEWTON_MAX_ITER {
        let (px, py) = bilinear(p, u, v);
        let (rx, ry) = (px - target.0, py - target.1);
        if rx.hypot(ry) <= NEWTON_TOL {
            return Some((u, v));
        }
        let du = (
            (1.0 - v) * (p[1].0 - p[0].0) + v * (p[3].0 - p[2].0),
            (1.0 - v) * (p[1].1 - p[0].1) + v * (p[3].1 - p[2].1),
        );
        let dv = (
            (1.0 - u) * (p[2].0 - p[0].0) + u * (p[3].0 - p[1].0),
            (1.0 - u) * (p[2].1 - p[0].1) + u * (p[3].1 - p[1].1),
        );
        let det = du.0 * dv.1 - dv.0 * du.1;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        u -= (rx * dv.1 - dv.0 * ry) / det;
        v -= (du.0 * ry - rx * du.1) / det;
        if !(u.is_finite() && v.is_finite()) || u.abs() > 10.0 || v.abs() > 10.0 {
            return None;
        }
    }
    None
}

fn cell_corners(g: &Grid2D, k: usize) -> Option<[usize; 4]> {
    let (i, j) = g.ij(k);
    if i + 1 >= g.nx() || j + 1 >= g.ny() {
        return None;
    }
    let c = [k, g.idx(i + 1, j), g.idx(i, j + 1), g.idx(i + 1, j + 1)];
    c.iter().all(|&q| g.is_masked(q)).then_some(c)
}

fn ratio_field(ff: &FirstFundamental, a: &ScalarField) -> Result<ScalarField> {
    a.zip_with(&ff.omega, |v, w| v / w)
}

/// Builds `M, N, Ψ, J_Ψ` and inverts `Ψ` onto a ξ-grid whose spacing matches
/// the smallest image edge.
pub fn build_conformal_chart(mg: &MultiGraph, ff: &FirstFundamental) -> Result<ConformalChart> {
    if ff.signature != Signature::Riemannian {
        return Err(Error::WrongSignature("the chart is built from the minimal side".into()));
    }
    mg.field(0).same_grid(&ff.e)?;
    let src = mg.grid().clone();
    let (e, f, g) = (ratio_field(ff, &ff.e)?, ratio_field(ff, &ff.f)?, ratio_field(ff, &ff.g)?);
    let tag = |err: Error, which: &str| match err {
        Error::NotAGradient { report, tol, .. } => Error::NotAGradient {
            context: format!("input is not minimal: ({which}) is not closed"),
            report,
            tol,
        },
        other => other,
    };
    let m = integrate_potential(&VectorField2::new(e, f.clone())?).map_err(|x| tag(x, "E/ω, F/ω"))?.phi;
    let n = integrate_potential(&VectorField2::new(f, g)?).map_err(|x| tag(x, "F/ω, G/ω"))?.phi;
    let xi1 = m.map_indexed(|k, v| src.coords(k).0 + v);
    let xi2 = n.map_indexed(|k, v| src.coords(k).1 + v);
    let (mx, my, nx, ny) = (d_dx(&m)?, d_dy(&m)?, d_dx(&n)?, d_dy(&n)?);
    let j_psi = ScalarField::generate(&src, |k| (1.0 + mx.at(k)) * (1.0 + ny.at(k)) - my.at(k) * nx.at(k));
    if let Some(k) = src.masked_indices().find(|&k| !(j_psi.at(k) > 2.0)) {
        let (x, y) = src.coords(k);
        return Err(Error::Invariant(format!("J_Ψ = {} ≤ 2 at ({x}, {y})", j_psi.at(k))));
    }

    // ξ-grid over the image, spaced like the finest image edge
    let mut spacing = f64::INFINITY;
    for k in src.masked_indices() {
        for q in src.neighbors(k) {
            spacing = spacing.min((xi1.at(q) - xi1.at(k)).hypot(xi2.at(q) - xi2.at(k)));
        }
    }
    let b = Bounds::new(xi1.min(), xi1.max(), xi2.min(), xi2.max());
    let count = |lo: f64, hi: f64| ((hi - lo) / spacing).ceil() as usize + 1;
    let (gx, gy) = (count(b.xmin, b.xmax).max(3), count(b.ymin, b.ymax).max(3));
    let xb = Bounds::new(b.xmin, b.xmin + (gx - 1) as f64 * spacing, b.ymin, b.ymin + (gy - 1) as f64 * spacing);
    let raw = Grid2D::new(gx, gy, xb)?;

    let mut hits: Vec<Option<CellHit>> = vec![None; raw.len()];
    let mut ambiguous = vec![false; raw.len()];
    for k in src.masked_indices() {
        let Some(c) = cell_corners(&src, k) else { continue };
        let p = c.map(|q| (xi1.at(q), xi2.at(q)));
        let lo = p.iter().fold((f64::INFINITY, f64::INFINITY), |a, q| (a.0.min(q.0), a.1.min(q.1)));
        let hi = p.iter().fold((f64::NEG_INFINITY, f64::NEG_INFINITY), |a, q| (a.0.max(q.0), a.1.max(q.1)));
        let i0 = ((lo.0 - xb.xmin) / spacing).ceil().max(0.0) as usize;
        let i1 = (((hi.0 - xb.xmin) / spacing).floor() as usize).min(gx - 1);
        let j0 = ((lo.1 - xb.ymin) / spacing).ceil().max(0.0) as usize;
        let j1 = (((hi.1 - xb.ymin) / spacing).floor() as usize).min(gy - 1);
        for j in j0..=j1 {
            for i in i0..=i1 {
                let node = raw.idx(i, j);
                let Some((u, v)) = invert_bilinear(p, raw.coords(node)) else { continue };
                let inside = |t: f64| (-CELL_SLACK..=1.0 + CELL_SLACK).contains(&t);
                if !(inside(u) && inside(v)) {
                    continue;
                }
                let hit = CellHit { corner: k, u: u.clamp(0.0, 1.0), v: v.clamp(0.0, 1.0) };
                match hits[node] {
                    None => hits[node] = Some(hit),
                    Some(prev) => {
                        let (a, b) = (preimage(&src, prev), preimage(&src, hit));
                        if (a.0 - b.0).hypot(a.1 - b.1) > 1e-6 * src.h() {
                            ambiguous[node] = true;
                        }
                    }
                }
            }
        }
    }
    let n_ambiguous = ambiguous.iter().filter(|&&a| a).count();
    let mask: Vec<bool> = (0..raw.len()).map(|k| hits[k].is_some() && !ambiguous[k]).collect();
    let xi_grid = Arc::new(Grid2D::from_mask(gx, gy, xb, mask)?.restrict(|_, _| true)?);
    for (k, h) in hits.iter_mut().enumerate() {
        if !xi_grid.is_masked(k) {
            *h = None;
        }
    }
    let x = ScalarField::generate(&xi_grid, |k| preimage(&src, hits[k].unwrap()).0);
    let y = ScalarField::generate(&xi_grid, |k| preimage(&src, hits[k].unwrap()).1);
    let mut chart = ConformalChart {
        m,
        n,
        xi1,
        xi2,
        j_psi,
        xi_grid: xi_grid.clone(),
        x,
        y,
        conformal_factor: ScalarField::constant(&xi_grid, 0.0),
        ambiguous: n_ambiguous,
        hits,
        dpsi: [mx.map(|v| 1.0 + v), my, nx, ny.map(|v| 1.0 + v)],
    };
    let factor = ff.omega.zip_with(&chart.j_psi, |w, j| w / j)?;
    chart.conformal_factor = chart.resample(&factor)?;
    Ok(chart)
}

fn preimage(src: &Grid2D, hit: CellHit) -> (f64, f64) {
    let (x, y) = src.coords(hit.corner);
    (x + hit.u * src.hx(), y + hit.v * src.hy())
}

impl ConformalChart {
    pub fn source_grid(&self) -> &Arc<Grid2D> {
        self.m.grid()
    }

    /// Bilinear resampling of a source-grid field onto the ξ-grid.
    pub fn resample(&self, f: &ScalarField) -> Result<ScalarField> {
        self.m.same_grid(f)?;
        let src = self.source_grid();
        Ok(ScalarField::generate(&self.xi_grid, |k| {
            let h = self.hits[k].expect("masked ξ-node without preimage");
            let c = cell_corners(src, h.corner).expect("preimage cell lost its corners");
            let w = [(1.0 - h.u) * (1.0 - h.v), h.u * (1.0 - h.v), (1.0 - h.u) * h.v, h.u * h.v];
            (0..4).map(|i| w[i] * f.at(c[i])).sum()
        }))
    }

    /// `max |Ψ(x(ξ), y(ξ)) − ξ|` with `Ψ` interpolated bilinearly.
    pub fn inversion_error(&self) -> Result<f64> {
        let a = self.resample(&self.xi1)?;
        let b = self.resample(&self.xi2)?;
        Ok(self
            .xi_grid
            .masked_indices()
            .map(|k| {
                let (s, t) = self.xi_grid.coords(k);
                (a.at(k) - s).hypot(b.at(k) - t)
            })
            .fold(0.0, f64::max))
    }

    /// `(∂ξ₁, ∂ξ₂)` of `f` on the ξ-grid by the chain rule: nodal stencil
    /// gradients of `f` and `Ψ` are interpolated into the preimage cell and
    /// combined as `∇f · (DΨ)⁻¹`.
    pub fn xi_gradient(&self, f: &ScalarField) -> Result<VectorField2> {
        let gf = gradient(f)?;
        let (fx, fy) = (self.resample(&gf.v1)?, self.resample(&gf.v2)?);
        let d: Vec<ScalarField> = self.dpsi.iter().map(|c| self.resample(c)).collect::<Result<_>>()?;
        let grad = |k: usize| {
            let (a, b, c, e) = (d[0].at(k), d[1].at(k), d[2].at(k), d[3].at(k));
            // (f_x, f_y) = (f_ξ₁, f_ξ₂) · [[a, b], [c, e]]
            let det = a * e - b * c;
            ((fx.at(k) * e - fy.at(k) * c) / det, (fy.at(k) * a - fx.at(k) * b) / det)
        };
        Ok(VectorField2 {
            v1: ScalarField::generate(&self.xi_grid, |k| grad(k).0),
            v2: ScalarField::generate(&self.xi_grid, |k| grad(k).1),
        })
    }

    /// Source-grid fields `(x, y, h_1, …, h_n)` of the graph of `mg`.
    pub(crate) fn ambient_fields(&self, mg: &MultiGraph) -> Vec<ScalarField> {
        let src = self.source_grid();
        let mut out = vec![ScalarField::from_fn(src, |x, _| x), ScalarField::from_fn(src, |_, y| y)];
        out.extend(mg.fields().iter().cloned());
        out
    }
}

/// Pulls the induced metric of `mg` (with the given signature) back to the
/// ξ-grid and reports `max(|E_ξ − λ|, |G_ξ − λ|, |F_ξ|)/λ`, where
/// `λ = ω/J_Ψ` (or `ω̂/J_Ψ` on the Lorentzian side).
pub fn conformality_residual(chart: &ConformalChart, mg: &MultiGraph, signature: Signature) -> Result<ResidualReport> {
    let ff = first_fundamental_from(&mg.gradients()?, signature)?;
    let lambda = chart.resample(&ff.omega.zip_with(&chart.j_psi, |w, j| w / j)?)?;
    let coords = chart.ambient_fields(mg);
    let mut d1 = Vec::with_capacity(coords.len());
    let mut d2 = Vec::with_capacity(coords.len());
    for c in &coords {
        let g = chart.xi_gradient(c)?;
        d1.push(g.v1);
        d2.push(g.v2);
    }
    let s = signature.sign();
    let weight = |i: usize| if i < 2 { 1.0 } else { s };
    let field = ScalarField::generate(&chart.xi_grid, |k| {
        let (mut e, mut f, mut g) = (0.0, 0.0, 0.0);
        for i in 0..coords.len() {
            let (a, b) = (d1[i].at(k), d2[i].at(k));
            e += weight(i) * a * a;
            f += weight(i) * a * b;
            g += weight(i) * b * b;
        }
        let l = lambda.at(k);
        (e - l).abs().max((g - l).abs()).max(f.abs()) / l
    });
    Ok(ResidualReport::of(&field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::MaskSpec;
    use crate::twin2::{first_fundamental, twin_transform_codim};

    fn slit(n: usize) -> Arc<Grid2D> {
        let spec = MaskSpec::SlitAnnulus { r0: 1.0, r1: 3.0 };
        Arc::new(Grid2D::masked(n, n, Bounds::square(3.0), &spec).unwrap().with_anchor_near(2.0, 0.0).unwrap())
    }

    fn helicoid(g: &Arc<Grid2D>) -> MultiGraph {
        MultiGraph::from_fns(g, &[&|x, y| y.atan2(x)]).unwrap()
    }

    #[test]
    fn bilinear_inversion_recovers_local_coordinates() {
        let p = [(0.0, 0.0), (1.0, 0.1), (0.2, 1.0), (1.3, 1.4)];
        let t = bilinear(p, 0.3, 0.7);
        let (u, v) = invert_bilinear(p, t).unwrap();
        assert!((u - 0.3).abs() < 1e-9 && (v - 0.7).abs() < 1e-9);
    }

    #[test]
    fn zero_map_doubles_coordinates() {
        let g = Arc::new(Grid2D::new(21, 21, Bounds::square(1.0)).unwrap());
        let mg = MultiGraph::new(vec![ScalarField::constant(&g, 0.0)]).unwrap();
        let ff = first_fundamental(&mg, Signature::Riemannian).unwrap();
        let c = build_conformal_chart(&mg, &ff).unwrap();
        assert_eq!(c.m.anchor_value(), 0.0);
        assert_eq!(c.n.anchor_value(), 0.0);
        let (ax, ay) = g.coords(g.anchor());
        for k in g.masked_indices() {
            let (x, y) = g.coords(k);
            assert!((c.m.at(k) - (x - ax)).abs() < 1e-12 && (c.n.at(k) - (y - ay)).abs() < 1e-12);
            assert!((c.j_psi.at(k) - 4.0).abs() < 1e-12);
        }
        assert!(c.inversion_error().unwrap() <= 1e-9);
        assert!(conformality_residual(&c, &mg, Signature::Riemannian).unwrap().max_abs <= 1e-9);
    }

    #[test]
    fn helicoid_chart_is_conformal_to_first_order() {
        let mut prev = None;
        for n in [101, 201] {
            let g = slit(n);
            let mg = helicoid(&g);
            let ff = first_fundamental(&mg, Signature::Riemannian).unwrap();
            let c = build_conformal_chart(&mg, &ff).unwrap();
            assert!(c.j_psi.min() > 2.0);
            assert!(c.inversion_error().unwrap() <= 1e-9);
            let r = conformality_residual(&c, &mg, Signature::Riemannian).unwrap().max_abs;
            if n == 201 {
                assert!(r <= 0.02, "{r}");
            }
            if let Some(p) = prev {
                assert!(p / r >= 1.8, "{p} -> {r}");
            }
            prev = Some(r);
        }
    }

    #[test]
    fn twin_shares_the_chart() {
        let g = slit(201);
        let mg = helicoid(&g);
        let ff = first_fundamental(&mg, Signature::Riemannian).unwrap();
        let c = build_conformal_chart(&mg, &ff).unwrap();
        let t = twin_transform_codim(&mg).unwrap();
        let r = conformality_residual(&c, &t.g, Signature::Lorentzian).unwrap().max_abs;
        assert!(r <= 0.02, "{r}");
    }
}
