//! Potentials of curl-free fields by trapezoid integration along grid paths.
//!
//! Each edge uses the trapezoid rule with its Euler–Maclaurin end correction
//! `∫ ≈ h(V₀ + V₁)/2 − h²(V₁' − V₀')/12`, the derivative along the edge taken
//! from the same stencils as everywhere else. Along a straight run the
//! corrections telescope, so the composite rule is the plain trapezoid rule
//! plus a correction at each end of the run. Without it the quadrature error
//! depends on where a path turns, and potentials built from different
//! branches of the search tree disagree at O(h²) between neighbouring nodes,
//! which differentiation would turn into an O(h) gradient error.

use std::collections::VecDeque;

use super::field::{ScalarField, VectorField2};
use super::grid::check_simply_connected;
use super::report::ResidualReport;
use super::stencil::{curl_residual, d_dx, d_dy};
use crate::error::{Error, Result};

/// A reconstructed potential together with its diagnostics.
#[derive(Clone, Debug)]
pub struct Potential {
    /// Zero at the grid anchor.
    pub phi: ScalarField,
    pub curl: ResidualReport,
    pub curl_tol: f64,
    /// Largest disagreement between row-first and column-first integration
    /// over fully masked square blocks.
    pub path_discrepancy: f64,
}

/// `10·h²·(1 + max|V|)`.
pub fn default_curl_tol(v: &VectorField2) -> f64 {
    let h = v.grid().h();
    10.0 * h * h * (1.0 + v.max_norm())
}

pub fn integrate_potential(v: &VectorField2) -> Result<Potential> {
    integrate_potential_with(v, None)
}

/// As [`integrate_potential`], with an explicit curl tolerance.
pub fn integrate_potential_with(v: &VectorField2, curl_tol: Option<f64>) -> Result<Potential> {
    let g = v.grid().clone();
    if g.component_count() != 1 {
        return Err(Error::Topology(format!(
            "mask has {} connected components",
            g.component_count()
        )));
    }
    if !check_simply_connected(&g) {
        return Err(Error::Topology(format!(
            "mask is not simply connected (Euler characteristic {})",
            g.euler_characteristic()
        )));
    }
    let curl = ResidualReport::of(&curl_residual(v)?);
    let tol = curl_tol.unwrap_or_else(|| default_curl_tol(v));
    if !curl.passes(tol) {
        return Err(Error::NotAGradient {
            context: "potential".into(),
            report: curl,
            tol,
        });
    }

    let edges = EdgeQuadrature::new(v)?;
    let nx = g.nx();
    let mut phi = vec![f64::NAN; g.len()];
    let mut queue = VecDeque::new();
    phi[g.anchor()] = 0.0;
    queue.push_back(g.anchor());
    while let Some(k) = queue.pop_front() {
        for nb in g.neighbors(k) {
            if !phi[nb].is_nan() {
                continue;
            }
            let step = if nb == k + 1 {
                edges.x(k, nb)
            } else if nb + 1 == k {
                -edges.x(nb, k)
            } else if nb == k + nx {
                edges.y(k, nb)
            } else {
                -edges.y(nb, k)
            };
            phi[nb] = phi[k] + step;
            queue.push_back(nb);
        }
    }
    let phi = ScalarField::from_values(&g, phi)?;
    let path_discrepancy = edges.discrepancy();
    log::debug!(
        "potential: curl max {:.3e} (tol {:.3e}), path discrepancy {:.3e}",
        curl.max_abs,
        tol,
        path_discrepancy
    );
    Ok(Potential {
        phi,
        curl,
        curl_tol: tol,
        path_discrepancy,
    })
}

struct EdgeQuadrature<'a> {
    v: &'a VectorField2,
    dv1: ScalarField,
    dv2: ScalarField,
}

impl<'a> EdgeQuadrature<'a> {
    fn new(v: &'a VectorField2) -> Result<Self> {
        Ok(EdgeQuadrature {
            v,
            dv1: d_dx(&v.v1)?,
            dv2: d_dy(&v.v2)?,
        })
    }

    /// `∫ v1 dx` from node `p` to its right neighbour `q`.
    fn x(&self, p: usize, q: usize) -> f64 {
        let h = self.v.grid().hx();
        0.5 * h * (self.v.v1.at(p) + self.v.v1.at(q)) - h * h / 12.0 * (self.dv1.at(q) - self.dv1.at(p))
    }

    /// `∫ v2 dy` from node `p` to its upper neighbour `q`.
    fn y(&self, p: usize, q: usize) -> f64 {
        let h = self.v.grid().hy();
        0.5 * h * (self.v.v2.at(p) + self.v.v2.at(q)) - h * h / 12.0 * (self.dv2.at(q) - self.dv2.at(p))
    }

    fn discrepancy(&self) -> f64 {
        let g = self.v.grid();
        let bsize = 8usize.min(g.nx() - 1).min(g.ny() - 1);
        let along_x = |j: usize, i0: usize| -> f64 { (i0..i0 + bsize).map(|i| self.x(g.idx(i, j), g.idx(i + 1, j))).sum() };
        let along_y = |i: usize, j0: usize| -> f64 { (j0..j0 + bsize).map(|j| self.y(g.idx(i, j), g.idx(i, j + 1))).sum() };
        let mut worst = 0.0f64;
        let mut j0 = 0;
        while j0 + bsize < g.ny() {
            let mut i0 = 0;
            while i0 + bsize < g.nx() {
                let full = (j0..=j0 + bsize).all(|j| (i0..=i0 + bsize).all(|i| g.is_masked(g.idx(i, j))));
                if full {
                    let row_first = along_x(j0, i0) + along_y(i0 + bsize, j0);
                    let col_first = along_y(i0, j0) + along_x(j0 + bsize, i0);
                    worst = worst.max((row_first - col_first).abs());
                }
                i0 += bsize;
            }
            j0 += bsize;
        }
        worst
    }
}

/// Row-first minus column-first integrals across square blocks lying
/// wholly inside the mask; the maximum absolute difference.
pub fn path_discrepancy(v: &VectorField2) -> Result<f64> {
    Ok(EdgeQuadrature::new(v)?.discrepancy())
}
