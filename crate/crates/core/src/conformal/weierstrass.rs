//! Holomorphic null curves `φ_j = ∂ξ₁X_j − i ∂ξ₂X_j` read off a conformal chart.

use std::sync::Arc;

use num_complex::Complex64;

use super::ConformalChart;
use crate::error::{Error, Result};
use crate::numerics::{Grid2D, ResidualReport, ScalarField};
use crate::twin2::MultiGraph;
use crate::Signature;

/// `φ_1, …, φ_{n+2}` as `(re, im)` field pairs on the ξ-grid.
#[derive(Clone, Debug)]
pub struct WeierstrassData {
    pub re: Vec<ScalarField>,
    pub im: Vec<ScalarField>,
    pub signature: Signature,
}

impl WeierstrassData {
    pub fn grid(&self) -> &Arc<Grid2D> {
        self.re[0].grid()
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn phi(&self, j: usize, k: usize) -> Complex64 {
        Complex64::new(self.re[j].at(k), self.im[j].at(k))
    }

    /// `|φ₁² + φ₂² ± Σφ_{k+2}²| / Σ|φ_j|²` per node, with the sign of the
    /// ambient metric on the height coordinates.
    pub fn nullity_residual(&self) -> ResidualReport {
        let s = self.signature.sign();
        let field = ScalarField::generate(self.grid(), |k| {
            let mut sum = Complex64::new(0.0, 0.0);
            let mut norm = 0.0;
            for j in 0..self.len() {
                let p = self.phi(j, k);
                sum += if j < 2 { p * p } else { s * p * p };
                norm += p.norm_sqr();
            }
            sum.norm() / norm
        });
        ResidualReport::of(&field)
    }
}

pub fn weierstrass_data(chart: &ConformalChart, mg: &MultiGraph, signature: Signature) -> Result<WeierstrassData> {
    let coords = chart.ambient_fields(mg);
    let mut re = Vec::with_capacity(coords.len());
    let mut im = Vec::with_capacity(coords.len());
    for c in &coords {
        let g = chart.xi_gradient(c)?;
        re.push(g.v1);
        im.push(g.v2.scale(-1.0));
    }
    Ok(WeierstrassData { re, im, signature })
}

/// The data of the graph reflected in `z ↦ −z`: height components negated.
pub fn reflect_vertical(w: &WeierstrassData) -> WeierstrassData {
    let flip = |v: &[ScalarField]| {
        v.iter().enumerate().map(|(j, f)| if j < 2 { f.clone() } else { f.scale(-1.0) }).collect()
    };
    WeierstrassData { re: flip(&w.re), im: flip(&w.im), signature: w.signature }
}

/// `max(|φ₁ − φ̂₁|, |φ₂ − φ̂₂|, max_k |φ_{k+2} + iφ̂_{k+2}|)` per node.
pub fn weierstrass_twin_residual(wf: &WeierstrassData, wg: &WeierstrassData) -> Result<ResidualReport> {
    if wf.len() != wg.len() {
        return Err(Error::Invariant(format!("curve lengths differ: {} vs {}", wf.len(), wg.len())));
    }
    wf.re[0].same_grid(&wg.re[0])?;
    let i = Complex64::i();
    let field = ScalarField::generate(wf.grid(), |k| {
        (0..wf.len())
            .map(|j| {
                let (a, b) = (wf.phi(j, k), wg.phi(j, k));
                if j < 2 { (a - b).norm() } else { (a + i * b).norm() }
            })
            .fold(0.0, f64::max)
    });
    Ok(ResidualReport::of(&field))
}

/// `max_k max(|∂ξ₁f_k − ∂ξ₂g_k|, |∂ξ₂f_k + ∂ξ₁g_k|)` on the ξ-grid.
pub fn cauchy_riemann_residual(chart: &ConformalChart, f: &MultiGraph, g: &MultiGraph) -> Result<ResidualReport> {
    if f.n() != g.n() {
        return Err(Error::Invariant(format!("codimensions differ: {} vs {}", f.n(), g.n())));
    }
    let mut worst = ScalarField::constant(&chart.xi_grid, 0.0);
    for (fk, gk) in f.fields().iter().zip(g.fields()) {
        let (a, b) = (chart.xi_gradient(fk)?, chart.xi_gradient(gk)?);
        worst = worst.map_indexed(|k, w| {
            w.max((a.v1.at(k) - b.v2.at(k)).abs()).max((a.v2.at(k) + b.v1.at(k)).abs())
        });
    }
    Ok(ResidualReport::of(&worst))
}
