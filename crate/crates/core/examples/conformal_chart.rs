//! The shared conformal chart of the helicoid and its twin, with the
//! Weierstrass data of both and the first-order convergence of their residuals.

use std::sync::Arc;

use twinsurf::conformal::{build_conformal_chart, conformality_residual, reflect_vertical, weierstrass_data, weierstrass_twin_residual};
use twinsurf::numerics::{Bounds, Grid2D, MaskSpec};
use twinsurf::twin2::{first_fundamental, twin_transform_codim, MultiGraph};
use twinsurf::Signature;

fn main() -> twinsurf::Result<()> {
    let spec = MaskSpec::SlitAnnulus { r0: 1.0, r1: 3.0 };
    println!("{:>5} {:>9} {:>10} {:>12} {:>12} {:>12}", "n", "min J_Ψ", "ξ-nodes", "conformal", "nullity", "twin rel.");
    for n in [51, 101, 201] {
        let g = Arc::new(Grid2D::masked(n, n, Bounds::square(3.0), &spec)?.with_anchor_near(2.0, 0.0)?);
        let mg = MultiGraph::from_fns(&g, &[&|x, y| y.atan2(x)])?;
        let ff = first_fundamental(&mg, Signature::Riemannian)?;
        let chart = build_conformal_chart(&mg, &ff)?;
        let twin = twin_transform_codim(&mg)?;
        let wf = weierstrass_data(&chart, &mg, Signature::Riemannian)?;
        let wg = reflect_vertical(&weierstrass_data(&chart, &twin.g, Signature::Lorentzian)?);
        println!(
            "{n:>5} {:>9.4} {:>10} {:>12.3e} {:>12.3e} {:>12.3e}",
            chart.j_psi.min(),
            chart.xi_grid.masked_count(),
            conformality_residual(&chart, &mg, Signature::Riemannian)?.max_abs,
            wf.nullity_residual().max_abs,
            weierstrass_twin_residual(&wf, &wg)?.max_abs
        );
    }
    Ok(())
}
