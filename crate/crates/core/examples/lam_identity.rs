//! Hessian form against the divergence of the flat-graph fluxes, and the
//! potential of a flat graph.

use std::sync::Arc;

use twinsurf::catalog::lam::{hessian_zero_potential, hessian_zero_residuals};
use twinsurf::numerics::{Bounds, Grid2D};
use twinsurf::ScalarField;

fn main() -> twinsurf::Result<()> {
    let fs: [(&str, &dyn Fn(f64, f64) -> f64); 3] =
        [("xy", &|x, y| x * y), ("cosh x", &|x, _| x.cosh()), ("x² + 3xy", &|x, y| x * x + 3.0 * x * y)];
    for n in [101, 201] {
        let g = Arc::new(Grid2D::new(n, n, Bounds::square(1.0))?);
        for (name, f) in fs {
            let forms = hessian_zero_residuals(&ScalarField::from_fn(&g, f))?;
            println!("n = {n:3} {name:9} |hessian − divergence| = {:7.3} h²", forms.identity_report()?.h2_constant());
        }
    }
    let g = Arc::new(Grid2D::new(81, 81, Bounds::square(1.0))?);
    let pot = hessian_zero_potential(&ScalarField::from_fn(&g, |x, _| x.cosh()), None)?;
    println!("potential of cosh x: max |g| = {:.1e}", pot.max_abs());
    if let Err(e) = hessian_zero_potential(&ScalarField::from_fn(&g, |x, y| x * y), None) {
        println!("xy: {e}");
    }
    Ok(())
}
