//! Reconstruct a potential from its gradient on a disk, then watch the curl
//! test reject a rotational field.

use std::sync::Arc;

use twinsurf::numerics::{integrate_potential, Bounds, Grid2D, MaskSpec, VectorField2};
use twinsurf::ScalarField;

fn main() -> twinsurf::Result<()> {
    let grid = Arc::new(Grid2D::masked(101, 101, Bounds::square(1.0), &MaskSpec::disk(0.95))?);
    let grad = VectorField2::from_fn(&grid, |x, y| (y.cos() + 2.0 * x, -x * y.sin()));
    let pot = integrate_potential(&grad)?;
    let exact = ScalarField::from_fn(&grid, |x, y| x * y.cos() + x * x).anchored();
    println!("nodes            {}", grid.masked_count());
    println!("curl max         {:.3e} (tol {:.3e})", pot.curl.max_abs, pot.curl_tol);
    println!("max |φ − exact|  {:.3e}", pot.phi.sub(&exact)?.max_abs());
    println!("path discrepancy {:.3e}", pot.path_discrepancy);

    let swirl = VectorField2::from_fn(&grid, |x, y| (-y, x));
    match integrate_potential(&swirl) {
        Err(e) => println!("rotation field: {e}"),
        Ok(_) => println!("rotation field unexpectedly integrated"),
    }
    Ok(())
}
