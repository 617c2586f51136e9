//! The holomorphic graph ½z² in R⁴ and its maximal twin in R⁴₂, plus the
//! area-decreasing guard on a disk that is too large.

use std::sync::Arc;

use twinsurf::numerics::{Bounds, Grid2D, MaskSpec};
use twinsurf::twin2::{involutivity_check_codim, twin_transform_codim, MultiGraph};
use twinsurf::{Error, Signature};

fn half_z2(r: f64) -> twinsurf::Result<MultiGraph> {
    let g = Arc::new(Grid2D::masked(201, 201, Bounds::square(r.max(1.0)), &MaskSpec::disk(r))?);
    MultiGraph::from_fns(&g, &[&|x, y| 0.5 * (x * x - y * y), &|x, y| x * y])
}

fn main() -> twinsurf::Result<()> {
    let mg = half_z2(0.9)?;
    let h2 = mg.grid().h().powi(2);
    let t = twin_transform_codim(&mg)?;
    let exact = MultiGraph::from_fns(mg.grid(), &[&|x, y| x * y, &|x, y| -0.5 * (x * x - y * y)])?.anchored();
    let err = (0..2).map(|k| t.g.field(k).sub(exact.field(k)).map(|d| d.max_abs())).collect::<Result<Vec<_>, _>>()?;
    println!("½z² on r ≤ 0.9, 201²");
    println!("  |twin − (xy, −½(x²−y²))|  {:.3} h², {:.3} h²", err[0] / h2, err[1] / h2);
    println!("  maximal system residual    {:.3} h²", t.system_report.max_abs / h2);
    println!("  Jacobian preservation      {:.3} h²", t.dualities.jacobian.max_abs / h2);
    println!("  |ω̂ω − sin²Θ|               {:.3} h²", t.dualities.angle.max_abs / h2);
    println!("  conformal equivalence      {:.3} h²", t.dualities.conformal.max_abs / h2);
    println!("  twin of twin               {:.3} h²", involutivity_check_codim(&mg, Signature::Riemannian)?.max_abs / h2);

    match twin_transform_codim(&half_z2(1.1)?) {
        Err(e @ Error::NotAreaDecreasing { .. }) => println!("r ≤ 1.1: {e}"),
        other => println!("r ≤ 1.1: unexpected {:?}", other.map(|_| ())),
    }
    Ok(())
}
