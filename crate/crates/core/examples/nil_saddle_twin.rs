//! The CMC-½ hyperbolic cylinders g^θ in L³ and their minimal twins f^θ in
//! Nil(½), plus the conformal chart X^θ and the x-translation symmetry.

use twinsurf::catalog::{self, charts, expected_twin_with};
use twinsurf::twin1::inverse_twin_transform;

fn main() -> twinsurf::Result<()> {
    let pair = catalog::pair_for_target("nil_saddle")?;
    for theta in [0.0, 0.5, 1.0] {
        let data = catalog::eval_example("hyperbolic_cylinder_L3", &[("theta", theta)], 201)?;
        let h2 = data.grid().h().powi(2);
        let t = inverse_twin_transform(&data)?;
        let err = t.g.sub(&expected_twin_with(pair, &[("theta", theta)], data.grid())?)?.max_abs();
        let chart = charts::nil_saddle_chart_residual(theta, 201)?;
        let shift = charts::nil_saddle_translation_defect(theta, &[(0.3, -1.2, 0.7), (-2.0, 0.5, 3.0)]);
        println!(
            "θ = {theta:3.1}: |twin − f^θ| {:7.3} h², chart metric {:6.3} h², translation defect {shift:.1e}",
            err / h2,
            chart.h2_constant()
        );
    }
    Ok(())
}
