//! The helicoid in R³ and its maximal twin in L³, compared with the Lorentz
//! catenoid and mapped back.

use twinsurf::catalog::{self, expected_twin};
use twinsurf::twin1::{cmc_residual, involutivity_check, twin_transform};
use twinsurf::ResidualReport;

fn main() -> twinsurf::Result<()> {
    for n in [101, 201] {
        let data = catalog::eval_example::<&str>("helicoid_R3", &[], n)?;
        let h2 = data.grid().h().powi(2);
        let own = ResidualReport::of(&cmc_residual(&data)?);
        let t = twin_transform(&data)?;
        let pair = catalog::pairs_from("helicoid_R3").next().expect("registered");
        let err = t.g.sub(&expected_twin(pair, data.grid())?)?.max_abs();
        let inv = involutivity_check(&data)?;
        println!("n = {n}");
        println!("  minimal residual   {:8.3} h²", own.max_abs / h2);
        println!("  curl of W          {:8.3} h²", t.curl_report.max_abs / h2);
        println!("  |g + arcsinh r|    {:8.3} h²", err / h2);
        println!("  maximal residual   {:8.3} h²", t.dual_pde_report.max_abs / h2);
        println!("  spacelike margin   {:8.4}", t.spacelike_margin);
        println!("  twin of twin       {:8.3} h²", inv.max_abs / h2);
    }
    Ok(())
}
