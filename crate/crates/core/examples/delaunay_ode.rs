//! Delaunay-type profiles from their first-integral ODEs.

use twinsurf::catalog::ode::{integrate_radial_ode, NilCatenoidProfile, RadialLaw, RadialOdeSpec, TwoSided};

fn main() -> twinsurf::Result<()> {
    let (tau, mu) = (0.5, 1.0);
    let ell = integrate_radial_ode(&RadialOdeSpec {
        law: RadialLaw::EllipticDelaunay { tau },
        t0: 1.0,
        t1: 3.0,
        y0: vec![0.0, tau - mu],
        steps: 2000,
    })?;
    println!("elliptic Delaunay τ = ½, μ = 1");
    for t in [1.0, 1.5, 2.0, 2.5, 3.0] {
        println!("  ρ({t:.1}) = {:+.10}", ell.component(t, 0)?);
    }
    println!("  first-integral drift {:.2e}", ell.first_integral_drift().unwrap());

    let hyp = TwoSided::new(RadialLaw::HyperbolicDelaunay { tau: 1.0 }, 0.0, vec![2.0, 0.0], -1.0, 1.0, 2000)?;
    println!("hyperbolic Delaunay τ = 1, λ = 2: drift {:.2e}", hyp.first_integral_drift().unwrap());
    let semi = TwoSided::new(RadialLaw::HyperbolicDelaunay { tau: 1.0 }, 0.0, vec![2.0, 15f64.sqrt()], -0.5, 0.5, 2000)?;
    println!("semitrough τ = 1: drift {:.2e}, ρ(±0.5) = {:.6}, {:.6}", semi.first_integral_drift().unwrap(), semi.eval(-0.5)?[0], semi.eval(0.5)?[0]);

    let cat = NilCatenoidProfile::new(1.0, 0.0, 3.0, 2000)?;
    let worst = (0..=100).map(|i| 1.01 + 1.99 * i as f64 / 100.0).map(|t| (cat.rho(t).unwrap() - t.acosh()).abs()).fold(0.0, f64::max);
    println!("catenoid profile with τ = 0 against arccosh: {worst:.2e}");
    Ok(())
}
