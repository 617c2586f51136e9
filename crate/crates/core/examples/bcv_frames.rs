//! Orthonormal frames of E(κ, τ) and L(κ, τ), and the base curvature identity.

use twinsurf::bcv::{base_curvature_identity_residual, frame_orthonormality_error, BcvParams, BcvPoint};
use twinsurf::Signature;

fn main() -> twinsurf::Result<()> {
    let pts: Vec<(f64, f64)> = (0..50).map(|i| (0.7 * (i as f64 * 0.37).sin(), 0.7 * (i as f64 * 0.91).cos())).collect();
    for kappa in [-4.0, -1.0, 0.0, 1.0, 4.0] {
        let id = base_curvature_identity_residual(kappa, &pts)?;
        let mut frame = 0.0f64;
        for signature in [Signature::Riemannian, Signature::Lorentzian] {
            let params = BcvParams { kappa, tau: 0.75, signature };
            for &(x, y) in &pts {
                frame = frame.max(frame_orthonormality_error(&params, &BcvPoint { x, y, z: 0.3 })?);
            }
        }
        println!("κ = {kappa:+.0}: base identity {id:.1e}, frame error {frame:.1e}");
    }
    Ok(())
}
