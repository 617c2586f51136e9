//! Acceptance criteria, one test per criterion, one PASS/FAIL line per check.
//!
//! Run with `cargo test --release --test acceptance -- --nocapture --test-threads 1`
//! to see the lines in order.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twinsurf::bcv::{base_curvature_identity_residual, delta, frame_orthonormality_error, BcvParams, BcvPoint};
use twinsurf::catalog::lam::hessian_zero_residuals;
use twinsurf::catalog::ode::{integrate_radial_ode, NilCatenoidProfile, RadialLaw, RadialOdeSpec, TwoSided};
use twinsurf::catalog::{self, check_pair, list_pairs, PairReport};
use twinsurf::conformal::{build_conformal_chart, reflect_vertical, weierstrass_data, weierstrass_twin_residual};
use twinsurf::numerics::{check_simply_connected, Bounds, Grid2D, MaskSpec};
use twinsurf::twin1::{affine_spacelike_margin, affine_spacelike_region, twin_transform, CmcParams, GraphData};
use twinsurf::twin2::{area_angle, area_angle_with, first_fundamental, lagrange_identity_residual, twin_transform_codim, MultiGraph};
use twinsurf::{Error, ScalarField, Signature};

struct Criterion {
    id: u32,
    ok: bool,
}

impl Criterion {
    fn new(id: u32, title: &str) -> Self {
        println!("== criterion {id}: {title}");
        Criterion { id, ok: true }
    }

    fn check(&mut self, name: &str, pass: bool, detail: String) {
        println!("[{}] C{} {name}: {detail}", if pass { "PASS" } else { "FAIL" }, self.id);
        self.ok &= pass;
    }

    fn finish(self) {
        assert!(self.ok, "criterion {} has failing checks", self.id);
    }
}

/// The pairs named by the closed-form regression criterion.
fn closed_form_pairs() -> Vec<&'static catalog::TwinPair> {
    let named = [
        "helicoid_R3",
        "catenoid_R3",
        "skew_catenoid_R3",
        "scherk_doubly_R3",
        "scherk2_R3",
        "scherk_singly_R3",
        "hyperbolic_cylinder_L3",
        "elliptic_delaunay_L3",
    ];
    list_pairs().iter().filter(|p| named.contains(&p.source)).collect()
}

fn label(r: &PairReport) -> String {
    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    if params.is_empty() {
        format!("{} -> {}", r.source, r.target)
    } else {
        format!("{} -> {} ({})", r.source, r.target, params.join(","))
    }
}

#[test]
fn criterion_1_algebraic_identities() {
    let mut c = Criterion::new(1, "algebraic identities to 1e-12");
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for kappa in [-4.0, -1.0, 0.0, 1.0, 4.0] {
        let mut pts = Vec::with_capacity(1000);
        while pts.len() < 1000 {
            let (x, y) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            if delta(kappa, x, y) > 0.5 {
                pts.push((x, y));
            }
        }
        let r = base_curvature_identity_residual(kappa, &pts).unwrap();
        c.check(&format!("base curvature identity κ={kappa}"), r <= 1e-12, format!("{r:.2e}"));
        let mut worst = 0.0f64;
        for (i, &(x, y)) in pts.iter().enumerate() {
            let signature = if i % 2 == 0 { Signature::Riemannian } else { Signature::Lorentzian };
            let params = BcvParams { kappa, tau: rng.gen_range(-2.0..2.0), signature };
            worst = worst.max(frame_orthonormality_error(&params, &BcvPoint { x, y, z: rng.gen_range(-1.0..1.0) }).unwrap());
        }
        c.check(&format!("frame orthonormality κ={kappa}"), worst <= 1e-12, format!("{worst:.2e}"));
    }
    let g = Arc::new(Grid2D::masked(21, 21, Bounds::square(1.0), &MaskSpec::disk(0.9)).unwrap());
    let mut worst = 0.0f64;
    for n in 1..=5 {
        for _ in 0..4 {
            let fs: Vec<ScalarField> = (0..n)
                .map(|_| {
                    let (a, b, d): (f64, f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    ScalarField::from_fn(&g, move |x, y| a * (b * x).sin() + d * x * y + b * y * y)
                })
                .collect();
            let mg = MultiGraph::new(fs).unwrap();
            let ff = first_fundamental(&mg, Signature::Riemannian).unwrap();
            let aa = area_angle_with(&mg, -1e300).unwrap();
            worst = worst.max(lagrange_identity_residual(&mg, &ff, &aa).unwrap());
        }
    }
    c.check("Lagrange identity, n = 1..5", worst <= 1e-12, format!("{worst:.2e}"));
    let t = start.elapsed().as_secs_f64();
    c.check("runtime", t < 1.0, format!("{t:.3} s"));
    c.finish();
}

#[test]
fn criterion_2_and_3_regression_matrix() {
    let mut c2 = Criterion::new(2, "closed-form twin pairs at 201², error <= 10 h², ratio in [3.2, 4.8]");
    let start = Instant::now();
    let reports: Vec<PairReport> = closed_form_pairs().into_iter().map(|p| check_pair(p, 201).unwrap()).collect();
    let t = start.elapsed().as_secs_f64();
    for r in &reports {
        let h2 = r.h * r.h;
        c2.check(&label(r), r.twin_pass, format!("{:.3e} = {:.2} h²", r.twin_error, r.twin_error / h2));
        let detail = if r.coarse_error.max(r.twin_error) <= catalog::ROUNDOFF_FLOOR {
            format!("exact to roundoff ({:.1e}, {:.1e})", r.coarse_error, r.twin_error)
        } else {
            format!("{:.2}", r.ratio)
        };
        c2.check(&format!("{} order", label(r)), r.ratio_pass, detail);
    }
    c2.check("runtime", t < 30.0, format!("{t:.2} s"));

    let mut c3 = Criterion::new(3, "twin of twin within 20 h² on the regression matrix");
    for r in &reports {
        c3.check(&label(r), r.involution_pass, format!("{:.2} h²", r.involution / (r.h * r.h)));
    }
    let (ok2, ok3) = (c2.ok, c3.ok);
    assert!(ok2 && ok3, "criterion 2: {ok2}, criterion 3: {ok3}");
}

#[test]
fn criterion_4_codimension_dualities() {
    let mut c = Criterion::new(4, "½z² on r <= 0.9 at 201²");
    let g = Arc::new(Grid2D::masked(201, 201, Bounds::square(1.0), &MaskSpec::disk(0.9)).unwrap());
    let h2 = g.h().powi(2);
    let mg = MultiGraph::from_fns(&g, &[&|x, y| 0.5 * (x * x - y * y), &|x, y| x * y]).unwrap();
    let t = twin_transform_codim(&mg).unwrap();
    let d = &t.dualities;
    c.check("maximal system residual <= 20 h²", t.system_report.max_abs <= 20.0 * h2, format!("{:.2} h²", t.system_report.max_abs / h2));
    c.check("Jacobian preservation <= 10 h²", d.jacobian.max_abs <= 10.0 * h2, format!("{:.2} h²", d.jacobian.max_abs / h2));
    let ff = first_fundamental(&mg, Signature::Riemannian).unwrap();
    let fl = first_fundamental(&t.g, Signature::Lorentzian).unwrap();
    let angle = g
        .masked_indices()
        .map(|k| {
            let (x, y) = g.coords(k);
            (ff.omega.at(k) * fl.omega.at(k) - (1.0 - (x * x + y * y).powi(2))).abs()
        })
        .fold(0.0, f64::max);
    c.check("|ω̂ω − (1 − r⁴)| <= 10 h²", angle <= 10.0 * h2, format!("{:.2} h²", angle / h2));
    c.check("conformal equivalence <= 20 h²", d.conformal.max_abs <= 20.0 * h2, format!("{:.2} h²", d.conformal.max_abs / h2));
    c.finish();
}

#[test]
fn criterion_5_conformal_chart() {
    let mut c = Criterion::new(5, "conformal chart: J_Ψ > 2, first-order Weierstrass residuals");
    type Input = (&'static str, Bounds, MaskSpec, Option<(f64, f64)>, Vec<Box<dyn Fn(f64, f64) -> f64>>);
    let inputs: Vec<Input> = vec![
        ("helicoid", Bounds::square(3.0), MaskSpec::SlitAnnulus { r0: 1.0, r1: 3.0 }, Some((2.0, 0.0)), vec![Box::new(|x: f64, y: f64| y.atan2(x))]),
        (
            "catenoid",
            Bounds::square(3.5),
            MaskSpec::SlitAnnulus { r0: 1.5, r1: 3.5 },
            Some((2.5, 0.0)),
            vec![Box::new(|x: f64, y: f64| x.hypot(y).acosh())],
        ),
        (
            "½z²",
            Bounds::square(1.0),
            MaskSpec::disk(0.9),
            None,
            vec![Box::new(|x: f64, y: f64| 0.5 * (x * x - y * y)), Box::new(|x: f64, y: f64| x * y)],
        ),
    ];
    for (name, bounds, mask, anchor, fs) in &inputs {
        let mut prev: Option<(f64, f64)> = None;
        for n in [101, 201] {
            let mut g = Grid2D::masked(n, n, *bounds, mask).unwrap();
            if let Some((x, y)) = anchor {
                g = g.with_anchor_near(*x, *y).unwrap();
            }
            let g = Arc::new(g);
            let refs: Vec<&dyn Fn(f64, f64) -> f64> = fs.iter().map(|f| f.as_ref()).collect();
            let mg = MultiGraph::from_fns(&g, &refs).unwrap();
            let ff = first_fundamental(&mg, Signature::Riemannian).unwrap();
            let chart = build_conformal_chart(&mg, &ff).unwrap();
            let jmin = chart.j_psi.min();
            c.check(&format!("{name} n={n} min J_Ψ > 2"), jmin > 2.0, format!("{jmin:.4}"));
            let twin = twin_transform_codim(&mg).unwrap();
            let wf = weierstrass_data(&chart, &mg, Signature::Riemannian).unwrap();
            let wg = reflect_vertical(&weierstrass_data(&chart, &twin.g, Signature::Lorentzian).unwrap());
            let cur = (wf.nullity_residual().max_abs, weierstrass_twin_residual(&wf, &wg).unwrap().max_abs);
            if let Some(p) = prev {
                for (what, coarse, fine) in [("nullity", p.0, cur.0), ("twin relation", p.1, cur.1)] {
                    let shrink = coarse / fine;
                    let exact = coarse.max(fine) <= catalog::ROUNDOFF_FLOOR;
                    let detail = if exact {
                        format!("exact to roundoff ({coarse:.1e}, {fine:.1e})")
                    } else {
                        format!("{coarse:.2e} -> {fine:.2e}, ×{shrink:.2}")
                    };
                    c.check(&format!("{name} {what} shrink"), exact || shrink >= 1.8, detail);
                }
            }
            prev = Some(cur);
        }
    }
    c.finish();
}

#[test]
fn criterion_6_ode_first_integrals() {
    let mut c = Criterion::new(6, "ODE first integrals and τ = 0 reductions to 1e-8");
    let ell = integrate_radial_ode(&RadialOdeSpec { law: RadialLaw::EllipticDelaunay { tau: 0.5 }, t0: 1.0, t1: 3.0, y0: vec![0.0, -0.5], steps: 4000 }).unwrap();
    let d = ell.first_integral_drift().unwrap();
    c.check("elliptic Delaunay τ=½, μ=1 drift", d <= 1e-8, format!("{d:.2e}"));
    let hyp = TwoSided::new(RadialLaw::HyperbolicDelaunay { tau: 1.0 }, 0.0, vec![2.0, 0.0], -1.0, 1.0, 4000).unwrap();
    let d = hyp.first_integral_drift().unwrap();
    c.check("hyperbolic Delaunay τ=1, λ=2 drift", d <= 1e-8, format!("{d:.2e}"));
    let semi = TwoSided::new(RadialLaw::HyperbolicDelaunay { tau: 1.0 }, 0.0, vec![2.0, 15f64.sqrt()], -0.5, 0.5, 4000).unwrap();
    let d = semi.first_integral_drift().unwrap();
    c.check("semitrough τ=1 drift", d <= 1e-8, format!("{d:.2e}"));

    let ts: Vec<f64> = (0..=200).map(|i| 1.01 + 1.99 * i as f64 / 200.0).collect();
    let cat = NilCatenoidProfile::new(1.0, 0.0, 3.0, 4000).unwrap();
    let e = ts.iter().map(|&t| (cat.rho(t).unwrap() - t.acosh()).abs()).fold(0.0, f64::max);
    c.check("catenoid profile τ=0 vs arccosh on [1.01, 3]", e <= 1e-8, format!("{e:.2e}"));
    let mu = 1.0;
    let sinh_law = integrate_radial_ode(&RadialOdeSpec { law: RadialLaw::EllipticDelaunay { tau: 0.0 }, t0: 1.0, t1: 3.0, y0: vec![0.0, -mu], steps: 4000 }).unwrap();
    let e = ts
        .iter()
        .map(|&t| (sinh_law.component(t, 0).unwrap() + mu * ((t / mu).asinh() - (1.0 / mu).asinh())).abs())
        .fold(0.0, f64::max);
    c.check("elliptic profile τ=0 vs −μ·arcsinh(t/μ)", e <= 1e-8, format!("{e:.2e}"));
    c.finish();
}

#[test]
fn criterion_7_affine_spacelike_region() {
    let mut c = Criterion::new(7, "affine spacelike region in Nil(τ)");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut mismatches, mut unbounded) = (0usize, 0usize);
    for _ in 0..100 {
        let (mu1, mu2, tau): (f64, f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-3.0..3.0));
        let region = affine_spacelike_region(mu1, mu2, tau);
        for _ in 0..200 {
            let (x, y) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let m = affine_spacelike_margin(mu1, mu2, tau, x, y);
            if m.abs() > 1e-9 && region.contains(x, y) != (m > 0.0) {
                mismatches += 1;
            }
        }
        if tau.abs() >= 1e-3 && !region.is_bounded() {
            unbounded += 1;
        }
    }
    c.check("disk agrees with 1 − (μ₁+τy)² − (μ₂−τx)² > 0", mismatches == 0, format!("{mismatches} mismatches in 20000 points"));
    c.check("bounded for |τ| >= 1e-3", unbounded == 0, format!("{unbounded} unbounded of 100"));
    c.finish();
}

#[test]
fn criterion_8_lam_identity() {
    let mut c = Criterion::new(8, "Lam identity at 201², |hessian − divergence| <= 10 h²");
    let g = Arc::new(Grid2D::new(201, 201, Bounds::square(1.0)).unwrap());
    let fs: [(&str, &dyn Fn(f64, f64) -> f64); 3] = [("xy", &|x, y| x * y), ("cosh x", &|x, _| x.cosh()), ("x²+3xy", &|x, y| x * x + 3.0 * x * y)];
    for (name, f) in fs {
        let r = hessian_zero_residuals(&ScalarField::from_fn(&g, f)).unwrap().identity_report().unwrap();
        c.check(name, r.max_abs <= 10.0 * r.h * r.h, format!("{:.3e} = {:.2} h²", r.max_abs, r.h2_constant()));
    }
    c.finish();
}

#[test]
fn criterion_9_negative_tests() {
    let mut c = Criterion::new(9, "negative tests");
    let g = Arc::new(Grid2D::new(101, 101, Bounds::square(1.0)).unwrap());
    let data = GraphData::new(ScalarField::from_fn(&g, |x, _| x * x), CmcParams::minimal_r3()).unwrap();
    let r = twin_transform(&data);
    c.check("non-minimal x² fails the curl test", matches!(r, Err(Error::NotAGradient { .. })), format!("{:?}", r.err().map(|e| e.to_string())));

    let big = Arc::new(Grid2D::masked(101, 101, Bounds::square(1.2), &MaskSpec::disk(1.1)).unwrap());
    let mg = MultiGraph::from_fns(&big, &[&|x, y| 0.5 * (x * x - y * y), &|x, y| x * y]).unwrap();
    let r = area_angle(&mg);
    c.check("½z² on r <= 1.1 fails area_angle", matches!(r, Err(Error::NotAreaDecreasing { .. })), format!("{:?}", r.err().map(|e| e.to_string())));

    let ann = Grid2D::masked(101, 101, Bounds::square(3.0), &MaskSpec::Annulus { r0: 1.0, r1: 3.0 }).unwrap();
    c.check("annulus fails check_simply_connected", !check_simply_connected(&ann), format!("Euler characteristic {}", ann.euler_characteristic()));
    c.finish();
}
