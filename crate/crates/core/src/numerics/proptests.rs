use std::sync::Arc;

use proptest::prelude::*;

use super::*;

fn grid() -> Arc<Grid2D> {
    Arc::new(Grid2D::new(41, 41, Bounds::square(1.0)).unwrap())
}

fn smooth() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
}

fn sample(g: &Arc<Grid2D>, (a, b, c, d): (f64, f64, f64, f64)) -> ScalarField {
    ScalarField::from_fn(g, move |x, y| a * (b * x + c * y).sin() + d * x * y * y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gradient_then_potential_recovers_f(p in smooth()) {
        let g = grid();
        let h = g.h();
        let f = sample(&g, p);
        let phi = integrate_potential(&gradient(&f).unwrap()).unwrap().phi;
        let err = phi.sub(&f.anchored()).unwrap().max_abs();
        prop_assert!(err <= 20.0 * h * h, "err {err:e}");
    }

    #[test]
    fn curl_of_gradient_is_small(p in smooth()) {
        let g = grid();
        let h = g.h();
        let c = curl_residual(&gradient(&sample(&g, p)).unwrap()).unwrap();
        prop_assert!(c.max_abs() <= 20.0 * h * h);
    }

    #[test]
    fn potential_then_gradient_recovers_v(p in smooth()) {
        let g = grid();
        let h = g.h();
        let (a, b, c, d) = p;
        let v = VectorField2::from_fn(&g, move |x, y| {
            let cs = (b * x + c * y).cos();
            (a * b * cs + d * y * y, a * c * cs + 2.0 * d * x * y)
        });
        let pot = integrate_potential(&v).unwrap();
        let back = gradient(&pot.phi).unwrap();
        let err = back.sub(&v).unwrap().max_component_abs().max_abs();
        prop_assert!(err <= 20.0 * h * h, "err {err:e}");
        prop_assert!(pot.path_discrepancy <= 20.0 * h * h);
    }

    #[test]
    fn report_ordering(p in smooth()) {
        let r = ResidualReport::of(&sample(&grid(), p));
        prop_assert!(r.max_abs >= r.mean_abs && r.mean_abs >= 0.0 && r.l2 >= 0.0);
        prop_assert!(r.l2 <= r.max_abs * (1.0 + 1e-12));
    }
}
