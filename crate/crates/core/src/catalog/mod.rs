//! Named example surfaces, their twins, and the regression matrix over them.
//!
//! Every example is a height function over a planar domain together with the
//! CMC parameters of the equation it solves. Pairs record which example the
//! twin transform should reproduce, up to the congruence `g ↦ s·g(x+a, y+b)`
//! picked out by the sign of the rotated flux and the branch conventions.

pub mod charts;
pub mod lam;
pub mod mesh;
pub mod ode;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use serde::Serialize;

use crate::bcv;
use crate::error::{Error, Result};
use crate::numerics::{Bounds, Grid2D, MaskSpec, ResidualReport, ScalarField};
use crate::twin1::{cmc_residual, involutivity_check, inverse_twin_transform, twin_transform, CmcParams, GraphData};
use crate::Signature;
use ode::{integrate_radial_ode, NilCatenoidProfile, RadialLaw, RadialOdeSpec, TwoSided};

/// RK4 steps used for every ODE-backed example.
pub const ODE_STEPS: usize = 4000;

/// Twin errors below this are roundoff; no convergence order is read off them.
pub const ROUNDOFF_FLOOR: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Example {
    pub name: &'static str,
    pub summary: &'static str,
    /// Free parameters with their defaults.
    pub params: &'static [(&'static str, f64)],
    pub expected_twin: Option<&'static str>,
}

const NONE: &[(&str, f64)] = &[];

static EXAMPLES: &[Example] = &[
    Example { name: "helicoid_R3", summary: "atan2(y, x), minimal in R³", params: NONE, expected_twin: Some("lorentz_catenoid_L3") },
    Example { name: "lorentz_catenoid_L3", summary: "arcsinh(r), maximal in L³", params: NONE, expected_twin: Some("helicoid_R3") },
    Example { name: "catenoid_R3", summary: "arccosh(r), minimal in R³", params: NONE, expected_twin: Some("helicoid_L3") },
    Example { name: "helicoid_L3", summary: "atan2(y, x), maximal in L³ for r > 1", params: NONE, expected_twin: Some("catenoid_R3") },
    Example { name: "skew_catenoid_R3", summary: "√(cosh²y − x²), minimal in R³", params: NONE, expected_twin: Some("helicoid2_L3") },
    Example { name: "helicoid2_L3", summary: "x·tanh y, maximal in L³", params: NONE, expected_twin: Some("skew_catenoid_R3") },
    Example { name: "scherk_doubly_R3", summary: "ln(cos y / cos x), minimal in R³", params: NONE, expected_twin: Some("scherk_triply_L3") },
    Example { name: "scherk_triply_L3", summary: "arcsin(sin x sin y), maximal in L³", params: NONE, expected_twin: Some("scherk_doubly_R3") },
    Example { name: "scherk2_R3", summary: "arccos(eˣ cos y), the branch of cos z = eˣ cos y in (0, π)", params: NONE, expected_twin: Some("scherk2_L3") },
    Example { name: "scherk2_L3", summary: "arcsinh(eˣ cos y), maximal in L³", params: NONE, expected_twin: Some("scherk2_R3") },
    Example { name: "scherk_singly_R3", summary: "arcsin(sinh x sinh y), minimal in R³", params: NONE, expected_twin: Some("scherk_singly_L3") },
    Example { name: "scherk_singly_L3", summary: "ln(cosh y / cosh x), maximal in L³", params: NONE, expected_twin: Some("scherk_singly_R3") },
    Example {
        name: "nil_catenoid",
        summary: "λρ(r), rotational minimal graph in Nil(τ)",
        params: &[("lambda", 1.0), ("tau", 0.5)],
        expected_twin: Some("helicoidal_L3"),
    },
    Example {
        name: "helicoidal_L3",
        summary: "λ·atan2(y, x) + τh(r), spacelike CMC-τ in L³",
        params: &[("lambda", 1.0), ("tau", 0.5)],
        expected_twin: Some("nil_catenoid"),
    },
    Example { name: "nil_helicoid", summary: "μ·atan2(y, x), minimal in Nil(τ)", params: &[("mu", 1.0), ("tau", 0.5)], expected_twin: Some("elliptic_delaunay_L3") },
    Example {
        name: "elliptic_delaunay_L3",
        summary: "ρ(r) with ρ'/√(1−ρ'²) = τr − μ/r, CMC-τ in L³",
        params: &[("mu", 1.0), ("tau", 0.5)],
        expected_twin: Some("nil_helicoid"),
    },
    Example {
        name: "hyperbolic_delaunay_L3",
        summary: "√(x² + ρ(y)²) with τρ² − ρ/√(1−ρ'²) = λ, CMC-τ in L³",
        params: &[("lambda", 2.0), ("tau", 1.0)],
        expected_twin: Some("hyperbolic_delaunay_twin"),
    },
    Example {
        name: "hyperbolic_delaunay_twin",
        summary: "(ρ'/√(1−ρ'²) − τy)·x, minimal in Nil(τ)",
        params: &[("lambda", 2.0), ("tau", 1.0)],
        expected_twin: Some("hyperbolic_delaunay_L3"),
    },
    Example { name: "semitrough", summary: "hyperbolic Delaunay surface with λ = −4/τ", params: &[("tau", 1.0)], expected_twin: Some("semitrough_twin") },
    Example { name: "semitrough_twin", summary: "minimal twin of the semitrough in Nil(τ)", params: &[("tau", 1.0)], expected_twin: Some("semitrough") },
    Example {
        name: "hyperbolic_cylinder_L3",
        summary: "√(y²+1)/cosh θ + x·tanh θ, CMC-½ in L³",
        params: &[("theta", 0.0)],
        expected_twin: Some("nil_saddle"),
    },
    Example {
        name: "nil_saddle",
        summary: "½xy − (sinh θ/2)[arcsinh y + y√(1+y²)], entire minimal graph in Nil(½)",
        params: &[("theta", 0.0)],
        expected_twin: Some("hyperbolic_cylinder_L3"),
    },
    Example { name: "gauss_lift_semitrough", summary: "−arcsinh(δ/x) with δ = 1 − r²/4, minimal in H²×R", params: NONE, expected_twin: None },
];

pub fn list_examples() -> &'static [Example] {
    EXAMPLES
}

pub fn find_example(name: &str) -> Result<&'static Example> {
    EXAMPLES.iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownExample(name.to_string()))
}

/// Resolved free parameters of one example.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Params(BTreeMap<String, f64>);

impl Params {
    pub fn get(&self, key: &str) -> f64 {
        self.0.get(key).copied().unwrap_or(f64::NAN)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl Example {
    /// Defaults with `overrides` applied; unknown keys are rejected.
    pub fn resolve<S: AsRef<str>>(&self, overrides: &[(S, f64)]) -> Result<Params> {
        let mut map: BTreeMap<String, f64> = self.params.iter().map(|&(k, v)| (k.to_string(), v)).collect();
        for (k, v) in overrides {
            let k = k.as_ref();
            match map.get_mut(k) {
                Some(slot) => *slot = *v,
                None => return Err(Error::Parse(format!("`{}` has no parameter `{k}`", self.name))),
            }
        }
        Ok(Params(map))
    }

    pub fn ambient(&self, p: &Params) -> CmcParams {
        use Signature::{Lorentzian as L, Riemannian as R};
        match self.name {
            "helicoid_R3" | "catenoid_R3" | "skew_catenoid_R3" | "scherk_doubly_R3" | "scherk2_R3" | "scherk_singly_R3" => CmcParams::minimal_r3(),
            "lorentz_catenoid_L3" | "helicoid_L3" | "helicoid2_L3" | "scherk_triply_L3" | "scherk2_L3" | "scherk_singly_L3" => CmcParams::maximal_l3(),
            "nil_catenoid" | "nil_helicoid" | "hyperbolic_delaunay_twin" | "semitrough_twin" => CmcParams::new(0.0, p.get("tau"), 0.0, R),
            "helicoidal_L3" | "elliptic_delaunay_L3" | "hyperbolic_delaunay_L3" | "semitrough" => CmcParams::new(0.0, 0.0, p.get("tau"), L),
            "hyperbolic_cylinder_L3" => CmcParams::new(0.0, 0.0, 0.5, L),
            "nil_saddle" => CmcParams::new(0.0, 0.5, 0.0, R),
            "gauss_lift_semitrough" => CmcParams::new(-1.0, 0.0, 0.0, R),
            other => unreachable!("unregistered example {other}"),
        }
    }

    pub fn domain(&self, p: &Params) -> DomainSpec {
        let slit = |r0: f64, r1: f64| DomainSpec {
            bounds: Bounds::square(r1),
            mask: MaskSpec::SlitAnnulus { r0, r1 },
            anchor: Some((0.5 * (r0 + r1), 0.0)),
        };
        let rect = |bounds: Bounds| DomainSpec { bounds, mask: MaskSpec::Rect, anchor: None };
        match self.name {
            "helicoid_R3" | "lorentz_catenoid_L3" | "nil_helicoid" | "elliptic_delaunay_L3" => slit(1.0, 3.0),
            "catenoid_R3" | "helicoid_L3" => slit(1.5, 3.5),
            "nil_catenoid" | "helicoidal_L3" => {
                let l = p.get("lambda").max(1.0 / 3.0);
                slit(1.5 * l, 3.5 * l)
            }
            "skew_catenoid_R3" | "helicoid2_L3" => rect(Bounds::new(-0.8, 0.8, -1.0, 1.0)),
            "scherk_doubly_R3" => rect(Bounds::square(1.2)),
            // the triply periodic graph turns lightlike at the corners of (±π/2)²
            "scherk_triply_L3" => rect(Bounds::square(0.8)),
            "scherk2_R3" | "scherk2_L3" => rect(Bounds::new(-1.5, -0.3, -1.0, 1.0)),
            "scherk_singly_R3" | "scherk_singly_L3" => rect(Bounds::square(0.6)),
            "hyperbolic_delaunay_L3" | "hyperbolic_delaunay_twin" => rect(Bounds::square(1.0)),
            "semitrough" | "semitrough_twin" => rect(Bounds::new(-1.0, 1.0, -0.5, 0.5)),
            "hyperbolic_cylinder_L3" | "nil_saddle" => rect(Bounds::square(2.0)),
            "gauss_lift_semitrough" => rect(Bounds::new(0.4, 1.2, -0.6, 0.6)),
            other => unreachable!("unregistered example {other}"),
        }
    }

    /// Height evaluator valid on `dom`; ODE-backed examples integrate their
    /// profile over the radial or vertical range the domain needs.
    pub fn evaluator(&self, p: &Params, dom: &DomainSpec) -> Result<Evaluator> {
        let b = dom.bounds;
        let r_max = [b.xmin.hypot(b.ymin), b.xmin.hypot(b.ymax), b.xmax.hypot(b.ymin), b.xmax.hypot(b.ymax)]
            .into_iter()
            .fold(0.0, f64::max);
        let closed = |f: fn(f64, f64, &Params) -> f64| -> Evaluator {
            let p = p.clone();
            Box::new(move |x, y| Ok(f(x, y, &p)))
        };
        let ev: Evaluator = match self.name {
            "helicoid_R3" | "helicoid_L3" => closed(|x, y, _| y.atan2(x)),
            "lorentz_catenoid_L3" => closed(|x, y, _| x.hypot(y).asinh()),
            "catenoid_R3" => closed(|x, y, _| x.hypot(y).acosh()),
            "skew_catenoid_R3" => closed(|x, y, _| (y.cosh().powi(2) - x * x).sqrt()),
            "helicoid2_L3" => closed(|x, y, _| x * y.tanh()),
            "scherk_doubly_R3" => closed(|x, y, _| (y.cos() / x.cos()).ln()),
            "scherk_triply_L3" => closed(|x, y, _| (x.sin() * y.sin()).asin()),
            "scherk2_R3" => closed(|x, y, _| (x.exp() * y.cos()).acos()),
            "scherk2_L3" => closed(|x, y, _| (x.exp() * y.cos()).asinh()),
            "scherk_singly_R3" => closed(|x, y, _| (x.sinh() * y.sinh()).asin()),
            "scherk_singly_L3" => closed(|x, y, _| (y.cosh() / x.cosh()).ln()),
            "nil_helicoid" => closed(|x, y, p| p.get("mu") * y.atan2(x)),
            "hyperbolic_cylinder_L3" => closed(|x, y, p| {
                let t = p.get("theta");
                (y * y + 1.0).sqrt() / t.cosh() + t.tanh() * x
            }),
            "nil_saddle" => closed(|x, y, p| nil_saddle(p.get("theta"), x, y)),
            "gauss_lift_semitrough" => closed(|x, y, _| -(bcv::delta(-1.0, x, y) / x).asinh()),
            "nil_catenoid" | "helicoidal_L3" => {
                let (lambda, tau) = (p.get("lambda"), p.get("tau"));
                let prof = NilCatenoidProfile::new(lambda, tau, r_max * (1.0 + 1e-9), ODE_STEPS)?;
                if self.name == "nil_catenoid" {
                    Box::new(move |x, y| Ok(lambda * prof.rho(x.hypot(y))?))
                } else {
                    Box::new(move |x, y| Ok(lambda * y.atan2(x) + tau * prof.h(x.hypot(y))?))
                }
            }
            "elliptic_delaunay_L3" => {
                let (mu, tau) = (p.get("mu"), p.get("tau"));
                let t0 = match dom.mask {
                    MaskSpec::SlitAnnulus { r0, .. } | MaskSpec::Annulus { r0, .. } if r0 > 0.0 => r0,
                    _ => return Err(Error::Domain("elliptic Delaunay profile needs an annulus about the origin".into())),
                };
                let tr = integrate_radial_ode(&RadialOdeSpec {
                    law: RadialLaw::EllipticDelaunay { tau },
                    t0,
                    t1: r_max * (1.0 + 1e-9),
                    y0: vec![0.0, tau * t0 - mu / t0],
                    steps: ODE_STEPS,
                })?;
                Box::new(move |x, y| tr.component(x.hypot(y), 0))
            }
            "hyperbolic_delaunay_L3" | "hyperbolic_delaunay_twin" | "semitrough" | "semitrough_twin" => {
                let tau = p.get("tau");
                let prof = delaunay_profile(self.name, p, b.ymin.min(-0.1), b.ymax.max(0.1))?;
                if self.name.ends_with("_twin") {
                    Box::new(move |x, y| Ok((prof.eval(y)?[1] - tau * y) * x))
                } else {
                    Box::new(move |x, y| Ok(x.hypot(prof.eval(y)?[0])))
                }
            }
            other => unreachable!("unregistered example {other}"),
        };
        Ok(ev)
    }
}

pub type Evaluator = Box<dyn Fn(f64, f64) -> Result<f64> + Send + Sync>;

/// `f^θ(x, y)`.
pub fn nil_saddle(theta: f64, x: f64, y: f64) -> f64 {
    0.5 * x * y - 0.5 * theta.sinh() * (y.asinh() + y * (1.0 + y * y).sqrt())
}

/// `(ρ, u)` over `[lo, hi]` from the symmetric start at `y = 0`.
fn delaunay_profile(name: &str, p: &Params, lo: f64, hi: f64) -> Result<TwoSided> {
    let tau = p.get("tau");
    if tau <= 0.0 {
        return Err(Error::Domain(format!("{name} needs τ > 0")));
    }
    let y0 = if name.starts_with("semitrough") {
        // ρ₀ = 2/τ gives √(1+u₀²) = (τρ₀² − λ)/ρ₀ = 4 for λ = −4/τ
        vec![2.0 / tau, 15f64.sqrt()]
    } else {
        let disc = 1.0 + 4.0 * tau * p.get("lambda");
        if disc < 0.0 {
            return Err(Error::Domain("no profile with a turning point: 1 + 4τλ < 0".into()));
        }
        vec![(1.0 + disc.sqrt()) / (2.0 * tau), 0.0]
    };
    TwoSided::new(RadialLaw::HyperbolicDelaunay { tau }, 0.0, y0, lo, hi, ODE_STEPS)
}

/// Mask recipe with an optional preferred anchor.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainSpec {
    pub bounds: Bounds,
    pub mask: MaskSpec,
    pub anchor: Option<(f64, f64)>,
}

impl DomainSpec {
    pub fn grid(&self, nx: usize, ny: usize) -> Result<Arc<Grid2D>> {
        let g = Grid2D::masked(nx, ny, self.bounds, &self.mask)?;
        Ok(Arc::new(match self.anchor {
            Some((x, y)) => g.with_anchor_near(x, y)?,
            None => g,
        }))
    }
}

/// Samples an example on `grid`, which should lie inside its domain.
pub fn eval_on(ex: &Example, p: &Params, grid: &Arc<Grid2D>) -> Result<GraphData> {
    let b = grid.bounds();
    let dom = DomainSpec { bounds: b, ..ex.domain(p) };
    let ev = ex.evaluator(p, &dom)?;
    let mut values = vec![0.0; grid.len()];
    for k in grid.masked_indices() {
        let (x, y) = grid.coords(k);
        let v = ev(x, y)?;
        if !v.is_finite() {
            return Err(Error::Domain(format!("{} is not finite at ({x}, {y})", ex.name)));
        }
        values[k] = v;
    }
    GraphData::new(ScalarField::from_values(grid, values)?, ex.ambient(p))
}

/// Samples an example on an `n × n` grid over its own domain.
pub fn eval_example<S: AsRef<str>>(name: &str, overrides: &[(S, f64)], n: usize) -> Result<GraphData> {
    let ex = find_example(name)?;
    let p = ex.resolve(overrides)?;
    let grid = ex.domain(&p).grid(n, n)?;
    eval_on(ex, &p, &grid)
}

/// The example's own equation residual on an `n × n` grid.
pub fn self_check(name: &str, n: usize) -> Result<ResidualReport> {
    let data = eval_example::<&str>(name, &[], n)?;
    Ok(ResidualReport::of(&cmc_residual(&data)?.abs()))
}

/// A registered twin pair: the twin of `source` equals `sign·target(x+a, y+b)`
/// up to an additive constant.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TwinPair {
    pub source: &'static str,
    pub target: &'static str,
    pub params: &'static [(&'static str, f64)],
    pub sign: f64,
    pub shift: (f64, f64),
}

const fn pair(source: &'static str, target: &'static str, sign: f64) -> TwinPair {
    TwinPair { source, target, params: NONE, sign, shift: (0.0, 0.0) }
}

static PAIRS: &[TwinPair] = &[
    pair("helicoid_R3", "lorentz_catenoid_L3", -1.0),
    pair("lorentz_catenoid_L3", "helicoid_R3", -1.0),
    pair("catenoid_R3", "helicoid_L3", 1.0),
    pair("skew_catenoid_R3", "helicoid2_L3", -1.0),
    pair("scherk_doubly_R3", "scherk_triply_L3", 1.0),
    TwinPair { source: "scherk2_R3", target: "scherk2_L3", params: NONE, sign: 1.0, shift: (0.0, FRAC_PI_2) },
    pair("scherk_singly_R3", "scherk_singly_L3", 1.0),
    TwinPair { source: "hyperbolic_cylinder_L3", target: "nil_saddle", params: &[("theta", 0.0)], sign: 1.0, shift: (0.0, 0.0) },
    TwinPair { source: "hyperbolic_cylinder_L3", target: "nil_saddle", params: &[("theta", 1.0)], sign: 1.0, shift: (0.0, 0.0) },
    TwinPair { source: "elliptic_delaunay_L3", target: "nil_helicoid", params: &[("mu", 1.0), ("tau", 0.5)], sign: 1.0, shift: (0.0, 0.0) },
    pair("nil_catenoid", "helicoidal_L3", 1.0),
    pair("hyperbolic_delaunay_L3", "hyperbolic_delaunay_twin", 1.0),
    pair("semitrough", "semitrough_twin", 1.0),
];

pub fn list_pairs() -> &'static [TwinPair] {
    PAIRS
}

/// Pairs whose source is `name`.
pub fn pairs_from(name: &str) -> impl Iterator<Item = &'static TwinPair> + '_ {
    PAIRS.iter().filter(move |p| p.source == name)
}

/// The congruence under which the twin of something should match `target`.
pub fn pair_for_target(target: &str) -> Result<&'static TwinPair> {
    find_example(target)?;
    PAIRS
        .iter()
        .find(|p| p.target == target)
        .ok_or_else(|| Error::UnknownExample(format!("{target} (no registered pair produces it)")))
}

/// Target sampled as `sign·target(x+a, y+b)` on `grid`, anchored at zero.
pub fn expected_twin(pair: &TwinPair, grid: &Arc<Grid2D>) -> Result<ScalarField> {
    expected_twin_with::<&str>(pair, &[], grid)
}

/// As [`expected_twin`], with parameter overrides on top of the pair's own.
pub fn expected_twin_with<S: AsRef<str>>(pair: &TwinPair, overrides: &[(S, f64)], grid: &Arc<Grid2D>) -> Result<ScalarField> {
    let ex = find_example(pair.target)?;
    let mut all: Vec<(&str, f64)> = pair.params.to_vec();
    all.extend(overrides.iter().map(|(k, v)| (k.as_ref(), *v)));
    let p = ex.resolve(&all)?;
    let b = grid.bounds();
    let (a, c) = pair.shift;
    let dom = DomainSpec { bounds: Bounds::new(b.xmin + a, b.xmax + a, b.ymin + c, b.ymax + c), ..ex.domain(&p) };
    let ev = ex.evaluator(&p, &dom)?;
    let mut values = vec![0.0; grid.len()];
    for k in grid.masked_indices() {
        let (x, y) = grid.coords(k);
        values[k] = pair.sign * ev(x + a, y + c)?;
    }
    Ok(ScalarField::from_values(grid, values)?.anchored())
}

/// Twin of `data` in whichever direction its signature calls for.
pub fn twin_of(data: &GraphData) -> Result<ScalarField> {
    Ok(match data.params.epsilon {
        Signature::Riemannian => twin_transform(data)?.g,
        Signature::Lorentzian => inverse_twin_transform(data)?.g,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub source: &'static str,
    pub target: &'static str,
    pub params: Params,
    pub n: usize,
    pub h: f64,
    pub twin_error: f64,
    pub coarse_error: f64,
    pub ratio: f64,
    pub involution: f64,
    pub twin_pass: bool,
    pub ratio_pass: bool,
    pub involution_pass: bool,
}

impl PairReport {
    pub fn pass(&self) -> bool {
        self.twin_pass && self.ratio_pass && self.involution_pass
    }
}

/// Twin error and involution defect on `n × n`, plus the error on the grid
/// with doubled spacing for the observed order.
pub fn check_pair(pair: &TwinPair, n: usize) -> Result<PairReport> {
    let ex = find_example(pair.source)?;
    let p = ex.resolve(pair.params)?;
    let err_at = |n: usize| -> Result<(f64, GraphData)> {
        let grid = ex.domain(&p).grid(n, n)?;
        let data = eval_on(ex, &p, &grid)?;
        let g = twin_of(&data)?;
        let err = g.sub(&expected_twin(pair, &grid)?)?.max_abs();
        Ok((err, data))
    };
    let (twin_error, data) = err_at(n)?;
    let (coarse_error, _) = err_at((n + 1) / 2)?;
    let involution = involutivity_check(&data)?.max_abs;
    let h = data.grid().h();
    let ratio = coarse_error / twin_error;
    Ok(PairReport {
        source: pair.source,
        target: pair.target,
        params: p,
        n,
        h,
        twin_error,
        coarse_error,
        ratio,
        involution,
        twin_pass: twin_error <= 10.0 * h * h,
        ratio_pass: (3.2..=4.8).contains(&ratio) || coarse_error.max(twin_error) <= ROUNDOFF_FLOOR,
        involution_pass: involution <= 20.0 * h * h,
    })
}
