//! Radial profile ODEs: classical RK4 with cubic Hermite dense output.
//!
//! Laws whose derivative blows up at the start point are integrated in a
//! regularising variable instead (`t = λ cosh v` for the catenoid profiles),
//! so every law here has a finite right-hand side on its closed interval.

use crate::error::{Error, Result};

/// Right-hand sides of the profile equations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RadialLaw {
    /// State `(ρ, h)` in `v` with `t = λ cosh v`:
    /// `ρ_v = √(τ²λ²cosh²v + 1)`, `h_v = λ²sinh²v / √(τ²λ²cosh²v + 1)`.
    NilCatenoid { lambda: f64, tau: f64 },
    /// `h' = t/√(τ²t² + 1)`, the `λ = 0` limit of the `h` profile.
    NilCatenoidAxis { tau: f64 },
    /// State `(ρ, u)` with `u = ρ'/√(1−ρ'²)`: `ρ' = u/√(1+u²)`, `u' = 2τ − u/t`.
    /// First integral `t(τt − u) = μ`.
    EllipticDelaunay { tau: f64 },
    /// State `(ρ, u)` in `y`: `ρ' = u/√(1+u²)`, `u' = 2τ − √(1+u²)/ρ`.
    /// First integral `τρ² − ρ√(1+u²) = λ`.
    HyperbolicDelaunay { tau: f64 },
    /// `w' = √(τ²λ²cosh²w + 1)`.
    CatenoidChart { lambda: f64, tau: f64 },
}

impl RadialLaw {
    pub fn dim(&self) -> usize {
        match self {
            RadialLaw::NilCatenoidAxis { .. } | RadialLaw::CatenoidChart { .. } => 1,
            _ => 2,
        }
    }

    pub fn rhs(&self, t: f64, y: &[f64]) -> Vec<f64> {
        match *self {
            RadialLaw::NilCatenoid { lambda, tau } => {
                let s = (tau * tau * lambda * lambda * t.cosh().powi(2) + 1.0).sqrt();
                vec![s, (lambda * t.sinh()).powi(2) / s]
            }
            RadialLaw::NilCatenoidAxis { tau } => vec![t / (tau * tau * t * t + 1.0).sqrt()],
            RadialLaw::EllipticDelaunay { tau } => {
                let u = y[1];
                vec![u / (1.0 + u * u).sqrt(), 2.0 * tau - u / t]
            }
            RadialLaw::HyperbolicDelaunay { tau } => {
                let (rho, u) = (y[0], y[1]);
                let s = (1.0 + u * u).sqrt();
                vec![u / s, 2.0 * tau - s / rho]
            }
            RadialLaw::CatenoidChart { lambda, tau } => {
                vec![(tau * tau * lambda * lambda * y[0].cosh().powi(2) + 1.0).sqrt()]
            }
        }
    }

    /// Conserved quantity, for laws that have one.
    pub fn first_integral(&self, t: f64, y: &[f64]) -> Option<f64> {
        match *self {
            RadialLaw::EllipticDelaunay { tau } => Some(t * (tau * t - y[1])),
            RadialLaw::HyperbolicDelaunay { tau } => Some(tau * y[0] * y[0] - y[0] * (1.0 + y[1] * y[1]).sqrt()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialOdeSpec {
    pub law: RadialLaw,
    pub t0: f64,
    /// May lie on either side of `t0`.
    pub t1: f64,
    pub y0: Vec<f64>,
    pub steps: usize,
}

/// Tabulated solution with derivatives, interpolated by cubic Hermite pieces.
#[derive(Clone, Debug)]
pub struct Trajectory {
    law: RadialLaw,
    t: Vec<f64>,
    y: Vec<Vec<f64>>,
    dy: Vec<Vec<f64>>,
}

pub fn integrate_radial_ode(spec: &RadialOdeSpec) -> Result<Trajectory> {
    let dim = spec.law.dim();
    if spec.y0.len() != dim {
        return Err(Error::Invariant(format!("initial state has {} entries, law needs {dim}", spec.y0.len())));
    }
    if spec.steps == 0 || !(spec.t1 - spec.t0).is_finite() || spec.t1 == spec.t0 {
        return Err(Error::Invariant("empty integration interval".into()));
    }
    let h = (spec.t1 - spec.t0) / spec.steps as f64;
    let f = |t: f64, y: &[f64]| -> Result<Vec<f64>> {
        let d = spec.law.rhs(t, y);
        if d.iter().all(|v| v.is_finite()) {
            Ok(d)
        } else {
            Err(Error::Singularity(format!("right-hand side not finite at t = {t}")))
        }
    };
    let axpy = |y: &[f64], a: f64, k: &[f64]| -> Vec<f64> { y.iter().zip(k).map(|(u, v)| u + a * v).collect() };

    let mut ts = vec![spec.t0];
    let mut ys = vec![spec.y0.clone()];
    let mut dys = vec![f(spec.t0, &spec.y0)?];
    for n in 0..spec.steps {
        let t = spec.t0 + n as f64 * h;
        let y = &ys[n];
        let k1 = &dys[n];
        let k2 = f(t + 0.5 * h, &axpy(y, 0.5 * h, k1))?;
        let k3 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k2))?;
        let k4 = f(t + h, &axpy(y, h, &k3))?;
        let next: Vec<f64> = (0..dim).map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect();
        let tn = spec.t0 + (n + 1) as f64 * h;
        let dn = f(tn, &next)?;
        ts.push(tn);
        ys.push(next);
        dys.push(dn);
    }
    Ok(Trajectory { law: spec.law, t: ts, y: ys, dy: dys })
}

impl Trajectory {
    pub fn law(&self) -> RadialLaw {
        self.law
    }

    /// `(min, max)` of the covered interval.
    pub fn range(&self) -> (f64, f64) {
        let (a, b) = (self.t[0], *self.t.last().unwrap());
        (a.min(b), a.max(b))
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.t.iter().copied().zip(self.y.iter().map(|v| v.as_slice()))
    }

    /// State at `t` by cubic Hermite interpolation on the enclosing step.
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        let (lo, hi) = self.range();
        let slack = 1e-12 * (hi - lo).max(1.0);
        if !(t >= lo - slack && t <= hi + slack) {
            return Err(Error::Domain(format!("t = {t} outside the integrated interval [{lo}, {hi}]")));
        }
        let n = self.t.len() - 1;
        let h = self.t[1] - self.t[0];
        let s = ((t - self.t[0]) / h).clamp(0.0, n as f64);
        let i = (s.floor() as usize).min(n - 1);
        let u = s - i as f64;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * u) * (1.0 - u).powi(2),
            u * (1.0 - u).powi(2),
            u * u * (3.0 - 2.0 * u),
            u * u * (u - 1.0),
        );
        Ok((0..self.y[0].len())
            .map(|c| h00 * self.y[i][c] + h10 * h * self.dy[i][c] + h01 * self.y[i + 1][c] + h11 * h * self.dy[i + 1][c])
            .collect())
    }

    pub fn component(&self, t: f64, c: usize) -> Result<f64> {
        Ok(self.eval(t)?[c])
    }

    /// `max |I(t) − I(t₀)|` over the stored nodes, if the law has a first integral.
    pub fn first_integral_drift(&self) -> Option<f64> {
        let i0 = self.law.first_integral(self.t[0], &self.y[0])?;
        Some(
            self.nodes()
                .filter_map(|(t, y)| self.law.first_integral(t, y))
                .map(|i| (i - i0).abs())
                .fold(0.0, f64::max),
        )
    }
}

/// Two trajectories from a common start, one each way; evaluates on the union.
#[derive(Clone, Debug)]
pub struct TwoSided {
    pub backward: Trajectory,
    pub forward: Trajectory,
}

impl TwoSided {
    pub fn new(law: RadialLaw, t0: f64, y0: Vec<f64>, lo: f64, hi: f64, steps_per_side: usize) -> Result<Self> {
        let side = |t1| integrate_radial_ode(&RadialOdeSpec { law, t0, t1, y0: y0.clone(), steps: steps_per_side });
        Ok(TwoSided { backward: side(lo)?, forward: side(hi)? })
    }

    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        if t < self.forward.range().0 {
            self.backward.eval(t)
        } else {
            self.forward.eval(t)
        }
    }

    pub fn first_integral_drift(&self) -> Option<f64> {
        Some(self.backward.first_integral_drift()?.max(self.forward.first_integral_drift()?))
    }
}

/// Catenoid-type profiles `ρ(t)` and `h(t)` for `t ≥ λ`.
#[derive(Clone, Debug)]
pub struct NilCatenoidProfile {
    pub lambda: f64,
    pub tau: f64,
    traj: Trajectory,
}

impl NilCatenoidProfile {
    /// Integrates up to radius `t_max` with `ρ(λ) = h(λ) = 0`.
    pub fn new(lambda: f64, tau: f64, t_max: f64, steps: usize) -> Result<Self> {
        if lambda < 0.0 || t_max <= lambda {
            return Err(Error::Domain(format!("profile needs 0 ≤ λ < t_max, got λ = {lambda}, t_max = {t_max}")));
        }
        let spec = if lambda > 0.0 {
            let v1 = (t_max / lambda).acosh();
            RadialOdeSpec { law: RadialLaw::NilCatenoid { lambda, tau }, t0: 0.0, t1: v1, y0: vec![0.0, 0.0], steps }
        } else {
            RadialOdeSpec { law: RadialLaw::NilCatenoidAxis { tau }, t0: 0.0, t1: t_max, y0: vec![0.0], steps }
        };
        Ok(NilCatenoidProfile { lambda, tau, traj: integrate_radial_ode(&spec)? })
    }

    fn check(&self, t: f64) -> Result<()> {
        if t < self.lambda {
            return Err(Error::Domain(format!("radius {t} below λ = {}", self.lambda)));
        }
        Ok(())
    }

    /// `ρ(t)`; zero when `λ = 0`, where the graph `λρ` vanishes identically.
    pub fn rho(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        if self.lambda == 0.0 {
            return Ok(0.0);
        }
        self.traj.component((t / self.lambda).acosh(), 0)
    }

    pub fn h(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        if self.lambda == 0.0 {
            return self.traj.component(t, 0);
        }
        self.traj.component((t / self.lambda).acosh(), 1)
    }

    /// `ρ` as a function of the chart variable `v` with `t = λ cosh v`.
    pub fn rho_of_v(&self, v: f64) -> Result<f64> {
        if self.lambda == 0.0 {
            return Ok(0.0);
        }
        self.traj.component(v.abs(), 0).map(|r| r * v.signum())
    }
}
