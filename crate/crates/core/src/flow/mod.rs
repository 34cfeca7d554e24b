//! Integral curves, the finite transformations Φ_t and Ψ_t, and Lie derivatives.
//!
//! Evaluating an image at `q` integrates backwards from `q` to `y = φ_{−t}(q)`
//! with an augmented RK4 state: the position, the log-weight
//! `J = −∫₀ᵗ u⁵(φ_{−s}q) ds`, the Jacobian `K = ∂y/∂q` and the gradient `∂J/∂q`.
//! Then `Ψ_t{f}(q) = e^J f(y)` and `Φ_t{f}(q) = f(y)`, and tensor images
//! follow from `K` and `∂J/∂q`.

mod lie;
mod tensor;

use nalgebra::{Matrix4, Matrix5};

use crate::algebra::{FiveVector, FiveVectorField, FIFTH};
use crate::error::{Error, Result};
use crate::field::{NumericField, Point, ScalarField};

pub use lie::{lie_fivevector, lie_rank_zero, lie_scalar, lie_tensor, RankZeroField};
pub use tensor::FiveTensorField;

/// Environment variable overriding [`FlowSettings::step_count`].
pub const STEPS_ENV: &str = "PENTACALC_STEPS";

/// Positions beyond this magnitude abort a flow.
const POSITION_BOUND: f64 = 1e8;

/// Fixed-step RK4 settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlowSettings {
    /// Steps per unit of parameter.
    pub step_count: usize,
}

impl Default for FlowSettings {
    fn default() -> FlowSettings {
        FlowSettings { step_count: 1000 }
    }
}

impl FlowSettings {
    pub const MIN_STEPS: usize = 16;

    /// Settings with `step_count` raised to at least [`Self::MIN_STEPS`].
    pub fn new(step_count: usize) -> FlowSettings {
        FlowSettings { step_count: step_count.max(Self::MIN_STEPS) }
    }

    /// Default settings unless `PENTACALC_STEPS` holds a valid count.
    pub fn from_env() -> FlowSettings {
        std::env::var(STEPS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(FlowSettings::new)
            .unwrap_or_default()
    }

    /// Number of steps used to cover a parameter span.
    pub fn steps_for(&self, span: f64) -> usize {
        ((span.abs() * self.step_count as f64).ceil() as usize).max(1)
    }
}

/// Integrates `dy/dt = f(t, y)` from `t0` to `t1` in `steps` classical RK4 steps.
pub fn rk4<const N: usize>(
    y0: [f64; N],
    t0: f64,
    t1: f64,
    steps: usize,
    mut f: impl FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
) -> Result<[f64; N]> {
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    let axpy = |y: &[f64; N], k: &[f64; N], s: f64| -> [f64; N] { std::array::from_fn(|i| y[i] + s * k[i]) };
    for i in 0..steps {
        let t = t0 + h * i as f64;
        let k1 = f(t, &y)?;
        let k2 = f(t + 0.5 * h, &axpy(&y, &k1, 0.5 * h))?;
        let k3 = f(t + 0.5 * h, &axpy(&y, &k2, 0.5 * h))?;
        let k4 = f(t + h, &axpy(&y, &k3, h))?;
        for j in 0..N {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::FlowDiverged { s: t + h });
        }
    }
    Ok(y)
}

/// A five-vector field prepared for integration, with cached first derivatives.
#[derive(Debug, Clone)]
pub struct FlowField {
    field: FiveVectorField,
    /// `du[a][b] = ∂_b u^a`.
    du: [[ScalarField; 4]; 4],
    du5: [ScalarField; 4],
    stationary: bool,
    uniform: Option<[f64; 4]>,
}

impl FlowField {
    pub fn new(u: &FiveVectorField) -> FlowField {
        let du = std::array::from_fn(|a| std::array::from_fn(|b| u.0[a].partial(b)));
        let du5 = std::array::from_fn(|b| u.0[FIFTH].partial(b));
        let uniform = u.0[..4].iter().map(ScalarField::as_const).collect::<Option<Vec<f64>>>();
        let uniform = uniform.map(|v| [v[0], v[1], v[2], v[3]]);
        FlowField { field: u.clone(), du, du5, stationary: u.is_differential_zero(), uniform }
    }

    pub fn field(&self) -> &FiveVectorField {
        &self.field
    }

    fn velocity(&self, x: &[f64; 4], s: f64) -> Result<[f64; 4]> {
        let p = Point(*x);
        if x.iter().any(|v| v.abs() > POSITION_BOUND) {
            return Err(Error::FlowDiverged { s });
        }
        let mut v = [0.0; 4];
        for (va, f) in v.iter_mut().zip(&self.field.0) {
            *va = f.eval(&p)?;
        }
        if v.iter().all(|c| *c == 0.0) {
            return Err(Error::ZeroFourPart { s, at: p });
        }
        Ok(v)
    }
}

/// The point a parametric distance `t` along the integral curve of `u` through `p`.
pub fn flow_point(u: &FiveVectorField, p: &Point, t: f64, s: &FlowSettings) -> Result<Point> {
    flow_point_prepared(&FlowField::new(u), p, t, s)
}

fn flow_point_prepared(u: &FlowField, p: &Point, t: f64, s: &FlowSettings) -> Result<Point> {
    if u.stationary || t == 0.0 {
        return Ok(*p);
    }
    if let Some(v) = u.uniform {
        return Ok(Point(std::array::from_fn(|a| p.0[a] + t * v[a])));
    }
    let y = rk4(p.0, 0.0, t, s.steps_for(t), |sigma, x| u.velocity(x, sigma))?;
    Ok(Point(y))
}

/// `Φ_t{f}`: evaluates `f(φ_{−t}(q))`.
pub fn phi_pull(f: impl Into<NumericField>, u: &FiveVectorField, t: f64, s: &FlowSettings) -> NumericField {
    let (f, u, s) = (f.into(), FlowField::new(u), *s);
    NumericField::new(move |q| f.eval(&flow_point_prepared(&u, q, -t, &s)?))
}

/// `Ψ_t{f}`: evaluates `exp(−∫ u⁵) f(φ_{−t}(q))` along the integral curve.
pub fn psi_transform(f: impl Into<NumericField>, u: &FiveVectorField, t: f64, s: &FlowSettings) -> NumericField {
    let (f, u, s) = (f.into(), FlowField::new(u), *s);
    NumericField::new(move |q| {
        let (y, j) = weighted_flow(&u, q, t, &s)?;
        Ok(j.exp() * f.eval(&y)?)
    })
}

/// `(φ_{−t}(q), J)` with `Ψ_t{1}(q) = e^J`.
fn weighted_flow(u: &FlowField, q: &Point, t: f64, s: &FlowSettings) -> Result<(Point, f64)> {
    if u.stationary {
        return Ok((*q, -t * u.field.0[FIFTH].eval(q)?));
    }
    if t == 0.0 || u.field.0[FIFTH].is_zero() {
        return Ok((flow_point_prepared(u, q, -t, s)?, 0.0));
    }
    let [x0, x1, x2, x3] = q.0;
    let y = rk4([x0, x1, x2, x3, 0.0], 0.0, -t, s.steps_for(t), |sigma, state| {
        let x = [state[0], state[1], state[2], state[3]];
        let v = u.velocity(&x, sigma)?;
        let w = u.field.0[FIFTH].eval(&Point(x))?;
        Ok([v[0], v[1], v[2], v[3], w])
    })?;
    Ok((Point([y[0], y[1], y[2], y[3]]), y[4]))
}

/// Everything needed to evaluate finite images at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowJet {
    /// `y = φ_{−t}(q)`.
    pub point: Point,
    /// `J` with `Ψ_t{1}(q) = e^J`.
    pub log_weight: f64,
    /// `K = ∂y/∂q`, row index over `y`.
    pub jacobian: Matrix4<f64>,
    /// `∂J/∂q`.
    pub log_weight_grad: [f64; 4],
}

/// Integrates the augmented flow state at `q` for parameter `t`.
pub fn flow_jet(u: &FlowField, q: &Point, t: f64, s: &FlowSettings) -> Result<FlowJet> {
    if u.stationary {
        let mut grad = [0.0; 4];
        for (g, d) in grad.iter_mut().zip(&u.du5) {
            *g = -t * d.eval(q)?;
        }
        return Ok(FlowJet {
            point: *q,
            log_weight: -t * u.field.0[FIFTH].eval(q)?,
            jacobian: Matrix4::identity(),
            log_weight_grad: grad,
        });
    }
    let mut y0 = [0.0; 25];
    y0[..4].copy_from_slice(&q.0);
    for a in 0..4 {
        y0[5 + 4 * a + a] = 1.0;
    }
    let steps = if t == 0.0 { 1 } else { s.steps_for(t) };
    let y = rk4(y0, 0.0, -t, steps, |sigma, state| {
        let x = [state[0], state[1], state[2], state[3]];
        let p = Point(x);
        let v = u.velocity(&x, sigma)?;
        let mut du = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                du[a][b] = u.du[a][b].eval(&p)?;
            }
        }
        let mut du5 = [0.0; 4];
        for (d, f) in du5.iter_mut().zip(&u.du5) {
            *d = f.eval(&p)?;
        }
        let mut out = [0.0; 25];
        out[..4].copy_from_slice(&v);
        out[4] = u.field.0[FIFTH].eval(&p)?;
        for a in 0..4 {
            for b in 0..4 {
                let mut acc = 0.0;
                for c in 0..4 {
                    acc += du[a][c] * state[5 + 4 * c + b];
                }
                out[5 + 4 * a + b] = acc;
            }
        }
        for b in 0..4 {
            let mut acc = 0.0;
            for c in 0..4 {
                acc += du5[c] * state[5 + 4 * c + b];
            }
            out[21 + b] = acc;
        }
        Ok(out)
    })?;
    Ok(FlowJet {
        point: Point([y[0], y[1], y[2], y[3]]),
        log_weight: y[4],
        jacobian: Matrix4::from_fn(|a, b| y[5 + 4 * a + b]),
        log_weight_grad: [y[21], y[22], y[23], y[24]],
    })
}

impl FlowJet {
    pub fn weight(&self) -> f64 {
        self.log_weight.exp()
    }

    /// `Φ_t{f}(q)`.
    pub fn phi(&self, f: &ScalarField) -> Result<f64> {
        Ok(f.eval(&self.point)?)
    }

    /// `Ψ_t{f}(q)`.
    pub fn psi(&self, f: &ScalarField) -> Result<f64> {
        Ok(self.weight() * f.eval(&self.point)?)
    }

    /// Gradient of `Ψ_t{f}` at `q`.
    pub fn psi_gradient(&self, f: &ScalarField) -> Result<[f64; 4]> {
        let value = f.eval(&self.point)?;
        let mut grad_f = [0.0; 4];
        for (g, a) in grad_f.iter_mut().zip(0..4) {
            *g = f.partial(a).eval(&self.point)?;
        }
        let w = self.weight();
        Ok(std::array::from_fn(|b| {
            let chain: f64 = (0..4).map(|a| grad_f[a] * self.jacobian[(a, b)]).sum();
            w * (value * self.log_weight_grad[b] + chain)
        }))
    }

    /// Matrix carrying vector components at `y` to components of the image at `q`.
    pub fn vector_map(&self) -> Result<Matrix5<f64>> {
        let kinv = self.jacobian.try_inverse().ok_or(Error::SingularTransform { at: self.point })?;
        let mut p = Matrix5::zeros();
        p.fixed_view_mut::<4, 4>(0, 0).copy_from(&kinv);
        for b in 0..4 {
            p[(FIFTH, b)] = -(0..4).map(|a| self.log_weight_grad[a] * kinv[(a, b)]).sum::<f64>();
        }
        p[(FIFTH, FIFTH)] = 1.0;
        Ok(p)
    }

    /// Inverse of [`Self::vector_map`], acting on form components from the right.
    pub fn form_map(&self) -> Matrix5<f64> {
        let mut m = Matrix5::zeros();
        m.fixed_view_mut::<4, 4>(0, 0).copy_from(&self.jacobian);
        for b in 0..4 {
            m[(FIFTH, b)] = self.log_weight_grad[b];
        }
        m[(FIFTH, FIFTH)] = 1.0;
        m
    }

    /// Components of `Ψ_t{v}` at `q`.
    pub fn psi_vector(&self, v: &FiveVectorField) -> Result<FiveVector> {
        let at_y = nalgebra::Vector5::from(v.eval(&self.point)?.0);
        Ok(FiveVector((self.vector_map()? * at_y).into()))
    }

    /// Components of `Ψ_t{w̃}` at `q` for contraction parameter `k`.
    pub fn psi_form(&self, w: &[ScalarField; 5], k: f64) -> Result<[f64; 5]> {
        let mut at_y = nalgebra::RowVector5::zeros();
        for (a, f) in w.iter().enumerate() {
            at_y[a] = f.eval(&self.point)?;
        }
        let scale = (self.log_weight * (1.0 + k)).exp();
        Ok(std::array::from_fn(|b| scale * (at_y * self.form_map().column(b))[0]))
    }
}
